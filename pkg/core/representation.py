# core/representation.py
"""
Finite-dimensional m-monotone product of Hilbert spaces and the operators
lambda_i^(m)(a) acting on it.

Basis vectors are the vacuum () and simple tensors ((i_1, k_1), ..., (i_n, k_n))
of excited GNS basis vectors e_{k} (k >= 1) of the algebras i_1, ..., i_n, where
(i_1..i_n) is alternating and, for n > m, its first n - m + 1 indices decrease.
lambda_i^(m)(a) acts by the free-product rules on H^(m)(i) (tensors shorter
than m, or led by an index <= i) and by 0 on its complement.
"""

import itertools
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import BasisTooLargeError, OrderCapError, TruncationError, UnknownAlgebraError
from .gns import poly_add, poly_trim
from .hierarchy import INFINITY, Depth
from .states import AlgebraSpec, Letter, WordExpr, marginal_expectation

logger = logging.getLogger(__name__)

DEFAULT_MAX_BASIS = 1_000_000
DEFAULT_DENSE_LIMIT = 512

Factor = Tuple[int, int]
Tensor = Tuple[Factor, ...]
SparseVector = Dict[int, Fraction]


def resolve_basis_cap(max_basis: Optional[int] = None) -> int:
    """Explicit cap, else MONOHIER_MAX_BASIS, else the default."""
    if max_basis is not None:
        return max_basis
    override = os.getenv("MONOHIER_MAX_BASIS")
    if override:
        return int(override)
    return DEFAULT_MAX_BASIS


class OperatorMatrix:
    """Exact matrix on a product-space basis; dense up to `dense_limit`, coordinate list above."""

    def __init__(self, dimension: int, columns: Dict[int, List[Tuple[int, Fraction]]], dense_limit: int):
        self.dimension = dimension
        self.is_dense = dimension <= dense_limit
        if self.is_dense:
            self._dense = np.full((dimension, dimension), Fraction(0), dtype=object)
            for col, entries in columns.items():
                for row, value in entries:
                    self._dense[row, col] += value
            self._coords = None
        else:
            self._dense = None
            self._coords: Dict[Tuple[int, int], Fraction] = {}
            for col, entries in columns.items():
                for row, value in entries:
                    key = (row, col)
                    self._coords[key] = self._coords.get(key, Fraction(0)) + value

    def entry(self, row: int, col: int) -> Fraction:
        if self.is_dense:
            return self._dense[row, col]
        return self._coords.get((row, col), Fraction(0))

    def nonzero(self) -> Iterator[Tuple[int, int, Fraction]]:
        if self.is_dense:
            rows, cols = np.nonzero(self._dense != Fraction(0))
            for row, col in zip(rows.tolist(), cols.tolist()):
                yield row, col, self._dense[row, col]
        else:
            for (row, col), value in self._coords.items():
                if value:
                    yield row, col, value

    def apply(self, vector: SparseVector) -> SparseVector:
        out: SparseVector = {}
        if self.is_dense:
            for col, value in vector.items():
                column = self._dense[:, col]
                for row in np.nonzero(column != Fraction(0))[0].tolist():
                    out[row] = out.get(row, Fraction(0)) + column[row] * value
        else:
            for (row, col), entry in self._coords.items():
                if col in vector:
                    out[row] = out.get(row, Fraction(0)) + entry * vector[col]
        return {row: value for row, value in out.items() if value}

    def to_dense(self) -> np.ndarray:
        if self.is_dense:
            return self._dense.copy()
        dense = np.full((self.dimension, self.dimension), Fraction(0), dtype=object)
        for (row, col), value in self._coords.items():
            dense[row, col] = value
        return dense


@dataclass(frozen=True)
class ProductSpace:
    """Basis of the m-monotone product H^(m) of the algebras' GNS spaces."""
    m: Depth
    algebras: Tuple[AlgebraSpec, ...]
    basis: Tuple[Tensor, ...]
    max_length: int
    truncated: bool
    dense_limit: int = DEFAULT_DENSE_LIMIT
    position: Dict[Tensor, int] = field(init=False, repr=False, compare=False)
    rank: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "position", {tensor: k for k, tensor in enumerate(self.basis)})
        object.__setattr__(self, "rank", {spec.index: k for k, spec in enumerate(self.algebras)})

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def vacuum(self) -> Tensor:
        return ()

    def algebra(self, index: int) -> AlgebraSpec:
        if index not in self.rank:
            raise UnknownAlgebraError(f"algebra {index} is not part of this product space")
        return self.algebras[self.rank[index]]

    def in_subspace(self, index: int, tensor: Tensor) -> bool:
        """Membership of a basis tensor in H^(m)(index)."""
        if self.m is INFINITY or len(tensor) < self.m:
            return True
        return self.rank[tensor[0][0]] <= self.rank[index]


def admissible_sequences(ranks: Sequence[int], n: int, m: Depth) -> Iterator[Tuple[int, ...]]:
    """Alternating index sequences in I_n(m), listed lexicographically by rank."""
    for sequence in itertools.product(ranks, repeat=n):
        if any(a == b for a, b in zip(sequence, sequence[1:])):
            continue
        if m is not INFINITY and n > m:
            head = sequence[: n - m + 1]
            if any(a <= b for a, b in zip(head, head[1:])):
                continue
        yield sequence


def _natural_length(m: Depth, count: int) -> Optional[int]:
    if count <= 1:
        return count
    if m is INFINITY:
        return None
    return m + count - 1


def build_product_space(
    m: Depth,
    algebras: Sequence[AlgebraSpec],
    max_length: Optional[int] = None,
    max_basis: Optional[int] = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
    order_of: Optional[Sequence[int]] = None,
) -> ProductSpace:
    """
    Enumerate the basis of H^(m): the vacuum plus admissible simple tensors.

    Args:
        m: hierarchy level (positive int or INFINITY)
        algebras: marginal specs; their order is the order of I unless order_of is given
        max_length: optional bound on tensor length; required for INFINITY with |I| >= 2
        max_basis: basis cap; defaults to MONOHIER_MAX_BASIS or 10^6
        dense_limit: matrices of this dimension or less are stored dense

    Returns:
        The ProductSpace (dimension is known before any matrix is built)
    """
    if order_of is not None:
        by_index = {spec.index: spec for spec in algebras}
        try:
            algebras = [by_index[index] for index in order_of]
        except KeyError as e:
            raise UnknownAlgebraError(f"algebra {e.args[0]} in order_of is not supplied") from None
    algebras = tuple(algebras)
    natural = _natural_length(m, len(algebras))
    if natural is None and max_length is None:
        raise TruncationError("the free product space is infinite; pass max_length")
    length = natural if max_length is None else (max_length if natural is None else min(natural, max_length))
    truncated = natural is None or length < natural
    cap = resolve_basis_cap(max_basis)

    excitations = [spec.dimension - 1 for spec in algebras]
    ranks = list(range(len(algebras)))
    dimension = 0
    for n in range(length + 1):
        for sequence in admissible_sequences(ranks, n, m):
            size = 1
            for r in sequence:
                size *= excitations[r]
            dimension += size
            if dimension > cap:
                raise BasisTooLargeError(dimension, cap)
    logger.debug("product space m=%s |I|=%d max_length=%d dimension=%d", m, len(algebras), length, dimension)

    basis: List[Tensor] = []
    for n in range(length + 1):
        for sequence in admissible_sequences(ranks, n, m):
            levels = [range(1, excitations[r] + 1) for r in sequence]
            for labels in itertools.product(*levels):
                basis.append(tuple((algebras[r].index, k) for r, k in zip(sequence, labels)))
    return ProductSpace(m, algebras, tuple(basis), length, truncated, dense_limit)


def _element_coeffs(space: ProductSpace, index: int, element) -> Tuple:
    if isinstance(element, Letter):
        if element.index != index:
            raise UnknownAlgebraError(f"letter of algebra {element.index} used as an element of {index}")
        coeffs = poly_trim(element.coeffs)
        if element.centered:
            mean = marginal_expectation(space.algebra(index), coeffs)
            coeffs = poly_add(coeffs, (-mean,))
        return coeffs
    return poly_trim(tuple(Fraction(c) for c in element))


def _act(space: ProductSpace, index: int, coeffs: Tuple, tensor: Tensor) -> List[Tuple[Tensor, Fraction]]:
    """lambda_index^(m)(a) applied to one basis tensor."""
    if not space.in_subspace(index, tensor):
        return []
    model = space.algebra(index).model
    d = model.dimension
    if tensor and tensor[0][0] == index:
        start, rest = tensor[0][1], tensor[1:]
    else:
        start, rest = 0, tensor
    source = [Fraction(0)] * d
    source[start] = Fraction(1)
    image = model.apply(coeffs, source)
    out: List[Tuple[Tensor, Fraction]] = []
    if image[0]:
        out.append((rest, image[0]))
    for k in range(1, d):
        if image[k]:
            out.append((((index, k),) + rest, image[k]))
    return out


def _require_exact(space: ProductSpace, index: int, degree: int):
    """A truncated model of dimension d reproduces words of total degree up to 2d - 1 in its algebra."""
    model = space.algebra(index).model
    if not model.exact and degree > 2 * model.dimension - 1:
        raise OrderCapError(
            f"algebra {index}: degree {degree} needs a model of dimension {degree // 2 + 1}, "
            f"the marginal only supports {model.dimension}"
        )


def represent(space: ProductSpace, index: int, element) -> OperatorMatrix:
    """
    Matrix of lambda_index^(m)(element) on the basis of `space`.

    `element` is a Letter of that algebra or ascending polynomial coefficients
    in its generator.
    """
    space.algebra(index)
    coeffs = _element_coeffs(space, index, element)
    _require_exact(space, index, len(coeffs) - 1)
    columns: Dict[int, List[Tuple[int, Fraction]]] = {}
    for col, tensor in enumerate(space.basis):
        entries = []
        for image, value in _act(space, index, coeffs, tensor):
            row = space.position.get(image)
            if row is None:
                if len(image) > space.max_length:
                    continue
                raise RuntimeError(f"tensor {image} escaped the product space basis")
            entries.append((row, value))
        if entries:
            columns[col] = entries
    return OperatorMatrix(space.dimension, columns, space.dense_limit)


def vacuum_moment(space: ProductSpace, word: Union[WordExpr, Sequence]) -> Fraction:
    """
    <lambda_{i_1}(a_1) ... lambda_{i_n}(a_n) Omega, Omega>, applied right to left.

    `word` is a WordExpr or a sequence of (index, element) pairs. Raises
    OrderCapError when the letters of one algebra reach past its truncated model.
    """
    if isinstance(word, WordExpr):
        items = [(letter.index, letter) for letter in word.letters]
        scalar = word.scalar
    else:
        items = list(word)
        scalar = Fraction(1)
    if space.truncated and space.max_length < len(items) // 2:
        raise TruncationError(
            f"a word of length {len(items)} needs tensors up to length {len(items) // 2}, "
            f"space is truncated at {space.max_length}"
        )
    resolved = [(index, _element_coeffs(space, index, element)) for index, element in items]
    degrees: Dict[int, int] = {}
    for index, coeffs in resolved:
        degrees[index] = degrees.get(index, 0) + len(coeffs) - 1
    for index, degree in degrees.items():
        _require_exact(space, index, degree)
    matrices: Dict[Tuple[int, Tuple], OperatorMatrix] = {}
    vector: SparseVector = {space.position[space.vacuum]: Fraction(1)}
    for index, coeffs in reversed(resolved):
        key = (index, coeffs)
        if key not in matrices:
            matrices[key] = represent(space, index, coeffs)
        vector = matrices[key].apply(vector)
        if not vector:
            return Fraction(0)
    return scalar * vector.get(space.position[space.vacuum], Fraction(0))
