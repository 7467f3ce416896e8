# core/states.py
"""
Mixed moments of m-monotone independent variables by rewriting.

A word is a sequence of letters; each letter is a polynomial in the
self-adjoint generator of one algebra A_i. The m-monotone product state is
evaluated by the rules

  1. adjacent letters from the same algebra are multiplied together;
  2. the leftmost letter a with phi(a) != 0 is split as a = a0 + phi(a) 1_i;
  3. a unit 1_i at position j, all letters before it centered, acts as the
     identity if j <= m or i_m < i_{m+1} < ... < i_j in the order of I, and
     kills the word otherwise;
  4. a word of centered letters from alternating algebras has moment 0.

Level INFINITY makes every unit act as the identity (free product).
"""

import itertools
import json
import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
import yaml

from .errors import MarginalOrderError, OrderCapError, UnknownAlgebraError, WordSyntaxError
from .gns import (
    GNSModel,
    jacobi_from_moments,
    moment_functional,
    poly_add,
    poly_is_one,
    poly_is_zero,
    poly_mul,
    poly_trim,
    _is_zero,
)
from .hierarchy import INFINITY, Depth, to_fraction
from .partitions import enumerate_ordered_partitions

logger = logging.getLogger(__name__)

DEFAULT_CLT_MAX_ORDER = 8


# --- marginals -------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraSpec:
    """
    Marginal data of one algebra: the moment sequence of its generator and the
    finite GNS model derived from it.
    """
    index: int
    moments: Tuple[Fraction, ...]
    dimension: Optional[int] = None
    model: GNSModel = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        moments = tuple(to_fraction(mu) for mu in self.moments)
        object.__setattr__(self, "moments", moments)
        model = jacobi_from_moments(moments, self.dimension)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "dimension", model.dimension)

    @classmethod
    def from_measure(cls, index: int, atoms: Sequence, weights: Sequence) -> "AlgebraSpec":
        """Marginal of the finitely supported measure sum_k weights[k] delta_{atoms[k]}."""
        atoms = [to_fraction(a) for a in atoms]
        weights = [to_fraction(w) for w in weights]
        if sum(weights) != 1 or any(w <= 0 for w in weights):
            raise MarginalOrderError("measure weights must be positive and sum to 1")
        order = 2 * len(atoms) + 1
        moments = tuple(sum(w * a ** p for a, w in zip(atoms, weights)) for p in range(order + 1))
        return cls(index, moments)

    @classmethod
    def bernoulli(cls, index: int) -> "AlgebraSpec":
        """Symmetric Bernoulli marginal on {-1, 1}: mean 0, variance 1."""
        return cls.from_measure(index, [-1, 1], [Fraction(1, 2), Fraction(1, 2)])

    def moment(self, order: int) -> Fraction:
        if order < len(self.moments):
            return self.moments[order]
        if self.model.exact:
            return self.model.moment(order)
        raise MarginalOrderError(
            f"algebra {self.index}: marginal moment of order {order} not available "
            f"(have up to {len(self.moments) - 1})"
        )

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "moments": [f"{mu.numerator}/{mu.denominator}" for mu in self.moments],
            "dim": self.dimension,
        }


class SymbolicMarginal:
    """Marginal whose moments phi_i(a^p) are free sympy symbols."""

    def __init__(self, index: int, name: str = None):
        self.index = index
        self.name = name or f"phi{index}"
        self._symbols: Dict[int, sympy.Symbol] = {}

    def symbol(self, order: int) -> sympy.Symbol:
        if order not in self._symbols:
            self._symbols[order] = sympy.Symbol(f"{self.name}_{order}")
        return self._symbols[order]

    def moment(self, order: int):
        if order == 0:
            return Fraction(1)
        return self.symbol(order)


class AlgebraRegistry(dict):
    """Algebra index -> AlgebraSpec, loadable from JSON or YAML records {index, moments, dim}."""

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "AlgebraRegistry":
        registry = cls()
        for record in records:
            try:
                spec = AlgebraSpec(
                    int(record["index"]),
                    tuple(Fraction(str(mu)) for mu in record["moments"]),
                    record.get("dim"),
                )
            except (KeyError, TypeError, ValueError) as e:
                raise MarginalOrderError(f"malformed algebra record {record!r}: {e}") from None
            registry[spec.index] = spec
        return registry

    @classmethod
    def load(cls, path: Union[str, Path]) -> "AlgebraRegistry":
        path = Path(path)
        text = path.read_text()
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("algebras", [])
        logger.info("Loaded %d algebra records from %s", len(data), path)
        return cls.from_records(data)


def marginal_expectation(marginal, coeffs: Sequence) -> object:
    """phi_i of the polynomial sum_p c_p a^p."""
    total = Fraction(0)
    for order, c in enumerate(coeffs):
        if not _is_zero(c):
            total = total + c * marginal.moment(order)
    return total


# --- words -----------------------------------------------------------------

@dataclass(frozen=True)
class Letter:
    """A polynomial (ascending coefficients) in the generator of algebra `index`."""
    index: int
    coeffs: Tuple
    centered: bool = False

    @classmethod
    def power(cls, index: int, exponent: int = 1) -> "Letter":
        return cls(index, tuple([Fraction(0)] * exponent + [Fraction(1)]))

    @classmethod
    def unit(cls, index: int) -> "Letter":
        return cls(index, (Fraction(1),))

    @classmethod
    def centered_power(cls, index: int, exponent: int = 1) -> "Letter":
        """The element a^p - phi(a^p) 1, centered against the registered marginal."""
        return cls(index, cls.power(index, exponent).coeffs, centered=True)

    def is_unit(self) -> bool:
        return not self.centered and poly_is_one(self.coeffs)

    def __str__(self) -> str:
        if self.is_unit():
            return f"u{self.index}"
        nonzero = [p for p, c in enumerate(self.coeffs) if not _is_zero(c)]
        if len(nonzero) == 1 and self.coeffs[nonzero[0]] == 1:
            p = nonzero[0]
            text = f"a{self.index}" + (f"^{p}" if p != 1 else "")
        else:
            text = f"poly{self.index}{list(map(str, self.coeffs))}"
        return f"c({text})" if self.centered else text


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<centered>c\(\s*[a-z]\d+(?:\^\d+)?\s*\))
      | (?P<unit>u\d+)
      | (?P<power>[a-z]\d+(?:\^\d+)?)
      | (?P<scalar>-?\d+(?:/\d+)?)
    )\s*\*?""",
    re.VERBOSE,
)
_POWER = re.compile(r"[a-z](\d+)(?:\^(\d+))?")


@dataclass(frozen=True)
class WordExpr:
    """A scalar times a product of letters."""
    letters: Tuple[Letter, ...]
    scalar: Fraction = Fraction(1)

    @classmethod
    def parse(cls, text: str) -> "WordExpr":
        """
        Parse the compact grammar: "a1^2 b2 a1", "u1" (unit of algebra 1),
        "c(a1)" (a1 centered), optional rational scalars "3/2". Letters may be
        separated by whitespace or '*'.
        """
        letters: List[Letter] = []
        scalar = Fraction(1)
        position = 0
        text = text.strip()
        while position < len(text):
            match = _TOKEN.match(text, position)
            if not match or match.end() == position:
                raise WordSyntaxError(f"cannot parse word at {text[position:]!r}")
            position = match.end()
            if match.group("scalar"):
                scalar *= Fraction(match.group("scalar"))
            elif match.group("unit"):
                letters.append(Letter.unit(int(match.group("unit")[1:])))
            else:
                token = match.group("centered") or match.group("power")
                inner = _POWER.search(token)
                index, exponent = int(inner.group(1)), int(inner.group(2) or 1)
                if match.group("centered"):
                    letters.append(Letter.centered_power(index, exponent))
                else:
                    letters.append(Letter.power(index, exponent))
        return cls(tuple(letters), scalar)

    @classmethod
    def of(cls, indices: Sequence[int]) -> "WordExpr":
        """Word of plain generators with the given algebra indices."""
        return cls(tuple(Letter.power(i) for i in indices))

    def indices(self) -> Tuple[int, ...]:
        return tuple(letter.index for letter in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        body = " ".join(str(letter) for letter in self.letters) or "1"
        return body if self.scalar == 1 else f"{self.scalar} {body}"


# --- evaluator -------------------------------------------------------------

Term = Tuple[int, Tuple]


class WordEvaluator:
    """
    Evaluates words under the m-monotone product of the given marginals.

    Marginals only need a `moment(order)` method, so numeric AlgebraSpecs and
    SymbolicMarginals both work. Each call to evaluate() uses its own cache.
    """

    def __init__(self, marginals: Mapping[int, object], m: Depth, order_of: Optional[Sequence[int]] = None):
        self.marginals = dict(marginals)
        self.m = m
        order = list(order_of) if order_of is not None else sorted(self.marginals)
        self.rank = {index: position for position, index in enumerate(order)}

    def _marginal(self, index: int):
        try:
            return self.marginals[index]
        except KeyError:
            raise UnknownAlgebraError(f"algebra {index} is not registered") from None

    def _resolve(self, letter: Letter) -> Term:
        marginal = self._marginal(letter.index)
        if letter.index not in self.rank:
            raise UnknownAlgebraError(f"algebra {letter.index} has no position in the index order")
        coeffs = poly_trim(letter.coeffs)
        if letter.centered:
            mean = marginal_expectation(marginal, coeffs)
            coeffs = poly_add(coeffs, (-mean,))
        return letter.index, coeffs

    def evaluate(self, word: Union[WordExpr, Sequence[Letter]]):
        """Value of the m-monotone product state on the word."""
        if isinstance(word, WordExpr):
            letters, scalar = word.letters, word.scalar
        else:
            letters, scalar = tuple(word), Fraction(1)
        terms = tuple(self._resolve(letter) for letter in letters)
        cache: Dict[Tuple[Term, ...], object] = {}
        value = self._evaluate(terms, cache)
        if scalar != 1:
            value = scalar * value
        logger.debug("evaluated word of length %d with %d cached subwords", len(terms), len(cache))
        return value

    @staticmethod
    def _merge(terms: Tuple[Term, ...]) -> Optional[Tuple[Term, ...]]:
        merged: List[Term] = []
        for index, coeffs in terms:
            if merged and merged[-1][0] == index:
                coeffs = poly_mul(merged[-1][1], coeffs)
                merged[-1] = (index, coeffs)
            else:
                merged.append((index, coeffs))
            if poly_is_zero(merged[-1][1]):
                return None
        return tuple(merged)

    def unit_acts(self, indices: Sequence[int], position: int) -> bool:
        """
        Whether a unit at 0-based `position` acts as the identity, the letters
        before it being centered.
        """
        j = position + 1
        if self.m is INFINITY or j <= self.m:
            return True
        ranks = [self.rank[i] for i in indices[self.m - 1:j]]
        return all(a < b for a, b in zip(ranks, ranks[1:]))

    def _evaluate(self, terms: Tuple[Term, ...], cache) -> object:
        word = self._merge(terms)
        if word is None:
            return Fraction(0)
        if not word:
            return Fraction(1)
        if word in cache:
            return cache[word]

        value = Fraction(0)
        indices = [index for index, _ in word]
        for position, (index, coeffs) in enumerate(word):
            if poly_is_one(coeffs):
                if self.unit_acts(indices, position):
                    value = self._evaluate(word[:position] + word[position + 1:], cache)
                break
            mean = marginal_expectation(self._marginal(index), coeffs)
            if _is_zero(mean):
                continue
            centered = word[:position] + ((index, poly_add(coeffs, (-mean,))),) + word[position + 1:]
            with_unit = word[:position] + ((index, (Fraction(1),)),) + word[position + 1:]
            value = self._evaluate(centered, cache) + mean * self._evaluate(with_unit, cache)
            break
        cache[word] = value
        return value


def evaluate_word(
    word: Union[WordExpr, str],
    m: Depth,
    marginals: Mapping[int, object],
    order_of: Optional[Sequence[int]] = None,
):
    """Convenience wrapper: parse if needed and evaluate under the m-monotone product."""
    if isinstance(word, str):
        word = WordExpr.parse(word)
    return WordEvaluator(marginals, m, order_of).evaluate(word)


def expand(value):
    """Expanded sympy form of a (possibly symbolic) moment value."""
    return sympy.expand(sympy.sympify(value))


# --- finite-N central limit ------------------------------------------------

@dataclass(frozen=True)
class NormalizedMoment:
    """coefficient * N^(-sqrt_power / 2): exact for even orders, one stray sqrt(N) for odd."""
    coefficient: Fraction
    sqrt_power: int
    N: int

    def as_float(self) -> float:
        return float(self.coefficient) / math.sqrt(self.N) ** self.sqrt_power


def ordered_partition_profile(m: Depth, n: int, marginal: AlgebraSpec) -> Dict[int, object]:
    """
    Block count b -> sum of m(P) over ordered partitions P of {1..n} with b blocks.

    Partitions with a singleton block are skipped: a mean-zero variable
    occurring once kills the moment.
    """
    marginals = {r: marginal for r in range(1, n + 1)}
    evaluator = WordEvaluator(marginals, m)
    profile: Dict[int, object] = {}
    for P in enumerate_ordered_partitions(n, min_block=2):
        value = evaluator.evaluate(WordExpr.of(P.canonical_indices()))
        profile[P.size] = profile.get(P.size, Fraction(0)) + value
    return profile


def clt_moment_finite_n(
    m: Depth,
    N: int,
    n: int,
    marginal: AlgebraSpec,
    max_order: int = DEFAULT_CLT_MAX_ORDER,
) -> NormalizedMoment:
    """
    phi(((X_1 + ... + X_N) / sqrt(N))^n) for m-monotone copies X_k of `marginal`,
    via the sum over ordered partitions of C(N, b(P)) m(P).
    """
    if n > max_order:
        raise OrderCapError(f"order {n} exceeds the finite-N cap {max_order}")
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if marginal.moment(1) != 0 or marginal.moment(2) != 1:
        raise MarginalOrderError("finite-N central limit needs a mean 0, variance 1 marginal")
    total = Fraction(0)
    for blocks, value in ordered_partition_profile(m, n, marginal).items():
        total += math.comb(N, blocks) * value
    half = n // 2
    coefficient = total / Fraction(N) ** half
    return NormalizedMoment(coefficient, n % 2, N)


def alternating_words(indices: Sequence[int], length: int) -> Iterable[Tuple[int, ...]]:
    """Index tuples of the given length whose neighbours differ."""
    for word in itertools.product(indices, repeat=length):
        if all(a != b for a, b in zip(word, word[1:])):
            yield word
