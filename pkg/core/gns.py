# core/gns.py
"""
Finite GNS models of a marginal given by its moment sequence.

The model works in the basis of monic orthogonal polynomials p_0 = 1, p_1, ...
of the marginal. The basis is orthogonal but not normalised, which keeps every
matrix entry rational:

    x p_k = p_{k+1} + alpha_k p_k + beta_k p_{k-1},   <p_k, p_k> = beta_1 ... beta_k.

The cyclic vector is p_0; <v, p_0> is simply the p_0 coordinate of v.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import MarginalOrderError

logger = logging.getLogger(__name__)


# --- coefficient-tuple polynomials ----------------------------------------
# Coefficients are ascending and may be Fractions or sympy expressions.

def _is_zero(value) -> bool:
    expand = getattr(value, "expand", None)
    if expand is not None:
        return expand() == 0
    return value == 0


def poly_trim(coeffs: Sequence) -> Tuple:
    coeffs = list(coeffs)
    while len(coeffs) > 1 and _is_zero(coeffs[-1]):
        coeffs.pop()
    if len(coeffs) == 1 and _is_zero(coeffs[0]):
        return (Fraction(0),)
    return tuple(coeffs)


def _as_array(coeffs: Sequence) -> np.ndarray:
    array = np.empty(len(coeffs), dtype=object)
    array[:] = list(coeffs)
    return array


def poly_mul(left: Sequence, right: Sequence) -> Tuple:
    return poly_trim(P.polymul(_as_array(left), _as_array(right)))


def poly_add(left: Sequence, right: Sequence) -> Tuple:
    return poly_trim(P.polyadd(_as_array(left), _as_array(right)))


def poly_scale(coeffs: Sequence, factor) -> Tuple:
    return poly_trim(tuple(c * factor for c in coeffs))


def poly_integrate(coeffs: Sequence) -> Tuple:
    """Antiderivative vanishing at 0."""
    return poly_trim(P.polyint(_as_array(coeffs)))


def poly_eval(coeffs: Sequence, x) -> object:
    return P.polyval(x, _as_array(coeffs))


def poly_is_zero(coeffs: Sequence) -> bool:
    return all(_is_zero(c) for c in coeffs)


def poly_is_one(coeffs: Sequence) -> bool:
    trimmed = poly_trim(coeffs)
    return len(trimmed) == 1 and _is_zero(trimmed[0] - 1)


def moment_functional(coeffs: Sequence, moments: Sequence) -> object:
    """L(p) = sum_i c_i mu_i."""
    if len(coeffs) > len(moments):
        raise MarginalOrderError(
            f"need marginal moments up to order {len(coeffs) - 1}, have {len(moments) - 1}"
        )
    total = Fraction(0)
    for c, mu in zip(coeffs, moments):
        if not _is_zero(c):
            total = total + c * mu
    return total


# --- Jacobi model ----------------------------------------------------------

@dataclass(frozen=True)
class GNSModel:
    """Truncated Jacobi operator of a marginal in its monic orthogonal basis."""
    alphas: Tuple[Fraction, ...]
    betas: Tuple[Fraction, ...]
    exact: bool = False

    @property
    def dimension(self) -> int:
        return len(self.alphas)

    def norms(self) -> List[Fraction]:
        """<p_k, p_k> for k < dimension."""
        norms = [Fraction(1)]
        for beta in self.betas:
            norms.append(norms[-1] * beta)
        return norms

    def multiply(self, vector: Sequence[Fraction]) -> List[Fraction]:
        """Apply the generator x to a coordinate vector (truncated at the model dimension)."""
        d = self.dimension
        out = [Fraction(0)] * d
        for k, value in enumerate(vector):
            if not value:
                continue
            out[k] += self.alphas[k] * value
            if k + 1 < d:
                out[k + 1] += value
            if k >= 1:
                out[k - 1] += self.betas[k - 1] * value
        return out

    def apply(self, coeffs: Sequence[Fraction], vector: Sequence[Fraction]) -> List[Fraction]:
        """Apply the polynomial sum_p c_p x^p to a coordinate vector (Horner)."""
        d = self.dimension
        result = [Fraction(0)] * d
        for c in reversed(coeffs):
            result = self.multiply(result)
            if c:
                result = [r + c * v for r, v in zip(result, vector)]
        return result

    def moment(self, order: int) -> Fraction:
        """<x^order p_0, p_0> computed in the model."""
        vector = [Fraction(1)] + [Fraction(0)] * (self.dimension - 1)
        for _ in range(order):
            vector = self.multiply(vector)
        return vector[0]


def jacobi_from_moments(moments: Sequence[Fraction], dimension: int = None) -> GNSModel:
    """
    Exact Jacobi parameters by the Stieltjes recursion on the moment functional.

    Args:
        moments: mu_0 = 1, mu_1, ... as exact rationals
        dimension: requested model size; defaults to the largest size the data supports

    Returns:
        A GNSModel; exact=True when the marginal turned out to be finitely supported
        with at most `dimension` atoms, in which case all of its moments are reproduced.
    """
    moments = [Fraction(mu) for mu in moments]
    if not moments or moments[0] != 1:
        raise MarginalOrderError("marginal moments must start with mu_0 = 1")
    available = len(moments) // 2
    if dimension is None:
        dimension = available
    if dimension < 1:
        raise MarginalOrderError("model dimension must be at least 1")
    if dimension > available:
        raise MarginalOrderError(
            f"dimension {dimension} needs moments up to order {2 * dimension - 1}, "
            f"have {len(moments) - 1}"
        )

    alphas: List[Fraction] = []
    betas: List[Fraction] = []
    previous: Tuple = (Fraction(0),)
    current: Tuple = (Fraction(1),)
    previous_norm = Fraction(1)
    exact = False
    for k in range(dimension + 1):
        if 2 * k >= len(moments):
            break
        norm = moment_functional(poly_mul(current, current), moments)
        if norm < 0:
            raise MarginalOrderError(f"Hankel matrix is not positive semidefinite (level {k})")
        if norm == 0:
            # finitely supported marginal with k atoms
            exact = True
            break
        if k == dimension:
            break
        if k > 0:
            betas.append(norm / previous_norm)
        x_current = (Fraction(0),) + tuple(current)
        alpha = moment_functional(poly_mul(x_current, current), moments) / norm
        alphas.append(alpha)
        following = poly_add(poly_add(x_current, poly_scale(current, -alpha)),
                             poly_scale(previous, -(betas[-1] if k > 0 else 0)))
        previous, current = current, following
        previous_norm = norm

    logger.debug("GNS model: dimension=%s exact=%s", len(alphas), exact)
    return GNSModel(tuple(alphas), tuple(betas), exact)
