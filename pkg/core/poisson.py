# core/poisson.py
"""
Poisson limit laws of the monotone hierarchy.

The n-th moment of the m-th Poisson law with rate lam is

    M_n(lam) = sum_q lam^q / q! * |ONC_n(q, m)|,

and the moment series H^(m)(z) = sum_n M_n z^(-n-1) satisfy

    H^(m) = (1 - H^(m-1)) / (z - z H^(m-1) - lam).

Series are handled in w = 1/z with coefficients that are exact sympy
polynomials in lam.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy

from .errors import OrderCapError
from .hierarchy import Depth, to_fraction
from .partitions import count_onc_blocks, onc_census

logger = logging.getLogger(__name__)

LAMBDA = sympy.Symbol("lam")
DEFAULT_POISSON_MAX_ORDER = 10


def _poly(expr) -> sympy.Poly:
    return sympy.Poly(expr, LAMBDA, domain="QQ")


def _moment_from_counts(counts: Dict[int, int]) -> sympy.Poly:
    expr = sum((sympy.Rational(count, math.factorial(q)) * LAMBDA ** q for q, count in counts.items()),
               sympy.Integer(0))
    return _poly(expr)


def poisson_moment(m: Depth, n: int, max_order: int = DEFAULT_POISSON_MAX_ORDER) -> sympy.Poly:
    """n-th moment of the m-th Poisson law as a polynomial in lam, from the ONC_n(q, m) census."""
    if n > max_order:
        raise OrderCapError(f"Poisson moment order {n} exceeds the cap {max_order}")
    if n == 0:
        return _poly(1)
    return _moment_from_counts(onc_census(n, m))


def _recurrence_moment(m: Depth, n: int) -> sympy.Poly:
    if n == 0:
        return _poly(1)
    return _moment_from_counts({q: count_onc_blocks(n, q, m) for q in range(1, n + 1)})


@dataclass(frozen=True)
class PoissonSeries:
    """Coefficients M_0..M_order of H^(m) as polynomials in lam."""
    m: int
    order: int
    coefficients: Tuple[sympy.Poly, ...]

    def coefficient(self, n: int) -> sympy.Poly:
        """Coefficient of z^(-n-1)."""
        return self.coefficients[n]

    def table(self) -> Dict[Tuple[int, int], Fraction]:
        """(n, q) -> coefficient of lam^q in M_n."""
        table = {}
        for n, poly in enumerate(self.coefficients):
            for (q,), value in poly.terms():
                table[(n, q)] = to_fraction(value)
        return table

    def block_counts(self, n: int) -> Dict[int, int]:
        """q -> |ONC_n(q, m)| read back from the coefficients."""
        return {
            q: int(value * math.factorial(q))
            for (row, q), value in self.table().items() if row == n
        }

    def evaluate(self, lam) -> List[Fraction]:
        value = sympy.Rational(str(to_fraction(lam)))
        return [to_fraction(poly.eval(value)) for poly in self.coefficients]


def _series_from_moments(moments: List[sympy.Poly]) -> List[sympy.Poly]:
    """Coefficients of 1 - H in w, where H = sum_n M_n w^(n+1)."""
    return [_poly(1)] + [-mu for mu in moments]


def poisson_series(
    m: int,
    order: int,
    base: str = "enumeration",
    max_order: int = DEFAULT_POISSON_MAX_ORDER,
) -> PoissonSeries:
    """
    H^(m) up to z^(-order-1) by formal-series division, starting from H^(1).

    Args:
        m: positive hierarchy level
        order: highest moment order kept
        base: "enumeration" counts ONC_n(q, 1) directly; "recurrence" uses count_onc_blocks
        max_order: order cap
    """
    if order > max_order:
        raise OrderCapError(f"Poisson series order {order} exceeds the cap {max_order}")
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"Poisson series needs a positive integer level, got {m!r}")
    if base == "enumeration":
        moments = [poisson_moment(1, n, max_order) for n in range(order + 1)]
    elif base == "recurrence":
        moments = [_recurrence_moment(1, n) for n in range(order + 1)]
    else:
        raise ValueError(f"unknown base {base!r}")

    zero = _poly(0)
    for level in range(2, m + 1):
        a = _series_from_moments(moments)                  # 1 - H, length order + 2
        numerator = [zero] + a[:-1]                        # w (1 - H)
        denominator = list(a)
        denominator[1] = denominator[1] - _poly(LAMBDA)    # 1 - H - lam w
        quotient: List[sympy.Poly] = []
        for j in range(order + 2):
            value = numerator[j]
            for i in range(1, j + 1):
                value = value - denominator[i] * quotient[j - i]
            quotient.append(value)                          # denominator[0] == 1
        moments = quotient[1:order + 2]
        logger.debug("Poisson series level %d computed to order %d", level, order)
    return PoissonSeries(m, order, tuple(moments))
