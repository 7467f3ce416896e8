# core/piecewise.py
"""Exact piecewise polynomials on rational breakpoints."""

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .gns import poly_eval, poly_integrate, poly_is_zero, poly_mul, poly_scale, poly_add, poly_trim
from .hierarchy import to_fraction
from .intervals import IntervalIndicator

Coeffs = Tuple[Fraction, ...]


def _canonical(breakpoints: Sequence[Fraction], pieces: Sequence[Coeffs]):
    """Drop zero pieces at the ends and merge equal neighbours."""
    breakpoints = list(breakpoints)
    pieces = [poly_trim(piece) for piece in pieces]
    while pieces and poly_is_zero(pieces[0]):
        pieces.pop(0)
        breakpoints.pop(0)
    while pieces and poly_is_zero(pieces[-1]):
        pieces.pop()
        breakpoints.pop()
    if not pieces:
        return (), ()
    merged_breaks = [breakpoints[0]]
    merged_pieces: List[Coeffs] = []
    for index, piece in enumerate(pieces):
        if merged_pieces and merged_pieces[-1] == piece:
            merged_breaks[-1] = breakpoints[index + 1]
        else:
            merged_pieces.append(piece)
            merged_breaks.append(breakpoints[index + 1])
    return tuple(merged_breaks), tuple(merged_pieces)


@dataclass(frozen=True)
class PiecewisePolynomial:
    """
    Polynomial pieces[j] (ascending coefficients in x) on (breakpoints[j], breakpoints[j+1]],
    zero elsewhere. Always stored in canonical form.
    """
    breakpoints: Tuple[Fraction, ...]
    pieces: Tuple[Coeffs, ...]

    def __post_init__(self):
        breakpoints = tuple(to_fraction(b) for b in self.breakpoints)
        pieces = tuple(tuple(to_fraction(c) for c in piece) for piece in self.pieces)
        if pieces and len(breakpoints) != len(pieces) + 1:
            raise ValueError("need exactly one more breakpoint than pieces")
        if any(a >= b for a, b in zip(breakpoints, breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        breakpoints, pieces = _canonical(breakpoints, pieces) if pieces else ((), ())
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def indicator(cls, f: IntervalIndicator) -> "PiecewisePolynomial":
        return cls((f.s, f.t), ((Fraction(1),),))

    @classmethod
    def zero(cls) -> "PiecewisePolynomial":
        return cls((), ())

    def is_zero(self) -> bool:
        return not self.pieces

    def support(self) -> Optional[Tuple[Fraction, Fraction]]:
        """Hull (lowest, highest breakpoint) of the support; None for the zero function."""
        if not self.pieces:
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    def __call__(self, x) -> Fraction:
        x = to_fraction(x)
        if not self.pieces or x <= self.breakpoints[0] or x > self.breakpoints[-1]:
            return Fraction(0)
        j = bisect.bisect_left(self.breakpoints, x) - 1
        return to_fraction(poly_eval(self.pieces[j], x))

    def _piece_at(self, low: Fraction, high: Fraction) -> Coeffs:
        """The polynomial on a sub-interval (low, high] of a refinement."""
        if not self.pieces or high <= self.breakpoints[0] or low >= self.breakpoints[-1]:
            return (Fraction(0),)
        j = bisect.bisect_right(self.breakpoints, low) - 1
        return self.pieces[j]

    def __mul__(self, other):
        if not isinstance(other, PiecewisePolynomial):
            return PiecewisePolynomial(self.breakpoints, tuple(poly_scale(p, to_fraction(other)) for p in self.pieces))
        if self.is_zero() or other.is_zero():
            return PiecewisePolynomial.zero()
        low = max(self.breakpoints[0], other.breakpoints[0])
        high = min(self.breakpoints[-1], other.breakpoints[-1])
        if low >= high:
            return PiecewisePolynomial.zero()
        cuts = sorted({b for b in self.breakpoints + other.breakpoints if low <= b <= high})
        pieces = [poly_mul(self._piece_at(a, b), other._piece_at(a, b)) for a, b in zip(cuts, cuts[1:])]
        return PiecewisePolynomial(tuple(cuts), tuple(pieces))

    __rmul__ = __mul__

    def integral(self) -> Fraction:
        total = Fraction(0)
        for (a, b), piece in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            antiderivative = poly_integrate(piece)
            total += to_fraction(poly_eval(antiderivative, b)) - to_fraction(poly_eval(antiderivative, a))
        return total

    def inner(self, other: "PiecewisePolynomial") -> Fraction:
        """L2 pairing (real-valued factors)."""
        return (self * other).integral()

    def tail_integral(self, start: Optional[Fraction] = None) -> "PiecewisePolynomial":
        """
        psi(x) = integral of self over (x, infinity), as a piecewise polynomial on
        (start, highest breakpoint]; psi is constant below the support.
        """
        if self.is_zero():
            return PiecewisePolynomial.zero()
        breaks = list(self.breakpoints)
        pieces: List[Coeffs] = []
        tail = Fraction(0)
        for j in range(len(self.pieces) - 1, -1, -1):
            antiderivative = poly_integrate(self.pieces[j])
            upper = to_fraction(poly_eval(antiderivative, breaks[j + 1]))
            # integral over (x, b_{j+1}] plus everything above
            pieces.append(poly_add((upper + tail,), poly_scale(antiderivative, Fraction(-1))))
            tail += upper - to_fraction(poly_eval(antiderivative, breaks[j]))
        pieces.reverse()
        if start is not None:
            start = to_fraction(start)
            if start < breaks[0]:
                breaks.insert(0, start)
                pieces.insert(0, (tail,))
        return PiecewisePolynomial(tuple(breaks), tuple(pieces))

    def sort_key(self):
        return (self.breakpoints, self.pieces)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        chunks = []
        for (a, b), piece in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            terms = " + ".join(f"{c}*x^{p}" if p else f"{c}" for p, c in enumerate(piece) if c)
            chunks.append(f"({a},{b}]:{terms}")
        return "; ".join(chunks)
