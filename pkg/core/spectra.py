# core/spectra.py
"""
Central limit laws of the monotone hierarchy.

The m-th law has moments |ONC^2_{2k}(m)| / k!, Jacobi sequence
(1, ..., 1 [m times], 1/2, 1/2, ...) and Cauchy transform

    G^(1)(z) = 1 / sqrt(z^2 - 2),   G^(m)(z) = 1 / (z - G^(m-1)(z)).

Level 1 is the arcsine law on [-sqrt2, sqrt2], level INFINITY the Wigner law on
[-2, 2]; levels in between carry one symmetric pair of atoms outside [-sqrt2, sqrt2].
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from .errors import BranchCutError, RootSearchError, TruncationError
from .hierarchy import INFINITY, Depth
from .partitions import count_onc_pairs

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
ATOM_SCAN_END = 4.0
ATOM_SCAN_STEP = 1.0 / 64.0


def clt_moment(m: Depth, n: int) -> Fraction:
    """n-th moment of the m-th central limit law (exact)."""
    if n < 0:
        raise ValueError(f"moment order must be non-negative, got {n}")
    if n % 2:
        return Fraction(0)
    k = n // 2
    return Fraction(count_onc_pairs(k, m), math.factorial(k))


# --- Jacobi sequences ------------------------------------------------------

@dataclass(frozen=True)
class JacobiSequence:
    """beta_1, beta_2, ...: a finite prefix followed by a constant tail (None = sequence ends)."""
    prefix: Tuple[Fraction, ...]
    tail: Optional[Fraction] = None

    def beta(self, n: int) -> Fraction:
        """The 1-based coefficient beta_n (0 past the end of a finite sequence)."""
        if n < 1:
            raise IndexError("Jacobi coefficients are indexed from 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.tail if self.tail is not None else Fraction(0)

    def terms(self, count: int) -> List[Fraction]:
        return [self.beta(n) for n in range(1, count + 1)]

    def shifted(self, leading: Fraction = Fraction(1)) -> "JacobiSequence":
        """Right shift: `leading` followed by this sequence."""
        return JacobiSequence((Fraction(leading),) + self.prefix, self.tail)


def jacobi_for_m(m: Depth) -> JacobiSequence:
    if m is INFINITY:
        return JacobiSequence((), Fraction(1))
    return JacobiSequence((Fraction(1),) * m, Fraction(1, 2))


def moments_from_jacobi(seq: JacobiSequence, n: int, depth: Optional[int] = None) -> Fraction:
    """
    Vacuum entry of J^n for the tridiagonal J with ones above the diagonal and
    beta_1, beta_2, ... below it, truncated to `depth` levels.
    """
    needed = n // 2 + 1
    if depth is None:
        depth = needed
    if depth < needed:
        raise TruncationError(f"moment of order {n} needs truncation depth {needed}, got {depth}")
    betas = seq.terms(depth)
    weights = [Fraction(0)] * depth
    weights[0] = Fraction(1)
    for _ in range(n):
        stepped = [Fraction(0)] * depth
        for level, w in enumerate(weights):
            if not w:
                continue
            if level + 1 < depth:
                stepped[level + 1] += w
            if level >= 1:
                stepped[level - 1] += w * betas[level - 1]
        weights = stepped
    return weights[0]


# --- Cauchy transforms -----------------------------------------------------

def _cut(m: Depth) -> float:
    return 2.0 if m is INFINITY else SQRT2


def _branch_root(z: complex, radius: float, side: Optional[str]) -> complex:
    """sqrt(z^2 - radius^2) on the branch that behaves like z at infinity."""
    if z.imag == 0 and abs(z.real) <= radius:
        if side not in ("upper", "lower"):
            raise BranchCutError(f"z = {z} lies on the cut [-{radius}, {radius}]; pass side='upper' or 'lower'")
        value = 1j * math.sqrt(max(radius * radius - z.real * z.real, 0.0))
        return value if side == "upper" else -value
    return z * cmath.sqrt(1 - radius * radius / (z * z))


def cauchy(m: Depth, z: complex, side: Optional[str] = None) -> complex:
    """
    G^(m)(z). Off the real axis, or on it outside the cut, no side is needed;
    on the cut `side` selects the boundary value from above or below.
    """
    z = complex(z)
    if m is INFINITY:
        return (z - _branch_root(z, 2.0, side)) / 2
    root = _branch_root(z, SQRT2, side)
    if root == 0:
        if m == 1:
            raise BranchCutError(f"G^(1) is singular at z = {z}")
        g = 0j
        levels = range(3, m + 1)
    else:
        g = 1 / root
        levels = range(2, m + 1)
    for _ in levels:
        g = 1 / (z - g)
    return g


def continued_fraction(seq: JacobiSequence, z: complex, depth: Optional[int] = None) -> complex:
    """
    1 / (z - beta_1 / (z - beta_2 / (z - ...))).

    With depth=None a constant tail is summed in closed form; otherwise the
    fraction is cut after `depth` levels.
    """
    z = complex(z)
    if depth is not None:
        value = 0j
        for n in range(depth, 0, -1):
            value = 1 / (z - float(seq.beta(n)) * value)
        return value
    if seq.tail is None:
        value = 0j
    else:
        tail = float(seq.tail)
        value = (z - _branch_root(z, 2 * math.sqrt(tail), None)) / (2 * tail)
    for beta in reversed(seq.prefix):
        value = 1 / (z - float(beta) * value)
    return value


def moment_from_cauchy(m: Depth, n: int, radius: float = 2.5, points: int = 4096) -> float:
    """
    Coefficient of z^(-n-1) in the expansion of G^(m) at infinity, by the
    trapezoidal rule on |z| = radius (which must enclose the support and atoms).
    """
    return cauchy_moments(m, n, radius, points)[n]


def cauchy_moments(m: Depth, max_n: int, radius: float = 2.5, points: int = 4096) -> List[float]:
    theta = 2 * np.pi * (np.arange(points) + 0.5) / points
    zs = radius * np.exp(1j * theta)
    values = np.array([cauchy(m, complex(z)) for z in zs])
    return [float(np.mean(zs ** (n + 1) * values).real) for n in range(max_n + 1)]


# --- density and atoms -----------------------------------------------------

def density(m: Depth, x: float) -> float:
    """-(1/pi) Im G^(m)(x + i0); zero off the cut."""
    if abs(x) >= _cut(m):
        return 0.0
    return -cauchy(m, complex(x, 0.0), side="upper").imag / math.pi


def _real_levels(m: int, x: float) -> Tuple[float, float]:
    """(D_m(x), D_m'(x)) for the real denominator D_m = x - G^(m-1) at x > sqrt2."""
    r = math.sqrt(x * x - 2.0)
    g, dg = 1.0 / r, -x / r ** 3
    d, dd = r, x / r
    for _ in range(2, m + 1):
        d, dd = x - g, 1.0 - dg
        g, dg = 1.0 / d, -dd / (d * d)
    return d, dd


@dataclass(frozen=True)
class Atom:
    location: float
    mass: float


def atoms(m: Depth) -> List[Atom]:
    """
    Real poles of G^(m) outside the cut with their residues.

    Sign changes of the real denominator are bracketed on a fixed grid over
    (sqrt2, 4] and refined with brentq; brackets that straddle a pole of
    G^(m-1) are discarded by checking the residual.
    """
    if m is INFINITY or m == 1:
        return []
    found: List[Atom] = []
    steps = int((ATOM_SCAN_END - SQRT2) / ATOM_SCAN_STEP)
    grid = [SQRT2 + j * ATOM_SCAN_STEP for j in range(1, steps + 1)]

    def denominator(x: float) -> float:
        return _real_levels(m, x)[0]

    previous_x, previous_d = grid[0], denominator(grid[0])
    for x in grid[1:]:
        d = denominator(x)
        if previous_d == 0:
            root = previous_x
        elif previous_d * d < 0:
            try:
                root = optimize.brentq(denominator, previous_x, x, xtol=1e-14, maxiter=200)
            except (ValueError, RuntimeError) as e:
                raise RootSearchError(f"atom refinement failed for m={m}: {e}", (previous_x, x)) from e
        else:
            previous_x, previous_d = x, d
            continue
        residual, slope = _real_levels(m, root)
        if abs(residual) < 1e-8 and slope != 0:
            mass = 1.0 / slope
            found.append(Atom(root, mass))
            logger.debug("m=%s atom at %.15g mass %.15g", m, root, mass)
        previous_x, previous_d = x, d

    mirrored = [Atom(-a.location, a.mass) for a in found]
    return sorted(mirrored + found, key=lambda a: a.location)


@dataclass(frozen=True)
class MeasureSummary:
    """Absolutely continuous part, support and atoms of a central limit law."""
    m: Depth
    support: Tuple[float, float]
    atoms: Tuple[Atom, ...]

    def density(self, x: float) -> float:
        return density(self.m, x)

    def _integrate(self, n: int) -> float:
        c = self.support[1]

        def integrand(theta: float) -> float:
            x = c * math.sin(theta)
            return self.density(x) * x ** n * c * math.cos(theta)

        value, error = integrate.quad(integrand, -math.pi / 2, math.pi / 2,
                                      epsabs=1e-12, epsrel=1e-12, limit=200)
        logger.debug("quadrature m=%s n=%s value=%.17g error=%.3g", self.m, n, value, error)
        return value

    def continuous_mass(self) -> float:
        return self._integrate(0)

    def total_mass(self) -> float:
        return self.continuous_mass() + sum(a.mass for a in self.atoms)

    def moment(self, n: int) -> float:
        return self._integrate(n) + sum(a.mass * a.location ** n for a in self.atoms)


def measure_summary(m: Depth) -> MeasureSummary:
    c = _cut(m)
    return MeasureSummary(m, (-c, c), tuple(atoms(m)))


def density_grid(m: Depth, points: int, margin: float) -> List[Tuple[float, float]]:
    """(x, f(x)) on a uniform grid over [-cut - margin, cut + margin]."""
    c = _cut(m) + margin
    xs = np.linspace(-c, c, points)
    return [(float(x), density(m, float(x))) for x in xs]


def moment_table(levels: Sequence[Depth], orders: Sequence[int]) -> List[Tuple[Depth, int, Fraction]]:
    return [(m, n, clt_moment(m, n)) for m in levels for n in orders]
