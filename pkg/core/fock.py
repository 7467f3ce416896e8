# core/fock.py
"""
Exact calculus on the m-monotone Fock space over L2(R+).

Vectors are finite combinations of the vacuum and simple tensors
f_1 (x) ... (x) f_n of piecewise polynomials, the first factor being the most
recently created. Creation prepends a factor. Annihilation by f pairs f with
the first factor: scalarly while the tensor has at most m factors, and through
the multiplication operator M_psi, psi(x) = int_{y > x} f_1(y) f(y) dy, on the
next factor otherwise. The time-ordering projection is never materialised;
orderings it would forbid die because psi vanishes on them.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import UnsupportedOverlapError
from .hierarchy import INFINITY, Depth
from .intervals import IntervalIndicator, SupportProfile
from .partitions import (
    OrderedPartition,
    check_pair_profile,
    coloring_count,
    compatible,
    enumerate_nc,
    enumerate_onc,
    inn_count,
)
from .piecewise import PiecewisePolynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimpleTensor:
    """f_1 (x) ... (x) f_n, f_1 the most recent slot."""
    factors: Tuple[PiecewisePolynomial, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a simple tensor needs at least one factor")

    def __len__(self) -> int:
        return len(self.factors)

    def sort_key(self):
        return tuple(f.sort_key() for f in self.factors)

    def __str__(self) -> str:
        return " (x) ".join(f"[{f}]" for f in self.factors)


@dataclass(frozen=True)
class TensorState:
    """vacuum * Omega + sum of coefficient * tensor, canonical (merged, zero-free, sorted)."""
    vacuum: Fraction = Fraction(0)
    terms: Tuple[Tuple[SimpleTensor, Fraction], ...] = ()

    @classmethod
    def build(cls, vacuum, terms: Iterable[Tuple[SimpleTensor, Fraction]]) -> "TensorState":
        merged: Dict[SimpleTensor, Fraction] = {}
        for tensor, coefficient in terms:
            if any(f.is_zero() for f in tensor.factors):
                continue
            merged[tensor] = merged.get(tensor, Fraction(0)) + coefficient
        kept = [(t, c) for t, c in merged.items() if c != 0]
        kept.sort(key=lambda item: (len(item[0]), item[0].sort_key()))
        return cls(Fraction(vacuum), tuple(kept))

    @classmethod
    def vacuum_state(cls) -> "TensorState":
        return cls(Fraction(1), ())

    @classmethod
    def from_tensor(cls, factors: Iterable[PiecewisePolynomial], coefficient=Fraction(1)) -> "TensorState":
        return cls.build(0, [(SimpleTensor(tuple(factors)), Fraction(coefficient))])

    def is_zero(self) -> bool:
        return self.vacuum == 0 and not self.terms

    def __add__(self, other: "TensorState") -> "TensorState":
        return TensorState.build(self.vacuum + other.vacuum, list(self.terms) + list(other.terms))

    def scale(self, factor) -> "TensorState":
        factor = Fraction(factor)
        return TensorState.build(self.vacuum * factor, [(t, c * factor) for t, c in self.terms])

    def truncate(self, max_length: int) -> "TensorState":
        """Drop tensors longer than max_length."""
        return TensorState(self.vacuum, tuple((t, c) for t, c in self.terms if len(t) <= max_length))


def _unbounded_or_within(m: Depth, length: int) -> bool:
    return m is INFINITY or length <= m


def create(m: Depth, f: IntervalIndicator, v: TensorState) -> TensorState:
    """a^(m)(f): prepend f to every tensor; the vacuum goes to the tensor [f]."""
    factor = PiecewisePolynomial.indicator(f)
    terms = [(SimpleTensor((factor,) + t.factors), c) for t, c in v.terms]
    if v.vacuum:
        terms.append((SimpleTensor((factor,)), v.vacuum))
    return TensorState.build(0, terms)


def annihilate(m: Depth, f: IntervalIndicator, v: TensorState) -> TensorState:
    """a^(m)*(f): the vacuum goes to 0; tensors lose their first factor as described above."""
    g = PiecewisePolynomial.indicator(f)
    vacuum = Fraction(0)
    terms: List[Tuple[SimpleTensor, Fraction]] = []
    for tensor, coefficient in v.terms:
        first, rest = tensor.factors[0], tensor.factors[1:]
        if _unbounded_or_within(m, len(tensor)):
            scalar = first.inner(g)
            if not scalar:
                continue
            if rest:
                terms.append((SimpleTensor(rest), coefficient * scalar))
            else:
                vacuum += coefficient * scalar
            continue
        product = first * g
        if product.is_zero():
            continue
        following = rest[0]
        start = min(following.breakpoints[0], product.breakpoints[0])
        psi = product.tail_integral(start)
        weighted = following * psi
        if weighted.is_zero():
            continue
        terms.append((SimpleTensor((weighted,) + rest[1:]), coefficient))
    return TensorState.build(vacuum, terms)


def gaussian_step(m: Depth, f: IntervalIndicator, v: TensorState) -> TensorState:
    """omega^(m)(f) = a(f) + a*(f)."""
    return create(m, f, v) + annihilate(m, f, v)


@dataclass(frozen=True)
class EpsilonWord:
    """Letters (creates, f); read right to left when applied to the vacuum."""
    letters: Tuple[Tuple[bool, IntervalIndicator], ...]

    @classmethod
    def from_pairing(cls, pi: OrderedPartition, profile: SupportProfile) -> "EpsilonWord":
        """Create at the later element of each pair, annihilate at the earlier one."""
        check_pair_profile(pi, profile)
        creates = [False] * pi.n
        for first, second in pi.blocks:
            creates[second - 1] = True
        return cls(tuple((creates[p], profile[p]) for p in range(pi.n)))

    def is_balanced(self) -> bool:
        """Right to left, annihilations never outnumber creations, and the totals match."""
        height = 0
        for creates, _ in reversed(self.letters):
            height += 1 if creates else -1
            if height < 0:
                return False
        return height == 0

    def apply(self, m: Depth, v: TensorState) -> TensorState:
        for creates, f in reversed(self.letters):
            v = create(m, f, v) if creates else annihilate(m, f, v)
            if v.is_zero():
                break
        return v


def a_pi_expectation(m: Depth, pi: OrderedPartition, profile: SupportProfile) -> Fraction:
    """<a_pi Omega, Omega> by direct application of creation and annihilation operators."""
    word = EpsilonWord.from_pairing(pi, profile)
    return word.apply(m, TensorState.vacuum_state()).vacuum


def inner_block_closed_form(pi: OrderedPartition, profile: SupportProfile, m: Depth = 1) -> Fraction:
    """Product over blocks of (t - s) / (Inn + 1), with Inn depth-adjusted at level m."""
    check_pair_profile(pi, profile)
    value = Fraction(1)
    for i, (first, _) in enumerate(pi.blocks):
        value *= profile.at(first).length / (inn_count(pi, profile, i, m) + 1)
    return value


def gaussian_moment(m: Depth, profile: SupportProfile) -> Fraction:
    """phi(omega(f_1) ... omega(f_n)) on the m-monotone Fock space."""
    n = len(profile)
    if n % 2:
        return Fraction(0)
    state = TensorState.vacuum_state()
    for position in range(n - 1, -1, -1):
        state = gaussian_step(m, profile[position], state)
        # a tensor longer than the letters still to come cannot return to the vacuum
        state = state.truncate(position)
        if state.is_zero():
            return Fraction(0)
    return state.vacuum


def _factorial_product(profile: SupportProfile) -> Optional[int]:
    if not profile.is_balanced():
        return None
    return math.prod(math.factorial(len(group) // 2) for group in profile.groups())


def partition_sum_moment(m: Depth, profile: SupportProfile) -> Fraction:
    """
    (1 / (b_1! ... b_p!)) * sum over compatible P in ONC^2_n(m) of the product
    of <f_alpha, f_beta> over the pairs of P.
    """
    n = len(profile)
    normaliser = _factorial_product(profile)
    if n % 2 or normaliser is None or n == 0:
        return Fraction(1) if n == 0 else Fraction(0)
    total = Fraction(0)
    for P in enumerate_onc(n, m, pairs_only=True):
        if not compatible(P, profile):
            continue
        weight = Fraction(1)
        for a, b in P.blocks:
            weight *= profile.at(a).inner(profile.at(b))
        total += weight
    return total / normaliser


def _consistent(pi: OrderedPartition, profile: SupportProfile) -> bool:
    return all(profile.at(a) == profile.at(b) for a, b in pi.blocks)


def inner_block_moment(m: Depth, profile: SupportProfile) -> Fraction:
    """
    Sum over non-crossing pair diagrams admitting a compatible ONC^2(m) colouring
    of the product of (t - s) / (Inn + 1).
    """
    n = len(profile)
    if n == 0:
        return Fraction(1)
    if n % 2:
        return Fraction(0)
    total = Fraction(0)
    for pi in enumerate_nc(n, pairs_only=True):
        if not _consistent(pi, profile) or coloring_count(pi, profile, m) == 0:
            continue
        total += inner_block_closed_form(pi, profile, m)
    return total


# --- inner products in the factorising case --------------------------------

def _simple_inner(m: Depth, left: SimpleTensor, right: SimpleTensor) -> Fraction:
    products = [a * b for a, b in zip(left.factors, right.factors)]
    if any(p.is_zero() for p in products):
        return Fraction(0)
    n = len(products)
    if not _unbounded_or_within(m, n):
        # the first n - m + 1 variables are time ordered x_1 > x_2 > ...
        chain = products[: n - m + 1]
        for later, earlier in zip(chain, chain[1:]):
            later_low, later_high = later.support()
            earlier_low, earlier_high = earlier.support()
            if later_low >= earlier_high:
                continue
            if later_high <= earlier_low:
                return Fraction(0)
            raise UnsupportedOverlapError(
                f"time-ordered factors with overlapping supports ({later_low},{later_high}] "
                f"and ({earlier_low},{earlier_high}]"
            )
    return math.prod((p.integral() for p in products), start=Fraction(1))


def fock_inner(m: Depth, u: TensorState, v: TensorState) -> Fraction:
    """<u, v> on F^(m) when every pairing factorises over the ordered region."""
    total = u.vacuum * v.vacuum
    for left, a in u.terms:
        for right, b in v.terms:
            if len(left) == len(right):
                total += a * b * _simple_inner(m, left, right)
    return total
