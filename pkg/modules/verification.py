# modules/verification.py
"""
Cross-route verification suites.

Each suite is a list of named checks; a check recomputes one quantity by two
independent routes and reports whether they agree. Checks never stop the run:
a failing or raising check is recorded and the next one starts. Randomised
corpora come from numpy's counter-based Philox generator keyed by the seed,
one jumped stream per check, so reports do not depend on check order or on
parallel execution.
"""

import itertools
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from core.fock import (
    a_pi_expectation,
    gaussian_moment,
    inner_block_closed_form,
    inner_block_moment,
    partition_sum_moment,
)
from core.hierarchy import INFINITY, Depth, depth_label, format_fraction
from core.intervals import IntervalIndicator, SupportProfile, profile_from_labels
from core.partitions import (
    OrderedPartition,
    catalan,
    coloring_count,
    count_onc_blocks,
    count_onc_pairs,
    double_factorial,
    enumerate_nc,
    enumerate_onc,
    inner_block_weight,
    onc_census,
)
from core.poisson import LAMBDA, poisson_moment, poisson_series
from core.representation import DEFAULT_DENSE_LIMIT, DEFAULT_MAX_BASIS, build_product_space, vacuum_moment
from core.spectra import (
    clt_moment,
    cauchy,
    cauchy_moments,
    density,
    jacobi_for_m,
    measure_summary,
    moments_from_jacobi,
)
from core.states import (
    DEFAULT_CLT_MAX_ORDER,
    AlgebraSpec,
    SymbolicMarginal,
    WordExpr,
    clt_moment_finite_n,
    evaluate_word,
    expand,
)

logger = logging.getLogger(__name__)

SUITES = ("partitions", "moments", "spectra", "poisson", "states", "fock", "clt")
TABLE_LEVELS: Tuple[Depth, ...] = (1, 2, 3, 4, INFINITY)
TABLE_ORDERS = (2, 4, 6, 8, 10)

# Low-order moments of the central limit laws, rows m = 1, 2, 3, 4, inf
KNOWN_CLT_MOMENTS: Dict[Depth, Tuple[Fraction, ...]] = {
    1: (Fraction(1), Fraction(3, 2), Fraction(5, 2), Fraction(35, 8), Fraction(63, 8)),
    2: (Fraction(1), Fraction(2), Fraction(9, 2), Fraction(21, 2), Fraction(199, 8)),
    3: (Fraction(1), Fraction(2), Fraction(5), Fraction(27, 2), Fraction(75, 2)),
    4: (Fraction(1), Fraction(2), Fraction(5), Fraction(14), Fraction(83, 2)),
    INFINITY: (Fraction(1), Fraction(2), Fraction(5), Fraction(14), Fraction(42)),
}

Outcome = Tuple[bool, str]
Check = Tuple[str, Callable[[], Outcome]]


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""
    seconds: Optional[float] = None

    def to_dict(self, timings: bool = True) -> dict:
        record = {"suite": self.suite, "check": self.name, "passed": self.passed, "detail": self.detail}
        if timings and self.seconds is not None:
            record["seconds"] = round(self.seconds, 6)
        return record


@dataclass
class VerificationReport:
    seed: int
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self, timings: bool = True) -> dict:
        suites: Dict[str, List[dict]] = {}
        for result in self.results:
            suites.setdefault(result.suite, []).append(result.to_dict(timings))
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": len(self.results),
            "failures": len(self.failures()),
            "suites": suites,
        }


# --- seeded corpora --------------------------------------------------------

def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox keyed by the seed, advanced by `stream` jumps."""
    bit_generator = np.random.Philox(key=seed)
    if stream:
        bit_generator = bit_generator.jumped(stream)
    return np.random.Generator(bit_generator)


def random_intervals(rng: np.random.Generator, count: int) -> List[IntervalIndicator]:
    """`count` pairwise disjoint intervals with half-integer endpoints in [0, 8]."""
    points = sorted(int(p) for p in rng.choice(17, size=2 * count, replace=False))
    return [IntervalIndicator(Fraction(points[2 * i], 2), Fraction(points[2 * i + 1], 2)) for i in range(count)]


def random_profile(rng: np.random.Generator, k: int, max_supports: int = 3) -> SupportProfile:
    """A balanced profile of length 2k over at most max_supports disjoint intervals."""
    count = int(rng.integers(1, min(max_supports, k) + 1))
    supports = random_intervals(rng, count)
    labels = [int(rng.integers(count)) for _ in range(k)] * 2
    order = rng.permutation(2 * k)
    return profile_from_labels([labels[int(i)] for i in order], supports)


def pair_profiles(pi: OrderedPartition, supports: Sequence[IntervalIndicator]) -> Iterator[SupportProfile]:
    """Every profile with pi ~ profile that gives each block one of `supports`."""
    for choice in itertools.product(range(len(supports)), repeat=pi.size):
        labels = [0] * pi.n
        for block, label in zip(pi.blocks, choice):
            for element in block:
                labels[element - 1] = label
        yield profile_from_labels(labels, supports)


def random_measure(rng: np.random.Generator, index: int) -> AlgebraSpec:
    """Finitely supported marginal with 2 or 3 rational atoms and rational weights."""
    count = int(rng.integers(2, 4))
    numerators = rng.choice(np.arange(-6, 7), size=count, replace=False)
    atoms = [Fraction(int(a), 2) for a in numerators]
    raw = [int(w) for w in rng.integers(1, 5, size=count)]
    weights = [Fraction(w, sum(raw)) for w in raw]
    return AlgebraSpec.from_measure(index, atoms, weights)


# --- checks ----------------------------------------------------------------

def _mismatches(pairs: Sequence[Tuple[str, object, object]]) -> Outcome:
    bad = [f"{label}: {left} != {right}" for label, left, right in pairs if left != right]
    if bad:
        return False, "; ".join(bad[:5]) + (f" (+{len(bad) - 5} more)" if len(bad) > 5 else "")
    return True, f"{len(pairs)} values agree"


@dataclass(frozen=True)
class VerifySettings:
    seed: int = 20240607
    profile_count: int = 200
    max_k: int = 4
    word_length: int = 6
    clt_max_order: int = DEFAULT_CLT_MAX_ORDER
    max_basis: int = DEFAULT_MAX_BASIS
    dense_limit: int = DEFAULT_DENSE_LIMIT


class Verifier:
    """Builds and runs the verification suites."""

    def __init__(self, settings: VerifySettings, parallel: bool = False, workers: Optional[int] = None):
        self.settings = settings
        self.parallel = parallel
        self.workers = workers

    def rng(self, stream: int) -> np.random.Generator:
        return make_rng(self.settings.seed, stream)

    # partitions
    def _partition_checks(self) -> List[Check]:
        def monotone_pairs_enumerated():
            rows = [
                (f"k={k}", sum(1 for _ in enumerate_onc(2 * k, 1, pairs_only=True)), double_factorial(k))
                for k in range(1, 7)
            ]
            return _mismatches(rows)

        def monotone_pairs_recurrence():
            return _mismatches([(f"k={k}", count_onc_pairs(k, 1), double_factorial(k)) for k in range(1, 13)])

        def free_limit_recurrence():
            return _mismatches([
                (f"k={k}", count_onc_pairs(k, k + 1), math.factorial(k) * catalan(k)) for k in range(1, 13)
            ])

        def pair_recurrence_vs_enumeration():
            rows = []
            for m in (2, 3, INFINITY):
                for k in range(1, 6):
                    counted = sum(1 for _ in enumerate_onc(2 * k, m, pairs_only=True))
                    rows.append((f"m={depth_label(m)},k={k}", count_onc_pairs(k, m), counted))
            return _mismatches(rows)

        def block_recurrence_vs_census():
            rows = []
            for m in (1, 2, 3, INFINITY):
                for n in range(1, 7):
                    census = onc_census(n, m)
                    for q in range(1, n + 1):
                        rows.append((f"m={depth_label(m)},n={n},q={q}", count_onc_blocks(n, q, m), census.get(q, 0)))
            return _mismatches(rows)

        def inner_block_identity():
            rng = self.rng(101)
            rows = []
            for k in range(1, self.settings.max_k + 1):
                for pi in enumerate_nc(2 * k, pairs_only=True):
                    supports = random_intervals(rng, 3)
                    for profile in pair_profiles(pi, supports):
                        multiplicities = math.prod(math.factorial(len(g) // 2) for g in profile.groups())
                        for m in (1, 2, 3):
                            count = coloring_count(pi, profile, m)
                            if count:
                                rows.append((f"{pi} {profile} m={m}", Fraction(count, multiplicities),
                                             inner_block_weight(pi, profile, m)))
            return _mismatches(rows)

        def nested_pairing_colourings():
            pi = OrderedPartition.from_blocks([(1, 8), (2, 3), (4, 7), (5, 6)])
            f, g = IntervalIndicator(0, 1), IntervalIndicator(1, 2)
            profile = SupportProfile((f, g, g, f, g, g, f, f))
            return _mismatches([
                ("both conditions", coloring_count(pi, profile), 2),
                ("equal supports only", coloring_count(pi, profile, respect_support_order=False), 3),
            ])

        return [
            ("monotone pair count by enumeration", monotone_pairs_enumerated),
            ("monotone pair count by recurrence", monotone_pairs_recurrence),
            ("free pair count by recurrence", free_limit_recurrence),
            ("pair recurrence matches enumeration", pair_recurrence_vs_enumeration),
            ("block recurrence matches census", block_recurrence_vs_census),
            ("colouring count equals inner block weight", inner_block_identity),
            ("nested pairing colourings", nested_pairing_colourings),
        ]

    # moments
    def _moment_checks(self) -> List[Check]:
        def known_clt_moments():
            rows = []
            for m, expected in KNOWN_CLT_MOMENTS.items():
                for n, value in zip(TABLE_ORDERS, expected):
                    rows.append((f"m={depth_label(m)},n={n}", clt_moment(m, n), value))
            return _mismatches(rows)

        def odd_moments():
            return _mismatches([
                (f"m={depth_label(m)},n={n}", clt_moment(m, n), Fraction(0))
                for m in TABLE_LEVELS for n in (1, 3, 5, 7, 9)
            ])

        return [("central limit moments", known_clt_moments), ("odd moments vanish", odd_moments)]

    # spectra
    def _spectra_checks(self) -> List[Check]:
        def jacobi_route():
            return _mismatches([
                (f"m={depth_label(m)},n={n}", moments_from_jacobi(jacobi_for_m(m), n), clt_moment(m, n))
                for m in TABLE_LEVELS for n in range(0, 11)
            ])

        def contour_route():
            worst = 0.0
            for m in TABLE_LEVELS:
                values = cauchy_moments(m, 10)
                for n in range(0, 11):
                    worst = max(worst, abs(values[n] - float(clt_moment(m, n))))
            return worst < 1e-9, f"largest deviation {worst:.3e}"

        def herglotz():
            points = [complex(x, y) for x in (-3.0, -1.0, 0.0, 0.5, 2.5) for y in (0.01, 0.5, 3.0)]
            bad = [(m, z) for m in TABLE_LEVELS for z in points if cauchy(m, z).imag >= 0]
            return not bad, f"{len(bad)} points with Im G >= 0" if bad else "Im G < 0 on the upper half-plane"

        def level_two_measure():
            summary = measure_summary(2)
            location = math.sqrt(math.sqrt(2) + 1)
            mass = (2 - math.sqrt(2)) / 4
            problems = []
            if len(summary.atoms) != 2:
                problems.append(f"expected 2 atoms, found {len(summary.atoms)}")
            else:
                for atom, sign in zip(summary.atoms, (-1, 1)):
                    if abs(atom.location - sign * location) > 1e-10:
                        problems.append(f"atom at {atom.location!r}")
                    if abs(atom.mass - mass) > 1e-9:
                        problems.append(f"atom mass {atom.mass!r}")
            if abs(summary.total_mass() - 1) > 1e-6:
                problems.append(f"total mass {summary.total_mass()!r}")
            for n in range(1, 9):
                if abs(summary.moment(n) - float(clt_moment(2, n))) > 1e-6:
                    problems.append(f"moment {n} = {summary.moment(n)!r}")
            if abs(density(2, 0.0) - math.sqrt(2) / math.pi) > 1e-12:
                problems.append(f"density at 0 = {density(2, 0.0)!r}")
            return not problems, "; ".join(problems) or "atoms, mass, moments and density match"

        def level_three_measure():
            summary = measure_summary(3)
            problems = []
            if len(summary.atoms) != 2:
                problems.append(f"expected 2 atoms, found {len(summary.atoms)}")
            else:
                for atom in summary.atoms:
                    if abs(abs(atom.location) - 1.685) > 0.005:
                        problems.append(f"atom at {atom.location!r}")
                    if abs(atom.mass - 0.099) > 0.002:
                        problems.append(f"atom mass {atom.mass!r}")
            if abs(summary.total_mass() - 1) > 1e-6:
                problems.append(f"total mass {summary.total_mass()!r}")
            return not problems, "; ".join(problems) or "atoms and total mass match"

        def extreme_levels():
            problems = []
            for m in (1, INFINITY):
                summary = measure_summary(m)
                if summary.atoms:
                    problems.append(f"m={depth_label(m)} has atoms")
                if abs(summary.total_mass() - 1) > 1e-6:
                    problems.append(f"m={depth_label(m)} total mass {summary.total_mass()!r}")
            return not problems, "; ".join(problems) or "no atoms, unit mass"

        return [
            ("Jacobi route matches counting", jacobi_route),
            ("contour route matches counting", contour_route),
            ("Cauchy transforms map to the lower half-plane", herglotz),
            ("level two measure", level_two_measure),
            ("level three measure", level_three_measure),
            ("arcsine and Wigner laws", extreme_levels),
        ]

    # poisson
    def _poisson_checks(self) -> List[Check]:
        def base_case():
            expected = sympy.Poly(LAMBDA + LAMBDA ** 2, LAMBDA, domain="QQ")
            return _mismatches([("n=2", poisson_moment(1, 2), expected)])

        def series_vs_enumeration():
            rows = []
            for m in (2, 3):
                series = poisson_series(m, 6)
                for n in range(0, 7):
                    rows.append((f"m={m},n={n}", series.coefficient(n), poisson_moment(m, n)))
            return _mismatches(rows)

        def recurrence_base():
            left = poisson_series(3, 6, base="recurrence").coefficients
            right = poisson_series(3, 6, base="enumeration").coefficients
            return _mismatches([(f"n={n}", a, b) for n, (a, b) in enumerate(zip(left, right))])

        return [
            ("second moment of the Poisson law", base_case),
            ("series recurrence matches enumeration", series_vs_enumeration),
            ("recurrence and enumeration bases agree", recurrence_base),
        ]

    # states
    def _state_checks(self) -> List[Check]:
        length = self.settings.word_length

        def symbolic_examples():
            a, b = SymbolicMarginal(1), SymbolicMarginal(2)
            marginals = {1: a, 2: b}
            pa, pb = a.symbol, b.symbol
            rows = [
                ("aba m=1", expand(evaluate_word("a1 a2 a1", 1, marginals)), expand(pa(2) * pb(1))),
                ("bab m=1", expand(evaluate_word("a2 a1 a2", 1, marginals)), expand(pb(1) ** 2 * pa(1))),
                ("abab m=2", expand(evaluate_word("a1 a2 a1 a2", 2, marginals)),
                 expand(pa(2) * pb(1) ** 2 + pb(2) * pa(1) ** 2 - pa(1) ** 2 * pb(1) ** 2)),
            ]
            if length >= 5:
                rows.append((
                    "ababa m=2",
                    expand(evaluate_word("a1 a2 a1 a2 a1", 2, marginals)),
                    expand(pa(1) ** 3 * pb(2) - pa(1) ** 3 * pb(1) ** 2 + pa(3) * pb(1) ** 2),
                ))
            return _mismatches(rows)

        def engines_agree():
            rng = self.rng(202)
            rows = []
            for m in (1, 2, INFINITY):
                algebras = [random_measure(rng, 1), random_measure(rng, 2)]
                marginals = {spec.index: spec for spec in algebras}
                space = build_product_space(
                    m, algebras, max_length=(length // 2 if m is INFINITY else None),
                    max_basis=self.settings.max_basis, dense_limit=self.settings.dense_limit,
                )
                for n in range(1, length + 1):
                    for word in _all_words((1, 2), n):
                        expr = WordExpr.of(word)
                        rows.append((f"m={depth_label(m)} {word}", evaluate_word(expr, m, marginals),
                                     vacuum_moment(space, expr)))
            return _mismatches(rows)

        def low_orders_are_free():
            a, b = SymbolicMarginal(1), SymbolicMarginal(2)
            marginals = {1: a, 2: b}
            rows = []
            for m in (1, 2, 3):
                for n in range(1, min(2 * m, length) + 1):
                    for word in _all_words((1, 2), n):
                        expr = WordExpr.of(word)
                        rows.append((f"m={m} {word}", expand(evaluate_word(expr, m, marginals)),
                                     expand(evaluate_word(expr, INFINITY, marginals))))
            return _mismatches(rows)

        return [
            ("symbolic mixed moments", symbolic_examples),
            ("rewriting matches the product representation", engines_agree),
            ("short words see free independence", low_orders_are_free),
        ]

    # fock
    def _fock_checks(self) -> List[Check]:
        max_k = self.settings.max_k

        def random_profiles():
            rng = self.rng(303)
            rows = []
            for _ in range(self.settings.profile_count):
                k = int(rng.integers(1, max_k + 1))
                profile = random_profile(rng, k)
                for m in (1, 2, 3):
                    rows.append((f"m={m} {profile}", gaussian_moment(m, profile), partition_sum_moment(m, profile)))
            return _mismatches(rows)

        def equal_supports():
            f = IntervalIndicator(0, 1)
            rows = []
            for m in (1, 2, 3):
                for n in range(1, 2 * max_k + 1):
                    profile = SupportProfile((f,) * n)
                    rows.append((f"m={m},n={n}", gaussian_moment(m, profile), clt_moment(m, n)))
            return _mismatches(rows)

        def closed_forms():
            rng = self.rng(304)
            rows = []
            for k in range(1, max_k + 1):
                for pi in enumerate_nc(2 * k, pairs_only=True):
                    supports = random_intervals(rng, 3)
                    for profile in pair_profiles(pi, supports):
                        for m in (1, 2, 3):
                            expected = inner_block_closed_form(pi, profile, m) if coloring_count(pi, profile, m) else 0
                            rows.append((f"{pi} {profile} m={m}", a_pi_expectation(m, pi, profile), expected))
            return _mismatches(rows)

        def inner_block_route():
            rng = self.rng(305)
            rows = []
            for _ in range(max(1, self.settings.profile_count // 4)):
                profile = random_profile(rng, int(rng.integers(1, max_k + 1)))
                for m in (1, 2, 3):
                    rows.append((f"m={m} {profile}", inner_block_moment(m, profile), partition_sum_moment(m, profile)))
            return _mismatches(rows)

        def nested_pairing_value():
            t, t_prime = sympy.Symbol("t", positive=True), sympy.Symbol("tp", positive=True)
            pi = OrderedPartition.from_blocks([(1, 8), (2, 3), (4, 7), (5, 6)])
            rows = []
            for t_value, tp_value in ((Fraction(1), Fraction(3)), (Fraction(1, 2), Fraction(7, 4)), (Fraction(2), Fraction(5, 2))):
                f, g = IntervalIndicator(0, t_value), IntervalIndicator(t_value, tp_value)
                profile = SupportProfile((f, g, g, f, g, g, f, f))
                closed = (t ** 2 * (t_prime - t) ** 2 / 2).subs({t: sympy.Rational(str(t_value)),
                                                              t_prime: sympy.Rational(str(tp_value))})
                value = a_pi_expectation(1, pi, profile)
                rows.append((f"t={t_value},t'={tp_value}", format_fraction(value), format_fraction(closed)))
            return _mismatches(rows)

        return [
            ("Fock moments match partition sums", random_profiles),
            ("equal supports give the central limit moments", equal_supports),
            ("pairing expectations match the inner block closed form", closed_forms),
            ("inner block sums match partition sums", inner_block_route),
            ("nested pairing expectation", nested_pairing_value),
        ]

    # clt
    def _clt_checks(self) -> List[Check]:
        def finite_n():
            marginal = AlgebraSpec.bernoulli(1)
            cap = self.settings.clt_max_order
            orders = [k for k in (2, 3) if 2 * k <= cap]
            if not orders:
                return False, f"clt_max_order={cap} leaves no order to check"
            problems = []
            details = []
            for m in (1, 2):
                for k in orders:
                    limit = clt_moment(m, 2 * k)
                    errors = []
                    for N in (4, 8, 16, 32):
                        value = clt_moment_finite_n(m, N, 2 * k, marginal, max_order=cap)
                        errors.append((N, abs(value.coefficient - limit)))
                    constant = max(error * N for N, error in errors)
                    if any(later >= earlier for (_, earlier), (_, later) in zip(errors, errors[1:])):
                        problems.append(f"m={m},n={2 * k}: errors not decreasing")
                    if any(error > constant / N for N, error in errors):
                        problems.append(f"m={m},n={2 * k}: error above C/N")
                    details.append(f"m={m},n={2 * k}: C={float(constant):.4g}")
            return not problems, "; ".join(problems or details)

        return [("finite-N moments converge at rate 1/N", finite_n)]

    def checks(self, suite: str) -> List[Check]:
        builders = {
            "partitions": self._partition_checks,
            "moments": self._moment_checks,
            "spectra": self._spectra_checks,
            "poisson": self._poisson_checks,
            "states": self._state_checks,
            "fock": self._fock_checks,
            "clt": self._clt_checks,
        }
        if suite not in builders:
            raise ValueError(f"unknown verification suite {suite!r}; choose from {', '.join(SUITES)} or all")
        return builders[suite]()

    @staticmethod
    def _run_one(suite: str, name: str, check: Callable[[], Outcome]) -> CheckResult:
        start = time.perf_counter()
        try:
            passed, detail = check()
        except Exception as e:
            logger.exception("check %s/%s raised", suite, name)
            passed, detail = False, f"error: {type(e).__name__}: {e}"
        seconds = time.perf_counter() - start
        logger.info("%s / %s: %s (%.2fs)", suite, name, "ok" if passed else "FAILED", seconds)
        return CheckResult(suite, name, bool(passed), detail, seconds)

    def run(self, suites: Sequence[str]) -> VerificationReport:
        selected = list(SUITES) if "all" in suites else list(suites)
        jobs = [(suite, name, check) for suite in selected for name, check in self.checks(suite)]
        report = VerificationReport(self.settings.seed)
        if self.parallel and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                report.results.extend(pool.map(lambda job: self._run_one(*job), jobs))
        else:
            report.results.extend(self._run_one(*job) for job in jobs)
        return report


def _all_words(indices: Sequence[int], length: int):
    if length == 0:
        yield ()
        return
    for head in indices:
        for tail in _all_words(indices, length - 1):
            yield (head,) + tail
