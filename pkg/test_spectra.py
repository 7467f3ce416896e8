# test_spectra.py
import math
from fractions import Fraction

import numpy as np
import pytest

from core.errors import BranchCutError, TruncationError
from core.hierarchy import INFINITY
from core.partitions import catalan
from core.spectra import (
    atoms,
    cauchy,
    cauchy_moments,
    clt_moment,
    continued_fraction,
    density,
    density_grid,
    jacobi_for_m,
    measure_summary,
    moments_from_jacobi,
)

LEVELS = [1, 2, 3, 4, INFINITY]

MOMENT_ROWS = {
    1: [1, Fraction(3, 2), Fraction(5, 2), Fraction(35, 8), Fraction(63, 8)],
    2: [1, 2, Fraction(9, 2), Fraction(21, 2), Fraction(199, 8)],
    3: [1, 2, 5, Fraction(27, 2), Fraction(75, 2)],
    4: [1, 2, 5, 14, Fraction(83, 2)],
    INFINITY: [1, 2, 5, 14, 42],
}


@pytest.mark.parametrize("m", LEVELS)
def test_low_order_moments(m):
    assert [clt_moment(m, n) for n in (2, 4, 6, 8, 10)] == MOMENT_ROWS[m]
    assert all(clt_moment(m, n) == 0 for n in (1, 3, 5, 7, 9))
    assert clt_moment(m, 0) == 1


@pytest.mark.parametrize("m", LEVELS)
def test_jacobi_route(m):
    for n in range(0, 11):
        assert moments_from_jacobi(jacobi_for_m(m), n) == clt_moment(m, n)


def test_truncated_jacobi_needs_depth():
    with pytest.raises(TruncationError):
        moments_from_jacobi(jacobi_for_m(1), 6, depth=3)


def test_jacobi_sequence_shape():
    assert jacobi_for_m(2).terms(4) == [1, 1, Fraction(1, 2), Fraction(1, 2)]
    assert jacobi_for_m(INFINITY).terms(3) == [1, 1, 1]


@pytest.mark.parametrize("m", LEVELS)
def test_contour_moments(m):
    numeric = cauchy_moments(m, 8)
    for n, value in enumerate(numeric):
        assert value == pytest.approx(float(clt_moment(m, n)), abs=1e-9)


@pytest.mark.parametrize("m", LEVELS)
def test_continued_fraction_matches_closed_form(m):
    for z in (0.4 + 0.7j, -1.3 + 0.2j, 3.0 + 0.0j):
        assert continued_fraction(jacobi_for_m(m), z) == pytest.approx(cauchy(m, z), abs=1e-12)


@pytest.mark.parametrize("m", LEVELS)
def test_cauchy_transform_maps_upper_half_plane_down(m):
    for z in (0.3 + 0.5j, -2.0 + 0.01j, 5.0 + 3.0j):
        assert cauchy(m, z).imag < 0


def test_branch_cut_needs_a_side():
    with pytest.raises(BranchCutError):
        cauchy(1, 0.5)
    assert cauchy(1, 0.5, side="upper") == pytest.approx(cauchy(1, 0.5, side="lower").conjugate())


def test_arcsine_and_wigner_densities():
    assert density(1, 0.0) == pytest.approx(1 / (math.pi * math.sqrt(2)))
    assert density(1, 1.0) == pytest.approx(1 / (math.pi * math.sqrt(2 - 1.0)))
    assert density(INFINITY, 0.0) == pytest.approx(1 / math.pi)
    assert density(INFINITY, 1.0) == pytest.approx(math.sqrt(3) / (2 * math.pi))
    assert density(2, 0.0) == pytest.approx(math.sqrt(2) / math.pi)
    assert density(2, 1.5) == 0.0


def test_extreme_levels_have_no_atoms():
    assert atoms(1) == []
    assert atoms(INFINITY) == []


def test_level_two_atoms():
    found = atoms(2)
    assert len(found) == 2
    location = math.sqrt(math.sqrt(2) + 1)
    assert [a.location for a in found] == pytest.approx([-location, location], abs=1e-12)
    assert [a.mass for a in found] == pytest.approx([(2 - math.sqrt(2)) / 4] * 2, abs=1e-12)


def test_level_three_atoms():
    found = atoms(3)
    assert len(found) == 2
    assert found[1].location == pytest.approx(1.685, abs=1e-3)
    assert found[1].mass == pytest.approx(0.099, abs=1e-3)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_measure_is_a_probability_measure(m):
    summary = measure_summary(m)
    assert summary.total_mass() == pytest.approx(1.0, abs=1e-8)
    assert summary.moment(2) == pytest.approx(1.0, abs=1e-8)
    assert summary.moment(4) == pytest.approx(float(clt_moment(m, 4)), abs=1e-7)


def test_density_grid_is_symmetric():
    grid = density_grid(2, 9, 0.25)
    assert len(grid) == 9
    assert grid[0][0] == pytest.approx(-math.sqrt(2) - 0.25)
    assert grid[4][0] == 0.0
    values = [f for _, f in grid]
    assert values == pytest.approx(values[::-1], abs=1e-12)
    assert values[0] == 0.0


@pytest.mark.parametrize("m", LEVELS)
def test_cauchy_transform_at_infinity(m):
    for angle in (0.0, 0.3, math.pi / 2, 2.5, math.pi):
        z = 1e3 * complex(math.cos(angle), math.sin(angle))
        g = cauchy(m, z)
        assert abs(z * g - 1) < 1e-5
        series = sum(complex(float(clt_moment(m, n))) / z ** (n + 1) for n in range(0, 11))
        assert g == pytest.approx(series, rel=1e-8)


@pytest.mark.parametrize("m", LEVELS)
def test_cauchy_transform_is_negative_on_upper_grid(m):
    for x in np.linspace(-4.0, 4.0, 20):
        for y in np.geomspace(1e-3, 4.0, 20):
            assert cauchy(m, complex(x, y)).imag < 0, (x, y)


def test_moments_grow_with_the_level():
    for n in range(2, 13, 2):
        free = clt_moment(INFINITY, n)
        values = [clt_moment(m, n) for m in range(1, 8)]
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert values[-1] <= free
        for m, value in enumerate(values, start=1):
            if 2 * m >= n:
                assert value == free == catalan(n // 2)
            else:
                assert value < free
