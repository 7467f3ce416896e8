# test_state_identities.py
"""Rewriting identities of m-monotone product states, checked on symbolic and numeric marginals."""

import itertools
import math
from fractions import Fraction

import pytest
import sympy

from core.hierarchy import INFINITY
from core.partitions import associate_tuple, enumerate_nc, in_onc_m
from core.representation import build_product_space, vacuum_moment
from core.states import (
    AlgebraSpec,
    Letter,
    SymbolicMarginal,
    WordExpr,
    alternating_words,
    evaluate_word,
    expand,
)

INDICES = (1, 2, 3)


@pytest.fixture
def symbolic_triple():
    return {i: SymbolicMarginal(i) for i in INDICES}


@pytest.fixture
def two_point_triple():
    """Two-atom marginals with non-zero means, so no letter is centered by accident."""
    return [
        AlgebraSpec.from_measure(1, [0, 1], [Fraction(1, 3), Fraction(2, 3)]),
        AlgebraSpec.from_measure(2, [-1, 2], [Fraction(1, 2), Fraction(1, 2)]),
        AlgebraSpec.from_measure(3, [1, 3], [Fraction(1, 4), Fraction(3, 4)]),
    ]


def rising_cuts(t, m):
    """1-based r with m <= r < n and i_m < ... < i_r > i_{r+1}."""
    for r in range(m, len(t)):
        chain = t[m - 1:r]
        if all(a < b for a, b in zip(chain, chain[1:])) and t[r - 1] > t[r]:
            yield r


def monotone_reference(word, marginals):
    """Repeatedly pull out the letter with the largest index; its neighbours are smaller."""
    merged = []
    for index, power in word:
        if merged and merged[-1][0] == index:
            merged[-1] = (index, merged[-1][1] + power)
        else:
            merged.append((index, power))
    if not merged:
        return 1
    peak = max(range(len(merged)), key=lambda k: merged[k][0])
    index, power = merged[peak]
    return marginals[index].moment(power) * monotone_reference(merged[:peak] + merged[peak + 1:], marginals)


def free_cumulants(marginal, order):
    cumulants = {}
    for n in range(1, order + 1):
        lower = 0
        for pi in enumerate_nc(n):
            if pi.size > 1:
                lower += math.prod(cumulants[len(block)] for block in pi.blocks)
        cumulants[n] = marginal.moment(n) - lower
    return cumulants


def free_reference(t, cumulants):
    """Sum over non-crossing partitions whose blocks are one colour of the product of free cumulants."""
    total = 0
    for pi in enumerate_nc(len(t)):
        term = 1
        for block in pi.blocks:
            colours = {t[element - 1] for element in block}
            if len(colours) > 1:
                term = 0
                break
            term *= cumulants[colours.pop()][len(block)]
        total += term
    return total


def monomial_degrees(value):
    generators = sorted(value.free_symbols, key=str)
    terms = sympy.Poly(value, *generators).terms()
    return [sum(powers) for powers, _ in terms], [coefficient for _, coefficient in terms]


def short_words(max_full, max_alternating):
    words = [t for n in range(1, max_full + 1) for t in itertools.product(INDICES, repeat=n)]
    words += [t for n in range(max_full + 1, max_alternating + 1) for t in alternating_words(INDICES, n)]
    return words


def test_level_one_is_the_monotone_product(symbolic_triple):
    for t in short_words(4, 6):
        expected = monotone_reference([(i, 1) for i in t], symbolic_triple)
        assert expand(evaluate_word(WordExpr.of(t), 1, symbolic_triple)) == expand(expected), t


def test_level_one_with_powers(symbolic_triple):
    word = WordExpr.parse("a1^2 a3 a2^3 a3^2 a1")
    expected = monotone_reference([(1, 2), (3, 1), (2, 3), (3, 2), (1, 1)], symbolic_triple)
    assert expand(evaluate_word(word, 1, symbolic_triple)) == expand(expected)


def test_infinite_level_is_the_free_product(symbolic_triple):
    cumulants = {i: free_cumulants(marginal, 6) for i, marginal in symbolic_triple.items()}
    for t in short_words(4, 6):
        value = evaluate_word(WordExpr.of(t), INFINITY, symbolic_triple)
        assert expand(value) == expand(free_reference(t, cumulants)), t


@pytest.mark.parametrize("m", [1, 2, 3])
def test_short_words_agree_with_the_free_product(m, symbolic_triple):
    for n in range(1, 2 * m + 1):
        for t in alternating_words(INDICES, n):
            word = WordExpr.of(t)
            assert expand(evaluate_word(word, m, symbolic_triple)) == expand(
                evaluate_word(word, INFINITY, symbolic_triple)
            ), t


@pytest.mark.parametrize("m, t", [(1, (2, 1, 2)), (2, (1, 3, 2, 3, 1))])
def test_first_word_past_the_free_range_differs(m, t, symbolic_triple):
    word = WordExpr.of(t)
    assert expand(evaluate_word(word, m, symbolic_triple)) != expand(evaluate_word(word, INFINITY, symbolic_triple))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_centered_rising_prefix_vanishes(m, symbolic_triple, two_point_triple):
    """Test that centering i_1 .. i_r kills the word when i_m < ... < i_r > i_{r+1}"""
    space = build_product_space(m, two_point_triple)
    numeric = {spec.index: spec for spec in two_point_triple}
    checked = 0
    for n in range(2, 7):
        for t in alternating_words(INDICES, n):
            for r in rising_cuts(t, m):
                letters = [Letter.centered_power(i) if s < r else Letter.power(i) for s, i in enumerate(t)]
                word = WordExpr(tuple(letters))
                assert expand(evaluate_word(word, m, symbolic_triple)) == 0, (t, r)
                assert evaluate_word(word, m, numeric) == 0, (t, r)
                assert vacuum_moment(space, word) == 0, (t, r)
                checked += 1
    assert checked > 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_units_before_the_cut_act_as_identity(m, symbolic_triple, two_point_triple):
    space = build_product_space(m, two_point_triple)
    checked = 0
    for n in range(2, 7):
        for t in alternating_words(INDICES, n):
            for r in rising_cuts(t, m):
                letters = [Letter.power(i) for i in t]
                for j in range(r):
                    with_unit = WordExpr(tuple(letters[:j] + [Letter.unit(t[j])] + letters[j + 1:]))
                    without = WordExpr(tuple(letters[:j] + letters[j + 1:]))
                    assert vacuum_moment(space, with_unit) == vacuum_moment(space, without), (t, j)
                    if n <= 5:
                        assert expand(evaluate_word(with_unit, m, symbolic_triple)) == expand(
                            evaluate_word(without, m, symbolic_triple)
                        ), (t, j)
                    checked += 1
    assert checked > 0


@pytest.mark.parametrize("m", [1, 2, 3, INFINITY])
def test_centered_singleton_kills_alternating_word(m, symbolic_triple, two_point_triple):
    space = build_product_space(m, two_point_triple, max_length=3 if m is INFINITY else None)
    for n in range(1, 7):
        for t in alternating_words(INDICES, n):
            for j, index in enumerate(t):
                if t.count(index) != 1:
                    continue
                letters = [Letter.power(i) for i in t]
                letters[j] = Letter.centered_power(index)
                word = WordExpr(tuple(letters))
                assert expand(evaluate_word(word, m, symbolic_triple)) == 0, (t, j)
                assert vacuum_moment(space, word) == 0, (t, j)


@pytest.mark.parametrize("m", [1, 2, 3, INFINITY])
def test_alternating_moments_factor_by_block_count(m, symbolic_triple):
    """Test that ONC(m) tuples give one monomial of p moments and all others need more"""
    for n in range(1, 7):
        for t in alternating_words(INDICES, n):
            P = associate_tuple(t)
            value = expand(evaluate_word(WordExpr.of(t), m, symbolic_triple))
            degrees, coefficients = monomial_degrees(value)
            if in_onc_m(P, m):
                assert degrees == [P.size] and coefficients == [1], (t, value)
            else:
                assert all(degree >= P.size + 1 for degree in degrees), (t, value)
