# test_representation.py
import itertools
from fractions import Fraction

import pytest

from core.errors import BasisTooLargeError, OrderCapError, TruncationError, UnknownAlgebraError
from core.hierarchy import INFINITY
from core.representation import build_product_space, represent, vacuum_moment
from core.states import AlgebraSpec, WordExpr, evaluate_word


@pytest.fixture
def bernoulli_pair():
    return [AlgebraSpec.bernoulli(1), AlgebraSpec.bernoulli(2)]


@pytest.fixture
def three_point_pair():
    return [
        AlgebraSpec.from_measure(1, [-1, 0, 2], [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]),
        AlgebraSpec.from_measure(2, [Fraction(-1, 2), 1], [Fraction(1, 3), Fraction(2, 3)]),
    ]


def test_basis_dimensions(bernoulli_pair):
    monotone = build_product_space(1, bernoulli_pair)
    assert monotone.basis == ((), ((1, 1),), ((2, 1),), ((2, 1), (1, 1)))
    assert not monotone.truncated
    assert build_product_space(2, bernoulli_pair).dimension == 6


def test_free_space_needs_a_length(bernoulli_pair):
    with pytest.raises(TruncationError):
        build_product_space(INFINITY, bernoulli_pair)
    space = build_product_space(INFINITY, bernoulli_pair, max_length=2)
    assert space.truncated
    with pytest.raises(TruncationError):
        vacuum_moment(space, WordExpr.parse("a1 a2 a1 a2 a1 a2"))


def test_basis_cap(bernoulli_pair):
    with pytest.raises(BasisTooLargeError):
        build_product_space(2, bernoulli_pair, max_basis=3)


def test_basis_cap_from_environment(bernoulli_pair, monkeypatch):
    monkeypatch.setenv("MONOHIER_MAX_BASIS", "5")
    with pytest.raises(BasisTooLargeError):
        build_product_space(2, bernoulli_pair)


def test_generator_is_symmetric_in_the_vacuum_row(bernoulli_pair):
    space = build_product_space(1, bernoulli_pair)
    matrix = represent(space, 1, (0, 1))
    assert matrix.is_dense
    assert matrix.entry(space.position[((1, 1),)], 0) == 1
    assert matrix.entry(0, space.position[((1, 1),)]) == 1


def test_unknown_algebra(bernoulli_pair):
    space = build_product_space(1, bernoulli_pair)
    with pytest.raises(UnknownAlgebraError):
        represent(space, 3, (0, 1))


def test_monotone_words(bernoulli_pair):
    space = build_product_space(1, bernoulli_pair)
    assert vacuum_moment(space, WordExpr.parse("a1 a2 a2 a1")) == 1
    assert vacuum_moment(space, WordExpr.parse("a2 a1 a1 a2")) == 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_product_representation_matches_rewriting(m, three_point_pair):
    space = build_product_space(m, three_point_pair)
    marginals = {spec.index: spec for spec in three_point_pair}
    for n in range(1, 7):
        for indices in itertools.product((1, 2), repeat=n):
            word = WordExpr.of(indices)
            assert vacuum_moment(space, word) == evaluate_word(word, m, marginals)


def test_free_truncation_matches_rewriting(three_point_pair):
    space = build_product_space(INFINITY, three_point_pair, max_length=3)
    marginals = {spec.index: spec for spec in three_point_pair}
    for indices in itertools.product((1, 2), repeat=6):
        word = WordExpr.of(indices)
        assert vacuum_moment(space, word) == evaluate_word(word, INFINITY, marginals)


def test_sparse_storage_gives_the_same_moments(bernoulli_pair):
    space = build_product_space(2, bernoulli_pair, dense_limit=0)
    assert not represent(space, 1, (0, 1)).is_dense
    assert vacuum_moment(space, WordExpr.parse("a1 a2 a2 a1")) == 1
    assert vacuum_moment(space, WordExpr.parse("a2 a1 a1 a2")) == 1


def test_truncated_marginal_model_caps_the_word_degree():
    # Gaussian moments up to order 5 give a three-level model that is not exact
    gaussian = AlgebraSpec(1, (1, 0, 1, 0, 3, 0))
    assert not gaussian.model.exact and gaussian.dimension == 3
    space = build_product_space(1, [gaussian, AlgebraSpec.bernoulli(2)])
    assert vacuum_moment(space, WordExpr.parse("a1^2 a2^2 a1^2")) == 3
    assert vacuum_moment(space, WordExpr.parse("a1^3 a2 a1^2")) == 0
    with pytest.raises(OrderCapError):
        vacuum_moment(space, WordExpr.parse("a1^4 a2^2 a1^2"))
    with pytest.raises(OrderCapError):
        represent(space, 1, (0, 0, 0, 0, 0, 0, 1))
    # exact models take any degree
    exact = build_product_space(1, [AlgebraSpec.bernoulli(1), AlgebraSpec.bernoulli(2)])
    assert vacuum_moment(exact, WordExpr.parse("a1^4 a2^2 a1^4")) == 1
