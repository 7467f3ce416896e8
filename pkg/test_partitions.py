# test_partitions.py
from fractions import Fraction

import pytest

from core.errors import CrossingPartitionError, InvalidPartitionError, ProfileError
from core.hierarchy import INFINITY
from core.intervals import IntervalIndicator, SupportProfile
from core.partitions import (
    OrderedPartition,
    associate_tuple,
    catalan,
    classify,
    coloring_count,
    compatible,
    count_onc_blocks,
    count_onc_pairs,
    depths,
    double_factorial,
    enumerate_nc,
    enumerate_onc,
    enumerate_ordered_partitions,
    in_onc_m,
    inn_count,
    inner_block_weight,
    is_noncrossing,
    onc_census,
)


def test_partition_must_cover_ground_set():
    with pytest.raises(InvalidPartitionError):
        OrderedPartition(3, ((1, 2),))
    with pytest.raises(InvalidPartitionError):
        OrderedPartition(2, ((2, 1),))


def test_from_blocks_keeps_colour_order():
    P = OrderedPartition.from_blocks([(3, 4), (2, 1)])
    assert P.n == 4
    assert P.blocks == ((3, 4), (1, 2))
    assert P.canonical_indices() == (2, 2, 1, 1)
    assert OrderedPartition.from_dict(P.to_dict()) == P


def test_associate_tuple_orders_blocks_by_value():
    P = associate_tuple((2, 1, 2))
    assert P.blocks == ((2,), (1, 3))


def test_crossing_partition_has_no_depth():
    P = OrderedPartition.from_blocks([(1, 3), (2, 4)])
    assert not is_noncrossing(P)
    with pytest.raises(CrossingPartitionError):
        depths(P)


def test_depths_of_nested_pairs(nested_pairing):
    assert depths(nested_pairing) == (1, 2, 2, 3)


def test_monotone_constraint_starts_at_level_m():
    outer_first = OrderedPartition.from_blocks([(1, 4), (2, 3)])
    inner_first = OrderedPartition.from_blocks([(2, 3), (1, 4)])
    assert in_onc_m(outer_first, 1)
    assert not in_onc_m(inner_first, 1)
    assert in_onc_m(inner_first, 2)
    assert in_onc_m(inner_first, INFINITY)


@pytest.mark.parametrize("n", range(1, 7))
def test_noncrossing_shapes_are_catalan(n):
    assert sum(1 for _ in enumerate_nc(n)) == catalan(n)
    if n % 2 == 0:
        assert sum(1 for _ in enumerate_nc(n, pairs_only=True)) == catalan(n // 2)


@pytest.mark.parametrize("k", range(0, 8))
def test_monotone_pair_count_is_double_factorial(k):
    assert count_onc_pairs(k, 1) == double_factorial(k)


def test_pair_counts_at_level_two():
    assert [count_onc_pairs(k, 2) for k in range(1, 5)] == [1, 4, 27, 252]


def test_free_level_pair_count():
    for k in range(1, 8):
        assert count_onc_pairs(k, INFINITY) == count_onc_pairs(k, k + 1)


@pytest.mark.parametrize("m", [1, 2, 3, INFINITY])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_pair_enumeration_matches_recurrence(k, m):
    members = list(enumerate_onc(2 * k, m, pairs_only=True))
    assert len(members) == len(set(members)) == count_onc_pairs(k, m)
    assert all(P.is_pair() and in_onc_m(P, m) for P in members)


def test_small_census():
    assert onc_census(3, 1) == {1: 1, 2: 5, 3: 6}
    assert onc_census(3, INFINITY) == {1: 1, 2: 6, 3: 6}


@pytest.mark.parametrize("m", [1, 2, 3, INFINITY])
def test_block_recurrence_matches_census(m):
    for n in range(1, 6):
        census = onc_census(n, m)
        assert {q: count_onc_blocks(n, q, m) for q in range(1, n + 1) if count_onc_blocks(n, q, m)} == census


def test_profile_entries_must_not_overlap():
    with pytest.raises(ProfileError):
        SupportProfile.of([(0, 2), (1, 3)])
    with pytest.raises(ProfileError):
        IntervalIndicator(1, 1)


def test_profile_parsing():
    profile = SupportProfile.parse("0:1, 2:5/2 ,0:1")
    assert len(profile) == 3
    assert profile.at(2) == IntervalIndicator(2, Fraction(5, 2))
    assert not profile.is_balanced()
    with pytest.raises(ProfileError):
        SupportProfile.parse("0:1,1/2:3")


def test_nested_pairing_colourings(nested_pairing, mixed_profile):
    """Test the colouring count with and without the support-order condition"""
    assert coloring_count(nested_pairing, mixed_profile) == 2
    assert coloring_count(nested_pairing, mixed_profile, respect_support_order=False) == 3


def test_nested_pairing_inner_blocks(nested_pairing, mixed_profile):
    assert inn_count(nested_pairing, mixed_profile, 0) == 1
    assert [inn_count(nested_pairing, mixed_profile, i) for i in range(1, 4)] == [0, 0, 0]
    assert inner_block_weight(nested_pairing, mixed_profile) == Fraction(1, 2)
    # the outer block sits at depth 1, so level 2 ignores its inner blocks
    assert inner_block_weight(nested_pairing, mixed_profile, m=2) == 1


def test_compatibility_respects_support_order(f_and_g):
    f, g = f_and_g
    profile = SupportProfile((f, g, g, f))
    outer_first = OrderedPartition.from_blocks([(1, 4), (2, 3)])
    inner_first = OrderedPartition.from_blocks([(2, 3), (1, 4)])
    assert compatible(outer_first, profile)
    assert not compatible(inner_first, profile)
    assert compatible(inner_first, profile, respect_support_order=False)
    assert not compatible(OrderedPartition.from_blocks([(1, 2), (3, 4)]), profile)


@pytest.mark.parametrize("n", range(1, 6))
def test_onc_grows_with_the_level(n):
    free = set(enumerate_onc(n, INFINITY))
    for m in (1, 2, 3):
        lower, upper = set(enumerate_onc(n, m)), set(enumerate_onc(n, m + 1))
        assert lower <= upper <= free
        assert all(in_onc_m(P, m + 1) and in_onc_m(P, INFINITY) for P in lower)


@pytest.mark.parametrize("n", range(1, 6))
def test_associated_tuple_round_trip(n):
    for P in enumerate_ordered_partitions(n):
        assert associate_tuple(P.canonical_indices()) == P


def test_level_two_example_partitions():
    P = OrderedPartition.from_blocks([(4, 7), (1, 8), (2, 3), (5, 6)])
    R = OrderedPartition.from_blocks([(1, 8), (2, 3), (4, 7), (5, 6)])
    assert (in_onc_m(P, 1), in_onc_m(P, 2), in_onc_m(P, INFINITY)) == (False, True, True)
    assert (in_onc_m(R, 1), in_onc_m(R, 2), in_onc_m(R, INFINITY)) == (True, True, True)


def test_associate_tuple_with_repeated_values():
    P = associate_tuple((2, 4, 1, 2, 4))
    assert P.blocks == ((3,), (1, 4), (2, 5))
    assert P.canonical_indices() == (2, 3, 1, 2, 3)


def test_classify(nested_pairing):
    nested = classify(nested_pairing)
    assert nested.noncrossing and nested.pair
    assert nested.depth_vector == (1, 2, 2, 3)
    assert nested.outer_relation == frozenset({(0, 1), (0, 2), (0, 3), (2, 3)})

    crossing = classify(OrderedPartition.from_blocks([(1, 3), (2, 4)]))
    assert not crossing.noncrossing and crossing.pair
    assert crossing.depth_vector is None
    assert crossing.outer_relation == frozenset()

    with_singleton = classify(OrderedPartition.from_blocks([(1, 5), (3,), (2, 4)]))
    assert with_singleton.noncrossing and not with_singleton.pair
    assert with_singleton.depth_vector == (1, 3, 2)
