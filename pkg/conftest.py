# conftest.py
"""Shared fixtures for the test suite."""

import sys
from pathlib import Path

import pytest

# Make the core, modules and config packages importable from the project root
sys.path.insert(0, str(Path(__file__).parent.resolve()))

from core.intervals import IntervalIndicator, SupportProfile
from core.partitions import OrderedPartition
from core.states import SymbolicMarginal


@pytest.fixture
def unit_interval():
    return IntervalIndicator(0, 1)


@pytest.fixture
def f_and_g():
    """f = chi_(0,1] and g = chi_(1,3], so f < g."""
    return IntervalIndicator(0, 1), IntervalIndicator(1, 3)


@pytest.fixture
def nested_pairing():
    """The pair partition {1,8},{2,3},{4,7},{5,6}."""
    return OrderedPartition.from_blocks([(1, 8), (2, 3), (4, 7), (5, 6)])


@pytest.fixture
def mixed_profile(f_and_g):
    f, g = f_and_g
    return SupportProfile((f, g, g, f, g, g, f, f))


@pytest.fixture
def symbolic_pair():
    """Symbolic marginals of a (algebra 1) and b (algebra 2), ordered 1 < 2."""
    return {1: SymbolicMarginal(1), 2: SymbolicMarginal(2)}


@pytest.fixture(autouse=True)
def no_basis_override(monkeypatch):
    monkeypatch.delenv("MONOHIER_MAX_BASIS", raising=False)


