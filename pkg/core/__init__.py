# core/__init__.py

"""
This file makes the 'core' directory a Python package.

It also exposes the main types and operations of each engine at the top
level of the package, for example: from core import clt_moment, gaussian_moment
"""

from .errors import MonoHierError
from .hierarchy import INFINITY, parse_depth
from .intervals import IntervalIndicator, SupportProfile
from .partitions import (
    OrderedPartition,
    associate_tuple,
    classify,
    coloring_count,
    compatible,
    count_onc_blocks,
    count_onc_pairs,
    depth,
    enumerate_onc,
    inn_count,
    in_onc_m,
)
from .states import AlgebraRegistry, AlgebraSpec, SymbolicMarginal, WordExpr, clt_moment_finite_n, evaluate_word
from .representation import build_product_space, represent, vacuum_moment
from .spectra import atoms, cauchy, clt_moment, density, jacobi_for_m, moments_from_jacobi
from .poisson import poisson_moment, poisson_series
from .fock import a_pi_expectation, annihilate, create, gaussian_moment, partition_sum_moment

# Defines the public API of the 'core' package
__all__ = [
    "MonoHierError",
    "INFINITY",
    "parse_depth",
    "IntervalIndicator",
    "SupportProfile",
    "OrderedPartition",
    "associate_tuple",
    "classify",
    "coloring_count",
    "compatible",
    "count_onc_blocks",
    "count_onc_pairs",
    "depth",
    "enumerate_onc",
    "inn_count",
    "in_onc_m",
    "AlgebraRegistry",
    "AlgebraSpec",
    "SymbolicMarginal",
    "WordExpr",
    "clt_moment_finite_n",
    "evaluate_word",
    "build_product_space",
    "represent",
    "vacuum_moment",
    "atoms",
    "cauchy",
    "clt_moment",
    "density",
    "jacobi_for_m",
    "moments_from_jacobi",
    "poisson_moment",
    "poisson_series",
    "a_pi_expectation",
    "annihilate",
    "create",
    "gaussian_moment",
    "partition_sum_moment",
]
