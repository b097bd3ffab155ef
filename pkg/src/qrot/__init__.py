"""Exact free probability and Weingarten calculus for the free orthogonal and unitary quantum groups."""

from .cumulants import MomentOracle, as_word, cumulants_from_moments, free_cumulant, nested_moment
from .haar import Monomial, haar_moment, psi
from .invariance import averaged_invariance_check, bound_scan, counterexample_report, interval_reduction_check
from .models import CircularFamilyOracle, GeneratorRowOracle, SemicircularFamilyOracle, parse_model
from .nclattice import interval, mobius
from .partitions import (
    Partition,
    enumerate_all_partitions,
    enumerate_nc,
    enumerate_nc2,
    enumerate_nc2_decorated,
    is_noncrossing,
    join,
    ker,
    leq,
    singletons,
    top,
)
from .weingarten import RationalMatrix, asymptotic_deviation, gram_matrix, invert, weingarten_table

__version__ = "0.1.0"
