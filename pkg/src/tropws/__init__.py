"""Exact divisor theory on metric graphs.

Reduced divisors, Baker-Norine ranks, gap sequences along edges,
Weierstrass loci and their weights, all in rational arithmetic.
"""

from .catalog import Family, build_family, classify
from .divisor import Divisor, GapSequence, canonical_divisor, weight
from .graph import MetricGraph, Point, build_graph
from .plfunction import PLFunction, transport
from .rank import gap_sequence, hyperelliptic_rank, is_weierstrass, rank, rank_profile
from .reduction import ReductionResult, is_reduced, rank_nonnegative, reduce
from .region import Region
from .weierstrass import maximal_loci, mu, sweep, sweep_edge, verify_totals, wl, wl_ge

__version__ = "0.1.0"

__all__ = [
    "Divisor",
    "Family",
    "GapSequence",
    "MetricGraph",
    "PLFunction",
    "Point",
    "ReductionResult",
    "Region",
    "build_family",
    "build_graph",
    "canonical_divisor",
    "classify",
    "gap_sequence",
    "hyperelliptic_rank",
    "is_reduced",
    "is_weierstrass",
    "maximal_loci",
    "mu",
    "rank",
    "rank_nonnegative",
    "rank_profile",
    "reduce",
    "sweep",
    "sweep_edge",
    "transport",
    "verify_totals",
    "weight",
    "wl",
    "wl_ge",
]
