"""Exact-arithmetic toolkit for the perfect Euler brick problem.

The reduction chain runs from bricks through Euclid pairs to the quartic
pair (f1, f2), on to the octic curve w^2 = t^8 + A t^4 + 1 and its elliptic
quotient y^2 = (x + A)(x - 2)(x + 2), where the square-value function
f = 2y/((x-2)(x+2)) and 2-descent classes carry the obstructions.  The
search module runs the desk-scale sweeps; everything is exact.
"""

__version__ = "0.1.0"

from .curves import EllipticFamily, torsion_subgroup
from .param import (
    EuclidPair,
    check_brick,
    enumerate_euclid_pairs,
    family_params,
    quartic_pair,
)
from .search import SweepConfig, blocker_analysis, modular_sieve, sweep
from .sweepcore import BACKEND

__all__ = [
    "BACKEND",
    "EllipticFamily",
    "EuclidPair",
    "SweepConfig",
    "blocker_analysis",
    "check_brick",
    "enumerate_euclid_pairs",
    "family_params",
    "modular_sieve",
    "quartic_pair",
    "sweep",
    "torsion_subgroup",
    "__version__",
]
