"""Exact Lie theory and numerical flag curvature for invariant Finsler
metrics on compact homogeneous spaces."""

from .rootsys import QNum, RootSystem, RootVector, build_root_system
from .liealg import AlgebraSpec, realize
from .coset import CosetSpace, SubalgebraSpec, build_coset, preset, rank_check
from .norms import Quadratic, Quartic, Randers, random_invariant_norm
from .curvature import (
    flag_curvature,
    flag_curvature_commutative,
    sample_flags,
    verify_exclusion_witness,
)
from .obstruct import classify_space, root_level_from_coset, verify_theorem

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "CosetSpace",
    "QNum",
    "Quadratic",
    "Quartic",
    "Randers",
    "RootSystem",
    "RootVector",
    "SubalgebraSpec",
    "build_coset",
    "build_root_system",
    "classify_space",
    "flag_curvature",
    "flag_curvature_commutative",
    "preset",
    "random_invariant_norm",
    "rank_check",
    "realize",
    "root_level_from_coset",
    "sample_flags",
    "verify_exclusion_witness",
    "verify_theorem",
]
