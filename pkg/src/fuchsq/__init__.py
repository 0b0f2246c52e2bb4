"""Exact Fuchsian groups in PSL2(Q) with prescribed rational hyperbolic fixed
points, and Bruhat-Tits tree certificates that separate their
commensurability classes."""

from .btree import LatticeClass, StabilizationVerdict, group_stabilizes, pair_condition
from .certify import build_family, certify_family, certify_pair, denominator_bound
from .construct import ConstructionInput, GroupBlueprint, construct_group, validate_blueprint
from .fuchsian import psl_kernel
from .minkowski import INF, LorentzVector

__version__ = "0.1.0"

__all__ = [
    "INF",
    "ConstructionInput",
    "GroupBlueprint",
    "LatticeClass",
    "LorentzVector",
    "StabilizationVerdict",
    "build_family",
    "certify_family",
    "certify_pair",
    "construct_group",
    "denominator_bound",
    "group_stabilizes",
    "pair_condition",
    "psl_kernel",
    "validate_blueprint",
]
