"""Admissibility of small rotations of a polytope inside another polytope."""

from .admissibility import (
    AdmissibilityReport,
    CenterRegion,
    PointVerdict,
    RegionStatus,
    Verdict,
    admissible_at,
    analyze,
    build_constraints,
    region_feasibility,
    translation_feasibility,
)
from .geometry import Polytope, Simplex, contains, incidence, polytope_from_h_and_v, simplex_from_vertices
from .oracle import centre_search, simulate
from .skewlin import CenteredRotation, SkewMatrix, apply_centered, exp_map, first_order_displacement, make_skew

__all__ = [
    "AdmissibilityReport",
    "CenterRegion",
    "CenteredRotation",
    "PointVerdict",
    "Polytope",
    "RegionStatus",
    "Simplex",
    "SkewMatrix",
    "Verdict",
    "admissible_at",
    "analyze",
    "apply_centered",
    "build_constraints",
    "centre_search",
    "contains",
    "exp_map",
    "first_order_displacement",
    "incidence",
    "make_skew",
    "polytope_from_h_and_v",
    "region_feasibility",
    "simplex_from_vertices",
    "simulate",
    "translation_feasibility",
]
