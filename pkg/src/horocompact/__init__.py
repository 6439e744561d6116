"""Exact computation with horofunction compactifications of polyhedral norms.

The package takes an asymmetric polyhedral norm, given by the facet
functionals of its unit ball, and computes the combinatorial and metric data
of the associated horofunction compactification: the dual-face strata, exact
horofunction values and canonical representatives, limits of rays and sampled
sequences, neighborhood-basis membership, the closure poset, and the moment
map onto the dual polytope.

All combinatorial decisions are made in exact rational arithmetic; floating
point is confined to the moment-map module and declared heuristics.
"""

from .geometry import (
    Fraction,
    LPResult,
    ParseError,
    Subspace,
    format_rational,
    kernel,
    lp_maximize,
    orthogonal_complement_within,
    parse_rational,
    solve_linear_system,
    vector,
)
from .polytope import (
    MetricConstants,
    Polytope,
    ValidationReport,
    asym_distance,
    load_example,
    metric_constants,
    norm,
    partial_norm,
    polytope_from_json,
    polytope_to_json,
    validate,
    vertices,
)
from .strata import (
    DualFace,
    StrataPoset,
    Stratum,
    active_face,
    build_stratum,
    chamber_cone,
    closure_poset,
    enumerate_dual_faces,
    in_negative_cone,
    in_positive_cone,
)
from .horofunction import (
    Horofunction,
    Neighborhood,
    canonicalize,
    classify_tail,
    equal,
    evaluate,
    horofunction_from_json,
    horofunction_to_json,
    interior_point,
    neighborhood_contains,
    ray_agreement_threshold,
    ray_limit,
    translate,
)
from .moment import (
    MomentPoint,
    boundary_continuity_check,
    hessian,
    invert_interior,
    log_partition,
    moment,
)

__version__ = "0.1.0"

__all__ = [
    "Fraction",
    "LPResult",
    "ParseError",
    "Subspace",
    "format_rational",
    "kernel",
    "lp_maximize",
    "orthogonal_complement_within",
    "parse_rational",
    "solve_linear_system",
    "vector",
    "MetricConstants",
    "Polytope",
    "ValidationReport",
    "asym_distance",
    "load_example",
    "metric_constants",
    "norm",
    "partial_norm",
    "polytope_from_json",
    "polytope_to_json",
    "validate",
    "vertices",
    "DualFace",
    "StrataPoset",
    "Stratum",
    "active_face",
    "build_stratum",
    "chamber_cone",
    "closure_poset",
    "enumerate_dual_faces",
    "in_negative_cone",
    "in_positive_cone",
    "Horofunction",
    "Neighborhood",
    "canonicalize",
    "classify_tail",
    "equal",
    "evaluate",
    "horofunction_from_json",
    "horofunction_to_json",
    "interior_point",
    "neighborhood_contains",
    "ray_agreement_threshold",
    "ray_limit",
    "translate",
    "MomentPoint",
    "boundary_continuity_check",
    "hessian",
    "invert_interior",
    "log_partition",
    "moment",
]
