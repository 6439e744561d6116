"""The polytopal unit ball and the asymmetric norm it induces.

A polytope here is always the unit ball B = {u : xi_k(u) <= 1 for all k} of
an asymmetric norm, described by its facet functionals xi_0, ..., xi_m (exact
rational covectors).  The induced gauge is nu(u) = max_k xi_k(u), which is an
asymmetric norm exactly when B is a compact neighborhood of the origin; the
`validate` operation certifies this with exact linear programs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import combinations
from typing import Iterable, Optional, Sequence, Tuple

from .geometry import (
    ParseError,
    Vector,
    dot,
    format_rational,
    is_zero,
    lp_maximize,
    norm_sq,
    parse_rational,
    solve_linear_system,
    vector,
    vsub,
)


@dataclass(frozen=True)
class Polytope:
    """Unit ball B given by facet functionals; immutable and hashable.

    Structural problems (empty facet list, a zero covector, duplicate
    covectors, ragged dimensions) are rejected at construction.  Geometric
    validity (boundedness, irredundancy) is checked by `validate`.
    """

    dim: int
    facets: Tuple[Vector, ...]
    name: Optional[str] = None

    def __init__(self, facets: Sequence, name: Optional[str] = None):
        rows = tuple(vector(f) for f in facets)
        if not rows:
            raise ValueError("a polytope needs at least one facet functional")
        d = len(rows[0])
        if d == 0:
            raise ValueError("facet functionals must have positive dimension")
        for r in rows:
            if len(r) != d:
                raise ValueError("facet functionals have inconsistent dimensions")
            if is_zero(r):
                raise ValueError("the zero covector cannot define a facet")
        if len(set(rows)) != len(rows):
            raise ValueError("duplicate facet functionals are not allowed")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "facets", rows)
        object.__setattr__(self, "name", name)

    @property
    def num_facets(self) -> int:
        return len(self.facets)

    def facet_values(self, u: Vector) -> Tuple[Fraction, ...]:
        """All pairings (xi_0(u), ..., xi_m(u)), exactly."""
        return tuple(dot(xi, u) for xi in self.facets)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    reason: Optional[str] = None


@dataclass(frozen=True)
class MetricConstants:
    """Comparison constants between nu and the euclidean norm.

    alpha: |u| <= alpha * nu(u)       (max euclidean norm over vertices of B)
    beta:  nu(u) <= beta * |u|        (max euclidean norm over the xi_k)
    gamma: |(xi_k - xi_l)(u)| <= gamma * |u|  (max over pairs k, l)

    The float fields are for reporting; the *_sq fields hold the exact
    squared values used whenever a test needs an exact comparison.
    """

    alpha: float
    beta: float
    gamma: float
    alpha_sq: Fraction
    beta_sq: Fraction
    gamma_sq: Fraction


@lru_cache(maxsize=None)
def validate(p: Polytope) -> ValidationReport:
    """Certify that B is a compact 0-neighborhood with irredundant facets.

    Runs exact LPs: first boundedness (the recession system xi_k(u) <= 0 must
    admit only u = 0), then facet count, then irredundancy (every facet must
    be exposed by a point where it is the unique active functional).  Reports
    the first violated condition.
    """
    recession = [(xi, "<=", 0) for xi in p.facets]
    for i in range(p.dim):
        for sign in (1, -1):
            objective = [0] * p.dim
            objective[i] = sign
            res = lp_maximize(objective, recession)
            if res.status == "unbounded" or (
                res.status == "optimal" and res.optimum != 0
            ):
                direction = res.witness
                return ValidationReport(
                    False,
                    "boundedness failed: recession direction "
                    f"({', '.join(format_rational(x) for x in direction)})",
                )
    if p.num_facets < p.dim + 1:
        return ValidationReport(
            False,
            f"a bounded {p.dim}-dimensional ball needs at least "
            f"{p.dim + 1} facets, got {p.num_facets}",
        )
    for k in range(p.num_facets):
        res = strict_face_witness(p, (k,))
        if res is None:
            return ValidationReport(
                False, f"irredundancy failed: facet {k} is not exposed"
            )
    return ValidationReport(True)


def require_valid(p: Polytope) -> None:
    report = validate(p)
    if not report.valid:
        raise ValueError(f"invalid polytope: {report.reason}")


def strict_face_witness(p: Polytope, members: Sequence[int]) -> Optional[Vector]:
    """Exact witness v with xi_l(v) = 1 on members and xi_k(v) < 1 off it.

    Encodes strictness as an auxiliary slack variable s maximized subject to
    xi_k(v) + s <= 1 off the candidate set; a witness exists iff the optimum
    is positive.  Returns None when there is no witness (the candidate is not
    a dual face).
    """
    members = set(members)
    constraints = []
    for k, xi in enumerate(p.facets):
        row = list(xi) + [0]
        if k in members:
            constraints.append((row, "=", 1))
        else:
            constraints.append((list(xi) + [1], "<=", 1))
    objective = [0] * p.dim + [1]
    res = lp_maximize(objective, constraints)
    if res.status != "optimal" or res.optimum <= 0:
        return None
    return res.witness[: p.dim]


def norm(p: Polytope, u: Sequence) -> Fraction:
    """nu(u) = max_k xi_k(u); requires a valid polytope."""
    require_valid(p)
    u = vector(u)
    if len(u) != p.dim:
        raise ValueError("dimension mismatch in norm")
    return max(p.facet_values(u))


def partial_norm(p: Polytope, members: Iterable[int], u: Sequence) -> Fraction:
    """nu_L(u) = max over the chosen facet indices; may be negative."""
    members = tuple(members)
    if not members:
        raise ValueError("partial_norm needs a nonempty index set")
    u = vector(u)
    if len(u) != p.dim:
        raise ValueError("dimension mismatch in partial_norm")
    vals = []
    for k in members:
        if not 0 <= k < p.num_facets:
            raise ValueError(f"facet index {k} out of range")
        vals.append(dot(p.facets[k], u))
    return max(vals)


def asym_distance(p: Polytope, u: Sequence, v: Sequence) -> Fraction:
    """The asymmetric metric delta(u, v) = nu(u - v)."""
    return norm(p, vsub(vector(u), vector(v)))


@lru_cache(maxsize=None)
def vertices(p: Polytope) -> Tuple[Vector, ...]:
    """All vertices of B: exact solves over d-subsets of facets, deduplicated,
    in lexicographic order."""
    require_valid(p)
    found = set()
    for subset in combinations(range(p.num_facets), p.dim):
        rows = [p.facets[k] for k in subset]
        sol = solve_linear_system(rows, [1] * p.dim)
        if sol is None:
            continue
        point, ker = sol
        if ker.dim != 0:
            continue
        if all(val <= 1 for val in p.facet_values(point)):
            found.add(point)
    return tuple(sorted(found))


def active_set(p: Polytope, v: Vector) -> Tuple[int, ...]:
    """Indices of facets active (pairing exactly 1) at a point of B."""
    return tuple(k for k, val in enumerate(p.facet_values(v)) if val == 1)


@lru_cache(maxsize=None)
def metric_constants(p: Polytope) -> MetricConstants:
    require_valid(p)
    alpha_sq = max(norm_sq(v) for v in vertices(p))
    beta_sq = max(norm_sq(xi) for xi in p.facets)
    gamma_sq = max(
        norm_sq(vsub(a, b)) for a, b in combinations(p.facets, 2)
    )
    return MetricConstants(
        alpha=math.sqrt(alpha_sq),
        beta=math.sqrt(beta_sq),
        gamma=math.sqrt(gamma_sq),
        alpha_sq=alpha_sq,
        beta_sq=beta_sq,
        gamma_sq=gamma_sq,
    )


def polytope_to_json(p: Polytope) -> dict:
    return {
        "name": p.name or "",
        "dim": p.dim,
        "facets": [[format_rational(x) for x in xi] for xi in p.facets],
    }


def polytope_from_json(obj) -> Polytope:
    """Build a Polytope from the external JSON shape, with strict checks.

    Shape/grammar problems raise ParseError; geometric problems (duplicate
    facets etc.) surface as ValueError from the constructor.
    """
    if not isinstance(obj, dict):
        raise ParseError("polytope JSON must be an object")
    for key in ("dim", "facets"):
        if key not in obj:
            raise ParseError(f"polytope JSON is missing the {key!r} field")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim <= 0:
        raise ParseError(f"polytope dim must be a positive integer, got {dim!r}")
    facets = obj["facets"]
    if not isinstance(facets, list) or not facets:
        raise ParseError("polytope facets must be a nonempty list")
    rows = []
    for f in facets:
        if not isinstance(f, list) or len(f) != dim:
            raise ParseError(f"facet {f!r} does not have {dim} entries")
        rows.append([parse_entry(x) for x in f])
    name = obj.get("name") or None
    if name is not None and not isinstance(name, str):
        raise ParseError("polytope name must be a string")
    return Polytope(rows, name=name)


def parse_entry(x) -> Fraction:
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, int):
        return Fraction(x)
    raise ParseError(f"rational entries must be strings or integers, got {x!r}")


def load_example(name: str) -> Polytope:
    """Load one of the packaged example polytopes by name.

    Shipped examples: square, cube3, triangle, hexagon, pentagon, and the
    deliberately invalid unbounded2.
    """
    path = resources.files("horocompact").joinpath("data", f"{name}.json")
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ValueError(f"no packaged polytope named {name!r}")
    return polytope_from_json(json.loads(text))
