"""Points of the compactification: values, canonical forms, limits, topology.

A point of the compactified space is either an interior point p (its
horofunction is u -> nu(p - u) - nu(p)) or a boundary point: a dual face L
together with the canonical representative of p + H_L inside the complement
W_L (horofunction u -> nu_L(rep - u) - nu_L(rep)).  Horofunctions are stored
normalized — value 0 at the origin — so two compactification points are equal
iff their (stratum, representative) pairs are equal, and no function-space
comparison is ever needed at runtime.

Exactness policy: evaluation, equality, translation, ray limits, agreement
thresholds and neighborhood membership are exact over the rationals.  Only
`classify_tail` is a declared heuristic: finitely many samples cannot decide
a limit, so it applies stability tolerances (configurable) and returns None
when the tail looks unstable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Tuple

from .geometry import (
    ParseError,
    Subspace,
    Vector,
    dot,
    format_rational,
    is_zero,
    lp_maximize,
    norm_sq,
    solve_linear_system,
    sqrt_upper,
    vadd,
    vector,
    vscale,
    vsub,
    zero_vector,
)
from .polytope import (
    Polytope,
    metric_constants,
    norm,
    partial_norm,
    require_valid,
)
from .strata import (
    FaceKey,
    Stratum,
    active_face,
    dual_face,
    stratum_for,
)


@dataclass(frozen=True)
class Horofunction:
    """A point of the compactification, in canonical form.

    stratum is None for interior points (rep is the point itself) and the
    sorted dual-face key for boundary points (rep lies in W_L exactly).
    Construct via interior_point / canonicalize / ray_limit, not directly.
    """

    polytope: Polytope
    stratum: Optional[FaceKey]
    rep: Vector

    @property
    def is_interior(self) -> bool:
        return self.stratum is None


def interior_point(p: Polytope, point: Sequence) -> Horofunction:
    require_valid(p)
    point = vector(point)
    if len(point) != p.dim:
        raise ValueError("dimension mismatch for an interior point")
    return Horofunction(p, None, point)


def canonicalize(p: Polytope, members: Iterable[int], point: Sequence) -> Horofunction:
    """The boundary point for face L through p: rep = W_L-part of p.

    Decomposes p = h + w with h in H_L and w in W_L (the decomposition is
    unique because V = H_L ⊕ W_L) and keeps w.  Two points yield the same
    Horofunction iff they differ by an element of H_L.
    """
    s = stratum_for(p, tuple(members))
    point = vector(point)
    if len(point) != p.dim:
        raise ValueError("dimension mismatch in canonicalize")
    w = _component_in(point, s.W, s.H)
    return Horofunction(p, s.members, w)


def _component_in(point: Vector, w: Subspace, h: Subspace) -> Vector:
    """The W-component of point under V = H ⊕ W (exact coordinates)."""
    basis = list(h.basis) + list(w.basis)
    if not basis:
        return zero_vector(len(point))
    columns = tuple(
        tuple(b[i] for b in basis) for i in range(len(point))
    )
    sol = solve_linear_system(columns, point)
    assert sol is not None and sol[1].dim == 0, "H ⊕ W should equal V"
    coeffs = sol[0]
    out = zero_vector(len(point))
    for c, b in zip(coeffs[h.dim :], w.basis):
        out = vadd(out, vscale(c, b))
    return out


def evaluate(h: Horofunction, u: Sequence) -> Fraction:
    """Exact horofunction value at u; evaluate(h, 0) == 0 by normalization."""
    u = vector(u)
    if len(u) != h.polytope.dim:
        raise ValueError("dimension mismatch in evaluate")
    if h.is_interior:
        return norm(h.polytope, vsub(h.rep, u)) - norm(h.polytope, h.rep)
    return partial_norm(h.polytope, h.stratum, vsub(h.rep, u)) - partial_norm(
        h.polytope, h.stratum, h.rep
    )


def equal(h1: Horofunction, h2: Horofunction) -> bool:
    """Equality as points of the compactification (exact)."""
    if h1.polytope != h2.polytope:
        raise ValueError("horofunctions from different polytopes")
    return h1.stratum == h2.stratum and h1.rep == h2.rep


def translate(h: Horofunction, w: Sequence) -> Horofunction:
    """The translation action: interior points move, boundary points move
    modulo their stabilizer H_L."""
    w = vector(w)
    if h.is_interior:
        return Horofunction(h.polytope, None, vadd(h.rep, w))
    return canonicalize(h.polytope, h.stratum, vadd(h.rep, w))


def ray_limit(p: Polytope, point: Sequence, direction: Sequence) -> Horofunction:
    """Limit of u -> nu(p + t*w - u) - nu(p + t*w) as t grows.

    The zero direction degenerates to the interior point itself; otherwise
    the limit lands in the stratum of the active face of the direction.
    """
    point = vector(point)
    direction = vector(direction)
    if is_zero(direction):
        return interior_point(p, point)
    face = active_face(p, direction)
    return canonicalize(p, face.members, point)


def ray_agreement_threshold(
    p: Polytope, point: Sequence, direction: Sequence, radius
) -> Fraction:
    """A certified t0: for t >= t0 the ray's normalized distance function
    equals the limit horofunction exactly on the euclidean ball |u| <= radius.

    Derivation: with L the active face of w, g the smallest slope gap
    nu(w) - xi_k(w) off L, and l0 = min(L), the L-part of nu(p + tw - u)
    dominates every off-facet as soon as
        t * g >= max_k (xi_k - xi_l0)(p) + gamma_up * radius,
    where gamma_up is a rational upper bound on the largest euclidean norm
    |xi_k - xi_l|.  The returned value is that bound clamped to >= 0; it is
    certified, not minimal.
    """
    point = vector(point)
    direction = vector(direction)
    radius = Fraction(radius)
    if is_zero(direction):
        raise ValueError("ray_agreement_threshold is undefined at w = 0")
    if radius <= 0:
        raise ValueError("radius must be positive")
    face = active_face(p, direction)
    key = face.members
    off = [k for k in range(p.num_facets) if k not in key]
    if not off:
        return Fraction(0)
    nu_w = dot(p.facets[key[0]], direction)
    gap = min(nu_w - dot(p.facets[k], direction) for k in off)
    l0 = p.facets[key[0]]
    offset = max(dot(vsub(p.facets[k], l0), point) for k in off)
    gamma_up = sqrt_upper(metric_constants(p).gamma_sq)
    t0 = (offset + gamma_up * radius) / gap
    return max(Fraction(0), t0)


def classify_tail(
    p: Polytope,
    points: Sequence[Sequence],
    window: int,
    tie_tol: float = 1e-6,
    cauchy_tol: float = 1e-9,
) -> Optional[Horofunction]:
    """Heuristic limit of a sampled sequence from its last `window` points.

    Order of checks on the tail:

    1. If the tail is Cauchy (pairwise euclidean distance within cauchy_tol)
       the sequence is treated as convergent in V: interior point.
    2. Otherwise each facet's deficit nu(p_n) - xi_k(p_n) is computed
       exactly; the candidate face L collects the indices whose deficit stays
       constant across the window up to tie_tol * (1 + largest |xi_k(p_n)|).
       L must be a proper dual face, else None.
    3. The W_L-projections of the tail must be Cauchy within cauchy_tol;
       their last value is the returned representative.

    A finite sample cannot certify a limit, so this is a declared heuristic:
    for eventually-exact tails that march into a face's open cone it returns
    the true limit, and it returns None when the tail looks unstable.
    """
    require_valid(p)
    if window < 2:
        raise ValueError("window must be at least 2")
    if len(points) < window:
        raise ValueError(f"need at least window={window} points, got {len(points)}")
    tail = [vector(q) for q in points[-window:]]
    for q in tail:
        if len(q) != p.dim:
            raise ValueError("dimension mismatch in classify_tail")
    cauchy_sq = Fraction(cauchy_tol) ** 2
    if all(
        norm_sq(vsub(a, b)) <= cauchy_sq for a, b in combinations(tail, 2)
    ):
        return interior_point(p, tail[-1])

    values = [p.facet_values(q) for q in tail]
    scale = max(abs(v) for row in values for v in row)
    tol = Fraction(tie_tol) * (1 + scale)
    nus = [max(row) for row in values]
    stable = []
    for k in range(p.num_facets):
        deficits = [nu - row[k] for nu, row in zip(nus, values)]
        if max(deficits) - min(deficits) <= tol:
            stable.append(k)
    if not stable or len(stable) == p.num_facets:
        return None
    try:
        face = dual_face(p, stable)
    except ValueError:
        return None
    reps = [canonicalize(p, face.members, q).rep for q in tail]
    if not all(
        norm_sq(vsub(a, b)) <= cauchy_sq for a, b in combinations(reps, 2)
    ):
        return None
    return Horofunction(p, face.members, reps[-1])


@dataclass(frozen=True)
class Neighborhood:
    """A basic neighborhood U(L, eps, q) of the compactification topology.

    For a dual face L it is the set of compactification points reachable in
    q + B_eps(0) + H_L^+ (open euclidean ball); the interior tag (members
    None) describes the plain ball q + B_eps(0) of interior points.
    """

    polytope: Polytope
    members: Optional[FaceKey]
    epsilon: Fraction
    q: Vector

    def __init__(self, polytope, members, epsilon, q):
        epsilon = Fraction(epsilon)
        if epsilon <= 0:
            raise ValueError("neighborhood radius must be positive")
        q = vector(q)
        if len(q) != polytope.dim:
            raise ValueError("dimension mismatch in Neighborhood")
        key = None if members is None else tuple(sorted(set(members)))
        if key is not None:
            dual_face(polytope, key)  # existence check
        object.__setattr__(self, "polytope", polytope)
        object.__setattr__(self, "members", key)
        object.__setattr__(self, "epsilon", epsilon)
        object.__setattr__(self, "q", q)


def neighborhood_contains(n: Neighborhood, h: Horofunction) -> bool:
    """Exact membership of a compactification point in a basic neighborhood.

    Interior-tagged neighborhoods contain exactly the interior points within
    eps of q.  For a face-L neighborhood, a point with stratum L' belongs iff
    L' ⊇ L (interior points count as L' = everything) and the representative
    satisfies dist(rep - q, cl(H_L^+) + H_L') < eps; open-ball absorption
    B_eps(0) + H_L^+ = B_eps(0) + cl(H_L^+) makes the closed-cone distance
    criterion equivalent to membership in the open set.  The squared distance
    is computed exactly and compared with eps^2.
    """
    if n.polytope != h.polytope:
        raise ValueError("neighborhood and horofunction polytopes differ")
    eps_sq = n.epsilon ** 2
    if n.members is None:
        if not h.is_interior:
            return False
        return norm_sq(vsub(h.rep, n.q)) < eps_sq
    if h.is_interior:
        shift = Subspace.zero(n.polytope.dim)
    else:
        if not set(h.stratum) >= set(n.members):
            return False
        shift = stratum_for(n.polytope, h.stratum).H
    s = stratum_for(n.polytope, n.members)
    x = vsub(h.rep, n.q)
    return _dist_sq_cone_plus_subspace(x, s.cone_generators, shift) < eps_sq


def _dist_sq_cone_plus_subspace(
    x: Vector, generators: Sequence[Vector], shift: Subspace
) -> Fraction:
    """Exact squared euclidean distance from x to cone(generators) + shift.

    The subspace is quotiented out first (orthogonal projection), then the
    projection of x onto the image cone is found by scanning generator
    subsets: the nearest point lies in the relative interior of some face,
    every face of a finitely generated cone is spanned by the generators it
    contains, and on that face the nearest point is the orthogonal projection
    onto its linear span.  Each candidate projection is kept only if an exact
    LP certifies it lies in the cone.  Small generator counts only.
    """
    d = len(x)
    if shift.dim:
        x = vsub(x, shift.project(x))
        gens = []
        for g in generators:
            g = vsub(g, shift.project(g))
            if not is_zero(g):
                gens.append(g)
    else:
        gens = [g for g in generators if not is_zero(g)]
    gens = list(dict.fromkeys(gens))
    best = norm_sq(x)  # apex candidate
    if not gens or best == 0:
        return best
    if len(gens) > 16:
        raise ValueError("cone projection supports at most 16 generators")
    for mask in range(1, 1 << len(gens)):
        subset = [gens[i] for i in range(len(gens)) if mask >> i & 1]
        span = Subspace.span(subset, d)
        y = span.project(x)
        cand = norm_sq(vsub(x, y))
        if cand >= best:
            continue
        if _in_cone(y, gens):
            best = cand
    return best


def _in_cone(y: Vector, gens: Sequence[Vector]) -> bool:
    """Exact feasibility: does y lie in the conical hull of gens?"""
    d = len(y)
    nv = len(gens)
    constraints = []
    for i in range(d):
        row = [g[i] for g in gens]
        constraints.append((row, "=", y[i]))
    for j in range(nv):
        row = [Fraction(0)] * nv
        row[j] = Fraction(-1)
        constraints.append((row, "<=", 0))
    res = lp_maximize([0] * nv, constraints)
    return res.status == "optimal"


def horofunction_to_json(h: Horofunction) -> dict:
    return {
        "stratum": "interior" if h.is_interior else list(h.stratum),
        "rep": [format_rational(x) for x in h.rep],
    }


def horofunction_from_json(p: Polytope, obj) -> Horofunction:
    """Parse the external horofunction shape against a polytope context."""
    if not isinstance(obj, dict):
        raise ParseError("horofunction JSON must be an object")
    for key in ("stratum", "rep"):
        if key not in obj:
            raise ParseError(f"horofunction JSON is missing the {key!r} field")
    rep_field = obj["rep"]
    if not isinstance(rep_field, list):
        raise ParseError("horofunction rep must be a list of rational strings")
    rep = vector(rep_field)
    if len(rep) != p.dim:
        raise ValueError("horofunction rep has the wrong dimension")
    stratum = obj["stratum"]
    if stratum == "interior":
        return interior_point(p, rep)
    if not isinstance(stratum, list) or not all(
        isinstance(k, int) for k in stratum
    ):
        raise ParseError(
            "horofunction stratum must be 'interior' or a list of integers"
        )
    # Any representative of p + H_L names the same point; canonicalize it.
    return canonicalize(p, stratum, rep)
