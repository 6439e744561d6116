"""Dual faces, their subspaces and cones, and the closure poset of strata.

A subset L of facet indices is a *dual face* when some unit-norm point v has
exactly the functionals indexed by L active: xi_l(v) = 1 for l in L and
xi_k(v) < 1 otherwise.  The dual faces stratify the boundary of the
compactification; each one carries

  * H:  the subspace where all xi_l, l in L agree (the translation
        stabilizer of the stratum's horofunctions),
  * W:  a canonical complement of H chosen inside the hyperplane eta = 0,
        eta = sum of the xi_l — boundary points get unique representatives
        in W,
  * the closed cone cl(H_L^+) of directions whose rays converge into the
    stratum, described both by generators (the vertices of B on the face
    where all of L is active) and by the inequalities xi_l - xi_k >= 0.

Enumeration strategy: the active sets of the vertices of B are computed
exactly, and Sigma is their closure under pairwise intersection — every face
of a polytope is spanned by its vertices, so this is sound and complete.
Each candidate is then re-certified with an exact strict-witness LP, which
also provides the stored witness point.

Everything here is exact; this module has no tolerance parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple

from .geometry import (
    Subspace,
    Vector,
    dot,
    is_zero,
    kernel,
    orthogonal_complement_within,
    vector,
    vsub,
)
from .polytope import (
    Polytope,
    active_set,
    require_valid,
    strict_face_witness,
    vertices,
)

FaceKey = Tuple[int, ...]


@dataclass(frozen=True)
class DualFace:
    """A dual face: its sorted member indices and an exact witness point."""

    members: FaceKey
    witness: Vector

    @property
    def bitmask(self) -> int:
        mask = 0
        for k in self.members:
            mask |= 1 << k
        return mask


@dataclass(frozen=True)
class Stratum:
    """A stratum of the compactification together with its cached geometry.

    face is None for the dense interior stratum (by convention H = {0} and
    W = V there, and the cone data is empty)."""

    face: Optional[DualFace]
    H: Subspace
    W: Subspace
    eta: Vector
    cone_closure: Tuple[Vector, ...]
    cone_generators: Tuple[Vector, ...]

    @property
    def is_interior(self) -> bool:
        return self.face is None

    @property
    def members(self) -> Optional[FaceKey]:
        return None if self.face is None else self.face.members


def _face_key(members: Iterable[int]) -> FaceKey:
    key = tuple(sorted(set(int(k) for k in members)))
    if not key:
        raise ValueError("a dual face needs a nonempty index set")
    return key


@lru_cache(maxsize=None)
def enumerate_dual_faces(p: Polytope) -> Tuple[DualFace, ...]:
    """All dual faces of B, witness-certified, in (size, lex) order."""
    require_valid(p)
    verts = vertices(p)
    candidates = {frozenset(active_set(p, v)) for v in verts}
    frontier = set(candidates)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in candidates:
                c = a & b
                if c and c not in candidates and c not in fresh:
                    fresh.add(c)
        candidates |= fresh
        frontier = fresh
    faces = []
    for cand in sorted(candidates, key=lambda s: (len(s), sorted(s))):
        key = tuple(sorted(cand))
        witness = strict_face_witness(p, key)
        if witness is not None:
            faces.append(DualFace(key, witness))
    return tuple(faces)


@lru_cache(maxsize=None)
def _faces_by_key(p: Polytope) -> dict:
    return {f.members: f for f in enumerate_dual_faces(p)}


def dual_face(p: Polytope, members: Iterable[int]) -> DualFace:
    """Look up the dual face with the given members; ValueError if L is not
    a dual face of this polytope."""
    key = _face_key(members)
    face = _faces_by_key(p).get(key)
    if face is None:
        raise ValueError(f"L={{{', '.join(map(str, key))}}} is not a dual face")
    return face


@lru_cache(maxsize=None)
def build_stratum(p: Polytope, members: Optional[FaceKey]) -> Stratum:
    """Assemble the stratum for a dual face, or for the interior (None).

    H is the exact solution space of the agreement equations; W is the
    euclidean orthogonal complement of H ∩ eta-perp inside eta-perp, a
    deterministic choice making boundary representatives unique.
    """
    require_valid(p)
    d = p.dim
    if members is None:
        return Stratum(
            face=None,
            H=Subspace.zero(d),
            W=Subspace.full(d),
            eta=tuple(
                sum((xi[i] for xi in p.facets), Fraction(0)) for i in range(d)
            ),
            cone_closure=(),
            cone_generators=(),
        )
    face = dual_face(p, members)
    key = face.members
    first = key[0]
    agreement = [vsub(p.facets[l], p.facets[first]) for l in key[1:]]
    H = kernel(agreement, d) if agreement else Subspace.full(d)
    eta = tuple(
        sum((p.facets[l][i] for l in key), Fraction(0)) for i in range(d)
    )
    eta_perp = kernel([eta], d)
    H_in_perp = kernel(agreement + [eta], d)
    W = orthogonal_complement_within(H_in_perp, eta_perp)
    off = [k for k in range(p.num_facets) if k not in key]
    cone_closure = tuple(
        vsub(p.facets[l], p.facets[k]) for l in key for k in off
    )
    gens = tuple(
        v for v in vertices(p) if set(key) <= set(active_set(p, v))
    )
    return Stratum(
        face=face,
        H=H,
        W=W,
        eta=eta,
        cone_closure=cone_closure,
        cone_generators=gens,
    )


def stratum_for(p: Polytope, members: Optional[Iterable[int]]) -> Stratum:
    """build_stratum with friendly key normalization."""
    key = None if members is None else _face_key(members)
    return build_stratum(p, key)


def active_face(p: Polytope, w: Sequence) -> DualFace:
    """K(w): the indices attaining nu(w); always a dual face for w != 0."""
    w = vector(w)
    if is_zero(w):
        raise ValueError("active_face is undefined at w = 0")
    vals = p.facet_values(w)
    top = max(vals)
    key = tuple(k for k, val in enumerate(vals) if val == top)
    return dual_face(p, key)


def in_positive_cone(s: Stratum, w: Sequence) -> bool:
    """Exact test for w in the open cone H_L^+ (active face exactly L).

    For w in H all the xi_l, l in L, agree, so strictness of every
    xi_l - xi_k forces the common value to be the norm and L to be the
    active face; boundedness rules out a nonpositive common value.
    """
    if s.is_interior:
        raise ValueError("the interior stratum has no positive cone")
    w = vector(w)
    if not s.H.contains(w):
        return False
    return all(dot(ineq, w) > 0 for ineq in s.cone_closure)


def in_negative_cone(p: Polytope, members: Iterable[int], v: Sequence) -> bool:
    """True iff xi_l(v) <= 0 for every l in the (nonempty) index set."""
    key = _face_key(members)
    v = vector(v)
    return all(dot(p.facets[l], v) <= 0 for l in key)


def chamber_cone(
    p: Polytope, k: int, members: Iterable[int], v: Sequence
) -> bool:
    """True iff xi_k(v) > xi_l(v) strictly for all other l in the set."""
    key = _face_key(members)
    if k not in key:
        raise ValueError(f"index {k} is not in the face {key}")
    v = vector(v)
    val = dot(p.facets[k], v)
    return all(val > dot(p.facets[l], v) for l in key if l != k)


@dataclass(frozen=True)
class StrataPoset:
    """The closure poset of strata: interior below everything, and
    L' <= L iff L' contains L.  Node None is the interior stratum."""

    nodes: Tuple[Optional[FaceKey], ...]

    def leq(self, a: Optional[FaceKey], b: Optional[FaceKey]) -> bool:
        if a is None:
            return True
        if b is None:
            return False
        return set(a) >= set(b)

    def closure_of(self, node: Optional[FaceKey]) -> Tuple[Optional[FaceKey], ...]:
        """Strata in the closure of the given stratum: all nodes >= it."""
        return tuple(n for n in self.nodes if self.leq(node, n))

    def covering_edges(self) -> Tuple[tuple, ...]:
        edges = []
        for a in self.nodes:
            for b in self.nodes:
                if a == b or not self.leq(a, b):
                    continue
                if any(
                    c != a and c != b and self.leq(a, c) and self.leq(c, b)
                    for c in self.nodes
                ):
                    continue
                edges.append((a, b))
        return tuple(edges)

    def to_dot(self) -> str:
        """Covering relation as a DOT digraph, edges upward from interior."""
        def node_id(n):
            return "interior" if n is None else "L" + "_".join(map(str, n))

        def label(n):
            if n is None:
                return "interior"
            return "L={" + ",".join(map(str, n)) + "}"

        lines = ["digraph strata {"]
        for n in self.nodes:
            lines.append(f'  {node_id(n)} [label="{label(n)}"];')
        for a, b in self.covering_edges():
            lines.append(f"  {node_id(a)} -> {node_id(b)};")
        lines.append("}")
        return "\n".join(lines)


@lru_cache(maxsize=None)
def closure_poset(p: Polytope) -> StrataPoset:
    faces = enumerate_dual_faces(p)
    nodes = (None,) + tuple(f.members for f in faces)
    return StrataPoset(nodes)
