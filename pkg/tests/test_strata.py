import random
from fractions import Fraction as F

import pytest

from horocompact.geometry import Subspace, dot, is_zero
from horocompact.polytope import load_example, norm, partial_norm, vertices
from horocompact.strata import (
    active_face,
    build_stratum,
    chamber_cone,
    closure_poset,
    dual_face,
    enumerate_dual_faces,
    in_negative_cone,
    in_positive_cone,
    stratum_for,
)

SQ = load_example("square")
TRI = load_example("triangle")
CUBE = load_example("cube3")
HEX = load_example("hexagon")
PENT = load_example("pentagon")


def rand_vec(rng, d, span=6, den=4):
    return tuple(
        F(rng.randint(-span * den, span * den), den) for _ in range(d)
    )


def test_enumerate_square():
    faces = enumerate_dual_faces(SQ)
    assert [f.members for f in faces] == [
        (0,), (1,), (2,), (3,), (0, 2), (0, 3), (1, 2), (1, 3)
    ]


def test_enumerate_triangle():
    faces = enumerate_dual_faces(TRI)
    assert [f.members for f in faces] == [
        (0,), (1,), (2,), (0, 1), (0, 2), (1, 2)
    ]


def test_enumerate_cube3_count():
    # 6 facets of the octahedron dual + 12 edges + 8 vertices
    assert len(enumerate_dual_faces(CUBE)) == 26


def test_enumerate_hexagon():
    faces = enumerate_dual_faces(HEX)
    assert [f.members for f in faces] == [
        (0,), (1,), (2,), (3,), (4,), (5,),
        (0, 1), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5),
    ]


def test_enumerate_pentagon():
    faces = enumerate_dual_faces(PENT)
    assert [f.members for f in faces] == [
        (0,), (1,), (2,), (3,), (4,),
        (0, 3), (0, 4), (1, 2), (1, 4), (2, 3),
    ]


def test_witnesses_certify_their_face():
    for p in (SQ, TRI, CUBE, HEX, PENT):
        for f in enumerate_dual_faces(p):
            v = f.witness
            assert norm(p, v) == 1
            vals = p.facet_values(v)
            for k, val in enumerate(vals):
                if k in f.members:
                    assert val == 1
                else:
                    assert val < 1
            assert active_face(p, v).members == f.members


def test_full_index_set_is_never_a_face():
    for p in (SQ, TRI, CUBE, HEX, PENT):
        full = tuple(range(p.num_facets))
        assert all(f.members != full for f in enumerate_dual_faces(p))


def test_dual_face_lookup():
    f = dual_face(SQ, (2, 0))
    assert f.members == (0, 2)
    with pytest.raises(ValueError):
        dual_face(SQ, (0, 1))  # opposite facets never meet


def test_bitmask():
    assert dual_face(SQ, (0, 2)).bitmask == 0b101


def test_build_stratum_edge_of_square():
    s = build_stratum(SQ, (0, 2))
    assert s.H == Subspace.span([(F(1), F(1))], 2)
    assert s.W == Subspace.span([(F(1), F(-1))], 2)
    assert s.eta == (F(1), F(1))
    assert s.cone_generators == ((F(1), F(1)),)


def test_build_stratum_singleton():
    s = build_stratum(SQ, (0,))
    assert s.H == Subspace.full(2)
    assert s.W == Subspace.zero(2)


def test_build_stratum_interior_tag():
    s = build_stratum(SQ, None)
    assert s.is_interior
    assert s.H == Subspace.zero(2)
    assert s.W == Subspace.full(2)


def test_build_stratum_rejects_non_face():
    with pytest.raises(ValueError):
        build_stratum(SQ, (0, 1))


def test_stratum_for_normalizes_key():
    assert stratum_for(SQ, [2, 0]) is build_stratum(SQ, (0, 2))
    assert stratum_for(SQ, None).is_interior


def test_dimension_identity():
    # dim H_L + dim aff-span{xi_l : l in L} = d for every dual face, and the
    # canonical complement W_L picks up exactly the missing dimensions
    for p in (SQ, TRI, CUBE, HEX, PENT):
        for f in enumerate_dual_faces(p):
            s = build_stratum(p, f.members)
            pts = [p.facets[k] for k in f.members]
            diffs = [tuple(a - b for a, b in zip(q, pts[0])) for q in pts[1:]]
            aff_dim = Subspace.span(diffs, p.dim).dim
            assert s.H.dim + aff_dim == p.dim
            assert s.W.dim == aff_dim
            for w in s.W.basis:
                assert not s.H.contains(w)
                assert dot(s.eta, w) == 0


def test_partial_norm_positive_on_W():
    rng = random.Random(6)
    for p in (SQ, TRI, CUBE, HEX, PENT):
        for f in enumerate_dual_faces(p):
            s = build_stratum(p, f.members)
            for _ in range(20):
                coeffs = [F(rng.randint(-8, 8), rng.randint(1, 3))
                          for _ in s.W.basis]
                w = tuple(
                    sum((c * b[i] for c, b in zip(coeffs, s.W.basis)), F(0))
                    for i in range(p.dim)
                )
                if is_zero(w):
                    continue
                assert partial_norm(p, f.members, w) > 0


def test_active_face_values():
    assert active_face(SQ, (F(1), F(0))).members == (0,)
    assert active_face(SQ, (F(1), F(1))).members == (0, 2)
    assert active_face(TRI, (F(-1), F(-1))).members == (2,)
    with pytest.raises(ValueError):
        active_face(SQ, (F(0), F(0)))


def test_in_positive_cone():
    s = build_stratum(SQ, (0, 2))
    assert in_positive_cone(s, (F(2), F(2)))
    assert not in_positive_cone(s, (F(1), F(0)))
    s0 = build_stratum(SQ, (0,))
    assert not in_positive_cone(s0, (F(1), F(1)))  # tie with facet 2
    assert in_positive_cone(s0, (F(1), F(0)))


def test_in_negative_cone():
    assert in_negative_cone(SQ, (0, 2), (F(-1), F(-1)))
    assert not in_negative_cone(SQ, (0, 2), (F(1), F(0)))
    assert in_negative_cone(SQ, (0, 2), (F(0), F(0)))


def test_chamber_cone():
    assert chamber_cone(SQ, 0, (0, 2), (F(3), F(1)))
    assert not chamber_cone(SQ, 0, (0, 2), (F(1), F(1)))
    assert chamber_cone(SQ, 0, (0,), (F(-5), F(9)))
    with pytest.raises(ValueError):
        chamber_cone(SQ, 1, (0, 2), (F(1), F(1)))


def test_cone_generators_span_the_closure():
    # every generator lies in H_L and satisfies the closure inequalities
    for p in (SQ, TRI, CUBE, HEX, PENT):
        for f in enumerate_dual_faces(p):
            s = build_stratum(p, f.members)
            assert s.cone_generators  # a dual face has at least one vertex
            for g in s.cone_generators:
                assert s.H.contains(g)
                for row in s.cone_closure:
                    assert dot(row, g) >= 0


def test_directions_partition_random():
    rng = random.Random(11)
    for p in (SQ, TRI, CUBE, HEX, PENT):
        strata = [build_stratum(p, f.members) for f in enumerate_dual_faces(p)]
        for _ in range(60):
            w = rand_vec(rng, p.dim)
            if is_zero(w):
                continue
            hits = [s.members for s in strata if in_positive_cone(s, w)]
            assert hits == [active_face(p, w).members]


def test_closure_poset_square():
    po = closure_poset(SQ)
    assert po.nodes == (
        None, (0,), (1,), (2,), (3,), (0, 2), (0, 3), (1, 2), (1, 3)
    )
    assert po.closure_of((0, 2)) == ((0,), (2,), (0, 2))
    assert po.closure_of((0,)) == ((0,),)
    assert all(po.leq(None, n) for n in po.nodes)


def test_closure_poset_axioms():
    for p in (SQ, TRI, HEX, PENT):
        po = closure_poset(p)
        for a in po.nodes:
            assert po.leq(a, a)
            for b in po.nodes:
                if po.leq(a, b) and po.leq(b, a):
                    assert a == b
                for c in po.nodes:
                    if po.leq(a, b) and po.leq(b, c):
                        assert po.leq(a, c)


def test_covering_edges_square():
    po = closure_poset(SQ)
    edges = set(po.covering_edges())
    assert (None, (0, 2)) in edges
    assert ((0, 2), (0,)) in edges
    # no edge skips a level: interior -> singleton is not a covering
    assert (None, (0,)) not in edges
    assert len(edges) == 12


def test_to_dot():
    text = closure_poset(SQ).to_dot()
    assert text.startswith("digraph strata {")
    assert 'interior [label="interior"];' in text
    assert 'L0_2 [label="L={0,2}"];' in text
    assert "interior -> L0_2;" in text
    assert "L0_2 -> L0;" in text
    assert text.rstrip().endswith("}")
