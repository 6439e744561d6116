import random
from fractions import Fraction as F

import pytest

from horocompact.geometry import (
    LPResult,
    ParseError,
    Subspace,
    dot,
    format_rational,
    kernel,
    lp_maximize,
    norm_sq,
    orthogonal_complement_within,
    parse_rational,
    solve_linear_system,
    sqrt_lower,
    sqrt_upper,
    vadd,
    vector,
    vscale,
    vsub,
)


def test_parse_rational():
    assert parse_rational("3") == F(3)
    assert parse_rational("-7/2") == F(-7, 2)
    assert parse_rational("+4/6") == F(2, 3)
    assert parse_rational("0") == 0


def test_parse_rational_rejects_garbage():
    for bad in ["abc", "1.5", "1e3", "", "1/2/3", "--1", " 1", "1/-2", None, 7]:
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_parse_rational_zero_denominator():
    with pytest.raises(ParseError):
        parse_rational("3/0")


def test_format_rational_round_trip():
    rng = random.Random(7)
    for _ in range(200):
        x = F(rng.randint(-50, 50), rng.randint(1, 50))
        assert parse_rational(format_rational(x)) == x
    assert format_rational(F(4)) == "4"
    assert format_rational(F(-1, 3)) == "-1/3"


def test_vector_helpers():
    u = vector(["1/2", 3, F(-1)])
    assert u == (F(1, 2), F(3), F(-1))
    v = vector([1, 1, 1])
    assert vadd(u, v) == (F(3, 2), F(4), F(0))
    assert vsub(u, v) == (F(-1, 2), F(2), F(-2))
    assert vscale(F(2), u) == (F(1), F(6), F(-2))
    assert dot(u, v) == F(5, 2)
    assert norm_sq((F(3), F(4))) == 25


def test_dot_dimension_mismatch():
    with pytest.raises(ValueError):
        dot((F(1),), (F(1), F(2)))


def test_sqrt_bounds_bracket_the_root():
    rng = random.Random(0)
    for _ in range(300):
        x = F(rng.randint(0, 400), rng.randint(1, 40))
        up = sqrt_upper(x)
        lo = sqrt_lower(x)
        assert lo * lo <= x <= up * up
        assert 0 <= lo <= up
    assert sqrt_upper(F(4)) == 2
    assert sqrt_lower(F(4)) == 2


def test_sqrt_bounds_reject_negative():
    with pytest.raises(ValueError):
        sqrt_upper(F(-1))
    with pytest.raises(ValueError):
        sqrt_lower(F(-1, 7))


def test_subspace_canonical_equality():
    # different spanning sets of the same plane give identical objects
    a = Subspace.span([(F(1), F(1), F(0)), (F(0), F(0), F(1))], 3)
    b = Subspace.span([(F(2), F(2), F(2)), (F(1), F(1), F(-1))], 3)
    assert a == b
    assert a.dim == 2


def test_subspace_contains():
    s = Subspace.span([(F(1), F(1))], 2)
    assert s.contains((F(3), F(3)))
    assert not s.contains((F(1), F(0)))
    assert s.contains((F(0), F(0)))
    with pytest.raises(ValueError):
        s.contains((F(1), F(1), F(1)))


def test_subspace_project():
    s = Subspace.span([(F(1), F(1))], 2)
    p = s.project((F(1), F(0)))
    assert p == (F(1, 2), F(1, 2))
    # residual is orthogonal to the subspace and projection is idempotent
    assert dot(vsub((F(1), F(0)), p), (F(1), F(1))) == 0
    assert s.project(p) == p
    assert Subspace.zero(2).project((F(5), F(7))) == (F(0), F(0))


def test_solve_identity():
    part, ker = solve_linear_system(((1, 0), (0, 1)), (3, 5))
    assert part == (F(3), F(5))
    assert ker.dim == 0


def test_solve_single_equation():
    part, ker = solve_linear_system(((1, -1),), (0,))
    assert ker == Subspace.span([(F(1), F(1))], 2)
    assert part == (F(0), F(0))


def test_solve_inconsistent():
    assert solve_linear_system(((1, 0), (1, 0)), (1, 2)) is None


def test_solve_properties_random():
    rng = random.Random(12)
    for _ in range(60):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        a = tuple(
            tuple(F(rng.randint(-3, 3)) for _ in range(n)) for _ in range(m)
        )
        b = tuple(F(rng.randint(-3, 3)) for _ in range(m))
        sol = solve_linear_system(a, b)
        if sol is None:
            continue
        part, ker = sol
        for row, rhs in zip(a, b):
            assert dot(row, part) == rhs
        for k in ker.basis:
            for row in a:
                assert dot(row, k) == 0


def test_kernel():
    k = kernel([(1, -1)], 2)
    assert k == Subspace.span([(F(1), F(1))], 2)
    assert kernel([], 3) == Subspace.full(3)
    assert kernel([(1, 0), (0, 1)], 2).dim == 0


def test_orthogonal_complement_basics():
    full = Subspace.full(2)
    diag = Subspace.span([(F(1), F(1))], 2)
    assert orthogonal_complement_within(diag, full) == Subspace.span(
        [(F(1), F(-1))], 2
    )
    assert orthogonal_complement_within(Subspace.zero(2), full) == full
    assert orthogonal_complement_within(full, full) == Subspace.zero(2)


def test_orthogonal_complement_not_contained():
    line = Subspace.span([(F(1), F(0), F(0))], 3)
    plane = Subspace.span([(F(0), F(1), F(0)), (F(0), F(0), F(1))], 3)
    with pytest.raises(ValueError):
        orthogonal_complement_within(line, plane)


def test_orthogonal_complement_random():
    rng = random.Random(5)
    for _ in range(40):
        d = rng.randint(1, 4)
        amb_vecs = [
            tuple(F(rng.randint(-2, 2)) for _ in range(d))
            for _ in range(rng.randint(0, d))
        ]
        amb = Subspace.span(amb_vecs, d)
        sub_vecs = [amb.project(tuple(F(rng.randint(-2, 2)) for _ in range(d)))
                    for _ in range(rng.randint(0, d))]
        sub = Subspace.span(sub_vecs, d)
        comp = orthogonal_complement_within(sub, amb)
        assert comp.dim + sub.dim == amb.dim
        for cv in comp.basis:
            assert amb.contains(cv)
            for sv in sub.basis:
                assert dot(cv, sv) == 0


def test_lp_bounded_interval():
    res = lp_maximize((1,), [((1,), "<=", 1), ((-1,), "<=", 1)])
    assert res.status == "optimal"
    assert res.optimum == 1
    assert res.witness == (F(1),)


def test_lp_unbounded():
    res = lp_maximize((1,), [((-1,), "<=", 0)])
    assert res.status == "unbounded"
    # the ray improves the objective while staying feasible
    assert res.witness is not None
    assert dot((F(1),), res.witness) > 0
    assert dot((F(-1),), res.witness) <= 0


def test_lp_infeasible():
    res = lp_maximize((0,), [((1,), "<=", -1), ((-1,), "<=", -2)])
    assert res.status == "infeasible"
    assert res.optimum is None


def test_lp_equality_constraints():
    res = lp_maximize(
        (1, 1),
        [((1, 1), "=", 2), ((1, 0), "<=", 5), ((-1, 0), "<=", 5)],
    )
    assert res.status == "optimal"
    assert res.optimum == 2


def test_lp_fractional_optimum():
    # maximize x+y over x+2y<=1, 2x+y<=1, vertex at (1/3,1/3)
    res = lp_maximize((1, 1), [((1, 2), "<=", 1), ((2, 1), "<=", 1)])
    assert res.status == "optimal"
    assert res.optimum == F(2, 3)
    assert res.witness == (F(1, 3), F(1, 3))


def test_lp_degenerate_does_not_cycle():
    # classic degenerate instance; Bland's rule must terminate
    res = lp_maximize(
        (F(3, 4), -150, F(1, 50), -6),
        [
            ((F(1, 4), -60, F(-1, 25), 9), "<=", 0),
            ((F(1, 2), -90, F(-1, 50), 3), "<=", 0),
            ((0, 0, 1, 0), "<=", 1),
            ((-1, 0, 0, 0), "<=", 0),
            ((0, -1, 0, 0), "<=", 0),
            ((0, 0, -1, 0), "<=", 0),
            ((0, 0, 0, -1), "<=", 0),
        ],
    )
    assert res.status == "optimal"
    assert res.optimum == F(1, 20)


def test_lp_witness_against_vertex_enumeration():
    # brute-force oracle: evaluate the objective at all constraint-pair
    # intersections of random bounded 2-d programs
    from itertools import combinations

    rng = random.Random(99)
    trials = 0
    while trials < 30:
        cons = [((1, 0), "<=", 3), ((-1, 0), "<=", 3),
                ((0, 1), "<=", 3), ((0, -1), "<=", 3)]
        for _ in range(3):
            row = (F(rng.randint(-3, 3)), F(rng.randint(-3, 3)))
            cons.append((row, "<=", F(rng.randint(0, 4))))
        obj = (F(rng.randint(-3, 3)), F(rng.randint(-3, 3)))
        res = lp_maximize(obj, cons)
        assert res.status == "optimal"
        best = None
        for (r1, _, b1), (r2, _, b2) in combinations(cons, 2):
            sol = solve_linear_system((r1, r2), (b1, b2))
            if sol is None or sol[1].dim != 0:
                continue
            v = sol[0]
            if all(dot(r, v) <= b for r, _, b in cons):
                val = dot(obj, v)
                best = val if best is None else max(best, val)
        assert best == res.optimum
        for r, _, b in cons:
            assert dot(r, res.witness) <= b
        assert dot(obj, res.witness) == res.optimum
        trials += 1


def test_lp_rejects_bad_relation():
    with pytest.raises(ValueError):
        lp_maximize((1,), [((1,), "<", 1)])


def test_lp_dimension_mismatch():
    with pytest.raises(ValueError):
        lp_maximize((1, 0), [((1,), "<=", 1)])


def test_exactness_of_arithmetic():
    rng = random.Random(3)
    for _ in range(100):
        a = F(rng.randint(-10**9, 10**9), rng.randint(1, 10**6))
        b = F(rng.randint(-10**9, 10**9), rng.randint(1, 10**6))
        assert (a + b) - b == a
