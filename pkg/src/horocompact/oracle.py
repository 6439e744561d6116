"""Independent brute-force validators for the main algorithms.

These are deliberately naive: exhaustive subset scans and dense grid
comparisons, exact all the way.  They exist to certify the production
algorithms on small instances — every derived constant frozen into the test
suite came out of one of these, and `selftest` replays the battery.
Performance is a non-goal here.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Optional, Sequence, Tuple

from .geometry import Vector, vadd, vector, vscale, vsub
from .horofunction import Horofunction, evaluate, ray_limit, ray_agreement_threshold
from .polytope import Polytope, load_example, norm, require_valid, strict_face_witness
from .strata import (
    DualFace,
    active_face,
    enumerate_dual_faces,
    in_positive_cone,
    stratum_for,
)


def faces_bruteforce(p: Polytope) -> Tuple[DualFace, ...]:
    """Ground truth for enumerate_dual_faces: test all 2^(m+1)-1 subsets.

    Runs the strict-witness LP on every nonempty index set, in the same
    (size, lex) order the production enumerator uses.  Capped at 20 facets.
    """
    m1 = p.num_facets
    if m1 > 20:
        raise ValueError("faces_bruteforce is capped at 20 facets")
    require_valid(p)
    keys = []
    for size in range(1, m1 + 1):
        keys.extend(combinations(range(m1), size))
    faces = []
    for key in keys:
        witness = strict_face_witness(p, key)
        if witness is not None:
            faces.append(DualFace(tuple(key), witness))
    return tuple(faces)


def grid(radius: Fraction, steps: int, dim: int):
    """The rational grid {-r + 2ri/steps : i = 0..steps}^dim."""
    radius = Fraction(radius)
    axis = [(-radius + Fraction(2 * i, steps) * radius) for i in range(steps + 1)]
    return product(axis, repeat=dim)


def horofunction_grid_compare(
    h1: Horofunction, h2: Horofunction, radius, steps: int
) -> Fraction:
    """Maximum exact |h1(u) - h2(u)| over the grid; 0 for equal points."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if h1.polytope != h2.polytope:
        raise ValueError("horofunctions from different polytopes")
    best = Fraction(0)
    for u in grid(Fraction(radius), steps, h1.polytope.dim):
        diff = abs(evaluate(h1, u) - evaluate(h2, u))
        if diff > best:
            best = diff
    return best


def ray_sample_compare(
    p: Polytope, point, direction, t, radius, steps: int
) -> Fraction:
    """Max exact difference between the t-sample of the ray's normalized
    distance function and the claimed limit horofunction, over the grid."""
    point = vector(point)
    direction = vector(direction)
    if all(x == 0 for x in direction):
        raise ValueError("direction must be nonzero")
    t = Fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    limit = ray_limit(p, point, direction)
    base = vadd(point, vscale(t, direction))
    nu_base = norm(p, base)
    best = Fraction(0)
    for u in grid(Fraction(radius), steps, p.dim):
        sample = norm(p, vsub(base, u)) - nu_base
        diff = abs(sample - evaluate(limit, u))
        if diff > best:
            best = diff
    return best


def _random_rational(rng: random.Random, span: int = 6, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def _random_vector(rng: random.Random, dim: int, span: int = 6) -> Vector:
    return tuple(_random_rational(rng, span) for _ in range(dim))


def _random_nonzero(rng: random.Random, dim: int, span: int = 6) -> Vector:
    while True:
        v = _random_vector(rng, dim, span)
        if any(x != 0 for x in v):
            return v


SHIPPED = ("square", "cube3", "triangle", "hexagon", "pentagon")


def selftest(seed: int = 0, report: Optional[Callable[[str], None]] = print) -> bool:
    """Cross-validation battery over the shipped polytopes.

    Prints one pass/fail row per check and returns overall success.
    """
    rng = random.Random(seed)
    polytopes = [load_example(name) for name in SHIPPED]
    ok = True

    def row(name: str, passed: bool) -> None:
        nonlocal ok
        ok = ok and passed
        if report is not None:
            report(f"{'PASS' if passed else 'FAIL'}  {name}")

    for p in polytopes:
        fast = [f.members for f in enumerate_dual_faces(p)]
        slow = [f.members for f in faces_bruteforce(p)]
        row(f"dual faces match brute force ({p.name}, {len(slow)} faces)",
            fast == slow)

    agree = True
    for _ in range(20):
        p = polytopes[rng.randrange(len(polytopes))]
        point = _random_vector(rng, p.dim)
        direction = _random_nonzero(rng, p.dim)
        radius = Fraction(rng.randint(1, 2))
        t0 = ray_agreement_threshold(p, point, direction, 2 * radius)
        t = t0.numerator // t0.denominator + 1
        if ray_sample_compare(p, point, direction, t, radius, 4) != 0:
            agree = False
    row("ray samples equal limits beyond the threshold (20 draws)", agree)

    partition = True
    for _ in range(50):
        p = polytopes[rng.randrange(len(polytopes))]
        w = _random_nonzero(rng, p.dim)
        hits = [
            f.members
            for f in enumerate_dual_faces(p)
            if in_positive_cone(stratum_for(p, f.members), w)
        ]
        if hits != [active_face(p, w).members]:
            partition = False
    row("every direction lies in exactly one open cone (50 draws)", partition)

    return ok
