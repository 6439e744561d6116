"""Exact rational linear algebra and linear programming.

Everything in this module works over ``fractions.Fraction``: vectors and
covectors are plain tuples of rationals, matrices are tuples of row vectors,
and all decisions (rank, membership, feasibility, optimality) are exact.
Floating point never enters here; callers that need floats convert at their
own boundary.

The linear program solver is a dense two-phase simplex with Bland's
anti-cycling rule.  It is deterministic for a fixed constraint order and is
meant for desk-scale problems (dimension <= 8, a few dozen constraints), not
for industrial LP work.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Optional, Sequence, Tuple

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class ParseError(ValueError):
    """Malformed external input (rational strings, JSON shapes)."""


def parse_rational(token: str) -> Fraction:
    """Parse 'p', '-p' or 'p/q' into a Fraction; reject anything else."""
    if not isinstance(token, str) or not _RATIONAL_RE.match(token):
        raise ParseError(f"malformed rational string: {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in rational string: {token!r}") from None


def format_rational(x: Fraction) -> str:
    """Render a Fraction as 'p' or 'p/q'."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vector(entries: Iterable) -> Vector:
    """Coerce an iterable of ints/Fractions/strings into an exact vector."""
    out = []
    for e in entries:
        if isinstance(e, str):
            out.append(parse_rational(e))
        else:
            out.append(Fraction(e))
    return tuple(out)


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Vector) -> Vector:
    c = Fraction(c)
    return tuple(c * a for a in u)


def dot(u: Vector, v: Vector) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def is_zero(u: Vector) -> bool:
    return all(a == 0 for a in u)


def zero_vector(d: int) -> Vector:
    return (Fraction(0),) * d


def norm_sq(u: Vector) -> Fraction:
    return dot(u, u)


def sqrt_upper(x: Fraction) -> Fraction:
    """Smallest-effort rational upper bound s with s*s >= x (x >= 0)."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt_upper of a negative rational")
    p, q = x.numerator, x.denominator
    r = isqrt(p * q)
    if r * r < p * q:
        r += 1
    return Fraction(r, q)


def sqrt_lower(x: Fraction) -> Fraction:
    """Rational lower bound s >= 0 with s*s <= x (x >= 0)."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt_lower of a negative rational")
    p, q = x.numerator, x.denominator
    return Fraction(isqrt(p * q), q)


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c]
        rows[r] = [v / inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


@dataclass(frozen=True)
class Subspace:
    """A linear subspace given by a canonical (RREF) basis.

    The basis rows are in reduced row echelon form, which makes the
    representation unique per subspace: two Subspace objects are equal iff
    they describe the same set of points.
    """

    ambient_dim: int
    basis: Matrix

    @staticmethod
    def span(vectors: Sequence[Vector], ambient_dim: int) -> "Subspace":
        rows = [list(v) for v in vectors if not is_zero(v)]
        for v in rows:
            if len(v) != ambient_dim:
                raise ValueError("spanning vector has wrong dimension")
        if not rows:
            return Subspace(ambient_dim, ())
        rows, pivots = _rref(rows)
        basis = tuple(tuple(row) for row in rows[: len(pivots)])
        return Subspace(ambient_dim, basis)

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        eye = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(ambient_dim))
            for i in range(ambient_dim)
        )
        return Subspace(ambient_dim, eye)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Vector) -> bool:
        """Exact membership test by reduction against the RREF basis."""
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch in Subspace.contains")
        residual = list(v)
        for row in self.basis:
            lead = next(i for i, x in enumerate(row) if x != 0)
            if residual[lead] != 0:
                f = residual[lead]
                residual = [a - f * b for a, b in zip(residual, row)]
        return all(a == 0 for a in residual)

    def project(self, v: Vector) -> Vector:
        """Euclidean orthogonal projection of v onto this subspace (exact)."""
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch in Subspace.project")
        if not self.basis:
            return zero_vector(self.ambient_dim)
        # Solve the Gram system G c = B v; the basis is independent, so the
        # Gram matrix is invertible and the solution is unique.
        gram = [[dot(a, b) for b in self.basis] for a in self.basis]
        rhs = [dot(a, v) for a in self.basis]
        sol = solve_linear_system(tuple(tuple(r) for r in gram), tuple(rhs))
        assert sol is not None
        coeffs, _ = sol
        out = zero_vector(self.ambient_dim)
        for c, b in zip(coeffs, self.basis):
            out = vadd(out, vscale(c, b))
        return out


def solve_linear_system(
    a: Sequence[Sequence], b: Sequence
) -> Optional[tuple[Vector, Subspace]]:
    """Solve A x = b exactly.

    Returns None when the system is inconsistent, otherwise a particular
    solution (free variables set to zero) together with the kernel of A as a
    Subspace.
    """
    rows = [vector(r) for r in a]
    rhs = vector(b)
    if len(rows) != len(rhs):
        raise ValueError("matrix/vector dimension mismatch")
    if not rows:
        raise ValueError("empty linear system")
    ncols = len(rows[0])
    for r in rows:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    aug, pivots = _rref(aug)
    # Inconsistency: a pivot in the augmented column.
    if ncols in pivots:
        return None
    part = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        part[c] = aug[i][ncols]
    free_cols = [c for c in range(ncols) if c not in pivots]
    kernel_basis = []
    for fc in free_cols:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -aug[i][fc]
        kernel_basis.append(tuple(v))
    return tuple(part), Subspace.span(kernel_basis, ncols)


def kernel(rows: Sequence[Sequence], ambient_dim: int) -> Subspace:
    """Kernel of the linear map defined by the given covector rows."""
    rows = [vector(r) for r in rows]
    for r in rows:
        if len(r) != ambient_dim:
            raise ValueError("covector has wrong dimension")
    if not rows:
        return Subspace.full(ambient_dim)
    sol = solve_linear_system(rows, [0] * len(rows))
    assert sol is not None
    return sol[1]


def orthogonal_complement_within(s: Subspace, ambient: Subspace) -> Subspace:
    """The T with T + S = ambient, T ⊥ S (standard inner product).

    Raises ValueError when S is not contained in ambient.
    """
    if s.ambient_dim != ambient.ambient_dim:
        raise ValueError("mismatched ambient dimensions")
    for v in s.basis:
        if not ambient.contains(v):
            raise ValueError("subspace is not contained in the ambient space")
    if not ambient.basis:
        return Subspace.zero(ambient.ambient_dim)
    if not s.basis:
        return ambient
    # Coefficients c (w.r.t. the ambient basis) of vectors orthogonal to S:
    # the kernel of the |S| x |ambient| matrix of pairwise inner products.
    inner = [
        tuple(dot(sv, av) for av in ambient.basis) for sv in s.basis
    ]
    coeff_kernel = kernel(inner, len(ambient.basis))
    vectors = []
    for coeffs in coeff_kernel.basis:
        v = zero_vector(ambient.ambient_dim)
        for c, av in zip(coeffs, ambient.basis):
            v = vadd(v, vscale(c, av))
        vectors.append(v)
    return Subspace.span(vectors, ambient.ambient_dim)


@dataclass(frozen=True)
class LPResult:
    """Outcome of an exact LP: status, optimum and an exact witness.

    status is one of 'optimal', 'infeasible', 'unbounded'.  For 'optimal' the
    witness attains the optimum and satisfies every constraint exactly; for
    'unbounded' the witness is a ray direction along which the objective
    increases without bound while staying feasible.
    """

    status: str
    optimum: Optional[Fraction] = None
    witness: Optional[Vector] = None


_LEQ = "<="
_EQ = "="


def lp_maximize(
    objective: Sequence,
    constraints: Sequence[tuple],
) -> LPResult:
    """Maximize objective . x over {x : constraints}, x free, exactly.

    Each constraint is (covector, relation, rhs) with relation '<=' or '='.
    Deterministic for a fixed input order (Bland's rule throughout).
    """
    c_obj = vector(objective)
    n = len(c_obj)
    parsed = []
    for row, rel, rhs in constraints:
        row = vector(row)
        if len(row) != n:
            raise ValueError("constraint dimension mismatch")
        if rel not in (_LEQ, _EQ):
            raise ValueError(f"unknown relation {rel!r}")
        parsed.append((row, rel, Fraction(rhs)))

    nslack = sum(1 for _, rel, _ in parsed if rel == _LEQ)
    nvars = 2 * n + nslack  # x+ , x- , slacks
    rows: list[list[Fraction]] = []
    rhs_col: list[Fraction] = []
    si = 0
    for row, rel, rhs in parsed:
        r = [Fraction(0)] * nvars
        for i, a in enumerate(row):
            r[2 * i] = a
            r[2 * i + 1] = -a
        if rel == _LEQ:
            r[2 * n + si] = Fraction(1)
            si += 1
        if rhs < 0:
            r = [-v for v in r]
            rhs = -rhs
        rows.append(r)
        rhs_col.append(rhs)

    m = len(rows)
    if m == 0:
        # No constraints: any nonzero objective is unbounded.
        if is_zero(c_obj):
            return LPResult("optimal", Fraction(0), zero_vector(n))
        ray = tuple(
            Fraction(1) if c > 0 else (Fraction(-1) if c < 0 else Fraction(0))
            for c in c_obj
        )
        return LPResult("unbounded", None, ray)

    # Phase 1: artificial basis, maximize -(sum of artificials).
    total = nvars + m
    tab = [rows[i] + [Fraction(0)] * m + [rhs_col[i]] for i in range(m)]
    for i in range(m):
        tab[i][nvars + i] = Fraction(1)
    basis = [nvars + i for i in range(m)]
    obj1 = [Fraction(0)] * (total + 1)
    for j in range(nvars, total):
        obj1[j] = Fraction(-1)
    for i in range(m):
        # zero out the reduced costs of the basic artificials
        obj1 = [o + t for o, t in zip(obj1, tab[i])]
    status = _simplex(tab, obj1, basis, total)
    assert status == "optimal"  # phase 1 is always bounded
    if obj1[-1] != 0:  # optimum = -obj1[-1] < 0: infeasible
        return LPResult("infeasible")

    # Drive any remaining artificials out of the basis, dropping redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= nvars:
            piv = next((j for j in range(nvars) if tab[i][j] != 0), None)
            if piv is None:
                continue  # redundant row
            _pivot(tab, obj1, basis, i, piv)
        keep.append(i)
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]

    # Phase 2: real objective over the split variables, artificials removed.
    tab = [row[:nvars] + [row[-1]] for row in tab]
    cost = [Fraction(0)] * (nvars + 1)
    for i, a in enumerate(c_obj):
        cost[2 * i] = a
        cost[2 * i + 1] = -a
    obj2 = list(cost)
    for i, b in enumerate(basis):
        if obj2[b] != 0:
            f = obj2[b]
            obj2 = [o - f * t for o, t in zip(obj2, tab[i])]
    status = _simplex(tab, obj2, basis, nvars)
    if status == "unbounded":
        entering = _entering_col(obj2, nvars)
        d = [Fraction(0)] * nvars
        d[entering] = Fraction(1)
        for i, b in enumerate(basis):
            d[b] = -tab[i][entering]
        ray = tuple(d[2 * i] - d[2 * i + 1] for i in range(n))
        return LPResult("unbounded", None, ray)
    x = [Fraction(0)] * nvars
    for i, b in enumerate(basis):
        x[b] = tab[i][-1]
    witness = tuple(x[2 * i] - x[2 * i + 1] for i in range(n))
    return LPResult("optimal", -obj2[-1], witness)


def _entering_col(obj: list[Fraction], ncols: int) -> Optional[int]:
    for j in range(ncols):
        if obj[j] > 0:
            return j
    return None


def _pivot(tab, obj, basis, r, c) -> None:
    piv = tab[r][c]
    tab[r] = [v / piv for v in tab[r]]
    for i in range(len(tab)):
        if i != r and tab[i][c] != 0:
            f = tab[i][c]
            tab[i] = [v - f * w for v, w in zip(tab[i], tab[r])]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [v - f * w for v, w in zip(obj, tab[r])]
    basis[r] = c


def _simplex(tab, obj, basis, ncols) -> str:
    """Run the simplex loop with Bland's rule; 'optimal' or 'unbounded'."""
    while True:
        entering = _entering_col(obj, ncols)
        if entering is None:
            return "optimal"
        leaving = None
        best = None
        for i in range(len(tab)):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leaving]
                ):
                    best = ratio
                    leaving = i
        if leaving is None:
            return "unbounded"
        _pivot(tab, obj, basis, leaving, entering)
