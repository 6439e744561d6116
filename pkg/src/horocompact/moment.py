"""The moment map onto the dual polytope and its calculus.

For a facet subset L and a point p, the weights exp(xi_k(p)), k in L,
normalized to sum 1, average the facet functionals into

    c_L(p) = sum_k w_k(p) xi_k   in   V^dual,

the gradient of the log-partition f_L(p) = log sum_k exp(xi_k(p)).  Applied
to canonical representatives this realizes the homeomorphism from the
compactification onto the dual polytope: interior points map through the full
index set, boundary points through their face.  The Hessian of f_L is the
softmax covariance of the xi_k; its kernel is exactly the stabilizer H_L,
which is what makes Newton inversion on the interior well-posed.

This is the only module that computes in floating point: exponentials leave
the rational field.  Rational data is converted at the call boundary and all
sums are log-sum-exp shifted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .horofunction import Horofunction, ray_limit
from .polytope import Polytope, require_valid
from .strata import FaceKey, dual_face


@dataclass(frozen=True)
class MomentPoint:
    """Image of a compactification point: float covector + its open face.

    face_hint is None when the point came from the interior stratum (the
    open face is then the whole dual polytope's interior)."""

    coords: Tuple[float, ...]
    face_hint: Optional[FaceKey]


@lru_cache(maxsize=None)
def _xi_array(p: Polytope) -> np.ndarray:
    arr = np.array([[float(x) for x in xi] for xi in p.facets], dtype=float)
    arr.setflags(write=False)
    return arr


def _resolve(p: Polytope, members: Optional[Iterable[int]]) -> Tuple[int, ...]:
    """Normalize a face argument: None means the full index set K."""
    if members is None:
        return tuple(range(p.num_facets))
    key = tuple(sorted(set(members)))
    if not key:
        raise ValueError("the facet subset must be nonempty")
    if key != tuple(range(p.num_facets)):
        dual_face(p, key)  # must be an actual dual face
    return key


def _weights(p: Polytope, key: Tuple[int, ...], point: np.ndarray) -> np.ndarray:
    xi = _xi_array(p)[list(key)]
    z = xi @ point
    z = z - z.max()
    w = np.exp(z)
    return w / w.sum()


def softmax_average(
    p: Polytope, members: Optional[Iterable[int]], point: Sequence[float]
) -> np.ndarray:
    """c_L(p): the softmax-weighted average of the facet functionals."""
    require_valid(p)
    key = _resolve(p, members)
    point = np.asarray(point, dtype=float)
    if point.shape != (p.dim,):
        raise ValueError("dimension mismatch in softmax_average")
    w = _weights(p, key, point)
    return w @ _xi_array(p)[list(key)]


def moment(p: Polytope, h: Horofunction) -> MomentPoint:
    """The moment map applied to a compactification point.

    Interior points go through the full index set, boundary points through
    their dual face, evaluated at the canonical representative.  The output
    weights are strictly positive, so the image lies in the open face of the
    dual polytope spanned by the active functionals.
    """
    if h.polytope != p:
        raise ValueError("horofunction belongs to a different polytope")
    point = [float(x) for x in h.rep]
    c = softmax_average(p, h.stratum, point)
    return MomentPoint(tuple(float(v) for v in c), h.stratum)


def log_partition(
    p: Polytope, members: Optional[Iterable[int]], point: Sequence[float]
) -> float:
    """f_L(p) = log sum_{k in L} exp(xi_k(p)), log-sum-exp shifted.

    Its gradient is the softmax average c_L(p); for a singleton L this
    degenerates to the linear function xi_k(p).
    """
    require_valid(p)
    key = _resolve(p, members)
    point = np.asarray(point, dtype=float)
    z = _xi_array(p)[list(key)] @ point
    m = z.max()
    return float(m + np.log(np.exp(z - m).sum()))


def hessian(
    p: Polytope, members: Optional[Iterable[int]], point: Sequence[float]
) -> np.ndarray:
    """Hessian of f_L at the point: the softmax covariance of the xi_k.

    Equals sum_k w_k xi_k xi_k^T - c c^T; positive semidefinite with kernel
    exactly H_L, hence positive definite on the complement W_L.
    """
    require_valid(p)
    key = _resolve(p, members)
    point = np.asarray(point, dtype=float)
    xi = _xi_array(p)[list(key)]
    w = _weights(p, key, point)
    c = w @ xi
    return (xi * w[:, None]).T @ xi - np.outer(c, c)


def invert_interior(
    p: Polytope, target, tol: float = 1e-12, max_iter: int = 200
) -> Tuple[float, ...]:
    """Invert the interior moment map: find x with |c_K(x) - target| <= tol.

    Minimizes the convex potential f_K(x) - <target, x> by damped Newton
    iteration: backtracking (Armijo) line search far from the optimum, full
    steps once the gradient is small, ridge regularization when the Hessian
    is near-singular.  The target must lie strictly inside the open face of
    the dual polytope; non-convergence within the iteration cap signals a
    target too close to the boundary for the requested tolerance.

    Raises
    ------
    RuntimeError
        when the residual does not reach tol within max_iter iterations.
    """
    require_valid(p)
    t = np.asarray(
        target.coords if isinstance(target, MomentPoint) else target, dtype=float
    )
    if t.shape != (p.dim,):
        raise ValueError("dimension mismatch in invert_interior")
    x = np.zeros(p.dim)

    def potential(y: np.ndarray) -> float:
        return log_partition(p, None, y) - float(t @ y)

    for _ in range(max_iter):
        grad = softmax_average(p, None, x) - t
        res = float(np.linalg.norm(grad))
        if res <= tol:
            return tuple(float(v) for v in x)
        hess = hessian(p, None, x)
        if np.linalg.cond(hess) > 1e12:
            hess = hess + 1e-12 * np.eye(p.dim)
        step = np.linalg.solve(hess, -grad)
        if res > 1e-6:
            # Armijo backtracking on the convex potential.
            f0 = potential(x)
            slope = float(grad @ step)
            s = 1.0
            while s > 2.0 ** -40 and potential(x + s * step) > f0 + 1e-4 * s * slope:
                s *= 0.5
            x = x + s * step
        else:
            # Close to the optimum the full Newton step is reliable and the
            # potential differences drown in rounding noise.
            x = x + step
    raise RuntimeError(
        "Newton inversion did not converge: target too close to the "
        "boundary of the dual polytope for the requested tolerance."
    )


def boundary_continuity_check(
    p: Polytope, point: Sequence, direction: Sequence, t_list: Sequence[float]
) -> list[float]:
    """Distances |c_K(p + t w) - moment(ray limit)| for each t.

    Checks continuity of the moment map along a ray: the interior images must
    approach the image of the ray's boundary limit (off-face weights decay
    exponentially in t).
    """
    from .geometry import vector

    pt = np.array([float(x) for x in vector(point)])
    w = np.array([float(x) for x in vector(direction)])
    if not w.any():
        raise ValueError("direction must be nonzero")
    limit = np.asarray(moment(p, ray_limit(p, point, direction)).coords)
    out = []
    for t in t_list:
        c = softmax_average(p, None, pt + float(t) * w)
        out.append(float(np.linalg.norm(c - limit)))
    return out
