"""Command-line surface: batch queries over a polytope JSON file.

Every subcommand reads the unit ball from --polytope FILE and prints a
deterministic payload: compact JSON by default, DOT for `poset --dot`, CSV
for `moment-grid`.  Exit codes: 0 success, 1 domain error (invalid polytope,
not a dual face, …), 2 I/O or parse error (missing file, malformed rational,
bad JSON, unknown flags via argparse).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .geometry import ParseError, format_rational, parse_rational, vector
from .horofunction import (
    Neighborhood,
    classify_tail,
    equal,
    evaluate,
    horofunction_from_json,
    horofunction_to_json,
    neighborhood_contains,
    ray_limit,
)
from .moment import moment, softmax_average
from .oracle import selftest
from .polytope import (
    Polytope,
    norm,
    partial_norm,
    polytope_from_json,
    validate,
)
from .strata import closure_poset, enumerate_dual_faces, stratum_for


def _emit(obj) -> None:
    print(json.dumps(obj, separators=(",", ":")))


def _load_polytope(path: str) -> Polytope:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read polytope file {path!r}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise ParseError(f"polytope file {path!r} is not valid JSON: {e}")
    return polytope_from_json(raw)


def _parse_point(text: str, dim: int, flag: str):
    parts = text.split(",")
    point = tuple(parse_rational(tok.strip()) for tok in parts)
    if len(point) != dim:
        raise ValueError(
            f"{flag} needs {dim} comma-separated rationals, got {len(point)}"
        )
    return point


def _parse_members(text: str):
    if text.strip() == "interior":
        return None
    try:
        return tuple(int(tok.strip()) for tok in text.split(","))
    except ValueError:
        raise ParseError(f"malformed face index list: {text!r}")


def _parse_horo(p: Polytope, text: str):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"horofunction argument is not valid JSON: {e}")
    return horofunction_from_json(p, raw)


def _stratum_payload(p: Polytope, members) -> dict:
    s = stratum_for(p, members)
    rows = lambda vs: [[format_rational(x) for x in v] for v in vs]
    return {
        "stratum": "interior" if s.is_interior else list(s.members),
        "dim_H": s.H.dim,
        "dim_W": s.W.dim,
        "H_basis": rows(s.H.basis),
        "W_basis": rows(s.W.basis),
        "eta": [format_rational(x) for x in s.eta],
        "cone_generators": rows(s.cone_generators),
        "cone_inequalities": rows(s.cone_closure),
    }


def _cmd_validate(p: Polytope, args) -> int:
    report = validate(p)
    _emit({"name": p.name or "", "valid": report.valid, "reason": report.reason})
    return 0 if report.valid else 1


def _cmd_norm(p: Polytope, args) -> int:
    u = _parse_point(args.u, p.dim, "--u")
    if args.L is not None:
        members = _parse_members(args.L)
        if members is None:
            _emit({"norm": format_rational(norm(p, u))})
        else:
            _emit({"partial_norm": format_rational(partial_norm(p, members, u)),
                   "L": list(members)})
    else:
        _emit({"norm": format_rational(norm(p, u))})
    return 0


def _cmd_faces(p: Polytope, args) -> int:
    faces = enumerate_dual_faces(p)
    _emit(
        {
            "count": len(faces),
            "faces": [
                {
                    "members": list(f.members),
                    "witness": [format_rational(x) for x in f.witness],
                }
                for f in faces
            ],
        }
    )
    return 0


def _cmd_stratum_info(p: Polytope, args) -> int:
    _emit(_stratum_payload(p, _parse_members(args.L)))
    return 0


def _cmd_horo_eval(p: Polytope, args) -> int:
    h = _parse_horo(p, args.horo)
    u = _parse_point(args.u, p.dim, "--u")
    _emit({"value": format_rational(evaluate(h, u))})
    return 0


def _cmd_horo_eq(p: Polytope, args) -> int:
    h1 = _parse_horo(p, args.h1)
    h2 = _parse_horo(p, args.h2)
    _emit({"equal": equal(h1, h2)})
    return 0


def _cmd_ray_limit(p: Polytope, args) -> int:
    point = _parse_point(args.p, p.dim, "--p")
    direction = _parse_point(args.w, p.dim, "--w")
    _emit(horofunction_to_json(ray_limit(p, point, direction)))
    return 0


def _cmd_seq_classify(p: Polytope, args) -> int:
    try:
        with open(args.points) as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read points file {args.points!r}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise ParseError(f"points file {args.points!r} is not valid JSON: {e}")
    if not isinstance(raw, list):
        raise ParseError("points file must hold a JSON list of points")
    points = [vector(row) for row in raw]
    h = classify_tail(p, points, args.window)
    _emit({"limit": None if h is None else horofunction_to_json(h)})
    return 0


def _cmd_nbhd_member(p: Polytope, args) -> int:
    members = _parse_members(args.L)
    eps = parse_rational(args.eps)
    q = _parse_point(args.q, p.dim, "--q")
    n = Neighborhood(p, members, eps, q)
    h = _parse_horo(p, args.horo)
    _emit({"member": neighborhood_contains(n, h)})
    return 0


def _cmd_moment(p: Polytope, args) -> int:
    h = _parse_horo(p, args.horo)
    mp = moment(p, h)
    _emit(
        {
            "coords": list(mp.coords),
            "face": "interior" if mp.face_hint is None else list(mp.face_hint),
        }
    )
    return 0


def _cmd_moment_grid(p: Polytope, args) -> int:
    members = _parse_members(args.stratum)
    if members is not None:
        stratum_for(p, members)  # validates L
    r = float(parse_rational(args.range))
    if r <= 0:
        raise ValueError("--range must be positive")
    steps = args.steps
    if steps < 1:
        raise ValueError("--steps must be at least 1")
    axis = [-r + 2 * r * i / steps for i in range(steps + 1)]
    header = [f"p_{i+1}" for i in range(p.dim)] + [f"c_{i+1}" for i in range(p.dim)]
    print(",".join(header))
    for pt in product(axis, repeat=p.dim):
        c = softmax_average(p, members, pt)
        print(",".join(repr(v) for v in list(pt) + [float(x) for x in c]))
    return 0


def _cmd_poset(p: Polytope, args) -> int:
    poset = closure_poset(p)
    if args.dot:
        print(poset.to_dot())
        return 0
    node_json = lambda n: "interior" if n is None else list(n)
    _emit(
        {
            "nodes": [node_json(n) for n in poset.nodes],
            "edges": [
                [node_json(a), node_json(b)] for a, b in poset.covering_edges()
            ],
        }
    )
    return 0


def _cmd_oracle(p: Polytope, args) -> int:
    if args.battery != "selftest":
        raise ValueError(f"unknown oracle battery {args.battery!r}")
    ok = True
    if p.num_facets <= 20:
        from .oracle import faces_bruteforce

        fast = [f.members for f in enumerate_dual_faces(p)]
        slow = [f.members for f in faces_bruteforce(p)]
        match = fast == slow
        ok = ok and match
        print(f"{'PASS' if match else 'FAIL'}  dual faces match brute force "
              f"({p.name or 'input polytope'}, {len(slow)} faces)")
    ok = selftest(seed=args.seed) and ok
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horocompact",
        description="Exact queries on the horofunction compactification "
        "of a polyhedral asymmetric norm.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, handler, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--polytope", required=True, metavar="FILE",
                        help="polytope JSON file")
        sp.set_defaults(handler=handler)
        return sp

    cmd("validate", _cmd_validate, "check boundedness and irredundancy")

    sp = cmd("norm", _cmd_norm, "evaluate the norm (or a partial norm)")
    sp.add_argument("--u", required=True, help="point, comma-separated rationals")
    sp.add_argument("--L", help="optional facet subset for a partial norm")

    cmd("faces", _cmd_faces, "enumerate the dual faces with witnesses")

    sp = cmd("stratum-info", _cmd_stratum_info, "subspaces and cones of a stratum")
    sp.add_argument("--L", required=True,
                    help="face indices like 0,2 or the word 'interior'")

    sp = cmd("horo-eval", _cmd_horo_eval, "evaluate a horofunction exactly")
    sp.add_argument("--horo", required=True, help="horofunction JSON")
    sp.add_argument("--u", required=True, help="point, comma-separated rationals")

    sp = cmd("horo-eq", _cmd_horo_eq, "compare two compactification points")
    sp.add_argument("--h1", required=True, help="horofunction JSON")
    sp.add_argument("--h2", required=True, help="horofunction JSON")

    sp = cmd("ray-limit", _cmd_ray_limit, "limit of a ray p + t*w")
    sp.add_argument("--p", required=True, help="base point")
    sp.add_argument("--w", required=True, help="direction")

    sp = cmd("seq-classify", _cmd_seq_classify,
             "classify the tail of a sampled sequence")
    sp.add_argument("--points", required=True, metavar="FILE",
                    help="JSON file: list of points")
    sp.add_argument("--window", required=True, type=int)

    sp = cmd("nbhd-member", _cmd_nbhd_member,
             "membership in a basic neighborhood U(L, eps, q)")
    sp.add_argument("--L", required=True,
                    help="face indices like 0,2 or the word 'interior'")
    sp.add_argument("--eps", required=True, help="radius, a positive rational")
    sp.add_argument("--q", required=True, help="corner point")
    sp.add_argument("--horo", required=True, help="horofunction JSON")

    sp = cmd("moment", _cmd_moment, "image of a point under the moment map")
    sp.add_argument("--horo", required=True, help="horofunction JSON")

    sp = cmd("moment-grid", _cmd_moment_grid,
             "CSV sweep of the moment map over a coordinate grid")
    sp.add_argument("--stratum", default="interior",
                    help="face indices like 0,2 or the word 'interior'")
    sp.add_argument("--range", required=True, help="half-width of the grid")
    sp.add_argument("--steps", required=True, type=int)

    sp = cmd("poset", _cmd_poset, "closure poset of the strata")
    sp.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")

    sp = cmd("oracle", _cmd_oracle, "run a brute-force validation battery")
    sp.add_argument("battery", choices=["selftest"])
    sp.add_argument("--seed", type=int, default=0)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        polytope = _load_polytope(args.polytope)
        return args.handler(polytope, args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
