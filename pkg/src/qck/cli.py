"""Command-line front end.

Subcommands: check-potential, curvature, decompose, meridian {bochner,
const-hsc}, sasaki, verify.  JSON reports carry "schema_version": 1; the
meridian commands emit the 10-column CSV.  Exit codes: 0 all checks passed,
1 a check or domain/type constraint failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .ambient import admissibility, potential_metric, radial_frame, radial_unit_field
from .config import (RunConfig, apply_overrides, load_config, worker_count)
from .curvature import curvature_bundle, kahler_defect
from .errors import QckError
from .qch import build_basis_tensors, decompose, extract_shape_data
from .rotational import bochner_meridian, const_hsc_profile
from .sampling import radial_points
from .sasakian import family_h1_report, sphere_report
from .tensors import tensor4_fit
from .verify import SUITES, run_suite

SCHEMA_VERSION = 1

CSV_HEADER = "s,t,q,tp,tpp,a,b,c,k,a_plus_k2"


def _emit(obj, stream=None) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2), file=stream or sys.stdout)


def _pmap(fn, items):
    items = list(items)
    cap = worker_count()
    if cap <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(cap, len(items))) as pool:
        return list(pool.map(fn, items))


def _config_from_args(args) -> RunConfig:
    cfg = load_config(getattr(args, "config", None))
    potential = {}
    if getattr(args, "family", None):
        potential["kind"] = args.family
    if getattr(args, "a", None) is not None:
        potential["a"] = args.a
    if getattr(args, "r0", None) is not None:
        potential["r0"] = args.r0
    if getattr(args, "coeffs", None) is not None:
        potential["coeffs"] = [float(c) for c in args.coeffs.split(",")]
    points = {key: getattr(args, key, None)
              for key in ("count", "seed", "rmin", "rmax")}
    points = {k: v for k, v in points.items() if v is not None}
    return apply_overrides(cfg, n=getattr(args, "n", None),
                           space=getattr(args, "space", None),
                           potential=potential or None,
                           points=points or None)


def _points(cfg: RunConfig):
    space = cfg.ambient()
    if cfg.points.explicit is not None:
        pts = [np.asarray(p, float) for p in cfg.points.explicit]
        for p in pts:
            if p.shape != (space.dim,):
                raise ValueError(f"explicit point of length {len(p)} in a "
                                 f"{space.dim}-dimensional chart")
        return pts
    return radial_points(space, cfg.points.count, cfg.points.rmin,
                         cfg.points.rmax, seed=cfg.points.seed)


# -- subcommand bodies -----------------------------------------------------------


def cmd_check_potential(args) -> int:
    cfg = _config_from_args(args)
    space = cfg.ambient()
    family = cfg.family()
    metric = potential_metric(space, family, checked=False)
    xi_field = radial_unit_field(space, metric, "outward")
    pts = _points(cfg)

    def one(item):
        index, x = item
        w = float(space.square_norm(x))
        report = admissibility(space, family, w)
        entry = {"index": index, "point": [float(c) for c in x], "w": w,
                 "in_domain": bool(report.in_domain),
                 "admissible": bool(report.ok)}
        ok = report.ok
        try:
            bundle = curvature_bundle(metric, x)
            eigs = np.linalg.eigvalsh(bundle.G)
            kd = kahler_defect(metric, x)
            entry.update(min_eigenvalue=float(eigs.min()), kahler_defect=kd)
            checks = {"admissible": bool(report.ok),
                      "positive": bool(eigs.min() > 0),
                      "kahler": bool(kd < cfg.tolerance("kahler"))}
            frame = radial_frame(space, x, metric)
            basis = build_basis_tensors(bundle.G, bundle.J, frame)
            try:
                shape = extract_shape_data(metric, xi_field, x)
                dec = decompose(bundle, basis, shape)
                entry["decomposition"] = dec.to_json()
                residual = dec.residual
            except QckError as exc:
                # The shape frame need not exist (the sign-flipped flat form
                # has an indefinite complement, say) but the curvature fit
                # against the three structural tensors is still well posed.
                entry["shape_error"] = f"{type(exc).__name__}: {exc}"
                coeffs, residual = tensor4_fit(bundle.R, basis.fit_basis())
                entry["decomposition"] = {
                    "a": float(coeffs[0]), "b": float(coeffs[1]),
                    "c": float(coeffs[2]), "residual": residual}
            checks["residual"] = bool(residual < cfg.tolerance("residual"))
            entry["checks"] = checks
            ok = all(checks.values())
        except QckError as exc:
            entry["error"] = f"{type(exc).__name__}: {exc}"
            ok = False
        return entry, ok

    rows = _pmap(one, list(enumerate(pts)))
    entries = [row[0] for row in rows]
    all_ok = all(row[1] for row in rows)
    _emit({"schema_version": SCHEMA_VERSION, "command": "check-potential",
           "config": cfg.to_json(), "points": entries, "pass": all_ok})
    return 0 if all_ok else 1


def cmd_curvature(args) -> int:
    cfg = _config_from_args(args)
    space = cfg.ambient()
    family = cfg.family()
    metric = potential_metric(space, family)
    pts = _points(cfg)

    def one(item):
        index, x = item
        bundle = curvature_bundle(metric, x)
        frame = radial_frame(space, x, metric)
        scale = max(1.0, bundle.R.scale())
        return {"index": index, "point": [float(c) for c in x],
                "tau": bundle.scalar_curvature(),
                "sigma_radial": bundle.sigma_radial(frame.xi),
                "kappa_radial": bundle.kappa_radial(frame.xi),
                "hsc_radial": bundle.hsc(frame.xi),
                "symmetry_defect": bundle.R.curvature_symmetry_defect() / scale,
                "bianchi_defect": bundle.R.first_bianchi_defect() / scale}

    entries = _pmap(one, list(enumerate(pts)))
    _emit({"schema_version": SCHEMA_VERSION, "command": "curvature",
           "config": cfg.to_json(), "points": entries})
    return 0


def cmd_decompose(args) -> int:
    cfg = _config_from_args(args)
    space = cfg.ambient()
    family = cfg.family()
    metric = potential_metric(space, family)
    xi_field = radial_unit_field(space, metric, "outward")
    pts = _points(cfg)

    def one(item):
        index, x = item
        bundle = curvature_bundle(metric, x)
        frame = radial_frame(space, x, metric)
        shape = extract_shape_data(metric, xi_field, x)
        basis = build_basis_tensors(bundle.G, bundle.J, frame)
        dec = decompose(bundle, basis, shape)
        entry = {"index": index, "point": [float(c) for c in x],
                 "decomposition": dec.to_json()}
        return entry, dec.residual < cfg.tolerance("residual")

    rows = _pmap(one, list(enumerate(pts)))
    all_ok = all(row[1] for row in rows)
    _emit({"schema_version": SCHEMA_VERSION, "command": "decompose",
           "config": cfg.to_json(), "points": [row[0] for row in rows],
           "pass": all_ok})
    return 0 if all_ok else 1


def cmd_meridian(args) -> int:
    if args.profile == "bochner":
        profile = bochner_meridian(args.c1, args.c2, args.t0, args.t1,
                                   rotation_type=args.type,
                                   steps=max(args.steps, 33),
                                   flip_q=args.flip_q)
    else:
        profile = const_hsc_profile(args.type, args.a, args.t0, args.t1,
                                    steps=max(args.steps, 33),
                                    flip_q=args.flip_q)
    print(CSV_HEADER)
    for row in profile.rows(args.steps):
        print(",".join(f"{v:.17g}" for v in row))
    return 0


def cmd_sasaki(args) -> int:
    if args.family_h1:
        report = family_h1_report(args.n or 2, args.q, seed=args.seed or 0)
    else:
        if args.r is None:
            raise ValueError("sasaki needs --r RADIUS (or --family-h1 --q Q)")
        cfg = _config_from_args(args)
        report = sphere_report(cfg.ambient(), cfg.family(), args.r,
                               seed=cfg.points.seed,
                               orientation=args.orientation)
    out = {"schema_version": SCHEMA_VERSION, "command": "sasaki"}
    out.update(report.to_json())
    _emit(out)
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite)
    all_ok = all(r.passed for r in results)
    if args.json:
        _emit({"schema_version": SCHEMA_VERSION, "command": "verify",
               "suite": args.suite, "pass": all_ok,
               "results": [r.to_json() for r in results]})
    else:
        for r in results:
            mark = "PASS" if r.passed else "FAIL"
            print(f"criterion {r.number:2d}  {r.name:<28s} {mark} "
                  f"({r.elapsed:6.2f}s / {r.budget:.0f}s budget)")
            for msg in r.failures:
                print(f"    - {msg}")
        total = sum(r.elapsed for r in results)
        passed = sum(1 for r in results if r.passed)
        print(f"{passed}/{len(results)} criteria passed in {total:.1f}s")
    return 0 if all_ok else 1


# -- parser ----------------------------------------------------------------------


def _add_common(sub) -> None:
    sub.add_argument("--config", help="JSON config file; flags override it")
    sub.add_argument("--n", type=int, help="complex dimension (default 2)")
    sub.add_argument("--space", choices=("definite", "lorentz"))
    sub.add_argument("--family", choices=("log", "dlog", "inverse", "series"))
    sub.add_argument("--a", type=float, help="family parameter a")
    sub.add_argument("--r0", type=float, help="family parameter r0")
    sub.add_argument("--coeffs", help="series coefficients, comma separated")
    sub.add_argument("--count", type=int, help="sample point count")
    sub.add_argument("--seed", type=int, help="sampling seed")
    sub.add_argument("--rmin", type=float, help="smallest sample radius")
    sub.add_argument("--rmax", type=float, help="largest sample radius")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qck",
        description="Curvature models generated by radial potentials: "
                    "decompositions, hypersphere structures, and rotational "
                    "meridians.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-potential",
                       help="admissibility, positivity and decomposition "
                            "checks at sample points")
    _add_common(p)
    p.set_defaults(func=cmd_check_potential)

    p = sub.add_parser("curvature", help="curvature invariants at sample points")
    _add_common(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("decompose",
                       help="coefficients of the curvature tensor against "
                            "the structural basis")
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("meridian", help="meridian profile tables (CSV)")
    msub = p.add_subparsers(dest="profile", required=True)
    b = msub.add_parser("bochner", help="profiles with t' = c1 t^4 + c2 t^2 + 1")
    b.add_argument("--type", choices=("I", "II", "III"), default="II")
    b.add_argument("--c1", type=float, required=True)
    b.add_argument("--c2", type=float, required=True)
    b.add_argument("--t0", type=float, required=True)
    b.add_argument("--t1", type=float, required=True)
    b.add_argument("--steps", type=int, default=129)
    b.add_argument("--flip-q", action="store_true", dest="flip_q")
    b.set_defaults(func=cmd_meridian)
    c = msub.add_parser("const-hsc",
                        help="profiles of constant holomorphic curvature a < 0")
    c.add_argument("--type", choices=("I", "II", "III"), default="II")
    c.add_argument("--a", type=float, required=True)
    c.add_argument("--t0", type=float, required=True)
    c.add_argument("--t1", type=float, required=True)
    c.add_argument("--steps", type=int, default=129)
    c.add_argument("--flip-q", action="store_true", dest="flip_q")
    c.set_defaults(func=cmd_meridian)

    p = sub.add_parser("sasaki",
                       help="induced contact structure reports on hyperspheres")
    _add_common(p)
    p.add_argument("--r", type=float, help="hypersphere radius")
    p.add_argument("--orientation", choices=("auto", "outward", "inward"),
                   default="auto")
    p.add_argument("--family-h1", action="store_true", dest="family_h1",
                   help="deformed unit-sphere family instead of a potential "
                        "metric sphere")
    p.add_argument("--q", type=float, default=1.0,
                   help="deformation parameter for --family-h1")
    p.set_defaults(func=cmd_sasaki)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", choices=tuple(sorted(SUITES)), default="all")
    p.add_argument("--json", action="store_true",
                   help="machine-readable results")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except QckError as exc:
        _emit({"schema_version": SCHEMA_VERSION,
               "error": type(exc).__name__, "message": str(exc)})
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
