"""Command-line front end: ``fourmean <subcommand> [options]``.

Every subcommand writes JSON (or CSV for singular fields) with an embedded
run manifest.  Exit codes: 0 success, 1 usage or input error, 2 a failed
check, 3 a signature mismatch in ``means-check``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import report
from .extremal import (SearchConfig, brute_force_max, extremal_max, verify_f_lemma,
                       verify_g_lemma)
from .extremal.lemmas import MIN_G_MESH
from .linalg import Polynomial
from .pseudospectra import (SUPER_TOL, GridSpec, default_poly_battery, eps_contour_export,
                            fr_pair, fr_square_ratios, mean_identities_check,
                            norm_bound_check, similarity_cond_lower_bound, singular_field,
                            super_identical_check)
from .tuples import (DEFAULT_TOL, VIOLATED, DimensionMismatch,
                     SignatureMismatch, bound_check)

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list:
    try:
        return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _angle(text: str) -> float:
    """A float, or an expression in ``pi`` such as ``pi/4``."""
    t = text.strip().lower()
    try:
        if "pi" in t:
            num, _, den = t.partition("/")
            mult = num.replace("pi", "").replace("*", "").strip()
            val = (float(mult) if mult else 1.0) * math.pi
            return val / float(den) if den else val
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")


def _angles(text: str) -> list:
    return [_angle(t) for t in text.split(",") if t.strip()]


# -- means-check -------------------------------------------------------------

def _load_pairs(path: str) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read pairs from {path}: {exc}")
    items = data if isinstance(data, list) else [data]
    try:
        return [(list(map(float, d["x"])), list(map(float, d["y"]))) for d in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"pairs file needs objects with numeric 'x' and 'y': {exc}")


def cmd_means_check(args, manifest) -> int:
    pairs = []
    for path in args.pairs or []:
        pairs.extend(_load_pairs(path))
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise UsageError("--x and --y must be given together")
        pairs.append((args.x, args.y))
    if not pairs:
        raise UsageError("give --x/--y or --pairs FILE")

    results, code = [], EXIT_OK
    for x, y in pairs:
        entry = {"x": x, "y": y}
        if len(x) != len(y):
            raise UsageError(f"tuple lengths differ: {len(x)} vs {len(y)}")
        try:
            verdict = bound_check(x, y, args.level, args.tol)
        except SignatureMismatch as exc:
            entry.update(status="signature_mismatch", error=str(exc))
            code = max(code, EXIT_MISMATCH)
        except (DimensionMismatch, ValueError) as exc:
            raise UsageError(str(exc))
        else:
            entry["verdict"] = verdict.to_json()
            if verdict.status == VIOLATED:
                code = max(code, EXIT_FAILED)
        results.append(entry)
    doc = report.document(manifest, {"level": args.level, "tol": args.tol, "results": results})
    report.write_text(args.out, report.dumps(doc))
    return code


# -- extremal ----------------------------------------------------------------

def _search_config(args) -> SearchConfig:
    try:
        return SearchConfig(seed=args.seed, restarts=args.restarts,
                            penalty_weight_schedule=tuple(args.penalty_weight_schedule),
                            mesh=args.mesh, tol=args.tol)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad search configuration: {exc}")


def cmd_extremal(args, manifest) -> int:
    cfg = _search_config(args)
    lo = {2: 3, 3: 4}[args.level]
    if args.n < lo:
        raise UsageError(f"level {args.level} needs n >= {lo}, got {args.n}")
    result = extremal_max(args.n, args.level, cfg)
    payload = {"config": cfg.to_json(), "result": result.to_json()}
    passed = result.certified
    if args.brute_force:
        try:
            oracle = brute_force_max(args.n, args.level, cfg)
        except ValueError as exc:
            raise UsageError(str(exc))
        step = oracle.certificate["x1_step"]
        agree = result.value - 0.05 <= oracle.value <= result.value + step + cfg.tol
        payload["brute_force"] = {"result": oracle.to_json(), "agrees": agree}
        passed = passed and agree
    payload["passed"] = passed
    report.write_text(args.out, report.dumps(report.document(manifest, payload)))
    return EXIT_OK if passed else EXIT_FAILED


# -- lemma -------------------------------------------------------------------

def cmd_lemma(args, manifest) -> int:
    if args.n < 4:
        raise UsageError(f"the lemmas need n >= 4, got {args.n}")
    if args.mesh < MIN_G_MESH:
        raise UsageError(f"mesh too coarse: need mesh >= {MIN_G_MESH}, got {args.mesh}")
    rs = [args.r] if args.r is not None else list(range(1, args.n))
    if any(not 1 <= r <= args.n - 1 for r in rs):
        raise UsageError(f"r must lie in 1..{args.n - 1}")
    f = verify_f_lemma(args.n)
    g = [verify_g_lemma(args.n, r, args.mesh) for r in rs]
    passed = f.passed and all(rep.passed for rep in g)
    doc = report.document(manifest, {"f": f.to_json(), "g": [rep.to_json() for rep in g],
                                     "passed": passed})
    report.write_text(args.out, report.dumps(doc))
    return EXIT_OK if passed else EXIT_FAILED


# -- pseudo ------------------------------------------------------------------

def cmd_pseudo(args, manifest) -> int:
    try:
        pair = fr_pair(args.alpha, args.beta)
        grid = GridSpec(args.re_min, args.re_max, args.im_min, args.im_max,
                        args.nx, args.ny, tuple(args.eps))
    except ValueError as exc:
        raise UsageError(str(exc))
    out = args.out or "pseudo_out"
    fa, fb = singular_field(pair.a, grid), singular_field(pair.b, grid)
    on_grid = super_identical_check(pair.a, pair.b, grid.points(), args.tol)
    structured = super_identical_check(pair.a, pair.b, None, args.tol)
    gram = super_identical_check(pair.a, pair.b, None, args.tol, mode="gram")
    field_dev = float(np.max(np.abs(fa.data - fb.data) / (1 + np.maximum(fa.data[..., :1],
                                                                          fb.data[..., :1]))))
    passed = on_grid.passed and structured.passed and gram.passed

    contours = {"eps_levels": list(grid.eps_levels), "a": [], "b": [], "masks_equal": []}
    if grid.eps_levels:
        ca = eps_contour_export(fa, grid.eps_levels)
        cb = eps_contour_export(fb, grid.eps_levels)
        contours["a"] = [c.to_json() for c in ca]
        contours["b"] = [c.to_json() for c in cb]
        contours["masks_equal"] = [bool(np.array_equal(u.mask, v.mask)) for u, v in zip(ca, cb)]

    deviation = {"pair": pair.to_json(), "grid_check": on_grid.to_json(),
                 "structured_check": structured.to_json(), "gram_check": gram.to_json(),
                 "field_max_scaled_deviation": field_dev, "passed": passed}
    try:
        os.makedirs(out, exist_ok=True)
        report.write_text(os.path.join(out, "field_a.csv"),
                          report.csv_with_manifest(manifest, fa.to_csv()))
        report.write_text(os.path.join(out, "field_b.csv"),
                          report.csv_with_manifest(manifest, fb.to_csv()))
        report.write_text(os.path.join(out, "deviation.json"),
                          report.dumps(report.document(manifest, deviation)))
        report.write_text(os.path.join(out, "contours.json"),
                          report.dumps(report.document(manifest, contours), indent=None))
    except OSError as exc:
        raise UsageError(f"cannot write outputs to {out}: {exc}")
    summary = {"out_dir": out, "passed": passed,
               "max_deviation": max(on_grid.max_deviation, structured.max_deviation)}
    print(report.dumps(summary), end="")
    return EXIT_OK if passed else EXIT_FAILED


# -- bound-scan --------------------------------------------------------------

def _polys(args) -> list:
    if args.poly:
        return [Polynomial(tuple(args.poly))]
    return default_poly_battery(args.seed, args.battery_count, args.max_degree)


def cmd_bound_scan(args, manifest) -> int:
    alphas = sorted(args.alphas, reverse=True)
    for a in alphas + [args.beta]:
        if not 0 < a <= math.pi / 4 + 1e-15:
            raise UsageError(f"angles must lie in (0, pi/4], got {a!r}")
    polys = _polys(args)
    sq = Polynomial.monomial(2)
    bound = math.sqrt(2.0)
    rows = []
    for alpha in alphas:
        pair = fr_pair(alpha, args.beta)
        checks = [norm_bound_check(pair.a, pair.b, p, args.tol) for p in polys]
        live = [c for c in checks if not c.zero_case]
        best = max((max(c.ratio, c.reciprocal) for c in live), default=float("nan"))
        r1, r2, _ = fr_square_ratios(pair)
        sq_check = norm_bound_check(pair.a, pair.b, sq, args.tol)
        cond = similarity_cond_lower_bound(pair.a, pair.b, polys)
        ident = max(max(mean_identities_check(pair.a, pair.b, p).residuals) for p in polys)
        rows.append({
            "alpha": alpha,
            "best_ratio": best,
            "sqrt2_margin": bound - best,
            "square_ratio": sq_check.ratio,
            "square_ratio_expected": math.cos(alpha) / math.cos(args.beta),
            "r1": r1, "r2": r2,
            "cond_lower": cond.lower,
            "cond_expected": math.sin(args.beta) / math.sin(alpha),
            "cond_achieving_index": cond.achieving_index,
            "identity_max_residual": ident,
            "all_pass": all(c.verdict == "pass" for c in checks) and sq_check.verdict == "pass",
        })
    ratios = [r["best_ratio"] for r in rows]
    conds = [r["cond_lower"] for r in rows]
    summary = {
        "sup_ratio": max(ratios) if ratios else None,
        "sup_margin": bound - max(ratios) if ratios else None,
        "all_below_sqrt2": all(r < bound for r in ratios),
        "ratio_nondecreasing_as_alpha_decreases": all(
            b >= a - 1e-12 for a, b in zip(ratios, ratios[1:])),
        "cond_increasing_as_alpha_decreases": all(b > a for a, b in zip(conds, conds[1:])),
        "all_checks_pass": all(r["all_pass"] for r in rows),
    }
    doc = report.document(manifest, {"beta": args.beta, "n_polys": len(polys),
                                     "rows": rows, "summary": summary})
    report.write_text(args.out, report.dumps(doc))
    return EXIT_OK if summary["all_checks_pass"] else EXIT_FAILED


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root seed for all random streams")
    common.add_argument("--tol", type=float, default=None, help="comparison tolerance")
    common.add_argument("--out", default=None, help="output file (directory for pseudo)")
    common.add_argument("--config", default=None, help="JSON file of option defaults")

    parser = _Parser(prog="fourmean", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=report.tool_version())
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("means-check", parents=[common], help="classify a tuple pair")
    p.add_argument("--x", type=_floats)
    p.add_argument("--y", type=_floats)
    p.add_argument("--pairs", action="append", help="JSON file of {x, y} objects")
    p.add_argument("--level", type=int, default=3, choices=(1, 2, 3))
    p.set_defaults(func=cmd_means_check, default_tol=DEFAULT_TOL)

    p = sub.add_parser("extremal", parents=[common], help="solve an extremal problem")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--level", type=int, default=3, choices=(2, 3))
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--mesh", type=int, default=40)
    p.add_argument("--penalty-weight-schedule", type=_floats,
                   default=[10.0 ** k for k in range(1, 9)])
    p.add_argument("--brute-force", action="store_true", help="also run the mesh oracle")
    p.set_defaults(func=cmd_extremal, default_tol=1e-9)

    p = sub.add_parser("lemma", parents=[common], help="polynomial lemma certificates")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--mesh", type=int, default=64)
    p.set_defaults(func=cmd_lemma, default_tol=None)

    p = sub.add_parser("pseudo", parents=[common], help="singular fields of the 4x4 pair")
    p.add_argument("--alpha", type=_angle, default=0.3)
    p.add_argument("--beta", type=_angle, default=math.pi / 4)
    for name, val in (("re-min", -3.0), ("re-max", 3.0), ("im-min", -3.0), ("im-max", 3.0)):
        p.add_argument(f"--{name}", type=float, default=val)
    p.add_argument("--nx", type=int, default=101)
    p.add_argument("--ny", type=int, default=101)
    p.add_argument("--eps", type=_floats, default=[])
    p.set_defaults(func=cmd_pseudo, default_tol=SUPER_TOL)

    p = sub.add_parser("bound-scan", parents=[common], help="norm ratios over an alpha sweep")
    p.add_argument("--alphas", type=_angles, default=[0.1, 0.01, 0.001])
    p.add_argument("--beta", type=_angle, default=math.pi / 4)
    p.add_argument("--poly", type=_floats, default=None,
                   help="single polynomial, ascending real coefficients (default: battery)")
    p.add_argument("--battery-count", type=int, default=100)
    p.add_argument("--max-degree", type=int, default=6)
    p.set_defaults(func=cmd_bound_scan, default_tol=1e-10)
    return parser


def _apply_config(parser, argv) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {args.config}: {exc}")
    if not isinstance(cfg, dict):
        parser.error("config must be a JSON object")
    known = set(vars(args)) - {"func", "command", "config", "default_tol"}
    unknown = set(cfg) - known
    if unknown:
        parser.error(f"unknown config keys: {sorted(unknown)}")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.tol is None:
        args.tol = args.default_tol
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "default_tol", "out", "command")}
    manifest = report.RunManifest(command=args.command, config=report.to_plain(config),
                                  seed=args.seed)
    try:
        return args.func(args, manifest)
    except UsageError as exc:
        print(f"fourmean {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
