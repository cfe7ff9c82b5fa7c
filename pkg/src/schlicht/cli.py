"""Command-line front end.

Subcommands: classify, apply, identities, verify-theorem, report.
Data goes to stdout (or --out); diagnostics to stderr.  Exit codes:
0 success, 1 a --assert-member check failed, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import harness as _harness
from .classify import DEFAULT_GRID, DiskGrid, certify, class_from_spec
from .errors import SchlichtError
from .functions import function_from_spec
from .operators import (DEFAULT_OPERATOR_ORDER, apply_multiplier,
                        operator_from_spec)


def _parse_grid(text: str) -> DiskGrid:
    """'default' or 'r1,r2,...@M' (radii and angles per radius)."""
    if text == "default":
        return DEFAULT_GRID
    radii_text, _, angles_text = text.partition("@")
    radii = tuple(float(r) for r in radii_text.split(","))
    angles = int(angles_text) if angles_text else DEFAULT_GRID.angles
    return DiskGrid(radii, angles)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj, out_path: str | None) -> None:
    _emit(json.dumps(_harness._jsonify(obj), sort_keys=True, indent=2) + "\n",
          out_path)


def _cmd_classify(args) -> int:
    fn = function_from_spec(args.fn)
    spec = class_from_spec(args.cls, lift=args.lift)
    grid = _parse_grid(args.grid)
    companion = function_from_spec(args.companion) if args.companion else None
    verdict = certify(fn, spec, grid, companion=companion,
                      strict=args.strict, order=args.order)
    if args.format == "csv":
        # Margin sweep: one row per grid radius.
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["radius", "margin", "witness_re", "witness_im",
                         "status"])
        for r in grid.radii:
            sub = DiskGrid((r,), grid.angles)
            v = certify(fn, spec, sub, companion=companion, order=args.order)
            wr = ["", ""] if v.witness is None else [v.witness.real,
                                                     v.witness.imag]
            writer.writerow([r, v.margin, *wr, v.status])
        _emit(buf.getvalue(), args.out)
    else:
        _dump_json({"function": fn.label, "class": spec.label,
                    "verdict": verdict.to_json_dict()}, args.out)
    if args.assert_member and verdict.status != "member":
        print(f"assertion failed: {verdict.status}", file=sys.stderr)
        return 1
    return 0


def _cmd_apply(args) -> int:
    op = operator_from_spec(args.op)
    fn = function_from_spec(args.fn)
    series = apply_multiplier(op, fn.to_series(args.order))
    _emit(series.dumps() + "\n", args.out)
    return 0


def _cmd_identities(args) -> int:
    ids = _harness_identity_ids(args)
    from .operators import identity_suite

    rows = []
    for row in identity_suite(args.trials, args.order, args.c_values,
                              args.sigma_values, args.seed):
        if row[0] in ids:
            rows.append(row)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["identity", "c", "sigma", "trials", "max_residual",
                     "max_coefficient"])
    for identity_id, c, sigma, trials, residual, scale in rows:
        writer.writerow([identity_id, c, sigma, trials,
                         f"{residual:.6e}", f"{scale:.6e}"])
    _emit(buf.getvalue(), args.report)
    worst = max((r[4] / r[5] for r in rows), default=0.0)
    print(f"max relative residual: {worst:.3e}", file=sys.stderr)
    return 0


def _harness_identity_ids(args):
    from .operators import IDENTITY_IDS

    if args.id:
        if args.id not in IDENTITY_IDS:
            raise SchlichtError(f"unknown identity id {args.id!r}")
        return (args.id,)
    return IDENTITY_IDS


def _cmd_verify_theorem(args) -> int:
    grid = _parse_grid(args.grid)
    if args.all:
        report = _harness.run_catalog(
            sample_count=args.samples, seed=args.seed, grid=grid,
            refinement_levels=args.refinement_levels, order=args.order,
        )
        reports = report["reports"]
    else:
        if not args.id:
            raise SchlichtError("verify-theorem needs --id or --all")
        cfg = _harness.ExperimentConfig(
            theorem=args.id, sample_count=args.samples, seed=args.seed,
            grid=grid, refinement_levels=args.refinement_levels,
            order=args.order,
        )
        report = _harness.run_theorem(cfg)
        reports = [report]
    _emit(_harness.report_to_json(report), args.json)
    flagged = sum(r["totals"]["counterexample_flagged"] for r in reports)
    if flagged:
        print(f"{flagged} sample(s) kept a counterexample flag "
              "(implementation-bug signal; see the report)", file=sys.stderr)
    return 0


def _report_rows(report: dict):
    reports = report.get("reports", [report] if "theorem" in report else [])
    for rep in reports:
        for point in rep["points"]:
            p = point["params"]
            yield {
                "theorem": rep["theorem"],
                "lambda": p.get("lam", ""),
                "beta": p.get("beta", ""),
                "eta": p.get("eta", ""),
                "c": p.get("c", ""),
                "sigma": p.get("sigma", ""),
                "samples": len(point["samples"]),
                "confirmed": point["counts"]["confirmed"],
                "vacuous": point["counts"]["vacuous"],
                "inconclusive": point["counts"]["inconclusive"],
                "counterexample_flagged":
                    point["counts"]["counterexample_flagged"],
                "hypothesis_hit_rate": point["hypothesis_hit_rate"],
            }


def _cmd_report(args) -> int:
    with open(args.infile) as fh:
        report = json.load(fh)
    rows = list(_report_rows(report))
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else
                                ["theorem"])
        writer.writeheader()
        writer.writerows(rows)
        _emit(buf.getvalue(), args.out)
    else:
        lines = []
        for row in rows:
            params = ",".join(
                f"{k}={row[k]}" for k in ("lambda", "beta", "eta", "c", "sigma")
                if row[k] != ""
            )
            lines.append(
                f"{row['theorem']:9s} {params:50s} "
                f"confirmed={row['confirmed']:3d} vacuous={row['vacuous']:3d} "
                f"inconclusive={row['inconclusive']:3d} "
                f"flagged={row['counterexample_flagged']:3d} "
                f"hit-rate={row['hypothesis_hit_rate']:.2f}"
            )
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schlicht",
        description="certify univalent-function classes and verify their "
                    "integral-operator inclusion laws",
    )
    parser.add_argument("--config", help="JSON file of option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="certify class membership on a grid")
    p.add_argument("--fn", required=True, help="function spec, e.g. "
                   "koebe:lambda=0,x=1 | identity | perturbed:seed=1 | "
                   "series:<path>")
    p.add_argument("--class", dest="cls", required=True,
                   help="class spec, e.g. starlike:lambda=0.5")
    p.add_argument("--lift", help="operator lift, e.g. bernardi:c=1.0")
    p.add_argument("--companion", help="companion function spec")
    p.add_argument("--strict", action="store_true",
                   help="also certify the companion's own class")
    p.add_argument("--grid", default="default", help="default | r1,r2,...@M")
    p.add_argument("--order", type=int, default=DEFAULT_OPERATOR_ORDER)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--json", dest="format", action="store_const", const="json",
                   help="shorthand for --format json")
    p.add_argument("--assert-member", action="store_true",
                   help="exit 1 unless the verdict is member")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("apply", help="apply an operator, emit the series JSON")
    p.add_argument("--op", required=True, help="bernardi:c=1.0 | jks:sigma=2")
    p.add_argument("--fn", required=True)
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("identities", help="residual sweep of the exact "
                       "operator identities")
    p.add_argument("--all", action="store_true", help="all identity ids")
    p.add_argument("--id", help="one identity id")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--c-values", type=float, nargs="+",
                   default=[-0.5, 0.0, 1.0, 2.5])
    p.add_argument("--sigma-values", type=float, nargs="+",
                   default=[0.5, 1.0, 2.0])
    p.add_argument("--report", help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_identities)

    p = sub.add_parser("verify-theorem", help="run catalog experiments")
    p.add_argument("--id", help="experiment id, e.g. T2_7")
    p.add_argument("--all", action="store_true", help="full catalog")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--grid", default="default")
    p.add_argument("--refinement-levels", type=int, default=2)
    p.add_argument("--order", type=int, default=DEFAULT_OPERATOR_ORDER)
    p.add_argument("--json", dest="json", help="report output path")
    p.set_defaults(func=_cmd_verify_theorem)

    p = sub.add_parser("report", help="render a saved report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=("pretty", "csv"), default="pretty")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_report)

    return parser


def _known_dests(parser: argparse.ArgumentParser) -> set:
    dests = set()
    for action in parser._actions:
        dests.add(action.dest)
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                dests |= _known_dests(sub)
    dests.discard("help")
    return dests


def parse_and_dispatch(argv=None) -> int:
    parser = _build_parser()
    # Two-pass parse so --config can seed defaults for the chosen subcommand.
    probe, _ = parser.parse_known_args(argv)
    if probe.config:
        try:
            with open(probe.config) as fh:
                defaults = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
        if not isinstance(defaults, dict):
            print("error: config must be a JSON object", file=sys.stderr)
            return 2
        unknown = set(defaults) - _known_dests(parser)
        if unknown:
            print(f"error: unknown config keys: {sorted(unknown)}",
                  file=sys.stderr)
            return 2
        parser.set_defaults(**defaults)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchlichtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: see `schlicht <command> --help` for usage",
              file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return parse_and_dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
