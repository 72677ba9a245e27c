"""Command-line front end.

Subcommands: moments, estimate, predict, efficiency, reproduce.
Exit codes: 0 success, 1 validation error, 2 numerical failure,
3 reproduction mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import (
    AnalysisConfig,
    ingest,
    parse_targets,
    reproduce_table1,
    reproduce_table2,
    run_analysis,
)
from .blue import blue_estimate
from .errors import NumericalError
from .families import get_model
from .moments import load_or_build_moments
from .quadrature import QuadratureSettings

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_MISMATCH = 3


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 for usage problems, not argparse's 2
        raise _UsageError(message)


def _emit(doc: dict, fmt: str, renderer) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        renderer(doc)


def _quad_settings(args) -> QuadratureSettings | None:
    if args.quad_panels is None and args.quad_nodes is None and args.quad_grading is None:
        return None
    base = QuadratureSettings()
    return QuadratureSettings(
        panels_per_side=args.quad_panels or base.panels_per_side,
        nodes_per_panel=args.quad_nodes or base.nodes_per_panel,
        grading=args.quad_grading or base.grading,
    )


def _add_common(p, with_input: bool) -> None:
    p.add_argument("--family", required=True, help="parent family: normal or exponential")
    p.add_argument("--n", type=int, required=True, help="total units on test")
    if with_input:
        p.add_argument("--input", required=True, help="CSV (value column) or JSON sample file")
        p.add_argument("--r", type=int, default=None,
                       help="declared number of observed failures (checked against the input)")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--cache", default=None, help="moment cache directory")
    p.add_argument("--quad-panels", type=int, default=None, help="quadrature panels per side")
    p.add_argument("--quad-nodes", type=int, default=None, help="quadrature nodes per panel")
    p.add_argument("--quad-grading", type=float, default=None, help="quadrature panel grading ratio")


def _render_moments(doc: dict) -> None:
    print(f"family={doc['family']} n={doc['n']} provenance={doc['provenance']}")
    print("means:")
    print("  " + " ".join(f"{m: .6f}" for m in doc["means"]))
    print("covariance:")
    for row in doc["cov"]:
        print("  " + " ".join(f"{v: .6f}" for v in row))


def _render_estimate(doc: dict) -> None:
    est = doc["estimate"]
    print(f"family={doc['family']} n={doc['n']} r={doc['r']}")
    print(f"location = {est['location']:.4f}   scale = {est['scale']:.4f}")
    print(
        "variance coefficients (x scale^2): "
        f"var_location={est['var_location']:.6f} var_scale={est['var_scale']:.6f} "
        f"cov={est['cov_location_scale']:.6f}"
    )
    print(f"generalized variance = {est['delta']:.6f}")


def _render_predictions(doc: dict) -> None:
    _render_estimate(doc)
    if doc["marginal"]:
        print("marginal predictions:")
        for entry in doc["marginal"]:
            print(f"  X[{entry['target']}] = {entry['predicted']:.4f}")
    for pair in doc["pairs"]:
        print(f"joint ({pair['s']},{pair['t']}):")
        print(f"  X[{pair['s']}] = {pair['joint']['predicted_s']:.4f}   "
              f"X[{pair['t']}] = {pair['joint']['predicted_t']:.4f}")


def _render_efficiency(doc: dict) -> None:
    print(f"family={doc['family']} n={doc['n']} r={doc['r']}")
    print(f"{'pair':>9} {'D-efficiency':>13} {'trace-efficiency':>17} {'overall gain':>13}")
    for pair in doc["pairs"]:
        eff = pair["efficiency"]
        print(
            f"  ({pair['s']:2d},{pair['t']:2d}) {eff['d_efficiency']:13.4f} "
            f"{eff['trace_efficiency']:17.4f} {eff['overall_gain']:13.4f}"
        )


def _render_reproduction(doc: dict) -> None:
    for check in doc["checks"]:
        mark = "ok " if check["passed"] else "FAIL"
        print(
            f"  [{mark}] {check['cell']}: computed {check['computed']: .4f} "
            f"reference {check['reference']: .4f} delta {check['delta']:+.4f} "
            f"(tolerance {check['tolerance']:g})"
        )
    s = doc["summary"]
    print(f"{doc['table']}: {s['total'] - s['failed']}/{s['total']} cells reproduced")


def _cmd_moments(args) -> int:
    model = get_model(args.family)
    ms = load_or_build_moments(model, args.n, args.cache, _quad_settings(args))
    doc = {
        "schema_version": 1,
        "family": ms.model.family.value,
        "n": ms.n,
        "provenance": ms.provenance,
        "quadrature": ms.settings.as_dict() if ms.settings else None,
        "means": ms.means.tolist(),
        "cov": ms.cov.tolist(),
    }
    _emit(doc, args.format, _render_moments)
    return EXIT_OK


def _cmd_estimate(args) -> int:
    model = get_model(args.family)
    sample = ingest(args.input, None, args.n)
    if args.r is not None and sample.r != args.r:
        raise ValueError(f"input holds {sample.r} observations but r={args.r} was declared")
    moments = load_or_build_moments(model, args.n, args.cache, _quad_settings(args))
    blue = blue_estimate(sample, moments)
    doc = {
        "schema_version": 1,
        "family": model.family.value,
        "n": sample.n,
        "r": sample.r,
        "estimate": {
            "location": blue.location,
            "scale": blue.scale,
            "var_location": blue.var_location,
            "var_scale": blue.var_scale,
            "cov_location_scale": blue.cov_location_scale,
            "delta": blue.delta,
            "location_weights": blue.location_weights.tolist(),
            "scale_weights": blue.scale_weights.tolist(),
        },
    }
    _emit(doc, args.format, _render_estimate)
    return EXIT_OK


def _run_config(args, require_pairs: bool) -> dict:
    targets = parse_targets(args.targets)
    if require_pairs and any(len(g) != 2 for g in targets):
        raise ValueError("efficiency comparison needs target pairs like --targets 6,7")
    config = AnalysisConfig(
        model=get_model(args.family),
        n=args.n,
        targets=targets,
        input_path=args.input,
        output_format=args.format,
        cache_dir=args.cache,
        settings=_quad_settings(args),
        declared_r=args.r,
    )
    return run_analysis(config)


def _cmd_predict(args) -> int:
    doc = _run_config(args, require_pairs=False)
    _emit(doc, args.format, _render_predictions)
    return EXIT_OK


def _cmd_efficiency(args) -> int:
    doc = _run_config(args, require_pairs=True)
    _emit(doc, args.format, _render_efficiency)
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    settings = _quad_settings(args)
    if args.table == "table1":
        doc = reproduce_table1(args.cache, settings)
    else:
        doc = reproduce_table2(args.cache, settings)
    _emit(doc, args.format, _render_reproduction)
    return EXIT_OK if doc["passed"] else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="jointblup",
        description="Predict unobserved failure times from Type-II censored samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[], help="compute or fetch order-statistic moments")
    _add_common(p, with_input=False)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("estimate", help="location/scale estimates from a censored sample")
    _add_common(p, with_input=True)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("predict", help="marginal and joint predictions of future order statistics")
    _add_common(p, with_input=True)
    p.add_argument("--targets", required=True,
                   help="semicolon-separated targets, e.g. '6;7' or pairs '6,7;9,10'")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("efficiency", help="joint-versus-marginal efficiency for target pairs")
    _add_common(p, with_input=True)
    p.add_argument("--targets", required=True, help="pairs only, e.g. '6,7;6,8'")
    p.set_defaults(func=_cmd_efficiency)

    p = sub.add_parser("reproduce", help="recompute a bundled reference table")
    p.add_argument("table", choices=("table1", "table2"))
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--cache", default=None)
    p.add_argument("--quad-panels", type=int, default=None)
    p.add_argument("--quad-nodes", type=int, default=None)
    p.add_argument("--quad-grading", type=float, default=None)
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
