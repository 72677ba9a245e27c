"""Analysis orchestration: ingestion, the full pipeline, and reproduction.

``run_analysis`` drives moments -> estimation -> marginal predictions ->
joint predictions -> efficiency for a validated configuration and
returns a JSON-serializable document.  ``reproduce_table1`` and
``reproduce_table2`` recompute the bundled reference tables cell by
cell and report deltas; reproduction failures are reported in the
document, never raised.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from . import reference
from .blue import CensoredSample, blue_estimate
from .efficiency import efficiency_report
from .errors import NumericalError
from .families import DistributionModel, normal_model
from .moments import MomentSet, load_or_build_moments
from .predict import (
    FeasibilityVerdict,
    check_joint_feasibility,
    joint_blup,
    joint_predictor_weights,
    marginal_blup,
    predictor_pair_covariance,
)
from .quadrature import QuadratureSettings

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class AnalysisConfig:
    model: DistributionModel
    n: int
    targets: tuple[tuple[int, ...], ...]
    input_path: Path | str
    output_format: str = "table"
    cache_dir: Path | str | None = None
    settings: QuadratureSettings | None = None
    declared_r: int | None = None

    def __post_init__(self):
        if self.output_format not in ("table", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if not self.targets:
            raise ValueError("no prediction targets requested")


def parse_targets(spec: str) -> tuple[tuple[int, ...], ...]:
    """Parse a target spec like '6;7,9' into ((6,), (7, 9))."""
    groups = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            groups.append(tuple(int(tok) for tok in chunk.split(",")))
        except ValueError:
            raise ValueError(f"could not parse target group {chunk!r}") from None
    if not groups:
        raise ValueError(f"no targets found in {spec!r}")
    return tuple(groups)


def ingest(path: Path | str, fmt: str | None = None, n: int | None = None) -> CensoredSample:
    """Read a censored sample from a CSV or JSON file.

    CSV files carry one observation per row under a 'value' header and
    need the total sample size n supplied separately; JSON files embed
    it.  Inputs must already be strictly increasing: an unsorted file is
    rejected rather than silently sorted, since out-of-order order
    statistics usually mean the file is not what the caller thinks.
    """
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "csv"
    if fmt == "csv":
        if n is None:
            raise ValueError("CSV input carries no sample size; pass n explicitly")
        try:
            with open(path, newline="") as fh:
                rows = list(csv.DictReader(fh))
        except OSError as exc:
            raise ValueError(f"could not read {path}: {exc}") from None
        if not rows or rows[0].get("value") is None:
            raise ValueError(f"{path}: expected a CSV with a 'value' column")
        try:
            values = [float(row["value"]) for row in rows]
        except (TypeError, ValueError):
            raise ValueError(f"{path}: non-numeric entry in the 'value' column") from None
        return CensoredSample(n=n, values=values)
    if fmt == "json":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"could not parse {path}: {exc}") from None
        if not isinstance(raw, dict) or "n" not in raw or "values" not in raw:
            raise ValueError(f"{path}: expected an object with 'n' and 'values'")
        file_n = int(raw["n"])
        if n is not None and n != file_n:
            raise ValueError(f"{path} declares n={file_n} but n={n} was requested")
        return CensoredSample(n=file_n, values=[float(v) for v in raw["values"]])
    raise ValueError(f"unknown input format {fmt!r}")


def emit(sample: CensoredSample, path: Path | str, fmt: str | None = None) -> Path:
    """Write a sample back out; the inverse of ``ingest`` for both formats."""
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "csv"
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["value"])
            for v in sample.values:
                writer.writerow([repr(float(v))])
    elif fmt == "json":
        payload = {"n": sample.n, "values": [float(v) for v in sample.values]}
        path.write_text(json.dumps(payload, sort_keys=True, indent=1))
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    return path


def _validate_targets(config: AnalysisConfig, r: int) -> None:
    for group in config.targets:
        if len(group) > 2:
            verdict = check_joint_feasibility(group, config.model)
            raise ValueError(
                f"target group {group}: {verdict.value}; joint prediction of more "
                "than two order statistics has no exact solution in a "
                "location-scale model (the defining linear system is singular)"
            )
        if len(group) == 2:
            verdict = check_joint_feasibility(group, config.model)
            if verdict is not FeasibilityVerdict.FEASIBLE:
                raise ValueError(f"target group {group}: {verdict.value}")
            s, t = group
            if s >= t:
                raise ValueError(f"pair targets must be increasing, got ({s}, {t})")
        for s in group:
            if not r < s <= config.n:
                raise ValueError(f"target {s} must satisfy r={r} < s <= n={config.n}")


def _stage(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, NumericalError) as exc:
        raise type(exc)(f"[{stage}] {exc}") from exc


def run_analysis(config: AnalysisConfig) -> dict:
    """Run the full pipeline for every requested target group."""
    sample = _stage("ingest", ingest, config.input_path, None, config.n)
    if sample.n != config.n:
        raise ValueError(f"input is for n={sample.n} but the configuration says {config.n}")
    if config.declared_r is not None and sample.r != config.declared_r:
        raise ValueError(
            f"input holds {sample.r} observations but r={config.declared_r} was declared"
        )
    _validate_targets(config, sample.r)

    moments = _stage(
        "moments",
        load_or_build_moments,
        config.model,
        config.n,
        config.cache_dir,
        config.settings,
    )
    blue = _stage("estimate", blue_estimate, sample, moments)

    singles = sorted({s for group in config.targets for s in group})
    marginals = {}
    for s in singles:
        pw, predicted = _stage(f"marginal s={s}", marginal_blup, sample, moments, blue, s)
        marginals[s] = (pw, predicted)

    pair_docs = []
    for group in config.targets:
        if len(group) != 2:
            continue
        s, t = group
        joint = _stage(f"joint ({s},{t})", joint_blup, sample, moments, s, t)
        marg_cov = predictor_pair_covariance(moments, marginals[s][0], marginals[t][0])
        eff = _stage(f"efficiency ({s},{t})", efficiency_report, joint, marg_cov)
        pair_docs.append(
            {
                "s": s,
                "t": t,
                "joint": {
                    "predicted_s": joint.predicted_s,
                    "predicted_t": joint.predicted_t,
                    "weights_s": joint.weights_s.weights.tolist(),
                    "weights_t": joint.weights_t.weights.tolist(),
                    "cov": joint.cov.tolist(),
                },
                "marginal": {
                    "predicted_s": marginals[s][1],
                    "predicted_t": marginals[t][1],
                    "cov": marg_cov.tolist(),
                },
                "efficiency": {
                    "d_efficiency": eff.d_efficiency,
                    "trace_efficiency": eff.trace_efficiency,
                    "efficiency_gain": eff.efficiency_gain,
                    "efficiency_loss": eff.efficiency_loss,
                    "overall_gain": eff.overall_gain,
                },
            }
        )

    return {
        "schema_version": SCHEMA_VERSION,
        "family": config.model.family.value,
        "n": config.n,
        "r": sample.r,
        "values": sample.values.tolist(),
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
        "marginal": [
            {
                "target": s,
                "predicted": marginals[s][1],
                "weights": marginals[s][0].weights.tolist(),
            }
            for s in singles
        ],
        "pairs": pair_docs,
    }


# ---------------------------------------------------------------------------
# reproduction harness


def _check_cell(checks: list, cell: str, computed: float, ref: float, tol: float) -> None:
    delta = computed - ref
    checks.append(
        {
            "cell": cell,
            "computed": computed,
            "reference": ref,
            "delta": delta,
            "tolerance": tol,
            "passed": bool(abs(delta) <= tol),
        }
    )


def _finish(table: str, checks: list) -> dict:
    failed = sum(1 for c in checks if not c["passed"])
    return {
        "schema_version": SCHEMA_VERSION,
        "table": table,
        "checks": checks,
        "summary": {"total": len(checks), "failed": failed},
        "passed": failed == 0,
    }


def reproduce_table1(
    cache_dir: Path | str | None = None, settings: QuadratureSettings | None = None
) -> dict:
    """Recompute the bundled worked-example table and report every delta."""
    model = normal_model()
    sample = reference.schmee_hahn_sample()
    moments = load_or_build_moments(model, sample.n, cache_dir, settings)
    blue = blue_estimate(sample, moments)
    checks: list = []

    marg = {}
    for s in sorted(reference.TABLE1_MARGINAL):
        pw, predicted = marginal_blup(sample, moments, blue, s)
        marg[s] = pw
        _check_cell(
            checks,
            f"marginal_prediction[{s}]",
            predicted,
            reference.TABLE1_MARGINAL[s],
            reference.PREDICTION_TOL,
        )

    joint_pred = {}
    for (s, t) in reference.TABLE1_PAIRS:
        joint = joint_blup(sample, moments, s, t)
        joint_pred[s] = joint.predicted_s
        joint_pred[t] = joint.predicted_t
        marg_cov = predictor_pair_covariance(moments, marg[s], marg[t])
        eff = efficiency_report(joint, marg_cov)
        d_ref, t_ref, o_ref = reference.TABLE1_EFFICIENCY[(s, t)]
        _check_cell(checks, f"d_efficiency[{s},{t}]", eff.d_efficiency, d_ref,
                    reference.EFFICIENCY_TOL)
        _check_cell(checks, f"trace_efficiency[{s},{t}]", eff.trace_efficiency, t_ref,
                    reference.EFFICIENCY_TOL)
        _check_cell(checks, f"overall_gain[{s},{t}]", eff.overall_gain, o_ref,
                    reference.EFFICIENCY_TOL)

    for s in sorted(reference.TABLE1_JOINT):
        _check_cell(
            checks,
            f"joint_prediction[{s}]",
            joint_pred[s],
            reference.TABLE1_JOINT[s],
            reference.PREDICTION_TOL,
        )

    return _finish("table1", checks)


def reproduce_table2(
    cache_dir: Path | str | None = None, settings: QuadratureSettings | None = None
) -> dict:
    """Recompute every bundled coefficient scenario and report every delta."""
    model = normal_model()
    moment_sets: dict[int, MomentSet] = {}
    checks: list = []
    for (n, r, s, t) in reference.TABLE2_CASES:
        if n not in moment_sets:
            moment_sets[n] = load_or_build_moments(model, n, cache_dir, settings)
        pw_s, pw_t, _, _ = joint_predictor_weights(moment_sets[n], r, s, t)
        ref_s, ref_t = reference.TABLE2_COEFFICIENTS[(n, r, s, t)]
        case = f"n={n},r={r},s={s},t={t}"
        for i, (got, ref) in enumerate(zip(pw_s.weights, ref_s), start=1):
            _check_cell(checks, f"coeff[{case}].s[{i}]", float(got), ref,
                        reference.COEFFICIENT_TOL)
        for i, (got, ref) in enumerate(zip(pw_t.weights, ref_t), start=1):
            _check_cell(checks, f"coeff[{case}].t[{i}]", float(got), ref,
                        reference.COEFFICIENT_TOL)
    return _finish("table2", checks)
