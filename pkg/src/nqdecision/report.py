"""Fit reports laid out as Initial / Result / Modified result rows per dataset."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from nqdecision import __version__
from nqdecision.fit import BiasCorrection, ExperimentRecord, FitConfig, FitResult, bias_correct, fit
from nqdecision.model import OBSERVABLES

SCHEMA = "nq-report/1"

COLUMN_TITLES = ("P(G)", "P(A|G)", "P(B)", "P(A|B)", "P_t", "P(A)")
ROW_KINDS = ("Initial", "Result", "Modified result")


@dataclass(frozen=True)
class DatasetResult:
    record: ExperimentRecord
    fit: FitResult
    correction: BiasCorrection

    @property
    def rows(self) -> dict[str, np.ndarray]:
        return {
            "Initial": self.record.observed_array,
            "Result": self.fit.prediction.as_array(),
            "Modified result": self.correction.corrected,
        }


def run_fits(records: Iterable[ExperimentRecord], config: FitConfig) -> list[DatasetResult]:
    out = []
    for record in records:
        result = fit(record, config)
        out.append(DatasetResult(record, result, bias_correct(result.prediction.as_array(), record)))
    return out


def _named(values: np.ndarray) -> dict[str, float]:
    return {key: float(v) for key, v in zip(OBSERVABLES, values)}


def build_report(results: list[DatasetResult], config: FitConfig) -> dict:
    """Machine-readable report; floats are kept at full precision."""
    datasets = []
    for res in results:
        observed = res.record.observed_array
        result = res.fit.prediction.as_array()
        modified = res.correction.corrected
        err_result = result - observed
        err_modified = modified - observed
        datasets.append(
            {
                "name": res.record.name,
                "face_type": res.record.face_type,
                "observed": _named(observed),
                "params": res.fit.params.as_dict(),
                "result": _named(result),
                "modified": _named(modified),
                "error_result": _named(err_result),
                "error_modified": _named(err_modified),
                "mae_result": float(np.mean(np.abs(err_result))),
                "mae_modified": float(np.mean(np.abs(err_modified))),
                "mean_error": res.correction.mean_error,
                "objective": res.fit.objective_value,
                "interference_gap": res.fit.prediction.interference_gap,
                "converged": res.fit.converged,
                "restarts_used": res.fit.restarts_used,
                "clamped": list(res.fit.prediction.clamped),
                "modified_clamped": res.correction.clamped,
            }
        )
    names = [d["name"] for d in datasets]
    comparison = {
        key: {kind: [d[kind][key] for d in datasets] for kind in ("observed", "result", "modified")}
        for key in OBSERVABLES
    }
    errors = {
        key: {
            "result": [d["error_result"][key] for d in datasets],
            "modified": [d["error_modified"][key] for d in datasets],
        }
        for key in OBSERVABLES
    }
    return {
        "schema": SCHEMA,
        "tool": {"name": "nqdecision", "version": __version__},
        "metadata": {
            "seed": config.seed,
            "restarts": config.restarts,
            "max_iter": config.max_iter,
            "tol": config.tol,
            "t": config.t,
            "config": config.model.as_dict(),
        },
        "observables": list(OBSERVABLES),
        "datasets": datasets,
        "figures": {
            "comparison": {"datasets": names, "series": comparison},
            "error": {"datasets": names, "series": errors},
        },
    }


def _markdown(report: dict) -> str:
    lines = [
        "| Dataset | Data type | " + " | ".join(COLUMN_TITLES) + " |",
        "|---|---|" + "---:|" * len(COLUMN_TITLES),
    ]
    for d in report["datasets"]:
        for i, (kind, key) in enumerate(zip(ROW_KINDS, ("observed", "result", "modified"))):
            label = d["name"] if i == 0 else ""
            cells = " | ".join(f"{d[key][k]:.2f}" for k in OBSERVABLES)
            lines.append(f"| {label} | {kind} | {cells} |")
    lines += [
        "",
        "| Dataset | h_G | h_B | alpha | p_G | objective | MAE result | MAE modified | converged |",
        "|---|---:|---:|---:|---:|---:|---:|---:|---|",
    ]
    for d in report["datasets"]:
        p = d["params"]
        lines.append(
            f"| {d['name']} | {p['h_G']:.4f} | {p['h_B']:.4f} | {p['alpha']:.4f} | {p['p_G']:.4f} "
            f"| {d['objective']:.4f} | {d['mae_result']:.4f} | {d['mae_modified']:.4f} "
            f"| {'yes' if d['converged'] else 'no'} |"
        )
    return "\n".join(lines) + "\n"


def _csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dataset", "face_type", "row", *OBSERVABLES])
    for d in report["datasets"]:
        for kind, key in zip(("initial", "result", "modified"), ("observed", "result", "modified")):
            writer.writerow([d["name"], d["face_type"], kind, *(repr(d[key][k]) for k in OBSERVABLES)])
    return buf.getvalue()


def emit_report(report: dict, fmt: Literal["md", "csv", "json"] = "md") -> str:
    if not report.get("datasets"):
        raise ValueError("report has no fitted datasets")
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        return _csv(report)
    if fmt == "md":
        return _markdown(report)
    raise ValueError(f"unknown report format {fmt!r}")
