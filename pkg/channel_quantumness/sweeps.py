"""
Parameter sweeps and the closed-form validation run.

Both evaluate independent points, optionally on a thread pool, and always return
rows in input order so output files do not depend on the number of workers.
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

import pandas as pd

from .channels import build_channel
from .models import (
    ClosedFormKind,
    OptimizerConfig,
    SweepSpec,
    ValidationReport,
    ValidationRow,
)
from .optimizer import maximize_mu
from .quantumness import closed_form_mu
from .utils import InputError

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"
RESULT_COLUMNS = ["mu_numeric", "mu_closed_form", "abs_error", "kernel_value"]
DEFAULT_VALIDATION_TOL = 1e-4

_DEPHASING_VALUES = (0.0, 0.25, 0.5, 0.75, 1.0)

# Every GDC point lies where the product of the x and z factors dominates, ties included.
GDC_VALIDATION_POINTS = (
    (1.0, 0.0, 0.0, 0.0),
    (0.25, 0.25, 0.25, 0.25),
    (0.7, 0.1, 0.1, 0.1),
    (0.5, 0.5, 0.0, 0.0),
    (0.5, 0.3, 0.0, 0.2),
    (0.6, 0.2, 0.1, 0.1),
    (0.85, 0.05, 0.05, 0.05),
    (0.55, 0.25, 0.05, 0.15),
    (0.9, 0.1, 0.0, 0.0),
    (0.7, 0.2, 0.0, 0.1),
)
GAD_VALIDATION_POINTS = ((0.5, 0.6), (1.0, 0.6), (0.5, 1.0), (0.75, 0.4))


def validation_points() -> list[tuple[str, dict[str, float]]]:
    points: list[tuple[str, dict[str, float]]] = []
    points += [("rtn", {"lambda": v}) for v in _DEPHASING_VALUES]
    points += [("nmd", {"omega": v}) for v in _DEPHASING_VALUES]
    points += [("pd", {"gamma": v}) for v in _DEPHASING_VALUES]
    points += [("ad", {"gamma": v}) for v in _DEPHASING_VALUES]
    points += [("unruh", {"r": r}) for r in (0.0, math.pi / 8, math.pi / 6, math.pi / 4)]
    points += [
        ("gdc", {f"p{i}": p for i, p in enumerate(weights)}) for weights in GDC_VALIDATION_POINTS
    ]
    points += [("gad", {"alpha": a, "xi": xi}) for a, xi in GAD_VALIDATION_POINTS]
    return points


def _map_ordered(func, items: list, jobs: int) -> list:
    if jobs < 1:
        raise InputError(f"jobs must be at least 1, got {jobs}.")
    if jobs == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


# --- Sweeps ---


def run_sweep(spec: SweepSpec, cfg: OptimizerConfig | None = None, jobs: int = 1) -> pd.DataFrame:
    """One row per sweep value, ascending, with the fixed result columns."""
    cfg = cfg or OptimizerConfig()
    values = spec.values()
    logger.info(
        f"Sweeping {spec.channel_label} over {spec.sweep_param} "
        f"({len(values)} points, grid {cfg.grid_points_per_angle}, jobs {jobs})"
    )

    def evaluate(value: float) -> dict[str, Any]:
        params = {**spec.fixed_params, spec.sweep_param: value}
        channel, kernel_value = build_channel(spec.channel_label, params, spec.kernel_choice)
        result = maximize_mu(channel, cfg)
        return {
            spec.sweep_param: value,
            "mu_numeric": result.mu,
            "mu_closed_form": result.closed_form,
            "abs_error": result.abs_error,
            "kernel_value": kernel_value,
        }

    rows = _map_ordered(evaluate, values, jobs)
    df = pd.DataFrame(rows, columns=[spec.sweep_param, *RESULT_COLUMNS])
    logger.info(f"Sweep finished: {len(df)} rows")
    return df


def write_sweep_csv(df: pd.DataFrame, out_path: Path) -> None:
    df.to_csv(out_path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def sweep_document(spec: SweepSpec, df: pd.DataFrame) -> dict[str, Any]:
    rows = df.astype(object).where(df.notna(), None).to_dict(orient="records")
    return {"spec": spec.model_dump(), "rows": rows}


def write_sweep_structured(spec: SweepSpec, df: pd.DataFrame, out_path: Path) -> None:
    text = json.dumps(sweep_document(spec, df), indent=2)
    out_path.write_text(text + "\n", encoding="utf-8")


# --- Validation ---


def row_passes(kind: ClosedFormKind, mu: float, reference: float, tolerance: float) -> bool | None:
    if kind is ClosedFormKind.EXACT:
        return abs(mu - reference) <= tolerance
    if kind is ClosedFormKind.LOWER_BOUND:
        return mu >= reference - tolerance
    return None


def run_validation(
    tolerance: float = DEFAULT_VALIDATION_TOL,
    cfg: OptimizerConfig | None = None,
    jobs: int = 1,
) -> ValidationReport:
    if not (math.isfinite(tolerance) and tolerance > 0):
        raise InputError(f"tolerance must be positive, got {tolerance}.")
    cfg = cfg or OptimizerConfig()

    def evaluate(point: tuple[str, dict[str, float]]) -> ValidationRow:
        label, params = point
        channel, _ = build_channel(label, params)
        result = maximize_mu(channel, cfg)
        reference = closed_form_mu(label, channel.params)
        passed = row_passes(reference.kind, result.mu, reference.value, tolerance)
        if passed is False:
            logger.warning(
                f"{label} {params}: mu={result.mu:.10g} vs {reference.kind.value} "
                f"reference {reference.value:.10g}"
            )
        return ValidationRow(
            channel_label=label,
            params=params,
            mu_numeric=result.mu,
            mu_closed_form=reference.value,
            abs_error=abs(result.mu - reference.value),
            kind=reference.kind,
            passed=passed,
        )

    rows = _map_ordered(evaluate, validation_points(), jobs)
    report = ValidationReport(rows=rows, tolerance=tolerance)
    logger.info(f"Validation summary: {report.summary()} overall_pass={report.overall_pass}")
    return report


def validation_frame(report: ValidationReport) -> pd.DataFrame:
    records = [
        {
            "channel": row.channel_label,
            "params": ",".join(f"{k}={v:.6g}" for k, v in row.params.items()),
            "mu_numeric": row.mu_numeric,
            "mu_closed_form": row.mu_closed_form,
            "abs_error": row.abs_error,
            "kind": row.kind.value,
            "pass": "-" if row.passed is None else ("yes" if row.passed else "NO"),
        }
        for row in report.rows
    ]
    return pd.DataFrame(records)
