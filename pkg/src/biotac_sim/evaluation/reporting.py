import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..schema import (
    ELECTRODE_NAMES,
    CalibrationReport,
    FoldResult,
    LatencyReport,
    SweepCurve,
    TrainingCurves,
    TTestReport,
)
from .stats import corrected_ttest, paired_differences

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_META_COLUMNS = [
    "name",
    "family",
    "combo",
    "include_temperature",
    "fold",
    "n_train",
    "n_test",
    "param_count",
    "flops",
    "mae_all",
    "norm_mae_all",
    "mae_electrodes",
    "norm_mae_electrodes",
]


def _write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


# ------------ #
# Results file #
# ------------ #


def results_frame(results: Sequence[FoldResult], name: str = "") -> pd.DataFrame:
    """One row per fold result; per-channel errors in ``mae_<ch>``/``nmae_<ch>`` columns."""
    rows = []
    for r in results:
        row: Dict[str, Any] = {
            "name": name,
            "family": r.family,
            "combo": r.combo,
            "include_temperature": r.include_temperature,
            "fold": r.fold,
            "n_train": r.n_train,
            "n_test": r.n_test,
            "param_count": r.param_count,
            "flops": r.flops if r.flops is not None else -1,
            "mae_all": r.mae_all,
            "norm_mae_all": r.norm_mae_all,
            "mae_electrodes": r.mae_electrodes,
            "norm_mae_electrodes": r.norm_mae_electrodes,
        }
        for ch, m, nm in zip(r.channels, r.channel_mae, r.channel_norm_mae):
            row[f"mae_{ch}"] = m
            row[f"nmae_{ch}"] = nm
        rows.append(row)
    return pd.DataFrame(rows)


def write_results(results: Sequence[FoldResult], path: PathLike, name: str = "") -> Path:
    """Write fold results as CSV (one row per fold x model x combination)."""
    path = _write_csv(results_frame(results, name), path)
    logger.info("Wrote %d fold results to %s", len(results), path)
    return path


def read_results(path: PathLike) -> List[FoldResult]:
    """
    Read a results CSV written by ``write_results``.

    Raises:
        FileNotFoundError: If ``path`` does not exist.
        ValueError: If required columns are missing.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"file not found: {path}")
    frame = pd.read_csv(path, float_precision="round_trip", keep_default_na=False)
    missing = [c for c in _META_COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"{path}: not a results file, missing columns {missing}.")
    channels = [c[len("nmae_"):] for c in frame.columns if c.startswith("nmae_")]
    results = []
    for row in frame.to_dict(orient="records"):
        flops = int(row["flops"])
        results.append(
            FoldResult(
                fold=int(row["fold"]),
                family=row["family"],
                combo=int(row["combo"]),
                include_temperature=bool(row["include_temperature"]),
                channels=channels,
                channel_mae=[float(row[f"mae_{c}"]) for c in channels],
                channel_norm_mae=[float(row[f"nmae_{c}"]) for c in channels],
                mae_all=float(row["mae_all"]),
                norm_mae_all=float(row["norm_mae_all"]),
                mae_electrodes=float(row["mae_electrodes"]),
                norm_mae_electrodes=float(row["norm_mae_electrodes"]),
                n_train=int(row["n_train"]),
                n_test=int(row["n_test"]),
                param_count=int(row["param_count"]),
                flops=None if flops < 0 else flops,
            )
        )
    return results


# ------- #
# Summary #
# ------- #


def summarize(results: Sequence[FoldResult]) -> List[Dict[str, Any]]:
    """
    Mean and standard deviation over folds, per family and window combination.

    Returns:
        List[Dict[str, Any]]: One record per ``(family, combo, include_temperature)``
            with ``<metric>_mean``/``<metric>_std`` for the four aggregate metrics,
            the mean parameter count (nodes for trees) and FLOPs.
    """
    if not results:
        return []
    frame = results_frame(results)
    metrics = ["mae_all", "norm_mae_all", "mae_electrodes", "norm_mae_electrodes"]
    keys = ["family", "combo", "include_temperature"]
    records = []
    for key, group in frame.groupby(keys, sort=True):
        record: Dict[str, Any] = dict(zip(keys, (str(key[0]), int(key[1]), bool(key[2]))))
        record["n_folds"] = int(len(group))
        for m in metrics:
            record[f"{m}_mean"] = float(group[m].mean())
            record[f"{m}_std"] = float(group[m].std(ddof=0))
        record["param_count"] = float(group["param_count"].mean())
        flops = group["flops"]
        record["flops"] = None if (flops < 0).any() else float(flops.mean())
        records.append(record)
    return records


def compare_results(
    first: Sequence[FoldResult],
    second: Sequence[FoldResult],
    metric: str = "norm_mae_all",
    label: Optional[str] = None,
) -> TTestReport:
    """
    Corrected paired t-test of ``first`` against ``second`` over their shared folds.

    The differences are ``first - second`` of ``metric``; the correction uses the
    mean training and test window counts of ``first``. A small p-value means
    ``first`` has the lower error.
    """
    a = {r.fold: getattr(r, metric) for r in first}
    b = {r.fold: getattr(r, metric) for r in second}
    diffs = paired_differences(a, b)
    shared = set(b)
    n_train = float(np.mean([r.n_train for r in first if r.fold in shared]))
    n_test = float(np.mean([r.n_test for r in first if r.fold in shared]))
    return corrected_ttest(diffs, n_train, n_test, label=label)


def compare_against(
    reference: Sequence[FoldResult],
    others: Mapping[str, Sequence[FoldResult]],
    metric: str = "norm_mae_all",
) -> Dict[str, TTestReport]:
    """
    Test one reference configuration against several others.

    Returns:
        Dict[str, TTestReport]: Keyed by the names of ``others``.
    """
    return {
        name: compare_results(reference, results, metric, label=f"reference vs {name}")
        for name, results in others.items()
    }


# --------- #
# Plot data #
# --------- #


def write_channel_errors(results: Sequence[FoldResult], path: PathLike) -> Path:
    """Long-format per-channel errors: ``family, combo, fold, channel, electrode, mae, norm_mae``."""
    rows = [
        {
            "family": r.family,
            "combo": r.combo,
            "fold": r.fold,
            "channel": ch,
            "electrode": ch in ELECTRODE_NAMES,
            "mae": m,
            "norm_mae": nm,
        }
        for r in results
        for ch, m, nm in zip(r.channels, r.channel_mae, r.channel_norm_mae)
    ]
    return _write_csv(pd.DataFrame(rows), path)


def write_training_curves(curves: Mapping[int, TrainingCurves], path: PathLike) -> Path:
    """Per-epoch losses of every fold: ``fold, epoch, train_loss, val_loss, best``."""
    rows = [
        {
            "fold": fold,
            "epoch": epoch,
            "train_loss": tr,
            "val_loss": va,
            "best": epoch == c.best_epoch,
        }
        for fold, c in sorted(curves.items())
        for epoch, (tr, va) in enumerate(zip(c.train_loss, c.val_loss), start=1)
    ]
    return _write_csv(
        pd.DataFrame(rows, columns=["fold", "epoch", "train_loss", "val_loss", "best"]), path
    )


def write_sweep(curve: SweepCurve, path: PathLike) -> Path:
    """Sweep curve with both reference lines as constant columns."""
    frame = pd.DataFrame(
        {
            "temperature": curve.grid,
            "norm_mae": curve.norm_mae,
            "true_temperature_norm_mae": curve.true_temperature_norm_mae,
            "mean_temperature_norm_mae": curve.mean_temperature_norm_mae,
        }
    )
    return _write_csv(frame, path)


def write_histogram(counts: Sequence[int], path: PathLike) -> Path:
    """Contacts per electrode: ``electrode, count``."""
    frame = pd.DataFrame({"electrode": ELECTRODE_NAMES[: len(counts)], "count": list(counts)})
    return _write_csv(frame, path)


def write_latency(reports: Sequence[LatencyReport], path: PathLike) -> Path:
    """Latency against parameter count and FLOPs, one row per model."""
    frame = pd.DataFrame([r.model_dump() for r in reports])
    return _write_csv(frame, path)


def write_calibration_trace(report: CalibrationReport, path: PathLike) -> Path:
    """Mean probe distance after every calibration step: ``step, mean_dist_mm``."""
    frame = pd.DataFrame(
        {"step": np.arange(1, len(report.trace) + 1), "mean_dist_mm": report.trace}
    )
    return _write_csv(frame, path)
