import logging
from typing import List, Optional, Sequence

import numpy as np

from ..regressor import ModelBundle
from ..schema import Dataset, SweepCurve
from .experiment import FoldRun
from .metrics import normalized_mae

logger = logging.getLogger(__name__)


def temperature_grid(dataset: Dataset, size: int = 25) -> np.ndarray:
    """``size`` evenly spaced temperatures spanning the recording's ``tdc`` range."""
    if size < 2:
        raise ValueError("A temperature grid needs at least two points.")
    tdc = dataset.channels(["tdc"])[:, 0]
    return np.linspace(float(tdc.min()), float(tdc.max()), size)


def _score(bundle: ModelBundle, X: np.ndarray, Y_norm: np.ndarray, temperature=None) -> float:
    yhat = bundle.scaler.apply(bundle.predict_raw(X, temperature=temperature), "outputs")
    return normalized_mae(Y_norm, yhat, bundle.channels)


def fixed_temperature_sweep(
    bundle: ModelBundle,
    X_test: np.ndarray,
    Y_test: np.ndarray,
    grid: Sequence[float],
    mean_temperature: Optional[float] = None,
) -> SweepCurve:
    """
    Normalized MAE of a temperature-input model with its temperature clamped.

    The model is evaluated once per grid value, once with the true per-sample
    temperatures (last feature column) and once with the temperature fixed at
    ``mean_temperature``, by default the mean of the evaluated windows.

    Args:
        bundle: Fitted model whose window includes the temperature.
        X_test: Raw test windows.
        Y_test: Raw test targets in ``bundle.channels`` order.
        grid: Temperatures to probe (raw counts).
        mean_temperature: Reference fixed temperature, e.g. the recording mean.

    Returns:
        SweepCurve: The curve, its minimum and both reference points.

    Raises:
        ValueError: If the model does not take a temperature input or the grid is empty.
    """
    if not bundle.window.include_temperature:
        raise ValueError("The sweep needs a model with a temperature input.")
    grid = [float(t) for t in grid]
    if not grid:
        raise ValueError("The temperature grid is empty.")
    Y_norm = bundle.scaler.apply(Y_test, "outputs")
    curve = [_score(bundle, X_test, Y_norm, t) for t in grid]
    best = int(np.argmin(curve))
    if mean_temperature is None:
        mean_temperature = float(np.mean(np.asarray(X_test)[:, -1]))
    result = SweepCurve(
        grid=grid,
        norm_mae=curve,
        true_temperature_norm_mae=_score(bundle, X_test, Y_norm),
        best_temperature=grid[best],
        best_norm_mae=curve[best],
        mean_temperature=mean_temperature,
        mean_temperature_norm_mae=_score(bundle, X_test, Y_norm, mean_temperature),
    )
    logger.info(
        "Sweep: best fixed %.4f at %.1f, true temperature %.4f",
        result.best_norm_mae,
        result.best_temperature,
        result.true_temperature_norm_mae,
    )
    return result


def sweep_folds(
    runs: List[FoldRun],
    grid: Sequence[float],
    mean_temperature: Optional[float] = None,
) -> List[SweepCurve]:
    """Run the sweep on the test windows of every trained fold."""
    return [
        fixed_temperature_sweep(r.bundle, r.data.X_test, r.data.Y_test, grid, mean_temperature)
        for r in runs
    ]


def mean_curve(curves: List[SweepCurve]) -> Optional[SweepCurve]:
    """
    Fold-averaged sweep over a shared grid.

    The best point is taken on the averaged curve, as a single fixed temperature
    chosen for every fold.
    """
    if not curves:
        return None
    grid = curves[0].grid
    if any(c.grid != grid for c in curves):
        raise ValueError("Sweep curves must share one grid to be averaged.")
    avg = np.mean([c.norm_mae for c in curves], axis=0)
    best = int(np.argmin(avg))
    return SweepCurve(
        grid=grid,
        norm_mae=avg.tolist(),
        true_temperature_norm_mae=float(np.mean([c.true_temperature_norm_mae for c in curves])),
        best_temperature=grid[best],
        best_norm_mae=float(avg[best]),
        mean_temperature=float(np.mean([c.mean_temperature for c in curves])),
        mean_temperature_norm_mae=float(np.mean([c.mean_temperature_norm_mae for c in curves])),
    )
