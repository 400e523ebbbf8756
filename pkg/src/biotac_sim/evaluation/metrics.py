from typing import Any, List, Optional, Sequence

import numpy as np

from ..features import Scaler
from ..regressor import NaiveRegressor
from ..schema import (
    OUTPUT_CHANNELS,
    UNSCORED_CHANNELS,
    FitError,
    FoldResult,
    WindowSpec,
)


def mae(y: np.ndarray, yhat: np.ndarray) -> float:
    """
    Mean absolute error over every element.

    Raises:
        ValueError: On a shape mismatch or empty input.
    """
    y = np.asarray(y, dtype=np.float64)
    yhat = np.asarray(yhat, dtype=np.float64)
    if y.shape != yhat.shape:
        raise ValueError(f"Shape mismatch: {y.shape} vs {yhat.shape}.")
    if y.size == 0:
        raise ValueError("MAE of an empty array is undefined.")
    return float(np.mean(np.abs(y - yhat)))


def channel_mae(y: np.ndarray, yhat: np.ndarray) -> np.ndarray:
    """Per-column MAE of two ``(n, channels)`` matrices."""
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    yhat = np.atleast_2d(np.asarray(yhat, dtype=np.float64))
    if y.shape != yhat.shape:
        raise ValueError(f"Shape mismatch: {y.shape} vs {yhat.shape}.")
    if y.shape[0] == 0:
        raise ValueError("MAE of an empty array is undefined.")
    return np.mean(np.abs(y - yhat), axis=0)


def scored_columns(channels: Sequence[str], subset: Optional[Sequence[str]] = None) -> List[int]:
    """
    Column indices of ``channels`` that are scored.

    ``pac1`` and ``tac`` are always left out. With ``subset`` only the listed
    channels are kept.

    Raises:
        ValueError: If the selection is empty or names an unknown channel.
    """
    channels = list(channels)
    if subset is None:
        subset = [c for c in channels if c not in UNSCORED_CHANNELS]
    unknown = [c for c in subset if c not in channels]
    if unknown:
        raise ValueError(f"Unknown channels {unknown}.")
    cols = [channels.index(c) for c in subset if c not in UNSCORED_CHANNELS]
    if not cols:
        raise ValueError("The channel subset is empty.")
    return cols


def normalized_mae(
    y_norm: np.ndarray,
    yhat_norm: np.ndarray,
    channels: Sequence[str] = OUTPUT_CHANNELS,
    subset: Optional[Sequence[str]] = None,
) -> float:
    """
    MAE on z-scored values, averaged over the scored channels.

    Args:
        y_norm: Normalized targets ``(n, len(channels))``.
        yhat_norm: Normalized predictions of the same shape.
        channels: Column names.
        subset: Channels to average over (defaults to every scored channel).

    Returns:
        float: Mean of the per-channel normalized MAE.

    Example:
        ```python
        normalized_mae(np.zeros((4, 2)), np.ones((4, 2)), channels=["e1", "e2"])
        ```
        ```python
        1.0
        ```
    """
    cols = scored_columns(channels, subset)
    per_channel = channel_mae(np.asarray(y_norm)[:, cols], np.asarray(yhat_norm)[:, cols])
    return float(per_channel.mean())


def naive_baseline(
    Y_train: np.ndarray,
    window: Optional[WindowSpec] = None,
    channels: Sequence[str] = OUTPUT_CHANNELS,
) -> NaiveRegressor:
    """
    Constant predictor of the per-channel training mean.

    Raises:
        FitError: If ``Y_train`` is empty.
    """
    Y_train = np.atleast_2d(np.asarray(Y_train, dtype=np.float64))
    if Y_train.shape[0] == 0:
        raise FitError("The naive baseline needs at least one training target.")
    window = window or WindowSpec()
    model = NaiveRegressor(window, channels)
    return model.fit(np.zeros((Y_train.shape[0], window.input_size)), Y_train)


def score_predictions(
    Y_raw: np.ndarray,
    Yhat_raw: np.ndarray,
    scaler: Scaler,
    channels: Sequence[str],
    **meta: Any,
) -> FoldResult:
    """
    Build a ``FoldResult`` from raw targets and raw predictions.

    Both are normalized with the training output statistics before the normalized
    MAE is taken; unscored channels are dropped.

    Args:
        Y_raw: Test targets in raw counts ``(n, len(channels))``.
        Yhat_raw: Predictions in raw counts.
        scaler: Scaler fitted on the training fold.
        channels: Column names of ``Y_raw``.
        **meta: Remaining ``FoldResult`` fields (fold, family, combo, n_train...).

    Returns:
        FoldResult: Per-channel and aggregated errors.
    """
    cols = scored_columns(channels)
    raw = channel_mae(Y_raw[:, cols], Yhat_raw[:, cols])
    norm = channel_mae(
        scaler.apply(Y_raw, "outputs")[:, cols], scaler.apply(Yhat_raw, "outputs")[:, cols]
    )
    return FoldResult.from_channel_errors(
        channels=[channels[c] for c in cols],
        channel_mae=raw.tolist(),
        channel_norm_mae=norm.tolist(),
        **meta,
    )

