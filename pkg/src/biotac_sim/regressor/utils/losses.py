from typing import Tuple

import numpy as np

from ...schema import DimensionMismatchError


def _check(y: np.ndarray, yhat: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=np.float64)
    yhat = np.asarray(yhat, dtype=np.float64)
    if y.shape != yhat.shape:
        raise DimensionMismatchError(f"Shape mismatch: {y.shape} vs {yhat.shape}.")
    if y.size == 0:
        raise DimensionMismatchError("Loss of an empty batch is undefined.")
    return y, yhat


def l1_l2_loss(y: np.ndarray, yhat: np.ndarray) -> float:
    """
    Mean of ``|y - yhat| + (y - yhat)^2`` over every element.

    Example:
        ```python
        l1_l2_loss(np.array([2.0]), np.array([0.0]))
        ```
        ```python
        6.0
        ```
    """
    y, yhat = _check(y, yhat)
    e = y - yhat
    return float(np.mean(np.abs(e) + e * e))


def l1_l2_loss_grad(y: np.ndarray, yhat: np.ndarray) -> Tuple[float, np.ndarray]:
    """The loss and its gradient with respect to ``yhat``."""
    y, yhat = _check(y, yhat)
    e = y - yhat
    loss = float(np.mean(np.abs(e) + e * e))
    grad = (-np.sign(e) - 2.0 * e) / e.size
    return loss, grad
