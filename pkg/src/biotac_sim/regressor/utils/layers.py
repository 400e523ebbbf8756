"""Functional building blocks: every layer is a forward/backward pair on numpy arrays.

Forward functions never mutate state; whatever the backward pass needs is returned
as a cache. All arithmetic is float64.
"""

from typing import Dict, Optional, Tuple

import numpy as np

from ...schema import SUPPORTED_ACTIVATIONS

LAYER_NORM_EPS = 1e-5
_GELU_C = np.sqrt(2.0 / np.pi)


# ----- #
# Dense #
# ----- #


def init_dense(
    rng: np.random.Generator, fan_in: int, fan_out: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Weights uniform in ``+-sqrt(6 / (fan_in + fan_out))``, zero bias."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out)), np.zeros(fan_out)


def dense_forward(x: np.ndarray, W: np.ndarray, b: np.ndarray) -> np.ndarray:
    return x @ W + b


def dense_backward(
    dy: np.ndarray, x: np.ndarray, W: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients ``(dx, dW, db)`` of ``y = x @ W + b`` for inputs of any leading shape."""
    x2 = x.reshape(-1, W.shape[0])
    dy2 = dy.reshape(-1, W.shape[1])
    return dy @ W.T, x2.T @ dy2, dy2.sum(axis=0)


def dense_flops(fan_in: int, fan_out: int) -> int:
    """Multiply-adds of the matrix product plus the bias add."""
    return 2 * fan_in * fan_out + fan_out


# ----------- #
# Activations #
# ----------- #


def activation_forward(name: str, x: np.ndarray, negative_slope: float = 0.01) -> np.ndarray:
    if name == "sigmoid":
        return 0.5 * (1.0 + np.tanh(0.5 * x))
    if name == "relu":
        return np.maximum(x, 0.0)
    if name == "hardtanh":
        return np.clip(x, -1.0, 1.0)
    if name == "tanh":
        return np.tanh(x)
    if name == "leakyrelu":
        return np.where(x > 0, x, negative_slope * x)
    if name == "elu":
        return np.where(x > 0, x, np.expm1(np.minimum(x, 0.0)))
    raise ValueError(f"Unsupported activation '{name}'; choose from {SUPPORTED_ACTIVATIONS}.")


def activation_backward(
    name: str,
    x: np.ndarray,
    y: np.ndarray,
    dy: np.ndarray,
    negative_slope: float = 0.01,
) -> np.ndarray:
    """Gradient w.r.t. the pre-activation ``x`` given the output ``y``."""
    if name == "sigmoid":
        return dy * y * (1.0 - y)
    if name == "relu":
        return dy * (x > 0)
    if name == "hardtanh":
        return dy * ((x > -1.0) & (x < 1.0))
    if name == "tanh":
        return dy * (1.0 - y * y)
    if name == "leakyrelu":
        return dy * np.where(x > 0, 1.0, negative_slope)
    if name == "elu":
        return dy * np.where(x > 0, 1.0, y + 1.0)
    raise ValueError(f"Unsupported activation '{name}'; choose from {SUPPORTED_ACTIVATIONS}.")


def gelu_forward(x: np.ndarray) -> np.ndarray:
    """GELU, tanh approximation."""
    return 0.5 * x * (1.0 + np.tanh(_GELU_C * (x + 0.044715 * x**3)))


def gelu_backward(x: np.ndarray, dy: np.ndarray) -> np.ndarray:
    inner = _GELU_C * (x + 0.044715 * x**3)
    t = np.tanh(inner)
    d_inner = _GELU_C * (1.0 + 3 * 0.044715 * x**2)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * d_inner)


# ---------- #
# Layer norm #
# ---------- #


def layer_norm_forward(
    x: np.ndarray, gamma: np.ndarray, beta: np.ndarray
) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
    mu = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + LAYER_NORM_EPS)
    xhat = (x - mu) * inv_std
    return xhat * gamma + beta, {"xhat": xhat, "inv_std": inv_std}


def layer_norm_backward(
    dy: np.ndarray, cache: Dict[str, np.ndarray], gamma: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients ``(dx, dgamma, dbeta)``."""
    xhat, inv_std = cache["xhat"], cache["inv_std"]
    width = xhat.shape[-1]
    dgamma = (dy * xhat).reshape(-1, width).sum(axis=0)
    dbeta = dy.reshape(-1, width).sum(axis=0)
    dxhat = dy * gamma
    dx = (
        inv_std
        / width
        * (
            width * dxhat
            - dxhat.sum(axis=-1, keepdims=True)
            - xhat * (dxhat * xhat).sum(axis=-1, keepdims=True)
        )
    )
    return dx, dgamma, dbeta


# ------- #
# Dropout #
# ------- #


def dropout_forward(
    x: np.ndarray,
    rate: float,
    training: bool,
    rng: Optional[np.random.Generator],
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Inverted dropout; identity (and no mask) outside training."""
    if not training or rate <= 0.0:
        return x, None
    if rng is None:
        raise ValueError("Dropout during training needs a random generator.")
    mask = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return x * mask, mask


def dropout_backward(dy: np.ndarray, mask: Optional[np.ndarray]) -> np.ndarray:
    return dy if mask is None else dy * mask


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    shifted = x - x.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)
