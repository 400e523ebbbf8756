import logging
import warnings
from functools import cached_property
from typing import List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

logger = logging.getLogger(__name__)

Part = Literal["inputs", "outputs"]


class Scaler(BaseModel):
    """
    Per-column z-score statistics of model inputs and outputs.

    Attributes:
        input_mean: Mean of every input feature.
        input_std: Population standard deviation of every input feature.
        output_mean: Mean of every output channel.
        output_std: Population standard deviation of every output channel.
    """

    model_config = ConfigDict(frozen=True)

    input_mean: List[float]
    input_std: List[float]
    output_mean: List[float]
    output_std: List[float]

    @model_validator(mode="after")
    def _check(self):
        if len(self.input_mean) != len(self.input_std):
            raise ValueError("input_mean and input_std lengths differ.")
        if len(self.output_mean) != len(self.output_std):
            raise ValueError("output_mean and output_std lengths differ.")
        if any(s <= 0 for s in self.input_std + self.output_std):
            raise ValueError("Scaler standard deviations must be > 0.")
        return self

    @cached_property
    def arrays(self):
        return {
            "inputs": (np.asarray(self.input_mean), np.asarray(self.input_std)),
            "outputs": (np.asarray(self.output_mean), np.asarray(self.output_std)),
        }

    def apply(self, values: np.ndarray, part: Part = "outputs") -> np.ndarray:
        """``(v - mu) / sigma`` column-wise."""
        mu, sigma = self.arrays[part]
        return (np.asarray(values, dtype=np.float64) - mu) / sigma

    def invert(self, values: np.ndarray, part: Part = "outputs") -> np.ndarray:
        """``v * sigma + mu`` column-wise."""
        mu, sigma = self.arrays[part]
        return np.asarray(values, dtype=np.float64) * sigma + mu


def _stats(values: np.ndarray, label: str):
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    mu = values.mean(axis=0)
    sigma = values.std(axis=0)  # population (ddof=0)
    constant = sigma == 0
    if constant.any():
        cols = np.flatnonzero(constant).tolist()
        warnings.warn(
            f"Constant {label} columns {cols}; their standard deviation is set to 1.",
            UserWarning,
        )
        sigma = np.where(constant, 1.0, sigma)
    return mu.tolist(), sigma.tolist()


def fit_scaler(X: np.ndarray, Y: np.ndarray) -> Scaler:
    """
    Fit z-score statistics on training windows and targets.

    Constant columns get a standard deviation of 1, so they normalize to 0.

    Args:
        X: Training feature matrix.
        Y: Training target matrix in raw counts.

    Returns:
        Scaler: The fitted statistics.

    Example:
        ```python
        s = fit_scaler(np.zeros((2, 1)), np.array([[0.0], [2.0]]))
        s.apply(np.array([[0.0], [2.0]]))
        ```
        ```python
        array([[-1.], [ 1.]])
        ```
    """
    if len(X) == 0 or len(Y) == 0:
        raise ValueError("Cannot fit a scaler on empty data.")
    in_mu, in_sigma = _stats(X, "input")
    out_mu, out_sigma = _stats(Y, "output")
    logger.debug("Fitted scaler on %d samples", len(X))
    return Scaler(
        input_mean=in_mu, input_std=in_sigma, output_mean=out_mu, output_std=out_sigma
    )


def apply(scaler: Scaler, values: np.ndarray, part: Part = "outputs") -> np.ndarray:
    return scaler.apply(values, part)


def invert(scaler: Scaler, values: np.ndarray, part: Part = "outputs") -> np.ndarray:
    return scaler.invert(values, part)
