from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..schema import DimensionMismatchError, FitError, WindowSpec


class BaseRegressor(ABC):
    """
    Abstract base class for every channel regressor.

    A regressor maps normalized window feature vectors to normalized output channels.
    Scaling to and from raw counts is done outside, by the ``ModelBundle`` that owns
    the regressor together with its ``Scaler``. Subclasses implement the actual
    learning in ``fit`` and ``_predict``, and describe themselves through
    ``get_config``/``get_arrays`` so that a bundle can write them to disk.

    Attributes:
        family (str): Registry name of the family (``"gbt"``, ``"transformer"``...).
        window (WindowSpec): Input encoding the regressor was built for.
        channels (List[str]): Output channels, in column order.

    Methods:
        fit: Learn from normalized training (and optionally validation) data.
        predict: Normalized outputs for one vector or a batch, with a width check.
        param_count: Learnable parameters (tree nodes for boosted trees).
        flops_count: FLOPs of one forward pass, ``None`` when not defined.
        get_config: JSON-serialisable description of the fitted model.
        get_arrays: Large parameter tensors stored in the binary blob.
        from_state: Rebuild a fitted regressor from ``get_config``/``get_arrays``.
    """

    family: str = ""

    def __init__(self, window: WindowSpec, channels: Sequence[str]):
        """
        Initializer method for BaseRegressor classes
        """
        if not channels:
            raise ValueError("A regressor needs at least one output channel.")
        self.window = window
        self.channels: List[str] = list(channels)
        self.is_fitted = False

    @property
    def input_size(self) -> int:
        return self.window.input_size

    @property
    def output_dim(self) -> int:
        return len(self.channels)

    @abstractmethod
    def fit(
        self,
        X: np.ndarray,
        Y: np.ndarray,
        X_val: Optional[np.ndarray] = None,
        Y_val: Optional[np.ndarray] = None,
    ) -> "BaseRegressor":
        """
        Learn the mapping from normalized windows to normalized channels.

        Args:
            X (np.ndarray): Training features ``(n, input_size)``.
            Y (np.ndarray): Training targets ``(n, output_dim)``.
            X_val (Optional[np.ndarray]): Validation features.
            Y_val (Optional[np.ndarray]): Validation targets.

        Returns:
            BaseRegressor: ``self``, fitted.

        Raises:
            FitError: If the training data is empty or inconsistent.
        """

    @abstractmethod
    def _predict(self, X: np.ndarray) -> np.ndarray:
        """Outputs for a validated ``(n, input_size)`` batch."""

    @abstractmethod
    def param_count(self) -> int:
        """Learnable parameters (nodes for tree ensembles)."""

    def flops_count(self) -> Optional[int]:
        """FLOPs per forward pass; only neural networks define it."""
        return None

    @abstractmethod
    def get_config(self) -> Dict[str, Any]:
        """JSON-serialisable hyperparameters and small state."""

    def get_arrays(self) -> Dict[str, np.ndarray]:
        """Named parameter tensors, written in this order to the binary blob."""
        return {}

    @classmethod
    @abstractmethod
    def from_state(
        cls,
        config: Dict[str, Any],
        arrays: Dict[str, np.ndarray],
        window: WindowSpec,
        channels: Sequence[str],
    ) -> "BaseRegressor":
        """Rebuild a fitted regressor written with ``get_config``/``get_arrays``."""

    def predict(self, X: np.ndarray) -> np.ndarray:
        """
        Predict normalized channels.

        Args:
            X (np.ndarray): One feature vector or a batch ``(n, input_size)``.

        Returns:
            np.ndarray: ``(output_dim,)`` for a single vector, else ``(n, output_dim)``.

        Raises:
            RuntimeError: If the regressor has not been fitted.
            DimensionMismatchError: If the feature width differs from ``input_size``.
        """
        if not self.is_fitted:
            raise RuntimeError(f"{type(self).__name__} must be fitted before predicting.")
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.ndim != 2 or X.shape[1] != self.input_size:
            raise DimensionMismatchError(
                f"Expected feature vectors of width {self.input_size}, got shape {X.shape}."
            )
        out = self._predict(X)
        return out[0] if single else out

    def _check_training_data(
        self, X: np.ndarray, Y: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        X = np.asarray(X, dtype=np.float64)
        Y = np.asarray(Y, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] == 0:
            raise FitError("Cannot fit on an empty training set.")
        if Y.shape != (X.shape[0], self.output_dim):
            raise FitError(
                f"Targets must have shape ({X.shape[0]}, {self.output_dim}), got {Y.shape}."
            )
        if X.shape[1] != self.input_size:
            raise DimensionMismatchError(
                f"Expected feature vectors of width {self.input_size}, got {X.shape[1]}."
            )
        return X, Y
