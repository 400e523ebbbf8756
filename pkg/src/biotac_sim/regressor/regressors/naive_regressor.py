import numpy as np

from ...schema import OUTPUT_CHANNELS
from ..base_regressor import BaseRegressor


class NaiveRegressor(BaseRegressor):
    """
    Constant predictor that always outputs the per-channel training mean.

    It ignores its input and anchors every relative error reported against it.

    Example:
        ```python
        naive = NaiveRegressor(WindowSpec(combo=3), channels=["pdc"])
        naive.fit(np.zeros((2, 6)), np.array([[0.0], [2.0]])).predict(np.zeros(6))
        ```
        ```python
        array([1.])
        ```
    """

    family = "naive"

    def __init__(self, window, channels=OUTPUT_CHANNELS):
        super().__init__(window, channels)
        self.mean = np.zeros(len(self.channels))

    def fit(self, X, Y, X_val=None, Y_val=None) -> "NaiveRegressor":
        _, Y = self._check_training_data(X, Y)
        self.mean = Y.mean(axis=0)
        self.is_fitted = True
        return self

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return np.tile(self.mean, (X.shape[0], 1))

    def param_count(self) -> int:
        return int(self.mean.size)

    def get_config(self):
        return {"mean": self.mean.tolist()}

    @classmethod
    def from_state(cls, config, arrays, window, channels) -> "NaiveRegressor":
        model = cls(window, channels)
        model.mean = np.asarray(config["mean"], dtype=np.float64)
        model.is_fitted = True
        return model
