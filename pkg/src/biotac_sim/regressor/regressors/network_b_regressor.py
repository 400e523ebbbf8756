from typing import Optional

import numpy as np

from ..utils.networks import NetworkBNet
from .neural_regressor import NeuralRegressor


class NetworkBRegressor(NeuralRegressor):
    """
    Temperature-input baseline with three input columns merged into a trunk.

    The window must include the temperature, which is the last feature. By default
    the network is trained on 23 channels (``pac1`` and ``tac`` included); only the
    21 scored channels enter the metrics.
    """

    family = "network_b"

    def build_network(self) -> NetworkBNet:
        return NetworkBNet(self.window, self.spec.network_b, self.spec.output_dim)

    @property
    def temperature_fill(self) -> Optional[float]:
        """Temperature (raw counts) substituted at inference, if configured."""
        return self.spec.network_b.temperature_fill

    @staticmethod
    def with_temperature(X: np.ndarray, temperature: float) -> np.ndarray:
        """
        Copy of raw features ``X`` with the temperature column clamped.

        Example:
            ```python
            NetworkBRegressor.with_temperature(np.array([[1.0, 2.0, 2100.0]]), 2300.0)
            ```
            ```python
            array([[   1.,    2., 2300.]])
            ```
        """
        X = np.array(X, dtype=np.float64, ndmin=2)
        X[:, -1] = temperature
        return X
