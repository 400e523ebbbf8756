import logging
from abc import abstractmethod
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ...schema import (
    BASELINE_OUTPUT_CHANNELS,
    OUTPUT_CHANNELS,
    NetSpec,
    TrainConfig,
    TrainingCurves,
    WindowSpec,
)
from ..base_regressor import BaseRegressor
from ..utils.networks import Network
from ..utils.training import train_network

logger = logging.getLogger(__name__)


class NeuralRegressor(BaseRegressor):
    """
    Shared plumbing of the neural families.

    The architecture is described by a ``NetSpec`` and built by ``build_network``;
    parameters live in ``self.params`` (a name -> array dict) and are trained with
    mini-batch Adam on the absolute-plus-squared error.

    Args:
        window (WindowSpec): Input encoding.
        spec (NetSpec): Architecture.
        train (TrainConfig): Training protocol.
        channels (Sequence[str]): Output channels, ``spec.output_dim`` of them.
    """

    def __init__(
        self,
        window: WindowSpec,
        spec: NetSpec,
        train: Optional[TrainConfig] = None,
        channels: Optional[Sequence[str]] = None,
    ):
        super().__init__(window, channels or self.default_channels(spec))
        if spec.kind != self.family:
            raise ValueError(f"{type(self).__name__} cannot build a '{spec.kind}' network.")
        if spec.output_dim != len(self.channels):
            raise ValueError(
                f"NetSpec output_dim {spec.output_dim} does not match {len(self.channels)} channels."
            )
        self.spec = spec
        self.train_config = train or TrainConfig()
        self.network: Network = self.build_network()
        self.params: Dict[str, np.ndarray] = {}
        self.curves = TrainingCurves()

    @staticmethod
    def default_channels(spec: NetSpec) -> Sequence[str]:
        if spec.output_dim == len(OUTPUT_CHANNELS):
            return OUTPUT_CHANNELS
        return BASELINE_OUTPUT_CHANNELS

    @abstractmethod
    def build_network(self) -> Network:
        """The architecture described by ``self.spec``."""

    def fit(self, X, Y, X_val=None, Y_val=None) -> "NeuralRegressor":
        X, Y = self._check_training_data(X, Y)
        if X_val is not None and Y_val is not None:
            X_val = np.asarray(X_val, dtype=np.float64)
            Y_val = np.asarray(Y_val, dtype=np.float64)
        rng = np.random.default_rng(self.train_config.seed)
        initial = self.network.init_params(rng)
        logger.info(
            "Training %s (%d parameters) on %d samples",
            self.family,
            self.network.param_count(initial),
            X.shape[0],
        )
        self.params, self.curves = train_network(
            self.network, initial, X, Y, X_val, Y_val, self.train_config, rng
        )
        self.is_fitted = True
        return self

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return self.network.predict(self.params, X)

    def param_count(self) -> int:
        if self.params:
            return self.network.param_count(self.params)
        return self.network.param_count(self.network.init_params(np.random.default_rng(0)))

    def flops_count(self) -> int:
        return self.network.flops()

    def get_config(self) -> Dict[str, Any]:
        return {
            "spec": self.spec.model_dump(mode="json"),
            "train": self.train_config.model_dump(mode="json"),
            "curves": self.curves.model_dump(mode="json"),
        }

    def get_arrays(self) -> Dict[str, np.ndarray]:
        return dict(self.params)

    @classmethod
    def from_state(cls, config, arrays, window, channels) -> "NeuralRegressor":
        model = cls(
            window,
            NetSpec.model_validate(config["spec"]),
            TrainConfig.model_validate(config["train"]),
            channels,
        )
        expected = model.network.init_params(np.random.default_rng(0))
        for name, value in expected.items():
            if name not in arrays or arrays[name].shape != value.shape:
                raise ValueError(f"Stored parameter '{name}' is missing or has the wrong shape.")
        model.params = {name: arrays[name] for name in expected}
        model.curves = TrainingCurves.model_validate(config.get("curves", {}))
        model.is_fitted = True
        return model
