import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ...schema import OUTPUT_CHANNELS, GbtParams, WindowSpec
from ..base_regressor import BaseRegressor
from ..utils.boosting import ChannelEnsemble, PackedForest, Tree, fit_channel

logger = logging.getLogger(__name__)


class GbtRegressor(BaseRegressor):
    """
    Gradient-boosted regression trees with one independent ensemble per channel.

    Every channel is boosted with the same hyperparameters and the same sampling
    seed, so identical target columns produce identical ensembles. Channels can be
    fitted concurrently with ``n_jobs`` threads; the result does not depend on it.
    After fitting, all trees are packed into flat arrays and evaluated together.

    Args:
        window (WindowSpec): Input encoding.
        params (GbtParams): Boosting hyperparameters shared by every channel.
        channels (Sequence[str]): Output channels.
        seed (int): Seed of the row and column samplers.
        n_jobs (int): Worker threads used while fitting.

    Example:
        ```python
        model = GbtRegressor(WindowSpec(combo=3), GbtParams(n_estimators=20, max_depth=3))
        model.fit(X_train, Y_train)
        model.predict(X_test).shape
        ```
        ```python
        (1200, 21)
        ```
    """

    family = "gbt"

    def __init__(
        self,
        window: WindowSpec,
        params: Optional[GbtParams] = None,
        channels: Sequence[str] = OUTPUT_CHANNELS,
        seed: int = 0,
        n_jobs: int = 1,
    ):
        super().__init__(window, channels)
        self.params = params or GbtParams()
        self.seed = seed
        self.n_jobs = max(1, n_jobs)
        self.ensembles: List[ChannelEnsemble] = []
        self._forest: Optional[PackedForest] = None

    def fit(self, X, Y, X_val=None, Y_val=None) -> "GbtRegressor":
        X, Y = self._check_training_data(X, Y)
        logger.info(
            "Boosting %d channels x %d trees on %d samples",
            self.output_dim,
            self.params.n_estimators,
            X.shape[0],
        )

        def _fit(c: int) -> ChannelEnsemble:
            return fit_channel(X, Y[:, c], self.params, seed=self.seed)

        if self.n_jobs > 1:
            with ThreadPoolExecutor(max_workers=self.n_jobs) as pool:
                self.ensembles = list(pool.map(_fit, range(self.output_dim)))
        else:
            self.ensembles = [_fit(c) for c in range(self.output_dim)]
        self._pack()
        return self

    def _pack(self) -> None:
        self._forest = PackedForest.pack(self.ensembles)
        self.is_fitted = True

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return self._forest.predict(X)

    @property
    def node_count(self) -> int:
        return sum(e.node_count for e in self.ensembles)

    def param_count(self) -> int:
        return self.node_count

    def get_config(self) -> Dict[str, Any]:
        return {
            "params": self.params.model_dump(mode="json"),
            "seed": self.seed,
            "ensembles": [
                {
                    "base_score": e.base_score,
                    "eta": e.eta,
                    "trees": [t.to_dict() for t in e.trees],
                }
                for e in self.ensembles
            ],
        }

    @classmethod
    def from_state(cls, config, arrays, window, channels) -> "GbtRegressor":
        model = cls(window, GbtParams(**config["params"]), channels, seed=config.get("seed", 0))
        model.ensembles = [
            ChannelEnsemble(
                base_score=float(e["base_score"]),
                eta=float(e["eta"]),
                trees=[Tree.from_dict(t) for t in e["trees"]],
            )
            for e in config["ensembles"]
        ]
        if len(model.ensembles) != len(model.channels):
            raise ValueError("Stored ensembles do not match the channel list.")
        model._pack()
        return model
