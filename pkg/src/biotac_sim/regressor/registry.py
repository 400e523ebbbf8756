import json
import logging
from functools import lru_cache
from importlib import resources
from typing import Any, Dict, Type

from ..schema import (
    BASELINE_EPOCHS,
    BASELINE_OUTPUT_CHANNELS,
    ModelConfig,
    NetSpec,
    NetworkBSpec,
    TrainConfig,
    TransformerSpec,
    WindowSpec,
)
from .base_regressor import BaseRegressor
from .regressors import (
    FeedForwardRegressor,
    GbtRegressor,
    NaiveRegressor,
    NetworkBRegressor,
    TransformerRegressor,
)

logger = logging.getLogger(__name__)

REGRESSORS: Dict[str, Type[BaseRegressor]] = {
    "gbt": GbtRegressor,
    "feed_forward": FeedForwardRegressor,
    "transformer": TransformerRegressor,
    "network_b": NetworkBRegressor,
    "naive": NaiveRegressor,
}

PRESET_FAMILIES = ("gbt", "feed_forward", "transformer", "network_b")


@lru_cache(maxsize=None)
def _preset_table(family: str) -> Dict[str, Any]:
    source = resources.files("biotac_sim.regressor").joinpath("presets", f"{family}.json")
    return json.loads(source.read_text(encoding="utf-8"))


def load_preset(family: str, combo: int) -> ModelConfig:
    """
    Selected hyperparameters of ``family`` for window combination ``combo``.

    Args:
        family: One of ``gbt``, ``feed_forward``, ``transformer`` or ``network_b``.
        combo: Window combination 1-8 (the baseline ships for combination 1 only).

    Returns:
        ModelConfig: Configuration with the ``gbt`` or ``net``/``train`` sections filled.

    Raises:
        ValueError: If no preset exists for the pair.

    Example:
        ```python
        load_preset("transformer", 1).net.transformer.n_layers
        ```
        ```python
        3
        ```
    """
    if family not in PRESET_FAMILIES:
        raise ValueError(f"No presets for family '{family}'; expected one of {PRESET_FAMILIES}.")
    entry = _preset_table(family).get(str(combo))
    if entry is None:
        raise ValueError(f"No {family} preset for window combination {combo}.")
    return ModelConfig.model_validate({"family": family, "preset": True, **entry})


def resolve_model_config(model: ModelConfig, combo: int) -> ModelConfig:
    """
    Fill the missing sections of ``model`` from its preset or the family defaults.

    Explicit sections always win over the preset.

    Raises:
        ValueError: If a feed-forward model has neither a ``net`` section nor a preset.
    """
    base = load_preset(model.family, combo) if model.preset else None
    gbt = model.gbt or (base.gbt if base else None)
    net = model.net or (base.net if base else None)
    train = model.train or (base.train if base else None)
    if model.family == "network_b":
        net = net or NetSpec(
            kind="network_b", network_b=NetworkBSpec(), output_dim=len(BASELINE_OUTPUT_CHANNELS)
        )
        train = train or TrainConfig(max_epochs=BASELINE_EPOCHS, early_stopping=False)
    elif model.family == "transformer":
        net = net or NetSpec(kind="transformer", transformer=TransformerSpec())
    elif model.family == "feed_forward" and net is None:
        raise ValueError("A feed_forward model needs a 'net' section or preset=true.")
    return model.model_copy(update={"gbt": gbt, "net": net, "train": train})


def build_regressor(
    model: ModelConfig,
    window: WindowSpec,
    seed: int = 0,
    n_jobs: int = 1,
) -> BaseRegressor:
    """
    Instantiate an unfitted regressor for ``model`` on ``window``.

    ``seed`` drives the tree samplers and replaces the training seed of neural models.

    Args:
        model: Family and hyperparameters (presets are resolved here).
        window: Input encoding.
        seed: Fitting seed.
        n_jobs: Worker threads for per-channel tree fitting.

    Returns:
        BaseRegressor: The regressor.
    """
    model = resolve_model_config(model, window.combo)
    cls = REGRESSORS[model.family]
    if model.family == "gbt":
        return cls(window, model.gbt, seed=seed, n_jobs=n_jobs)
    if model.family == "naive":
        return cls(window)
    train = (model.train or TrainConfig()).model_copy(update={"seed": seed})
    logger.debug("Building %s regressor for combo %d", model.family, window.combo)
    return cls(window, model.net, train)
