from .base_regressor import BaseRegressor
from .bundle import ModelBundle
from .registry import REGRESSORS, build_regressor, load_preset, resolve_model_config
from .regressors import (
    FeedForwardRegressor,
    GbtRegressor,
    NaiveRegressor,
    NetworkBRegressor,
    NeuralRegressor,
    TransformerRegressor,
)
from .utils import adam_step, fit_channel, l1_l2_loss, train_network

__all__ = [
    "BaseRegressor",
    "FeedForwardRegressor",
    "GbtRegressor",
    "ModelBundle",
    "NaiveRegressor",
    "NetworkBRegressor",
    "NeuralRegressor",
    "REGRESSORS",
    "TransformerRegressor",
    "adam_step",
    "build_regressor",
    "fit_channel",
    "load_preset",
    "l1_l2_loss",
    "resolve_model_config",
    "train_network",
]
