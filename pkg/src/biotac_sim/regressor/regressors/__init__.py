from .feed_forward_regressor import FeedForwardRegressor
from .gbt_regressor import GbtRegressor
from .naive_regressor import NaiveRegressor
from .network_b_regressor import NetworkBRegressor
from .neural_regressor import NeuralRegressor
from .transformer_regressor import TransformerRegressor

__all__ = [
    "FeedForwardRegressor",
    "GbtRegressor",
    "NaiveRegressor",
    "NetworkBRegressor",
    "NeuralRegressor",
    "TransformerRegressor",
]
