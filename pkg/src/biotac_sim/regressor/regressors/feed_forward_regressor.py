from ..utils.networks import FeedForwardNet
from .neural_regressor import NeuralRegressor


class FeedForwardRegressor(NeuralRegressor):
    """
    Dense network over the flat window feature vector.

    Hidden layers follow ``spec.feed_forward.widths`` with one activation each
    (``sigmoid``, ``relu``, ``hardtanh``, ``tanh``, ``leakyrelu`` or ``elu``) and a
    linear head emits every channel.
    """

    family = "feed_forward"

    def build_network(self) -> FeedForwardNet:
        return FeedForwardNet(self.input_size, self.spec.feed_forward, self.spec.output_dim)
