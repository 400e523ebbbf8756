from ..utils.networks import TransformerNet
from .neural_regressor import NeuralRegressor


class TransformerRegressor(NeuralRegressor):
    """
    Encoder-only transformer over one token per window timestep.

    Each token carries the position and force triples of its timestep (zero where the
    window combination does not sample one of them). The window must not include the
    temperature.
    """

    family = "transformer"

    def build_network(self) -> TransformerNet:
        return TransformerNet(self.window, self.spec.transformer, self.spec.output_dim)
