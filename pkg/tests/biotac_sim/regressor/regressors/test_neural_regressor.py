import numpy as np
import pytest

from biotac_sim.regressor import (
    FeedForwardRegressor,
    NetworkBRegressor,
    TransformerRegressor,
)
from biotac_sim.schema import (
    BASELINE_OUTPUT_CHANNELS,
    OUTPUT_CHANNELS,
    FeedForwardSpec,
    NetSpec,
    NetworkBSpec,
    TrainConfig,
    TransformerSpec,
    WindowSpec,
)

QUICK = TrainConfig(batch_size=32, max_epochs=3, patience=2, seed=1)


@pytest.fixture
def ff_spec():
    return NetSpec(
        kind="feed_forward",
        feed_forward=FeedForwardSpec(widths=[16, 8], activations=["tanh", "relu"]),
        output_dim=2,
    )


def _data(width, outputs, n=120, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, width))
    return X, np.tanh(X[:, :outputs])


def test_feed_forward_fit(ff_spec):
    X, Y = _data(12, 2)
    model = FeedForwardRegressor(WindowSpec(combo=1), ff_spec, QUICK, channels=["pdc", "pac0"])
    model.fit(X[:100], Y[:100], X[100:], Y[100:])
    assert model.predict(X).shape == (120, 2)
    assert 1 <= model.curves.best_epoch <= 3
    assert model.param_count() == 12 * 16 + 16 + 16 * 8 + 8 + 8 * 2 + 2
    assert model.flops_count() == (2 * 12 * 16 + 16) + (2 * 16 * 8 + 8) + (2 * 8 * 2 + 2)


def test_same_seed_same_model(ff_spec):
    X, Y = _data(12, 2)
    a = FeedForwardRegressor(WindowSpec(combo=1), ff_spec, QUICK, ["pdc", "pac0"]).fit(X, Y)
    b = FeedForwardRegressor(WindowSpec(combo=1), ff_spec, QUICK, ["pdc", "pac0"]).fit(X, Y)
    np.testing.assert_array_equal(a.predict(X), b.predict(X))


def test_kind_must_match_family(ff_spec):
    with pytest.raises(ValueError, match="cannot build"):
        TransformerRegressor(WindowSpec(combo=1), ff_spec, QUICK, ["pdc", "pac0"])


def test_channel_count_must_match(ff_spec):
    with pytest.raises(ValueError, match="output_dim"):
        FeedForwardRegressor(WindowSpec(combo=1), ff_spec, QUICK, ["pdc"])


def test_default_channels_follow_output_dim():
    spec = NetSpec(kind="transformer", transformer=TransformerSpec(n_layers=1, embed_dim=8, n_heads=2, hidden_dim=8))
    assert TransformerRegressor(WindowSpec(combo=3), spec).channels == OUTPUT_CHANNELS
    baseline = NetSpec(kind="network_b", network_b=NetworkBSpec(), output_dim=23)
    window = WindowSpec(combo=1, include_temperature=True)
    assert NetworkBRegressor(window, baseline).channels == BASELINE_OUTPUT_CHANNELS


def test_transformer_fit():
    spec = NetSpec(
        kind="transformer",
        transformer=TransformerSpec(n_layers=1, n_heads=2, embed_dim=8, hidden_dim=16),
        output_dim=3,
    )
    X, Y = _data(12, 3, n=64)
    model = TransformerRegressor(WindowSpec(combo=1), spec, QUICK, ["a", "b", "c"]).fit(X, Y)
    assert model.predict(X[:5]).shape == (5, 3)
    assert model.flops_count() > 0


def test_network_b_with_temperature():
    spec = NetSpec(
        kind="network_b",
        network_b=NetworkBSpec(
            position_widths=[8], force_widths=[8], temperature_widths=[4], trunk_widths=[8]
        ),
        output_dim=2,
    )
    window = WindowSpec(combo=1, include_temperature=True)
    X, Y = _data(13, 2)
    model = NetworkBRegressor(window, spec, QUICK, ["pdc", "tac"]).fit(X, Y)
    assert model.predict(X).shape == (120, 2)
    clamped = NetworkBRegressor.with_temperature(X[:2], 2300.0)
    assert np.all(clamped[:, -1] == 2300.0)
    assert np.all(X[:2, -1] != 2300.0)


def test_network_b_temperature_fill():
    spec = NetSpec(kind="network_b", network_b=NetworkBSpec(temperature_fill=2250.0), output_dim=23)
    model = NetworkBRegressor(WindowSpec(combo=1, include_temperature=True), spec)
    assert model.temperature_fill == 2250.0


def test_state_round_trip(ff_spec):
    X, Y = _data(12, 2)
    model = FeedForwardRegressor(WindowSpec(combo=1), ff_spec, QUICK, ["pdc", "pac0"]).fit(X, Y)
    restored = FeedForwardRegressor.from_state(
        model.get_config(), model.get_arrays(), model.window, model.channels
    )
    np.testing.assert_array_equal(restored.predict(X), model.predict(X))
    assert restored.curves == model.curves


def test_state_with_missing_tensor(ff_spec):
    X, Y = _data(12, 2)
    model = FeedForwardRegressor(WindowSpec(combo=1), ff_spec, QUICK, ["pdc", "pac0"]).fit(X, Y)
    arrays = model.get_arrays()
    del arrays["head.W"]
    with pytest.raises(ValueError, match="head.W"):
        FeedForwardRegressor.from_state(model.get_config(), arrays, model.window, model.channels)
