import json

import numpy as np
import pytest

from biotac_sim.features import fit_scaler
from biotac_sim.regressor import (
    GbtRegressor,
    ModelBundle,
    NaiveRegressor,
    NetworkBRegressor,
    TransformerRegressor,
)
from biotac_sim.schema import (
    GbtParams,
    NetSpec,
    NetworkBSpec,
    TrainConfig,
    TransformerSpec,
    WindowSpec,
)

CHANNELS = ["pdc", "pac0"]


def _raw(width, n=80, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(10.0, 3.0, size=(n, width))
    Y = np.column_stack([1500 + 20 * X[:, 0], 2000 + 5 * X[:, 1]])
    return X, Y


def _bundle(regressor, X, Y):
    scaler = fit_scaler(X, Y)
    regressor.fit(scaler.apply(X, "inputs"), scaler.apply(Y, "outputs"))
    return ModelBundle(regressor=regressor, scaler=scaler)


@pytest.fixture
def gbt_bundle():
    X, Y = _raw(6)
    return _bundle(GbtRegressor(WindowSpec(combo=3), GbtParams(n_estimators=5, max_depth=2), CHANNELS), X, Y), X


@pytest.fixture
def transformer_bundle():
    X, Y = _raw(12)
    spec = NetSpec(
        kind="transformer",
        transformer=TransformerSpec(n_layers=1, n_heads=2, embed_dim=8, hidden_dim=8),
        output_dim=2,
    )
    model = TransformerRegressor(WindowSpec(combo=1), spec, TrainConfig(max_epochs=2), CHANNELS)
    return _bundle(model, X, Y), X


@pytest.mark.parametrize("name", ["gbt_bundle", "transformer_bundle"])
def test_save_load_round_trip(name, request, tmp_path):
    bundle, X = request.getfixturevalue(name)
    path = bundle.save(tmp_path / "models" / "m.json")
    loaded = ModelBundle.load(path)
    assert loaded.family == bundle.family
    assert loaded.channels == CHANNELS
    assert loaded.window == bundle.window
    assert np.max(np.abs(loaded.predict_raw(X) - bundle.predict_raw(X))) <= 1e-12


def test_header_describes_the_model(transformer_bundle, tmp_path):
    bundle, _ = transformer_bundle
    header = json.loads(bundle.save(tmp_path / "m.json").read_text())
    assert header["family"] == "transformer"
    assert header["blob"] == "m.bin"
    assert header["param_count"] == bundle.regressor.param_count()
    assert header["flops"] == bundle.regressor.flops_count()
    assert (tmp_path / "m.bin").is_file()


def test_gbt_has_no_blob(gbt_bundle, tmp_path):
    bundle, _ = gbt_bundle
    header = json.loads(bundle.save(tmp_path / "m.json").read_text())
    assert header["blob"] is None
    assert not (tmp_path / "m.bin").exists()


def test_naive_bundle_predicts_raw_mean(tmp_path):
    X, Y = _raw(6)
    bundle = _bundle(NaiveRegressor(WindowSpec(combo=3), CHANNELS), X, Y)
    loaded = ModelBundle.load(bundle.save(tmp_path / "naive.json"))
    np.testing.assert_allclose(loaded.predict_raw(X[0]), Y.mean(axis=0), atol=1e-9)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError, match="file not found"):
        ModelBundle.load(tmp_path / "absent.json")


def test_missing_blob(transformer_bundle, tmp_path):
    bundle, _ = transformer_bundle
    path = bundle.save(tmp_path / "m.json")
    (tmp_path / "m.bin").unlink()
    with pytest.raises(FileNotFoundError):
        ModelBundle.load(path)


def test_unknown_family(gbt_bundle, tmp_path):
    bundle, _ = gbt_bundle
    path = bundle.save(tmp_path / "m.json")
    header = json.loads(path.read_text())
    header["family"] = "forest"
    path.write_text(json.dumps(header))
    with pytest.raises(ValueError, match="unknown model family"):
        ModelBundle.load(path)


def test_not_a_model_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("hello")
    with pytest.raises(ValueError):
        ModelBundle.load(path)


def test_temperature_clamp_needs_temperature_input(gbt_bundle):
    bundle, X = gbt_bundle
    with pytest.raises(ValueError):
        bundle.predict_raw(X, temperature=2300.0)


def test_temperature_clamp_changes_only_last_column():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(60, 13))
    X[:, -1] = rng.uniform(2100, 2500, 60)
    Y = np.column_stack([X[:, -1], X[:, 0]])
    spec = NetSpec(
        kind="network_b",
        network_b=NetworkBSpec(position_widths=[4], force_widths=[4], temperature_widths=[4], trunk_widths=[4]),
        output_dim=2,
    )
    window = WindowSpec(combo=1, include_temperature=True)
    bundle = _bundle(NetworkBRegressor(window, spec, TrainConfig(max_epochs=2), ["tac", "pdc"]), X, Y)
    clamped = bundle.predict_raw(X, temperature=2300.0)
    np.testing.assert_allclose(clamped, bundle.predict_raw(NetworkBRegressor.with_temperature(X, 2300.0)))
    assert bundle.predict_raw(X[0], temperature=2300.0).shape == (2,)
