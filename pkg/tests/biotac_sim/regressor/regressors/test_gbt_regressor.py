import numpy as np
import pytest

from biotac_sim.regressor import GbtRegressor
from biotac_sim.schema import DimensionMismatchError, FitError, GbtParams, WindowSpec

SMALL = GbtParams(n_estimators=15, max_depth=3, subsample=0.8, colsample_bytree=0.8)


@pytest.fixture
def data():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(300, 6))
    Y = np.column_stack([X[:, 0] + X[:, 3], np.tanh(X[:, 1]), X[:, 0] + X[:, 3]])
    return X, Y


def test_fit_and_predict_shapes(data):
    X, Y = data
    model = GbtRegressor(WindowSpec(combo=3), SMALL, channels=["a", "b", "c"]).fit(X, Y)
    assert model.predict(X).shape == (300, 3)
    assert model.predict(X[0]).shape == (3,)
    assert model.flops_count() is None
    assert model.param_count() == model.node_count > 0


def test_identical_columns_give_identical_ensembles(data):
    X, Y = data
    model = GbtRegressor(WindowSpec(combo=3), SMALL, channels=["a", "b", "c"], seed=4).fit(X, Y)
    assert model.get_config()["ensembles"][0] == model.get_config()["ensembles"][2]


def test_threads_do_not_change_the_result(data):
    X, Y = data
    serial = GbtRegressor(WindowSpec(combo=3), SMALL, ["a", "b", "c"], seed=1).fit(X, Y)
    threaded = GbtRegressor(WindowSpec(combo=3), SMALL, ["a", "b", "c"], seed=1, n_jobs=3).fit(X, Y)
    np.testing.assert_array_equal(serial.predict(X), threaded.predict(X))


def test_unfitted_predict():
    with pytest.raises(RuntimeError):
        GbtRegressor(WindowSpec(combo=3), SMALL).predict(np.zeros(6))


def test_wrong_width(data):
    X, Y = data
    model = GbtRegressor(WindowSpec(combo=3), SMALL, ["a", "b", "c"]).fit(X, Y)
    with pytest.raises(DimensionMismatchError):
        model.predict(np.zeros((2, 7)))


def test_empty_training_set():
    with pytest.raises(FitError):
        GbtRegressor(WindowSpec(combo=3), SMALL, ["a"]).fit(np.zeros((0, 6)), np.zeros((0, 1)))


def test_target_shape_mismatch(data):
    X, Y = data
    with pytest.raises(FitError):
        GbtRegressor(WindowSpec(combo=3), SMALL, ["a", "b"]).fit(X, Y)


def test_state_round_trip(data):
    X, Y = data
    model = GbtRegressor(WindowSpec(combo=3), SMALL, ["a", "b", "c"]).fit(X, Y)
    restored = GbtRegressor.from_state(model.get_config(), {}, model.window, model.channels)
    np.testing.assert_array_equal(restored.predict(X), model.predict(X))


def test_state_with_wrong_channel_count(data):
    X, Y = data
    model = GbtRegressor(WindowSpec(combo=3), SMALL, ["a", "b", "c"]).fit(X, Y)
    with pytest.raises(ValueError):
        GbtRegressor.from_state(model.get_config(), {}, model.window, ["a"])
