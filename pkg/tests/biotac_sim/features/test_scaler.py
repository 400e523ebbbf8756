import numpy as np
import pytest
from pydantic import ValidationError

from biotac_sim.features import Scaler, apply, fit_scaler, invert


def test_constant_channel_is_clamped():
    Y = np.full((10, 2), 5.0)
    Y[:, 1] = np.arange(10)
    with pytest.warns(UserWarning, match="Constant output"):
        scaler = fit_scaler(np.arange(10.0)[:, None], Y)
    assert scaler.output_std[0] == 1.0
    np.testing.assert_array_equal(apply(scaler, Y)[:, 0], np.zeros(10))


def test_two_point_channel():
    scaler = fit_scaler(np.array([[1.0], [3.0]]), np.array([[0.0], [2.0]]))
    assert scaler.output_mean == [1.0]
    assert scaler.output_std == [1.0]
    np.testing.assert_array_equal(scaler.apply(np.array([[0.0], [2.0]])), [[-1.0], [1.0]])


def test_round_trip_precision():
    rng = np.random.default_rng(0)
    Y = rng.normal(2000.0, 300.0, size=(1000, 21))
    scaler = fit_scaler(rng.normal(size=(1000, 12)), Y)
    assert np.max(np.abs(invert(scaler, apply(scaler, Y)) - Y)) < 1e-9


def test_inputs_and_outputs_are_separate():
    X = np.array([[0.0], [10.0]])
    Y = np.array([[100.0], [300.0]])
    scaler = fit_scaler(X, Y)
    np.testing.assert_allclose(scaler.apply(X, "inputs"), [[-1.0], [1.0]])
    np.testing.assert_allclose(scaler.apply(Y, "outputs"), [[-1.0], [1.0]])


def test_empty_data():
    with pytest.raises(ValueError):
        fit_scaler(np.zeros((0, 3)), np.zeros((0, 21)))


def test_rejects_non_positive_std():
    with pytest.raises(ValidationError):
        Scaler(input_mean=[0.0], input_std=[0.0], output_mean=[0.0], output_std=[1.0])


def test_json_round_trip():
    scaler = fit_scaler(np.array([[1.0], [2.0]]), np.array([[3.0], [5.0]]))
    assert Scaler.model_validate_json(scaler.model_dump_json()) == scaler
