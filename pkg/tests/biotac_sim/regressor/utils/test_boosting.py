import numpy as np
import pytest

from biotac_sim.regressor.utils import (
    ChannelEnsemble,
    PackedForest,
    Tree,
    best_split,
    fit_channel,
)
from biotac_sim.schema import FitError, GbtParams

SQUARED = GbtParams(objective="squared", reg_lambda=0.0, min_child_weight=1.0, max_depth=1)


def _brute_force_split(X, y):
    """Largest drop in squared error over every feature and midpoint threshold."""
    best = (-np.inf, None, None)
    base = np.sum((y - y.mean()) ** 2)
    for j in range(X.shape[1]):
        values = np.unique(X[:, j])
        for lo, hi in zip(values[:-1], values[1:]):
            thr = 0.5 * (lo + hi)
            left = X[:, j] < thr
            sse = np.sum((y[left] - y[left].mean()) ** 2) + np.sum(
                (y[~left] - y[~left].mean()) ** 2
            )
            if base - sse > best[0]:
                best = (base - sse, j, thr)
    return best


# ---------- #
# Split find #
# ---------- #


@pytest.mark.parametrize("seed", range(20))
def test_depth_one_split_is_exhaustive_optimum(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(50, 3))
    y = rng.normal(size=50) + 2.0 * (X[:, seed % 3] > 0.3)
    g = y.mean() - y
    rows = np.arange(50)

    split = best_split(X, g, np.ones(50), rows, np.arange(3), SQUARED)
    reduction, feature, threshold = _brute_force_split(X, y)

    assert split.feature == feature
    assert split.threshold == pytest.approx(threshold, abs=1e-12)
    assert split.gain == pytest.approx(0.5 * reduction)
    assert split.left_rows.size + split.right_rows.size == 50

    stump = fit_channel(X, y, SQUARED.model_copy(update={"n_estimators": 1, "eta": 1.0}))
    (tree,) = stump.trees
    assert tree.feature[0] == feature
    assert tree.threshold[0] == pytest.approx(threshold, abs=1e-12)
    left = X[:, feature] < threshold
    fitted = stump.predict(X)
    np.testing.assert_allclose(fitted[left], y[left].mean(), rtol=0, atol=1e-12)
    np.testing.assert_allclose(fitted[~left], y[~left].mean(), rtol=0, atol=1e-12)


def test_equal_gains_pick_lowest_feature():
    rng = np.random.default_rng(0)
    column = rng.normal(size=30)
    X = np.column_stack([column, column])
    y = (column > 0).astype(float)
    split = best_split(X, y.mean() - y, np.ones(30), np.arange(30), np.arange(2), SQUARED)
    assert split.feature == 0


def test_min_child_weight_blocks_splits():
    X = np.arange(10.0)[:, None]
    y = np.arange(10.0)
    params = SQUARED.model_copy(update={"min_child_weight": 6.0})
    assert best_split(X, y.mean() - y, np.ones(10), np.arange(10), np.arange(1), params) is None


def test_single_row_has_no_split():
    assert best_split(np.ones((1, 2)), np.ones(1), np.ones(1), np.arange(1), np.arange(2), SQUARED) is None


# ------- #
# Fitting #
# ------- #


def test_constant_target_predicts_constant():
    X = np.random.default_rng(1).normal(size=(50, 4))
    ensemble = fit_channel(X, np.full(50, 3.25), GbtParams(n_estimators=10))
    np.testing.assert_array_equal(ensemble.predict(X), np.full(50, 3.25))
    assert all(tree.node_count == 1 for tree in ensemble.trees)


def test_indicator_target_is_learned():
    rng = np.random.default_rng(2)
    X = rng.uniform(size=(200, 3))
    y = (X[:, 1] > 0.5).astype(float)
    ensemble = fit_channel(X, y, GbtParams(n_estimators=50, max_depth=3))
    assert np.mean(np.abs(ensemble.predict(X) - y)) < 0.05


def test_depth_is_bounded():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(300, 5))
    y = np.sin(X).sum(axis=1)
    ensemble = fit_channel(X, y, GbtParams(n_estimators=5, max_depth=4, objective="squared"))
    assert max(tree.depth for tree in ensemble.trees) <= 4


def test_leaves_are_capped():
    X = np.arange(20.0)[:, None]
    y = np.where(X[:, 0] < 10, -100.0, 100.0)
    params = GbtParams(n_estimators=1, max_depth=1, max_delta_step=0.5, objective="squared")
    tree = fit_channel(X, y, params).trees[0]
    assert np.all(np.abs(tree.value) <= 0.5)


def test_subsampling_is_seeded():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(100, 6))
    y = X[:, 0] - X[:, 2]
    params = GbtParams(n_estimators=8, subsample=0.6, colsample_bytree=0.5, colsample_bynode=0.5)
    a = fit_channel(X, y, params, seed=9).predict(X)
    b = fit_channel(X, y, params, seed=9).predict(X)
    np.testing.assert_array_equal(a, b)


def test_zero_estimators_is_base_score():
    ensemble = fit_channel(np.zeros((3, 1)), np.array([1.0, 2.0, 7.0]), GbtParams(n_estimators=0))
    assert ensemble.trees == []
    np.testing.assert_array_equal(ensemble.predict(np.zeros((2, 1))), [2.0, 2.0])


def test_empty_input():
    with pytest.raises(FitError):
        fit_channel(np.zeros((0, 3)), np.zeros(0), GbtParams())


def test_length_mismatch():
    with pytest.raises(FitError):
        fit_channel(np.zeros((4, 3)), np.zeros(5), GbtParams())


# ---------- #
# Prediction #
# ---------- #


@pytest.fixture
def stump():
    return Tree.from_dict(
        {"feature": 0, "threshold": 0.5, "left": {"leaf": 1.0}, "right": {"leaf": -2.0}}
    )


def test_single_tree_arithmetic(stump):
    ensemble = ChannelEnsemble(base_score=10.0, eta=0.5, trees=[stump])
    np.testing.assert_array_equal(ensemble.predict(np.array([[0.2], [0.9]])), [10.5, 9.0])


def test_tree_dict_round_trip(stump):
    assert Tree.from_dict(stump.to_dict()).to_dict() == stump.to_dict()
    assert stump.depth == 1
    assert stump.node_count == 3


def test_packed_forest_matches_tree_walk():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(150, 4))
    ensembles = [
        fit_channel(X, X[:, 0] * (c + 1) + rng.normal(size=150), GbtParams(n_estimators=6, max_depth=1 + c), seed=c)
        for c in range(3)
    ]
    packed = PackedForest.pack(ensembles)
    X_new = rng.normal(size=(40, 4))
    expected = np.column_stack([e.predict(X_new) for e in ensembles])
    np.testing.assert_allclose(packed.predict(X_new), expected, rtol=0, atol=1e-12)


def test_packed_forest_without_trees():
    packed = PackedForest.pack([ChannelEnsemble(1.0, 0.3), ChannelEnsemble(2.0, 0.3)])
    np.testing.assert_array_equal(packed.predict(np.zeros((3, 4))), [[1.0, 2.0]] * 3)
