import numpy as np
import pytest

from biotac_sim.evaluation import bench_latency
from biotac_sim.features import fit_scaler
from biotac_sim.regressor import GbtRegressor, ModelBundle, build_regressor
from biotac_sim.schema import EmptyBenchmarkError, GbtParams, ModelConfig, WindowSpec


def _fitted_bundle(regressor, n=400, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, regressor.input_size))
    Y = np.tanh(X[:, :1] + X[:, -1:]) + 0.1 * rng.normal(size=(n, regressor.output_dim))
    scaler = fit_scaler(X, Y)
    regressor.fit(scaler.apply(X, "inputs"), scaler.apply(Y, "outputs"))
    return ModelBundle(regressor=regressor, scaler=scaler)


@pytest.fixture(scope="module")
def gbt_bundle():
    return _fitted_bundle(GbtRegressor(WindowSpec(combo=3), GbtParams(n_estimators=5, max_depth=3)))


def test_report_fields(gbt_bundle):
    report = bench_latency(gbt_bundle, n_inputs=25, seed=3)
    assert report.family == "gbt"
    assert report.n_inputs == 25
    assert report.input_size == 6
    assert 0 <= report.min_ms <= report.mean_ms <= report.max_ms
    assert report.param_count == gbt_bundle.regressor.param_count()
    assert report.flops is None


def test_bare_regressor(gbt_bundle):
    report = bench_latency(gbt_bundle.regressor, n_inputs=5, warmup=0)
    assert report.n_inputs == 5


def test_empty_benchmark(gbt_bundle):
    with pytest.raises(EmptyBenchmarkError, match="empty benchmark"):
        bench_latency(gbt_bundle, n_inputs=0)


def test_unfitted_model():
    with pytest.raises(RuntimeError):
        bench_latency(GbtRegressor(WindowSpec(combo=3)), n_inputs=3)


@pytest.mark.slow
def test_trees_are_faster_than_the_transformer():
    window = WindowSpec(combo=1)
    trees = _fitted_bundle(GbtRegressor(window, GbtParams(n_estimators=100, max_depth=6)))
    transformer = build_regressor(ModelConfig(family="transformer", preset=True), window)
    transformer.train_config = transformer.train_config.model_copy(update={"max_epochs": 1})
    transformer = _fitted_bundle(transformer, n=128)

    tree_ms = bench_latency(trees, n_inputs=300).mean_ms
    transformer_report = bench_latency(transformer, n_inputs=300)
    assert tree_ms < transformer_report.mean_ms
    assert transformer_report.flops == transformer.regressor.flops_count() > 0
