import numpy as np
import pytest

from biotac_sim.dataio import make_fold_plan
from biotac_sim.evaluation import (
    fixed_temperature_sweep,
    mean_curve,
    run_experiment,
    run_folds,
    sweep_folds,
    temperature_grid,
)
from biotac_sim.oracle import default_oracle_config, generate_dataset
from biotac_sim.schema import (
    BASELINE_OUTPUT_CHANNELS,
    TICK_HZ,
    GbtParams,
    ModelConfig,
    NetSpec,
    NetworkBSpec,
    SweepCurve,
    TrainConfig,
    WindowSpec,
)


@pytest.fixture(scope="module")
def baseline_runs(desk_dataset):
    plan = make_fold_plan(len(desk_dataset), n_folds=2, chunk_size=200, chunks_per_split=2, seed=4)
    model = ModelConfig(
        family="network_b",
        net=NetSpec(
            kind="network_b",
            network_b=NetworkBSpec(
                position_widths=[8], force_widths=[8], temperature_widths=[8], trunk_widths=[8]
            ),
            output_dim=len(BASELINE_OUTPUT_CHANNELS),
        ),
        train=TrainConfig(batch_size=64, max_epochs=3, early_stopping=False),
    )
    return run_folds(desk_dataset, plan, model, WindowSpec(combo=1, include_temperature=True))


def test_grid_spans_the_recording(desk_dataset):
    grid = temperature_grid(desk_dataset, 7)
    tdc = desk_dataset.channels(["tdc"])
    assert len(grid) == 7
    assert grid[0] == tdc.min()
    assert grid[-1] == tdc.max()
    with pytest.raises(ValueError):
        temperature_grid(desk_dataset, 1)


def test_sweep_curve(baseline_runs, desk_dataset):
    run = baseline_runs[0]
    grid = temperature_grid(desk_dataset, 5)
    curve = fixed_temperature_sweep(run.bundle, run.data.X_test, run.data.Y_test, grid)
    assert len(curve.norm_mae) == 5
    assert curve.best_norm_mae == min(curve.norm_mae)
    assert curve.best_temperature == grid[int(np.argmin(curve.norm_mae))]
    assert curve.mean_temperature == pytest.approx(run.data.X_test[:, -1].mean())


def test_recording_mean_reproduces_fold_result(baseline_runs, desk_dataset):
    run = baseline_runs[1]
    mean_tdc = float(desk_dataset.channels(["tdc"]).mean())
    curve = fixed_temperature_sweep(
        run.bundle, run.data.X_test, run.data.Y_test, temperature_grid(desk_dataset, 3), mean_tdc
    )
    assert curve.mean_temperature_norm_mae == pytest.approx(run.result.norm_mae_all, rel=1e-12)


def test_sweep_needs_temperature_input(desk_dataset):
    plan = make_fold_plan(len(desk_dataset), n_folds=1, chunk_size=200, chunks_per_split=2)
    model = ModelConfig(family="gbt", gbt=GbtParams(n_estimators=2, max_depth=2))
    run = run_folds(desk_dataset, plan, model, WindowSpec(combo=3))[0]
    with pytest.raises(ValueError):
        fixed_temperature_sweep(run.bundle, run.data.X_test, run.data.Y_test, [2300.0])


def test_empty_grid(baseline_runs):
    run = baseline_runs[0]
    with pytest.raises(ValueError):
        fixed_temperature_sweep(run.bundle, run.data.X_test, run.data.Y_test, [])


def test_fold_average(baseline_runs, desk_dataset):
    grid = temperature_grid(desk_dataset, 4)
    curves = sweep_folds(baseline_runs, grid, mean_temperature=2300.0)
    avg = mean_curve(curves)
    assert len(curves) == 2
    np.testing.assert_allclose(avg.norm_mae, np.mean([c.norm_mae for c in curves], axis=0))
    assert avg.best_norm_mae == min(avg.norm_mae)
    assert avg.mean_temperature == 2300.0
    assert mean_curve([]) is None


def test_fold_average_needs_shared_grid():
    a = SweepCurve(
        grid=[1.0, 2.0],
        norm_mae=[0.3, 0.2],
        true_temperature_norm_mae=0.1,
        best_temperature=2.0,
        best_norm_mae=0.2,
        mean_temperature=1.5,
        mean_temperature_norm_mae=0.25,
    )
    b = a.model_copy(update={"grid": [1.0, 3.0]})
    with pytest.raises(ValueError):
        mean_curve([a, b])


@pytest.mark.slow
def test_fixed_temperature_loses_to_true_temperature_and_trees():
    dataset = generate_dataset(default_oracle_config(seed=21, n_cycles=30, noise_std_counts=1.0))
    assert len(dataset) >= 60 * TICK_HZ
    plan = make_fold_plan(len(dataset), n_folds=5, chunk_size=200, chunks_per_split=4, seed=5)

    baseline = ModelConfig(
        family="network_b",
        net=NetSpec(
            kind="network_b",
            network_b=NetworkBSpec(
                position_widths=[32], force_widths=[32], temperature_widths=[8], trunk_widths=[64]
            ),
            output_dim=len(BASELINE_OUTPUT_CHANNELS),
        ),
        train=TrainConfig(batch_size=64, lr=3e-3, max_epochs=30, patience=5),
    )
    runs = run_folds(dataset, plan, baseline, WindowSpec(combo=1, include_temperature=True), n_jobs=4)
    curve = mean_curve(sweep_folds(runs, temperature_grid(dataset, 15)))

    trees = ModelConfig(family="gbt", gbt=GbtParams(n_estimators=60, max_depth=5, eta=0.3))
    tree_results = run_experiment(dataset, plan, trees, WindowSpec(combo=1), n_jobs=4)
    tree_norm_mae = float(np.mean([r.norm_mae_all for r in tree_results]))

    assert curve.best_norm_mae > curve.true_temperature_norm_mae
    assert curve.best_norm_mae > tree_norm_mae
