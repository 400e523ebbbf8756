import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence

import numpy as np

from ..features import build_targets, build_windows, fit_scaler
from ..regressor import ModelBundle, NetworkBRegressor, build_regressor
from ..regressor.registry import resolve_model_config
from ..schema import (
    BASELINE_OUTPUT_CHANNELS,
    OUTPUT_CHANNELS,
    Dataset,
    FitError,
    FoldPlan,
    FoldResult,
    ModelConfig,
    WindowSpec,
)
from .metrics import naive_baseline, score_predictions

logger = logging.getLogger(__name__)

TemperatureMode = Literal["fixed", "true"]


@dataclass
class FoldData:
    """Raw windows and targets of one fold."""

    fold: int
    channels: List[str]
    X_train: np.ndarray
    Y_train: np.ndarray
    X_val: np.ndarray
    Y_val: np.ndarray
    X_test: np.ndarray
    Y_test: np.ndarray


@dataclass
class FoldRun:
    """A trained model, the data it saw and its test result."""

    data: FoldData
    bundle: ModelBundle
    result: FoldResult


def model_channels(model: ModelConfig, window: WindowSpec) -> List[str]:
    """Output channels a model of this configuration is trained on."""
    resolved = resolve_model_config(model, window.combo)
    if resolved.net is not None and resolved.net.output_dim == len(BASELINE_OUTPUT_CHANNELS):
        return list(BASELINE_OUTPUT_CHANNELS)
    return list(OUTPUT_CHANNELS)


def prepare_fold(
    dataset: Dataset,
    plan: FoldPlan,
    fold: int,
    window: WindowSpec,
    channels: Sequence[str] = OUTPUT_CHANNELS,
) -> FoldData:
    """
    Windows and targets of the train, validation and test chunks of ``fold``.

    Windows never cross a chunk boundary, so nothing leaks between splits.

    Raises:
        FitError: If a split has no valid window.
    """
    parts = {}
    for split in ("train", "validation", "test"):
        X, ticks = build_windows(
            dataset, plan.split_ticks(fold, split), window, chunk_size=plan.chunk_size
        )
        if split != "validation" and len(ticks) == 0:
            raise FitError(f"Fold {fold}: the {split} split has no complete window.")
        parts[split] = (X, build_targets(dataset, ticks, channels))
    return FoldData(
        fold=fold,
        channels=list(channels),
        X_train=parts["train"][0],
        Y_train=parts["train"][1],
        X_val=parts["validation"][0],
        Y_val=parts["validation"][1],
        X_test=parts["test"][0],
        Y_test=parts["test"][1],
    )


def train_fold(
    data: FoldData,
    model: ModelConfig,
    window: WindowSpec,
    seed: int = 0,
    n_jobs: int = 1,
) -> ModelBundle:
    """
    Fit the scaler on the training windows and train a regressor on one fold.

    Returns:
        ModelBundle: The fitted regressor and its scaler.
    """
    scaler = fit_scaler(data.X_train, data.Y_train)
    regressor = build_regressor(model, window, seed=seed, n_jobs=n_jobs)
    X_val = scaler.apply(data.X_val, "inputs") if len(data.X_val) else None
    Y_val = scaler.apply(data.Y_val, "outputs") if len(data.Y_val) else None
    regressor.fit(
        scaler.apply(data.X_train, "inputs"), scaler.apply(data.Y_train, "outputs"), X_val, Y_val
    )
    return ModelBundle(regressor=regressor, scaler=scaler)


def fixed_temperature(bundle: ModelBundle, dataset: Dataset) -> Optional[float]:
    """
    Temperature fed to a temperature-input model at test time.

    The configured ``temperature_fill`` of the baseline, else the mean temperature of
    the whole recording; ``None`` for models without temperature input.
    """
    if not bundle.window.include_temperature:
        return None
    regressor = bundle.regressor
    if isinstance(regressor, NetworkBRegressor) and regressor.temperature_fill is not None:
        return regressor.temperature_fill
    return float(dataset.channels(["tdc"]).mean())


def evaluate_fold(
    bundle: ModelBundle,
    data: FoldData,
    temperature: Optional[float] = None,
) -> FoldResult:
    """Score ``bundle`` on the test windows of ``data``."""
    Yhat = bundle.predict_raw(data.X_test, temperature=temperature)
    return score_predictions(
        data.Y_test,
        Yhat,
        bundle.scaler,
        data.channels,
        fold=data.fold,
        family=bundle.family,
        combo=bundle.window.combo,
        include_temperature=bundle.window.include_temperature,
        n_train=len(data.X_train),
        n_test=len(data.X_test),
        param_count=bundle.regressor.param_count(),
        flops=bundle.regressor.flops_count(),
    )


def run_folds(
    dataset: Dataset,
    plan: FoldPlan,
    model: ModelConfig,
    window: WindowSpec,
    seed: int = 0,
    n_jobs: int = 1,
    folds: Optional[Sequence[int]] = None,
    temperature_mode: TemperatureMode = "fixed",
) -> List[FoldRun]:
    """
    Train and score one model configuration on every fold of ``plan``.

    Each fold is independent: the scaler is fitted on its training windows only and
    the model is fitted with the same ``seed``. Folds run on ``n_jobs`` threads; the
    results do not depend on the thread count.

    Args:
        dataset: Recording.
        plan: Fold plan.
        model: Family and hyperparameters.
        window: Input encoding.
        seed: Fitting seed shared by every fold.
        n_jobs: Worker threads.
        folds: Subset of fold indices (all folds by default).
        temperature_mode: For temperature-input models, test with the temperature
            fixed (``"fixed"``) or with the true per-sample values (``"true"``).

    Returns:
        List[FoldRun]: One entry per fold, in fold order.
    """
    fold_ids = list(range(plan.n_folds)) if folds is None else list(folds)
    channels = model_channels(model, window)
    parallel = n_jobs > 1 and len(fold_ids) > 1
    inner_jobs = 1 if parallel else n_jobs

    def _run(fold: int) -> FoldRun:
        logger.info("Fold %d: %s, combo %d", fold, model.family, window.combo)
        data = prepare_fold(dataset, plan, fold, window, channels)
        bundle = train_fold(data, model, window, seed=seed, n_jobs=inner_jobs)
        temperature = fixed_temperature(bundle, dataset) if temperature_mode == "fixed" else None
        result = evaluate_fold(bundle, data, temperature)
        logger.info("Fold %d: normalized MAE %.4f", fold, result.norm_mae_all)
        return FoldRun(data=data, bundle=bundle, result=result)

    if parallel:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            return list(pool.map(_run, fold_ids))
    return [_run(f) for f in fold_ids]


def run_experiment(
    dataset: Dataset,
    plan: FoldPlan,
    model: ModelConfig,
    window: WindowSpec,
    seed: int = 0,
    n_jobs: int = 1,
) -> List[FoldResult]:
    """
    Cross-validated test results of one model configuration.

    Example:
        ```python
        results = run_experiment(dataset, plan, ModelConfig(family="gbt"), WindowSpec(combo=3))
        [r.fold for r in results]
        ```
        ```python
        [0, 1]
        ```
    """
    return [run.result for run in run_folds(dataset, plan, model, window, seed, n_jobs)]


def naive_fold_result(run: FoldRun) -> FoldResult:
    """Test result of the training-mean predictor on the windows of ``run``."""
    scaler = run.bundle.scaler
    naive = naive_baseline(
        scaler.apply(run.data.Y_train, "outputs"), run.bundle.window, run.data.channels
    )
    return evaluate_fold(ModelBundle(regressor=naive, scaler=scaler), run.data)
