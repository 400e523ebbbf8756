from .benchmark import bench_latency
from .experiment import (
    FoldData,
    FoldRun,
    evaluate_fold,
    fixed_temperature,
    naive_fold_result,
    prepare_fold,
    run_experiment,
    run_folds,
    train_fold,
)
from .metrics import mae, naive_baseline, normalized_mae, score_predictions
from .reporting import (
    compare_against,
    compare_results,
    read_results,
    summarize,
    write_calibration_trace,
    write_channel_errors,
    write_histogram,
    write_latency,
    write_results,
    write_sweep,
    write_training_curves,
)
from .stats import (
    corrected_ttest,
    regularized_incomplete_beta,
    relative_performance_loss,
    student_t_cdf,
)
from .sweep import fixed_temperature_sweep, mean_curve, sweep_folds, temperature_grid

__all__ = [
    "FoldData",
    "FoldRun",
    "bench_latency",
    "compare_against",
    "compare_results",
    "corrected_ttest",
    "evaluate_fold",
    "fixed_temperature",
    "fixed_temperature_sweep",
    "naive_fold_result",
    "mae",
    "mean_curve",
    "naive_baseline",
    "normalized_mae",
    "prepare_fold",
    "read_results",
    "regularized_incomplete_beta",
    "relative_performance_loss",
    "run_experiment",
    "run_folds",
    "score_predictions",
    "student_t_cdf",
    "summarize",
    "sweep_folds",
    "temperature_grid",
    "train_fold",
    "write_calibration_trace",
    "write_channel_errors",
    "write_histogram",
    "write_latency",
    "write_results",
    "write_sweep",
    "write_training_curves",
]
