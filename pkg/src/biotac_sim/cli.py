import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ValidationError

from . import __version__
from .calibration import calibrate, correct_dataset
from .dataio import (
    load_model,
    make_fold_plan,
    read_dataset,
    read_structured,
    write_dataset,
    write_json,
)
from .evaluation import (
    bench_latency,
    compare_results,
    mean_curve,
    naive_fold_result,
    read_results,
    relative_performance_loss,
    run_folds,
    summarize,
    sweep_folds,
    temperature_grid,
    write_calibration_trace,
    write_channel_errors,
    write_histogram,
    write_latency,
    write_results,
    write_sweep,
    write_training_curves,
)
from .oracle import default_oracle_config, generate_dataset
from .regressor import ModelBundle, NeuralRegressor
from .schema import (
    CONTACT_DISTANCE_MM,
    PROBE_FORCE_N,
    ExperimentConfig,
    OracleConfig,
    TrainingDivergedError,
)
from .schema.constants import CALIBRATION_STEPS, MODEL_FILENAME, RESULT_FILENAME, SUMMARY_FILENAME
from .sensor import contact_histogram, load_layout, select_contact_probes

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

# light-touch frames sit further from the skin than contact frames
CALIBRATION_DIST_MAX_MM = 10.0


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


# ------- #
# Helpers #
# ------- #


def _emit(payload: Any) -> None:
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    print(json.dumps(data, indent=2, sort_keys=True))


def _diagnostic(message: str) -> None:
    prefix = "error:"
    if not os.environ.get("NO_COLOR") and sys.stderr.isatty():
        prefix = "\033[31merror:\033[0m"
    print(f"{prefix} {message}", file=sys.stderr)


def _load_experiment(path: str) -> ExperimentConfig:
    config = load_model(path, ExperimentConfig)
    config = config.resolve_paths(Path(path).resolve().parent)
    if not Path(config.dataset).is_file():
        raise FileNotFoundError(f"file not found: {config.dataset}")
    return config


def _experiment_inputs(config: ExperimentConfig):
    dataset = read_dataset(config.dataset, layout_ref=config.layout)
    plan = make_fold_plan(
        len(dataset),
        config.folds.n_folds,
        config.folds.chunk_size,
        config.folds.chunks_per_split,
        config.folds.seed,
    )
    return dataset, plan


def _run_dir(config: ExperimentConfig) -> Path:
    path = Path(config.output_dir) / config.name
    path.mkdir(parents=True, exist_ok=True)
    return path


def _curves_of(runs) -> Dict[int, Any]:
    return {
        r.data.fold: r.bundle.regressor.curves
        for r in runs
        if isinstance(r.bundle.regressor, NeuralRegressor)
    }


# ----------- #
# Subcommands #
# ----------- #


def cmd_gen_data(args: argparse.Namespace) -> int:
    data = read_structured(args.oracle)
    if "cycles" in data:
        config = OracleConfig.model_validate(data)
    else:
        config = default_oracle_config(**data)
    dataset = generate_dataset(config)
    write_dataset(dataset, args.out)
    _emit({"frames": len(dataset), "cycles": len(config.cycles), "out": str(args.out)})
    return EXIT_OK


def _trace_path(args: argparse.Namespace) -> Optional[Path]:
    if args.trace:
        return Path(args.trace)
    if args.out:
        out = Path(args.out)
        return out.with_name(f"{out.stem}_trace.csv")
    return None


def cmd_calibrate(args: argparse.Namespace) -> int:
    layout = load_layout(args.layout)
    dataset = read_dataset(args.data, layout_ref=str(args.layout))
    probes = select_contact_probes(
        dataset, PROBE_FORCE_N, args.dist_max, "light_touch_end", layout.capsule
    )
    offset, report = calibrate(probes, layout.capsule, steps=args.steps, seed=args.seed)
    if args.out:
        write_json(args.out, {"offset": offset.model_dump(mode="json"), "report": report.model_dump(mode="json")})
    trace = _trace_path(args)
    if trace is not None:
        write_calibration_trace(report, trace)
    if args.corrected:
        write_dataset(correct_dataset(dataset, offset), args.corrected)
    _emit(
        {
            "offset": offset.model_dump(mode="json"),
            "probes": len(probes),
            "initial_mean_dist_mm": report.initial_mean_dist_mm,
            "final_mean_dist_mm": report.final_mean_dist_mm,
            "accepted_steps": report.accepted_steps,
            "trace": None if trace is None else str(trace),
        }
    )
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_experiment(args.experiment)
    dataset, plan = _experiment_inputs(config)
    fold = config.train_fold if args.fold is None else args.fold
    if fold >= plan.n_folds:
        raise ValueError(f"Fold {fold} does not exist; the plan has {plan.n_folds} folds.")
    (run,) = run_folds(
        dataset, plan, config.model, config.window, seed=config.seed, n_jobs=config.n_jobs, folds=[fold]
    )
    out = _run_dir(config)
    run.bundle.save(out / MODEL_FILENAME)
    curves = _curves_of([run])
    if curves:
        write_training_curves(curves, out / "training_curves.csv")
    _emit(run.result)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _load_experiment(args.experiment)
    dataset, plan = _experiment_inputs(config)
    runs = run_folds(dataset, plan, config.model, config.window, seed=config.seed, n_jobs=config.n_jobs)
    results = [r.result for r in runs]
    naive = [naive_fold_result(r) for r in runs]
    out = _run_dir(config)
    write_results(results, out / RESULT_FILENAME, name=config.name)
    write_results(naive, out / "naive_results.csv", name=f"{config.name}-naive")
    write_channel_errors(results, out / "channel_errors.csv")
    curves = _curves_of(runs)
    if curves:
        write_training_curves(curves, out / "training_curves.csv")
    summary: Dict[str, Any] = {
        "name": config.name,
        "family": config.model.family,
        "combo": config.window.combo,
        "summary": summarize(results),
        "naive": summarize(naive),
    }
    if len(results) >= 2:
        summary["ttest_vs_naive"] = compare_results(
            results, naive, label=f"{config.name} vs naive"
        ).model_dump(mode="json")
    write_json(out / SUMMARY_FILENAME, summary)
    _emit(summary)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    first = read_results(args.first)
    second = read_results(args.second)
    report = compare_results(
        first, second, metric=args.metric, label=f"{Path(args.first).stem} vs {Path(args.second).stem}"
    )
    if args.out:
        write_json(args.out, report)
    _emit(report)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    bundle = ModelBundle.load(args.model)
    report = bench_latency(bundle, n_inputs=args.n_inputs, seed=args.seed)
    if args.out:
        write_latency([report], args.out)
    _emit(report)
    return EXIT_OK


def cmd_sweep_temp(args: argparse.Namespace) -> int:
    config = _load_experiment(args.experiment)
    if not config.window.include_temperature:
        raise ValueError("sweep-temp needs an experiment whose window includes the temperature.")
    dataset, plan = _experiment_inputs(config)
    runs = run_folds(dataset, plan, config.model, config.window, seed=config.seed, n_jobs=config.n_jobs)
    grid = temperature_grid(dataset, config.temperature_grid_size)
    dataset_mean = float(dataset.channels(["tdc"]).mean())
    curves = sweep_folds(runs, grid, mean_temperature=dataset_mean)
    averaged = mean_curve(curves)
    naive = float(np.mean([naive_fold_result(r).norm_mae_all for r in runs]))
    out = _run_dir(config)
    write_sweep(averaged, out / "sweep.csv")
    payload = {
        "curve": averaged.model_dump(mode="json"),
        "folds": [c.model_dump(mode="json") for c in curves],
        "naive_norm_mae": naive,
        "relative_performance_loss": relative_performance_loss(
            averaged.best_norm_mae, averaged.true_temperature_norm_mae, naive
        ),
    }
    write_json(out / "sweep.json", payload)
    _emit({k: v for k, v in payload.items() if k != "folds"})
    return EXIT_OK


def cmd_contacts(args: argparse.Namespace) -> int:
    layout = load_layout(args.layout)
    dataset = read_dataset(args.data, layout_ref=str(args.layout))
    probes = select_contact_probes(
        dataset, PROBE_FORCE_N, CONTACT_DISTANCE_MM, "contact_start", layout.capsule
    )
    counts = contact_histogram(probes, layout)
    if args.out:
        write_histogram(counts.tolist(), args.out)
    _emit({"probes": len(probes), "counts": counts.tolist()})
    return EXIT_OK


# ------ #
# Parser #
# ------ #


def _build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(
        prog="biotac-sim",
        description="Simulate BioTac 2P channels from contact position and force windows.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging."
    )
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_ArgumentParser)
    sub.required = True

    s = sub.add_parser("gen-data", help="Generate a synthetic dataset from an oracle config.")
    s.add_argument("oracle", help="Oracle config (JSON/YAML).")
    s.add_argument("out", help="Output dataset CSV.")
    s.set_defaults(func=cmd_gen_data)

    s = sub.add_parser("calibrate", help="Estimate the pose offset from light-touch probes.")
    s.add_argument("data", help="Dataset CSV.")
    s.add_argument("layout", help="Electrode layout JSON.")
    s.add_argument("--steps", type=int, default=CALIBRATION_STEPS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument(
        "--dist-max",
        dest="dist_max",
        type=float,
        default=CALIBRATION_DIST_MAX_MM,
        help="Maximum probe distance from the skin in mm.",
    )
    s.add_argument("--out", help="Write offset and report JSON here.")
    s.add_argument(
        "--trace", help="Write the per-step distance trace CSV here (default: next to --out)."
    )
    s.add_argument("--corrected", help="Write the offset-corrected dataset CSV here.")
    s.set_defaults(func=cmd_calibrate)

    for name, func, text in (
        ("train", cmd_train, "Train one fold and save the model."),
        ("evaluate", cmd_evaluate, "Cross-validate and write results and summary."),
        ("sweep-temp", cmd_sweep_temp, "Fixed-temperature sweep of a temperature-input model."),
    ):
        s = sub.add_parser(name, help=text)
        s.add_argument("experiment", help="Experiment config (JSON/YAML).")
        if name == "train":
            s.add_argument("--fold", type=int, default=None, help="Overrides train_fold.")
        s.set_defaults(func=func)

    s = sub.add_parser("compare", help="Corrected paired t-test of two results files.")
    s.add_argument("first", help="Results CSV of the first model.")
    s.add_argument("second", help="Results CSV of the second model.")
    s.add_argument("--metric", default="norm_mae_all")
    s.add_argument("--out", help="Write the report JSON here.")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("bench", help="Single-input inference latency of a saved model.")
    s.add_argument("model", help="Model header written by 'train'.")
    s.add_argument("--n-inputs", dest="n_inputs", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="Write the latency table CSV here.")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("contacts", help="Nearest-electrode histogram of contact starts.")
    s.add_argument("data", help="Dataset CSV.")
    s.add_argument("layout", help="Electrode layout JSON.")
    s.add_argument("--out", help="Write the histogram CSV here.")
    s.set_defaults(func=cmd_contacts)
    return p


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the ``biotac-sim`` command.

    Returns:
        int: 0 on success, 1 on a usage or unexpected error, 2 on a data or parse
            error, 3 on a numerical failure.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        _diagnostic(str(e))
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)
    _configure_logging(args.verbose)
    func: Callable[[argparse.Namespace], int] = args.func
    try:
        return func(args)
    except (TrainingDivergedError, FloatingPointError) as e:
        _diagnostic(str(e))
        return EXIT_NUMERIC
    except ValidationError as e:
        _diagnostic(f"invalid configuration: {e}")
        return EXIT_DATA
    except (FileNotFoundError, ValueError) as e:
        _diagnostic(str(e))
        return EXIT_DATA
    except RuntimeError as e:
        _diagnostic(str(e))
        return EXIT_NUMERIC
    except Exception as e:
        logger.debug("Unhandled error in %s", args.command, exc_info=True)
        _diagnostic(f"unexpected error: {type(e).__name__}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
