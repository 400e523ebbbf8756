import logging
import time
from typing import Optional, Union

import numpy as np

from ..regressor import BaseRegressor, ModelBundle
from ..schema import EmptyBenchmarkError, LatencyReport
from ..schema.constants import LATENCY_DEFAULT_INPUTS, LATENCY_WARMUP_CALLS

logger = logging.getLogger(__name__)


def bench_latency(
    model: Union[ModelBundle, BaseRegressor],
    input_size: Optional[int] = None,
    n_inputs: int = LATENCY_DEFAULT_INPUTS,
    seed: int = 0,
    warmup: int = LATENCY_WARMUP_CALLS,
) -> LatencyReport:
    """
    Time single-vector inference on seeded random inputs.

    Every input is predicted in its own call on the calling thread; ``warmup``
    untimed calls come first. Times are taken with ``time.perf_counter``.

    Args:
        model: Fitted bundle (raw inputs) or regressor (normalized inputs).
        input_size: Width of the random inputs; defaults to the model's.
        n_inputs: Timed calls.
        seed: Seed of the input generator.
        warmup: Untimed calls before measuring.

    Returns:
        LatencyReport: Mean, min and max milliseconds per call.

    Raises:
        EmptyBenchmarkError: If ``n_inputs`` is 0.

    Example:
        ```python
        bench_latency(bundle, n_inputs=100).mean_ms
        ```
        ```python
        0.41
        ```
    """
    if n_inputs <= 0:
        raise EmptyBenchmarkError("empty benchmark: n_inputs must be > 0.")
    regressor = model.regressor if isinstance(model, ModelBundle) else model
    predict = model.predict_raw if isinstance(model, ModelBundle) else model.predict
    width = input_size or regressor.input_size
    rng = np.random.default_rng(seed)
    inputs = rng.standard_normal((n_inputs, width))
    if isinstance(model, ModelBundle):
        mean, std = model.scaler.arrays["inputs"]
        inputs = inputs * std + mean

    for i in range(warmup):
        predict(inputs[i % n_inputs])
    times = np.empty(n_inputs)
    for i in range(n_inputs):
        start = time.perf_counter()
        predict(inputs[i])
        times[i] = time.perf_counter() - start
    times_ms = times * 1000.0

    report = LatencyReport(
        family=regressor.family,
        input_size=width,
        n_inputs=n_inputs,
        mean_ms=round(float(times_ms.mean()), 3),
        min_ms=round(float(times_ms.min()), 3),
        max_ms=round(float(times_ms.max()), 3),
        param_count=regressor.param_count(),
        flops=regressor.flops_count(),
    )
    logger.info("%s latency: %.3f ms per call", report.family, report.mean_ms)
    return report
