import logging
import math
from typing import Dict, Optional, Sequence

import numpy as np

from ..schema import TTestReport

logger = logging.getLogger(__name__)

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 500


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Continued fraction of the incomplete beta function (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > _TINY else _TINY)
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise RuntimeError(f"Incomplete beta did not converge for a={a}, b={b}, x={x}.")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """
    ``I_x(a, b)`` for ``a, b > 0`` and ``0 <= x <= 1``.

    Raises:
        ValueError: If an argument is out of range.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be > 0.")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1].")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # The fraction converges fast on this side of the mean; use symmetry otherwise.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_cdf(t: float, df: float) -> float:
    """
    ``P(T <= t)`` for a Student-t variable with ``df`` degrees of freedom.

    Example:
        ```python
        round(student_t_cdf(-2.262157, 9), 4)
        ```
        ```python
        0.025
        ```
    """
    if df <= 0:
        raise ValueError("df must be > 0.")
    if math.isinf(t):
        return 0.0 if t < 0 else 1.0
    tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t))
    return tail if t < 0 else 1.0 - tail


def corrected_ttest(
    diffs: Sequence[float],
    n_train: float,
    n_test: float,
    label: Optional[str] = None,
) -> TTestReport:
    """
    Left-tailed corrected resampled paired t-test.

    The variance of the ``k`` paired differences is inflated by
    ``1/k + n_test/n_train`` to account for training sets overlapping across folds:
    ``t = mean(d) / sqrt((1/k + n_test/n_train) * var(d))`` with ``k - 1`` degrees of
    freedom, ``p = P(T <= t)``. When every difference is equal the p-value is 0, 0.5
    or 1 for a negative, zero or positive mean.

    Args:
        diffs: Per-fold differences (first model minus second).
        n_train: Training examples per fold.
        n_test: Test examples per fold.
        label: Optional description stored in the report.

    Returns:
        TTestReport: Statistic, p-value and the values used.

    Raises:
        ValueError: If fewer than two differences are given or a count is not positive.

    Example:
        ```python
        corrected_ttest([0.0] * 5, n_train=800, n_test=100).p_value
        ```
        ```python
        0.5
        ```
    """
    d = np.asarray(diffs, dtype=np.float64)
    k = d.size
    if k < 2:
        raise ValueError("The corrected t-test needs at least two paired differences.")
    if n_train <= 0 or n_test <= 0:
        raise ValueError("n_train and n_test must be > 0.")
    ratio = n_test / n_train
    mean = float(d.mean())
    var = float(d.var(ddof=1))
    if var == 0.0:
        t_stat = 0.0 if mean == 0.0 else None
        p = 0.5 if mean == 0.0 else (0.0 if mean < 0 else 1.0)
    else:
        t_stat = mean / math.sqrt((1.0 / k + ratio) * var)
        p = min(1.0, max(0.0, student_t_cdf(t_stat, k - 1)))
    logger.debug("corrected t-test %s: t=%s, p=%.5f", label or "", t_stat, p)
    return TTestReport(
        mean_diff=mean,
        t_stat=t_stat,
        df=k - 1,
        p_value=p,
        k=k,
        n_train=float(n_train),
        n_test=float(n_test),
        test_train_ratio=ratio,
        label=label,
    )


def relative_performance_loss(fixed: float, true: float, naive: float) -> float:
    """
    Error increase of a fixed-temperature model, relative to the naive model error.

    Example:
        ```python
        round(relative_performance_loss(0.228, 0.096, 0.537), 3)
        ```
        ```python
        0.246
        ```
    """
    if naive <= 0:
        raise ValueError("The naive error must be > 0.")
    return (fixed - true) / naive


def paired_differences(
    first: Dict[int, float], second: Dict[int, float]
) -> np.ndarray:
    """
    ``first[f] - second[f]`` over the folds both contain, in fold order.

    Raises:
        ValueError: If the two share fewer than two folds.
    """
    folds = sorted(set(first) & set(second))
    if len(folds) < 2:
        raise ValueError("At least two shared folds are needed for a paired comparison.")
    return np.asarray([first[f] - second[f] for f in folds], dtype=np.float64)
