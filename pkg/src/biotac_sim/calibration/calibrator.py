import logging
from typing import Any, Optional, Sequence, Tuple, Union

import numpy as np

from ..schema import (
    CalibrationReport,
    Capsule,
    Dataset,
    InsufficientProbesError,
    PoseOffset,
    SensorFrame,
)
from ..schema.constants import (
    CALIBRATION_ANNEAL_EVERY,
    CALIBRATION_MIN_PROBES,
    CALIBRATION_ROTATION_STEP_RAD,
    CALIBRATION_STEPS,
    CALIBRATION_TRANSLATION_STEP_MM,
)

logger = logging.getLogger(__name__)

ProbeInput = Union[np.ndarray, Sequence[SensorFrame], Sequence[Sequence[float]]]


def rotation_matrix(rotation: Any) -> np.ndarray:
    """Rotation matrix of an axis-angle vector (Rodrigues' formula)."""
    r = np.asarray(rotation, dtype=np.float64)
    theta = float(np.linalg.norm(r))
    if theta < 1e-15:
        return np.eye(3)
    k = r / theta
    K = np.array(
        [
            [0.0, -k[2], k[1]],
            [k[2], 0.0, -k[0]],
            [-k[1], k[0], 0.0],
        ]
    )
    return np.eye(3) + np.sin(theta) * K + (1.0 - np.cos(theta)) * (K @ K)


def apply_offset(offset: PoseOffset, points: Any) -> np.ndarray:
    """
    Apply ``p' = R(rotation) @ p + translation`` to every point.

    Args:
        offset: Pose correction.
        points: Array-like of shape ``(3,)`` or ``(n, 3)``.

    Returns:
        np.ndarray: Transformed points with the input's shape.
    """
    return _transform(offset.as_vector(), points)


def _transform(vector: np.ndarray, points: Any) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    return pts @ rotation_matrix(vector[3:]).T + vector[:3]


def surface_distance(point_mm: Any, surface: Capsule):
    """
    Signed distance from a point (or ``(n, 3)`` points) to the skin surface.

    Negative inside the capsule, zero on its surface, positive outside.

    Example:
        ```python
        capsule = Capsule(p0=(0, 0, 0), p1=(16, 0, 0), radius_mm=7)
        surface_distance((8, 0, 0), capsule)
        ```
        ```python
        -7.0
        ```
    """
    d = surface.signed_distance(point_mm)
    return float(d) if np.ndim(d) == 0 else d


def _as_points(probes: ProbeInput) -> np.ndarray:
    if len(probes) and isinstance(probes[0], SensorFrame):
        return np.array([p.position_mm for p in probes], dtype=np.float64)
    return np.asarray(probes, dtype=np.float64).reshape(-1, 3)


def calibrate(
    probes: ProbeInput,
    surface: Capsule,
    initial_offset: Optional[PoseOffset] = None,
    steps: int = CALIBRATION_STEPS,
    seed: int = 0,
) -> Tuple[PoseOffset, CalibrationReport]:
    """
    Estimate a pose correction that moves light-touch probes onto the skin.

    Hill climbing over the six offset components: each step picks one component at
    random and tries adding, then subtracting, a step ``delta``; a change is kept only
    when the mean absolute surface distance of the corrected probes decreases.
    ``delta`` starts at 0.5 mm for translations and 0.01 rad for rotations and halves
    every 200 steps.

    Args:
        probes: Light-touch probe positions, as frames or an ``(n, 3)`` array.
        surface: Skin surface the probes should lie on.
        initial_offset: Starting correction; zero when ``None``.
        steps: Number of hill-climbing steps.
        seed: Seed for the component choice.

    Returns:
        Tuple[PoseOffset, CalibrationReport]: The correction and the run summary.

    Raises:
        InsufficientProbesError: If fewer than 10 probes are given.
        ValueError: If ``steps`` is negative.
    """
    points = _as_points(probes)
    if len(points) < CALIBRATION_MIN_PROBES:
        raise InsufficientProbesError(
            f"Calibration needs at least {CALIBRATION_MIN_PROBES} probes, got {len(points)}."
        )
    if steps < 0:
        raise ValueError("steps must be >= 0.")

    def objective(v: np.ndarray) -> float:
        return float(np.mean(np.abs(surface.signed_distance(_transform(v, points)))))

    rng = np.random.default_rng(seed)
    vector = (initial_offset or PoseOffset()).as_vector()
    current = initial = objective(vector)
    base_step = np.array(
        [CALIBRATION_TRANSLATION_STEP_MM] * 3 + [CALIBRATION_ROTATION_STEP_RAD] * 3
    )
    trace = []
    accepted = 0
    for step in range(steps):
        scale = 0.5 ** (step // CALIBRATION_ANNEAL_EVERY)
        component = int(rng.integers(6))
        for sign in (1.0, -1.0):
            candidate = vector.copy()
            candidate[component] += sign * base_step[component] * scale
            if np.linalg.norm(candidate[3:]) >= np.pi:
                continue
            value = objective(candidate)
            if value < current:
                vector, current = candidate, value
                accepted += 1
                break
        trace.append(current)

    report = CalibrationReport(
        initial_mean_dist_mm=initial,
        final_mean_dist_mm=current,
        steps=steps,
        accepted_steps=accepted,
        trace=trace,
    )
    logger.info(
        "Calibration: mean distance %.3f mm -> %.3f mm (%d/%d steps accepted)",
        initial,
        current,
        accepted,
        steps,
    )
    return PoseOffset.from_vector(vector), report


def correct_dataset(dataset: Dataset, offset: PoseOffset) -> Dataset:
    """Copy of ``dataset`` with ``offset`` applied to every recorded position."""
    table = dataset.table.copy()
    table[["x_mm", "y_mm", "z_mm"]] = apply_offset(offset, dataset.positions)
    return Dataset(table=table, meta=dataset.meta)
