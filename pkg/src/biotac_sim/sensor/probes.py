import logging
import warnings
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..schema import (
    N_ELECTRODES,
    NO_CYCLE,
    RAW_MAX,
    RAW_MIN,
    Capsule,
    Dataset,
    ElectrodeLayout,
    FrameVerdict,
    ProbeMode,
    SensorFrame,
)
from .geometry import default_layout, nearest_electrodes

logger = logging.getLogger(__name__)

FrameSource = Union[Dataset, Sequence[SensorFrame]]

# ---------- #
# Validation #
# ---------- #


def validate_frame(
    frame: SensorFrame, previous_tick: Optional[int] = None
) -> FrameVerdict:
    """
    Check a frame against the sensor invariants.

    The checks run in a fixed order and the first failing one is reported:
    ``"electrode count"``, ``"channel out of raw range"`` and, when
    ``previous_tick`` is given, ``"tick not increasing"``.

    Args:
        frame: Frame to check.
        previous_tick: Tick of the preceding frame in the same dataset, if any.

    Returns:
        FrameVerdict: ``ok=True`` or the name of the violated invariant.
    """
    if len(frame.electrodes) != N_ELECTRODES:
        return FrameVerdict(ok=False, violation="electrode count")
    raw = np.asarray(list(frame.raw_values().values()), dtype=np.float64)
    if not np.all(np.isfinite(raw)) or np.any(raw < RAW_MIN) or np.any(raw > RAW_MAX):
        return FrameVerdict(ok=False, violation="channel out of raw range")
    if previous_tick is not None and frame.tick <= previous_tick:
        return FrameVerdict(ok=False, violation="tick not increasing")
    return FrameVerdict(ok=True)


# ------ #
# Probes #
# ------ #


def _probe_arrays(source: FrameSource) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    if isinstance(source, Dataset):
        return source.cycle_ids, source.positions, source.force_magnitudes
    if len(source) == 0:
        return (
            np.zeros(0, dtype=np.int64),
            np.zeros((0, 3)),
            np.zeros(0),
        )
    cycles = np.array([f.cycle_id for f in source], dtype=np.int64)
    positions = np.array([f.position_mm for f in source], dtype=np.float64)
    forces = np.array([f.force_magnitude for f in source], dtype=np.float64)
    return cycles, positions, forces


def probe_indices(
    source: FrameSource,
    force_min_n: float,
    dist_max_mm: float,
    mode: ProbeMode,
    surface: Optional[Capsule] = None,
) -> np.ndarray:
    """
    Row indices of the frames selected by ``select_contact_probes``.

    Returns:
        np.ndarray: Ascending integer indices into ``source``.

    Raises:
        ValueError: If ``dist_max_mm`` is not positive or ``mode`` is unknown.
    """
    if dist_max_mm <= 0:
        raise ValueError("dist_max_mm must be > 0.")
    if mode not in ("light_touch_end", "contact_start"):
        raise ValueError(f"Unknown probe mode '{mode}'.")
    surface = surface or default_layout().capsule
    cycles, positions, forces = _probe_arrays(source)
    if cycles.size == 0:
        return np.zeros(0, dtype=np.int64)

    near = np.abs(surface.signed_distance(positions)) < dist_max_mm
    in_cycle = cycles != NO_CYCLE
    if mode == "contact_start":
        candidates = in_cycle & near & (forces > force_min_n)
        idx = np.flatnonzero(candidates)
        _, first = np.unique(cycles[idx], return_index=True)
        return np.sort(idx[first])

    # last frame of every labelled cycle
    is_last = np.ones_like(in_cycle)
    is_last[:-1] = cycles[:-1] != cycles[1:]
    candidates = in_cycle & is_last & near & (forces > 0.0) & (forces < force_min_n)
    return np.flatnonzero(candidates)


def select_contact_probes(
    source: FrameSource,
    force_min_n: float,
    dist_max_mm: float,
    mode: ProbeMode,
    surface: Optional[Capsule] = None,
) -> List[SensorFrame]:
    """
    Select calibration or histogram probes from a recording.

    ``light_touch_end`` keeps the final frame of each contact cycle when its force
    magnitude lies in ``(0, force_min_n)``. ``contact_start`` keeps, per cycle, the
    first frame whose force magnitude exceeds ``force_min_n``. In both modes the
    frame must lie within ``dist_max_mm`` of the skin surface.

    Args:
        source: Dataset or ordered frames carrying ``cycle_id``.
        force_min_n: Force threshold in newtons.
        dist_max_mm: Maximum absolute surface distance in millimetres.
        mode: ``"light_touch_end"`` or ``"contact_start"``.
        surface: Skin surface; defaults to the default layout's capsule.

    Returns:
        List[SensorFrame]: Selected frames in input order, possibly empty.

    Example:
        ```python
        probes = select_contact_probes(dataset, 0.3, 2.0, "contact_start")
        len(probes) <= len(set(dataset.cycle_ids))
        ```
        ```python
        True
        ```
    """
    idx = probe_indices(source, force_min_n, dist_max_mm, mode, surface)
    if isinstance(source, Dataset):
        return [source.frame(int(i)) for i in idx]
    return [source[int(i)] for i in idx]


def contact_histogram(
    probes: Sequence[SensorFrame], layout: Optional[ElectrodeLayout] = None
) -> np.ndarray:
    """
    Count probes by nearest electrode.

    Args:
        probes: Contact frames, usually ``contact_start`` probes.
        layout: Electrode layout; defaults to the shipped one.

    Returns:
        np.ndarray: 19 counts, entry ``k - 1`` for electrode ``k``.
    """
    layout = layout or default_layout()
    counts = np.zeros(N_ELECTRODES, dtype=np.int64)
    if not probes:
        warnings.warn("No probes given; the contact histogram is empty.", UserWarning)
        return counts
    points = np.array([p.position_mm for p in probes], dtype=np.float64)
    nearest = nearest_electrodes(points, layout)
    np.add.at(counts, nearest - 1, 1)
    logger.info("Contact histogram over %d probes", len(probes))
    return counts
