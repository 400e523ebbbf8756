import logging
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..calibration.calibrator import apply_offset
from ..schema import (
    DATASET_COLUMNS,
    ELECTRODE_NAMES,
    NO_CYCLE,
    RAW_MAX,
    RAW_MIN,
    TIP_ELECTRODES,
    Capsule,
    CycleSpec,
    Dataset,
    DatasetMeta,
    DriftParams,
    ElectrodeLayout,
    OracleConfig,
)
from ..schema.constants import POSITION_HOLD_TICKS
from ..sensor import load_layout

logger = logging.getLogger(__name__)

# Column order of the noise matrix and of ``_respond``'s output.
_NOISY_CHANNELS: List[str] = ELECTRODE_NAMES + ["pdc", "pac0", "pac1", "tac"]

# ----------- #
# Temperature #
# ----------- #


def temperature_at(tick: Union[int, np.ndarray], drift: DriftParams):
    """
    Temperature reading at ``tick`` under exponential warm-up.

    ``tdc(tick) = t_inf - (t_inf - t0) * exp(-tick / tau)``

    Args:
        tick: Tick index (or array of indices), ``>= 0``.
        drift: Warm-up parameters.

    Returns:
        float or np.ndarray: Raw temperature counts.

    Raises:
        ValueError: If a tick is negative.

    Example:
        ```python
        temperature_at(1000, DriftParams(t0_counts=2000, t_inf_counts=2600, tau_ticks=1000))
        ```
        ```python
        2379.2723...
        ```
    """
    ticks = np.asarray(tick, dtype=np.float64)
    if np.any(ticks < 0):
        raise ValueError("tick must be >= 0.")
    span = drift.t_inf_counts - drift.t0_counts
    value = drift.t_inf_counts - span * np.exp(-ticks / drift.tau_ticks)
    return float(value) if value.ndim == 0 else value


# -------- #
# Response #
# -------- #


def _saturate(force: np.ndarray, f_sat: float) -> np.ndarray:
    return force / (1.0 + force / f_sat)


def _effective_gain(config: OracleConfig) -> np.ndarray:
    gain = np.asarray(config.electrode_gain, dtype=np.float64).copy()
    tip = np.asarray(TIP_ELECTRODES, dtype=np.int64) - 1
    gain[tip] *= config.tip_fluid_factor
    return gain


def _respond(
    points: np.ndarray,
    force_mag: np.ndarray,
    force_delta: np.ndarray,
    tdc: np.ndarray,
    config: OracleConfig,
    layout: ElectrodeLayout,
    noise: np.ndarray,
) -> np.ndarray:
    """Vectorised surrogate over ``n`` samples; columns follow ``_NOISY_CHANNELS``."""
    diff = points[:, None, :] - layout.positions[None, :, :]
    sq = np.einsum("nkd,nkd->nk", diff, diff)
    footprint = np.exp(-sq / (2.0 * config.spatial_sigma_mm**2))

    base = np.asarray(config.electrode_base, dtype=np.float64)
    coupling = np.asarray(config.temp_coupling, dtype=np.float64)
    pressure = _saturate(force_mag, config.force_saturation_n)

    electrodes = (
        base[None, :]
        + _effective_gain(config)[None, :] * pressure[:, None] * footprint
        + coupling[None, :] * (tdc - config.drift.t0_counts)[:, None]
    )
    pdc = config.pdc_base_counts + config.pdc_gain_counts_per_n * force_mag
    pac = config.pac_base_counts + config.pac_gain_counts_per_n * force_delta
    tac = np.full_like(force_mag, config.tac_base_counts)

    out = np.column_stack([electrodes, pdc, pac, pac, tac]) + noise
    return np.clip(out, RAW_MIN, RAW_MAX)


def surrogate_response(
    point_mm: Any,
    force_n: Any,
    tdc: float,
    config: OracleConfig,
    rng: Optional[np.random.Generator] = None,
    previous_force_n: Any = (0.0, 0.0, 0.0),
    layout: Optional[ElectrodeLayout] = None,
) -> Dict[str, float]:
    """
    Raw channel values produced by a single contact.

    Electrode ``i`` reads
    ``base_i + gain_i * g(|F|) * exp(-|p - p_i|^2 / (2 sigma^2)) + c_i * (tdc - t0)``
    with ``g(f) = f / (1 + f / f_sat)``; tip electrodes 7-10 use
    ``gain_i * tip_fluid_factor``. ``pdc`` grows linearly with ``|F|``; ``pac0`` and
    ``pac1`` follow the change of ``|F|`` since the previous tick with independent
    noise; ``tac`` stays at its base level. Every channel is clamped to the raw range.

    Args:
        point_mm: Contact point.
        force_n: Force vector at this tick.
        tdc: Temperature reading.
        config: Surrogate parameters.
        rng: Noise source; ``None`` with ``noise_std_counts > 0`` draws from a
            generator seeded with ``config.seed``.
        previous_force_n: Force vector at the previous tick.
        layout: Electrode layout; defaults to ``config.layout_path`` or the shipped one.

    Returns:
        Dict[str, float]: Values for ``e1``..``e19``, ``pdc``, ``pac0``, ``pac1``, ``tac``.
    """
    layout = layout or load_layout(config.layout_path)
    force_mag = np.array([np.linalg.norm(np.asarray(force_n, dtype=np.float64))])
    prev_mag = np.linalg.norm(np.asarray(previous_force_n, dtype=np.float64))
    noise = np.zeros((1, len(_NOISY_CHANNELS)))
    if config.noise_std_counts > 0:
        rng = rng if rng is not None else np.random.default_rng(config.seed)
        noise = rng.normal(0.0, config.noise_std_counts, size=noise.shape)
    values = _respond(
        np.asarray(point_mm, dtype=np.float64).reshape(1, 3),
        force_mag,
        force_mag - prev_mag,
        np.array([float(tdc)]),
        config,
        layout,
        noise,
    )[0]
    return dict(zip(_NOISY_CHANNELS, values.tolist()))


# ---------- #
# Trajectory #
# ---------- #


def _align(tick: int) -> int:
    return -(-tick // POSITION_HOLD_TICKS) * POSITION_HOLD_TICKS


def cycle_schedule(config: OracleConfig) -> List[Tuple[int, int]]:
    """
    Start (inclusive) and end (exclusive) tick of every cycle.

    Each cycle starts ``gap_ticks`` after the previous one ends, rounded up to the
    next position update so the recorded pose is exact throughout the contact.

    Raises:
        ValueError: If the cycles do not fit into ``duration_ticks``.
    """
    spans = []
    t = 0
    for cycle in config.cycles:
        start = _align(t + config.gap_ticks)
        end = start + cycle.length_ticks
        spans.append((start, end))
        t = end
    if t > config.duration_ticks:
        raise ValueError(
            f"Cycles need {t} ticks but duration_ticks is {config.duration_ticks}."
        )
    return spans


def force_profile(cycle: CycleSpec) -> np.ndarray:
    """Force magnitude at every tick of a cycle: linear ramp up, plateau, ramp down.

    The final tick holds ``peak / ramp_ticks`` so each cycle ends in a light touch.
    """
    up = cycle.peak_force_n * np.arange(1, cycle.ramp_ticks + 1) / cycle.ramp_ticks
    hold = np.full(cycle.hold_ticks, cycle.peak_force_n)
    return np.concatenate([up, hold, up[::-1]])


def project_to_surface(capsule: Capsule, points: Any) -> np.ndarray:
    """Closest surface points of ``capsule`` for points off its axis."""
    pts = np.asarray(points, dtype=np.float64)
    return pts - capsule.signed_distance(pts)[..., None] * capsule.outward_normal(pts)


def generate_dataset(
    config: OracleConfig, layout: Optional[ElectrodeLayout] = None
) -> Dataset:
    """
    Generate a synthetic recording.

    Contact points drive every channel; the recorded position is sampled every 10
    ticks and held in between, and is optionally corrupted by ``config.pose_offset``.
    Between cycles the force is zero and the indenter retreats ``lift_off_mm`` along
    the surface normal of the next contact point.

    Args:
        config: Surrogate parameters; the same config always yields the same data.
        layout: Electrode layout; defaults to ``config.layout_path`` or the shipped one.

    Returns:
        Dataset: ``duration_ticks`` frames.

    Raises:
        ValueError: If the cycles exceed ``duration_ticks``.
    """
    layout = layout or load_layout(config.layout_path)
    capsule = layout.capsule
    spans = cycle_schedule(config)
    n = config.duration_ticks
    rng = np.random.default_rng(config.seed)

    ticks = np.arange(n, dtype=np.int64)
    cycle_id = np.full(n, NO_CYCLE, dtype=np.int64)
    force_mag = np.zeros(n)
    contact = np.zeros((n, 3))
    normal = np.zeros((n, 3))
    lifted = np.zeros(n, dtype=bool)

    if spans:
        centers = np.asarray([c.center_mm for c in config.cycles], dtype=np.float64)
        normals = capsule.outward_normal(centers)
        # idle ticks hover over the next cycle (or the last one after the final cycle)
        owner = np.searchsorted(np.array([e for _, e in spans]), ticks, side="right")
        owner = np.minimum(owner, len(spans) - 1)
        contact[:] = centers[owner]
        normal[:] = normals[owner]
        lifted[:] = True
        for k, ((start, end), cycle) in enumerate(zip(spans, config.cycles)):
            cycle_id[start:end] = k
            force_mag[start:end] = force_profile(cycle)
            lifted[start:end] = False
    else:
        mid = 0.5 * (np.asarray(capsule.p0) + np.asarray(capsule.p1))
        contact[:] = mid + np.array([0.0, 0.0, -capsule.radius_mm])
        normal[:] = np.array([0.0, 0.0, -1.0])
        lifted[:] = True

    true_pos = contact + lifted[:, None] * config.lift_off_mm * normal
    forces = np.where(force_mag[:, None] > 0, -force_mag[:, None] * normal, 0.0)
    delta = np.diff(force_mag, prepend=0.0)
    tdc = temperature_at(ticks, config.drift)

    noise = np.zeros((n, len(_NOISY_CHANNELS)))
    if config.noise_std_counts > 0:
        noise = rng.normal(0.0, config.noise_std_counts, size=noise.shape)
    raw = _respond(true_pos, force_mag, delta, tdc, config, layout, noise)

    recorded = true_pos[ticks - ticks % POSITION_HOLD_TICKS]
    if config.pose_offset is not None:
        recorded = apply_offset(config.pose_offset, recorded)

    raw_cols = dict(zip(_NOISY_CHANNELS, raw.T))
    table = pd.DataFrame(
        {
            "tick": ticks,
            "cycle_id": cycle_id,
            "x_mm": recorded[:, 0],
            "y_mm": recorded[:, 1],
            "z_mm": recorded[:, 2],
            "fx_n": forces[:, 0],
            "fy_n": forces[:, 1],
            "fz_n": forces[:, 2],
            "tdc": np.clip(tdc, RAW_MIN, RAW_MAX),
            **{c: raw_cols[c] for c in ("tac", "pdc", "pac0", "pac1")},
            **{e: raw_cols[e] for e in ELECTRODE_NAMES},
        },
        columns=DATASET_COLUMNS,
    )
    logger.info(
        "Generated %d ticks with %d contact cycles (seed=%d)",
        n,
        len(spans),
        config.seed,
    )
    meta = DatasetMeta(source="synthetic", layout_ref=config.layout_path)
    return Dataset(table=table, meta=meta)


def default_oracle_config(
    seed: int = 0,
    n_cycles: int = 20,
    duration_ticks: Optional[int] = None,
    layout: Optional[ElectrodeLayout] = None,
    **overrides: Any,
) -> OracleConfig:
    """
    A desk-scale surrogate configuration with cycles spread over the electrodes.

    Contact points are drawn near randomly chosen electrodes and projected onto the
    skin surface; peak forces lie in ``[1.5, 4]`` N. When ``duration_ticks`` is
    ``None`` the recording ends 100 ticks after the last cycle and the temperature
    time constant is a third of the recording.

    Args:
        seed: Seed for cycle placement and for the dataset noise.
        n_cycles: Number of contact cycles.
        duration_ticks: Recording length; sized automatically when ``None``.
        layout: Electrode layout the cycles are placed on.
        **overrides: Any other ``OracleConfig`` field.

    Returns:
        OracleConfig: The configuration.
    """
    layout = layout or load_layout(overrides.get("layout_path"))
    rng = np.random.default_rng(seed)
    chosen = rng.integers(0, len(layout.positions), size=n_cycles)
    jitter = rng.normal(0.0, 1.5, size=(n_cycles, 3))
    centers = project_to_surface(layout.capsule, layout.positions[chosen] + jitter)
    peaks = rng.uniform(1.5, 4.0, size=n_cycles)
    holds = rng.integers(40, 121, size=n_cycles)
    cycles = [
        CycleSpec(
            center_mm=tuple(float(v) for v in c),
            peak_force_n=float(f),
            ramp_ticks=50,
            hold_ticks=int(h),
        )
        for c, f, h in zip(centers, peaks, holds)
    ]
    fields: Dict[str, Any] = {"seed": seed, "cycles": cycles}
    fields.update(overrides)
    if duration_ticks is None:
        probe = OracleConfig(**{**fields, "duration_ticks": 10**9})
        spans = cycle_schedule(probe)
        duration_ticks = (spans[-1][1] if spans else 0) + 100
    fields["duration_ticks"] = duration_ticks
    if "drift" not in overrides:
        fields["drift"] = DriftParams(tau_ticks=max(duration_ticks / 3.0, 1.0))
    return OracleConfig(**fields)
