import math
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

from .constants import (
    DATASET_COLUMNS,
    ELECTRODE_NAMES,
    N_ELECTRODES,
    NO_CYCLE,
    OUTPUT_CHANNELS,
    TICK_HZ,
    UNSCORED_CHANNELS,
    WINDOW_COMBOS,
    Activation,
    GbtObjective,
    RegressorFamily,
)

Vec3 = Tuple[float, float, float]

# ------ #
# SENSOR #
# ------ #


class Capsule(BaseModel):
    """Parametric skin surface: a cylinder of radius ``radius_mm`` around the segment
    ``p0``-``p1`` closed by hemispherical caps.

    Attributes:
        p0: First endpoint of the axis segment (mm, BioTac frame).
        p1: Second endpoint of the axis segment; the fingertip cap is centred here.
        radius_mm: Capsule radius in millimetres.
    """

    model_config = ConfigDict(frozen=True)

    p0: Vec3
    p1: Vec3
    radius_mm: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_axis(self):
        if np.allclose(self.p0, self.p1):
            raise ValueError("Capsule axis endpoints must differ.")
        return self

    def signed_distance(self, points: Any) -> np.ndarray:
        """Closed-form signed distance from points to the capsule surface.

        Args:
            points: Array-like of shape ``(3,)`` or ``(n, 3)`` in millimetres.

        Returns:
            np.ndarray: Distances in mm, negative inside, zero on the surface and
                positive outside. Scalar input yields a 0-d array.
        """
        pts = np.asarray(points, dtype=np.float64)
        p0 = np.asarray(self.p0, dtype=np.float64)
        axis = np.asarray(self.p1, dtype=np.float64) - p0
        t = np.clip(((pts - p0) @ axis) / float(axis @ axis), 0.0, 1.0)
        closest = p0 + t[..., None] * axis
        return np.linalg.norm(pts - closest, axis=-1) - self.radius_mm

    def outward_normal(self, points: Any) -> np.ndarray:
        """Unit vectors pointing away from the capsule axis at ``points``."""
        pts = np.asarray(points, dtype=np.float64)
        p0 = np.asarray(self.p0, dtype=np.float64)
        axis = np.asarray(self.p1, dtype=np.float64) - p0
        t = np.clip(((pts - p0) @ axis) / float(axis @ axis), 0.0, 1.0)
        radial = pts - (p0 + t[..., None] * axis)
        norm = np.linalg.norm(radial, axis=-1, keepdims=True)
        return radial / np.maximum(norm, 1e-12)


class ElectrodeLayout(BaseModel):
    """Positions of the 19 electrodes and the skin surface they sit on.

    Attributes:
        positions_mm: 19 electrode positions; electrode ``k`` (1-based) is
            ``positions_mm[k - 1]``.
        capsule: Skin surface model.
    """

    model_config = ConfigDict(frozen=True)

    positions_mm: List[Vec3]
    capsule: Capsule

    @field_validator("positions_mm")
    @classmethod
    def _check_count(cls, v: List[Vec3]) -> List[Vec3]:
        if len(v) != N_ELECTRODES:
            raise ValueError(
                f"Expected {N_ELECTRODES} electrode positions, got {len(v)}."
            )
        return v

    @model_validator(mode="after")
    def _check_on_surface(self):
        dist = np.abs(self.capsule.signed_distance(self.positions_mm))
        if np.any(dist > 1.0):
            worst = int(np.argmax(dist)) + 1
            raise ValueError(
                f"Electrode e{worst} lies {dist[worst - 1]:.3f} mm from the skin surface (max 1 mm)."
            )
        return self

    @cached_property
    def positions(self) -> np.ndarray:
        """Electrode positions as a ``(19, 3)`` array."""
        return np.asarray(self.positions_mm, dtype=np.float64)


class ChannelSet(BaseModel):
    """Ordered list of the scored model output channels.

    Attributes:
        names: The 21 output channels (``e1``..``e19``, ``pdc``, ``pac0``).
        electrode_mask: Indices of the electrode channels within ``names``.
    """

    model_config = ConfigDict(frozen=True)

    names: List[str] = Field(default_factory=lambda: list(OUTPUT_CHANNELS))
    electrode_mask: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def _validate_and_fill(self):
        if len(self.names) != len(OUTPUT_CHANNELS):
            raise ValueError(
                f"A channel set holds {len(OUTPUT_CHANNELS)} channels, got {len(self.names)}."
            )
        bad = [n for n in self.names if n in UNSCORED_CHANNELS]
        if bad:
            raise ValueError(f"Channels {bad} are never scored.")
        if not self.electrode_mask:
            mask = [i for i, n in enumerate(self.names) if n in ELECTRODE_NAMES]
            object.__setattr__(self, "electrode_mask", mask)
        return self


class SensorFrame(BaseModel):
    """One 100 Hz tick of raw sensor channels plus indenter pose and force.

    Construction does not enforce the raw-range invariants; use
    ``biotac_sim.sensor.validate_frame`` to obtain a verdict.

    Attributes:
        tick: Index at 100 Hz.
        electrodes: Raw electrode counts ``e1``..``e19``.
        pdc: Static pressure (raw counts).
        pac0: First dynamic pressure channel (raw counts).
        pac1: Second dynamic pressure channel (raw counts).
        tdc: Temperature (raw counts).
        tac: Heat flow (raw counts).
        position_mm: Indenter tip position in the BioTac frame.
        force_n: Force vector in newtons.
        cycle_id: Contact-cycle label, ``-1`` outside any cycle.
    """

    model_config = ConfigDict(frozen=True)

    tick: int
    electrodes: List[float]
    pdc: float
    pac0: float
    pac1: float
    tdc: float
    tac: float
    position_mm: Vec3 = (0.0, 0.0, 0.0)
    force_n: Vec3 = (0.0, 0.0, 0.0)
    cycle_id: int = NO_CYCLE

    @property
    def force_magnitude(self) -> float:
        return float(math.sqrt(sum(f * f for f in self.force_n)))

    def raw_values(self) -> Dict[str, float]:
        """All raw channels keyed by channel name."""
        values = {name: v for name, v in zip(ELECTRODE_NAMES, self.electrodes)}
        values.update(
            {
                "pdc": self.pdc,
                "pac0": self.pac0,
                "pac1": self.pac1,
                "tdc": self.tdc,
                "tac": self.tac,
            }
        )
        return values


class FrameVerdict(BaseModel):
    """Outcome of ``validate_frame``.

    Attributes:
        ok: Whether every frame invariant holds.
        violation: Name of the first violated invariant, if any.
    """

    ok: bool
    violation: Optional[str] = None


# ------ #
# ORACLE #
# ------ #


class DriftParams(BaseModel):
    """Exponential warm-up of the temperature channel.

    Attributes:
        t0_counts: Temperature reading at tick 0.
        t_inf_counts: Asymptotic temperature reading.
        tau_ticks: Time constant in ticks.
    """

    model_config = ConfigDict(frozen=True)

    t0_counts: float = 2000.0
    t_inf_counts: float = 2600.0
    tau_ticks: float = Field(default=3000.0, gt=0)

    @model_validator(mode="after")
    def _check_rising(self):
        if not self.t0_counts < self.t_inf_counts:
            raise ValueError("Temperature must rise: t0_counts < t_inf_counts.")
        return self


class CycleSpec(BaseModel):
    """One approach-press-release episode of the indenter.

    Attributes:
        center_mm: Contact point on the skin surface.
        peak_force_n: Force magnitude held during the plateau.
        ramp_ticks: Ticks to ramp the force up (and again down).
        hold_ticks: Ticks at peak force.
    """

    model_config = ConfigDict(frozen=True)

    center_mm: Vec3
    peak_force_n: float = Field(gt=0)
    ramp_ticks: int = Field(default=50, ge=1)
    hold_ticks: int = Field(default=100, ge=0)

    @property
    def length_ticks(self) -> int:
        return 2 * self.ramp_ticks + self.hold_ticks


class PoseOffset(BaseModel):
    """Rigid correction applied to tracked indenter positions.

    ``corrected = R(rotation) @ p + translation_mm`` where ``R`` is the rotation
    matrix of the axis-angle vector ``rotation``.

    Attributes:
        translation_mm: Translation in millimetres.
        rotation: Axis-angle components in radians.
    """

    model_config = ConfigDict(frozen=True)

    translation_mm: Vec3 = (0.0, 0.0, 0.0)
    rotation: Vec3 = (0.0, 0.0, 0.0)

    @field_validator("rotation")
    @classmethod
    def _check_angle(cls, v: Vec3) -> Vec3:
        if math.sqrt(sum(c * c for c in v)) >= math.pi:
            raise ValueError("Rotation magnitude must be smaller than pi.")
        return v

    def as_vector(self) -> np.ndarray:
        """The six offset components ``(tx, ty, tz, rx, ry, rz)``."""
        return np.asarray(self.translation_mm + self.rotation, dtype=np.float64)

    @classmethod
    def from_vector(cls, v: Any) -> "PoseOffset":
        v = [float(c) for c in v]
        return cls(translation_mm=tuple(v[:3]), rotation=tuple(v[3:6]))


def _default_gain() -> List[float]:
    return [400.0] * N_ELECTRODES


def _default_base() -> List[float]:
    return [1800.0 + 20.0 * i for i in range(N_ELECTRODES)]


def _default_coupling() -> List[float]:
    return [0.3 + 0.02 * i for i in range(N_ELECTRODES)]


class OracleConfig(BaseModel):
    """Parameters of the synthetic BioTac surrogate.

    Attributes:
        seed: Seed of the PCG64 noise generator.
        duration_ticks: Dataset length in 100 Hz ticks.
        drift: Temperature warm-up curve.
        electrode_base: Resting electrode counts.
        electrode_gain: Peak contact response per electrode (counts).
        spatial_sigma_mm: Width of the Gaussian contact footprint.
        temp_coupling: Electrode counts per temperature count above ``t0``.
        noise_std_counts: Standard deviation of the additive Gaussian noise.
        cycles: Contact cycles, played back one after another.
        gap_ticks: Idle ticks before each cycle.
        force_saturation_n: ``f_sat`` of the saturating force response.
        tip_fluid_factor: Gain multiplier for the tip electrodes 7-10.
        pdc_base_counts: Resting static pressure.
        pdc_gain_counts_per_n: Static pressure per newton.
        pac_base_counts: Centre of the dynamic pressure channels.
        pac_gain_counts_per_n: Dynamic pressure per newton of force change.
        tac_base_counts: Constant heat-flow level.
        lift_off_mm: Distance the indenter retreats along the normal between cycles.
        pose_offset: Optional systematic tracking error applied to the recorded
            positions only (the true contact point drives the channels).
        layout_path: Electrode layout file; ``None`` uses the shipped default.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = 0
    duration_ticks: int = Field(default=6000, gt=0)
    drift: DriftParams = Field(default_factory=DriftParams)
    electrode_base: List[float] = Field(default_factory=_default_base)
    electrode_gain: List[float] = Field(default_factory=_default_gain)
    spatial_sigma_mm: float = Field(default=4.0, gt=0)
    temp_coupling: List[float] = Field(default_factory=_default_coupling)
    noise_std_counts: float = Field(default=2.0, ge=0)
    cycles: List[CycleSpec] = Field(default_factory=list)
    gap_ticks: int = Field(default=50, ge=0)
    force_saturation_n: float = Field(default=5.0, gt=0)
    tip_fluid_factor: float = Field(default=2.0, gt=1.0)
    pdc_base_counts: float = 1500.0
    pdc_gain_counts_per_n: float = 150.0
    pac_base_counts: float = 2048.0
    pac_gain_counts_per_n: float = 2000.0
    tac_base_counts: float = 2000.0
    lift_off_mm: float = Field(default=5.0, gt=0)
    pose_offset: Optional[PoseOffset] = None
    layout_path: Optional[str] = None

    @field_validator("electrode_base", "electrode_gain", "temp_coupling")
    @classmethod
    def _check_per_electrode(cls, v: List[float]) -> List[float]:
        if len(v) != N_ELECTRODES:
            raise ValueError(f"Expected {N_ELECTRODES} per-electrode values, got {len(v)}.")
        return v


# ---- #
# DATA #
# ---- #


class DatasetMeta(BaseModel):
    """Provenance of a dataset.

    Attributes:
        source: Free-form origin label (``"synthetic"``, a file path, ...).
        tick_hz: Sampling rate, always 100.
        layout_ref: Electrode layout used to generate or interpret the data.
    """

    source: str = "synthetic"
    tick_hz: Literal[100] = TICK_HZ
    layout_ref: Optional[str] = None


class Dataset(BaseModel):
    """Ordered sequence of sensor frames held column-wise.

    The table carries exactly ``DATASET_COLUMNS``; ticks run contiguously from 0.

    Attributes:
        table: One row per frame.
        meta: Provenance.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    table: pd.DataFrame
    meta: DatasetMeta = Field(default_factory=DatasetMeta)

    @model_validator(mode="after")
    def _validate_table(self):
        if list(self.table.columns) != DATASET_COLUMNS:
            raise ValueError("Dataset columns do not match the dataset schema.")
        if self.table.empty:
            raise ValueError("A dataset must hold at least one frame.")
        ticks = self.table["tick"].to_numpy()
        if not np.array_equal(ticks, np.arange(len(ticks))):
            raise ValueError("Dataset ticks must be contiguous from 0.")
        return self

    @classmethod
    def from_frames(
        cls, frames: List[SensorFrame], meta: Optional[DatasetMeta] = None
    ) -> "Dataset":
        """Build a dataset from frame objects."""
        rows = [
            [
                f.tick,
                f.cycle_id,
                *f.position_mm,
                *f.force_n,
                f.tdc,
                f.tac,
                f.pdc,
                f.pac0,
                f.pac1,
                *f.electrodes,
            ]
            for f in frames
        ]
        table = pd.DataFrame(rows, columns=DATASET_COLUMNS)
        return cls(table=coerce_table(table), meta=meta or DatasetMeta())

    def __len__(self) -> int:
        return len(self.table)

    def __iter__(self):
        for i in range(len(self)):
            yield self.frame(i)

    @cached_property
    def ticks(self) -> np.ndarray:
        return self.table["tick"].to_numpy(dtype=np.int64)

    @cached_property
    def cycle_ids(self) -> np.ndarray:
        return self.table["cycle_id"].to_numpy(dtype=np.int64)

    @cached_property
    def positions(self) -> np.ndarray:
        return self.table[["x_mm", "y_mm", "z_mm"]].to_numpy(dtype=np.float64)

    @cached_property
    def forces(self) -> np.ndarray:
        return self.table[["fx_n", "fy_n", "fz_n"]].to_numpy(dtype=np.float64)

    @cached_property
    def force_magnitudes(self) -> np.ndarray:
        return np.linalg.norm(self.forces, axis=1)

    def channels(self, names: List[str]) -> np.ndarray:
        """Raw channel matrix of shape ``(n_frames, len(names))``."""
        return self.table[list(names)].to_numpy(dtype=np.float64)

    def frame(self, i: int) -> SensorFrame:
        row = self.table.iloc[i]
        return SensorFrame(
            tick=int(row["tick"]),
            cycle_id=int(row["cycle_id"]),
            position_mm=(float(row["x_mm"]), float(row["y_mm"]), float(row["z_mm"])),
            force_n=(float(row["fx_n"]), float(row["fy_n"]), float(row["fz_n"])),
            tdc=float(row["tdc"]),
            tac=float(row["tac"]),
            pdc=float(row["pdc"]),
            pac0=float(row["pac0"]),
            pac1=float(row["pac1"]),
            electrodes=[float(row[name]) for name in ELECTRODE_NAMES],
        )

    def equals(self, other: "Dataset") -> bool:
        """Bit-exact comparison of the frame tables."""
        return self.table.equals(other.table)


def coerce_table(table: pd.DataFrame) -> pd.DataFrame:
    """Cast ``tick`` and ``cycle_id`` to int64 and every other column to float64."""
    dtypes = {c: np.float64 for c in DATASET_COLUMNS}
    dtypes["tick"] = np.int64
    dtypes["cycle_id"] = np.int64
    return table.astype(dtypes).reset_index(drop=True)


class FoldAssignment(BaseModel):
    """Chunk indices of one fold.

    Attributes:
        test: Test chunk indices (sorted).
        validation: Validation chunk indices (sorted).
        train: Training chunk indices (sorted).
    """

    model_config = ConfigDict(frozen=True)

    test: List[int]
    validation: List[int]
    train: List[int]


class FoldPlan(BaseModel):
    """Chunked train/validation/test split definition.

    Attributes:
        n_folds: Number of folds.
        chunk_size: Ticks per chunk.
        chunks_per_split: Chunks drawn for test and for validation in every fold.
        n_chunks: Total number of whole chunks in the dataset.
        seed: Seed the plan was drawn with.
        folds: Per-fold chunk assignments.
    """

    model_config = ConfigDict(frozen=True)

    n_folds: int = Field(ge=1)
    chunk_size: int = Field(ge=1)
    chunks_per_split: int = Field(ge=1)
    n_chunks: int = Field(ge=1)
    seed: int = 0
    folds: List[FoldAssignment]

    @model_validator(mode="after")
    def _check_assignments(self):
        if len(self.folds) != self.n_folds:
            raise ValueError("Number of fold assignments does not match n_folds.")
        everything = set(range(self.n_chunks))
        for i, fold in enumerate(self.folds):
            test, val, train = set(fold.test), set(fold.validation), set(fold.train)
            if len(fold.test) != self.chunks_per_split or len(test) != len(fold.test):
                raise ValueError(f"Fold {i}: test must hold {self.chunks_per_split} chunks.")
            if len(fold.validation) != self.chunks_per_split or len(val) != len(
                fold.validation
            ):
                raise ValueError(
                    f"Fold {i}: validation must hold {self.chunks_per_split} chunks."
                )
            if test & val or (test | val) & train:
                raise ValueError(f"Fold {i}: splits overlap.")
            if test | val | train != everything:
                raise ValueError(f"Fold {i}: splits do not cover every chunk.")
        return self

    def chunk_ticks(self, chunk: int) -> np.ndarray:
        """Ticks belonging to ``chunk``."""
        start = chunk * self.chunk_size
        return np.arange(start, start + self.chunk_size, dtype=np.int64)

    def split_ticks(self, fold: int, split: Literal["train", "validation", "test"]):
        """Concatenated ticks of all chunks of a split, in chunk order."""
        chunks = getattr(self.folds[fold], split)
        if not chunks:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([self.chunk_ticks(c) for c in chunks])


# ----------- #
# CALIBRATION #
# ----------- #


class CalibrationReport(BaseModel):
    """Summary of a calibration run.

    Attributes:
        initial_mean_dist_mm: Mean absolute surface distance before calibration.
        final_mean_dist_mm: Mean absolute surface distance after calibration.
        steps: Number of hill-climbing steps performed.
        accepted_steps: Number of perturbations that were kept.
        trace: Mean absolute distance after every step.
    """

    initial_mean_dist_mm: float
    final_mean_dist_mm: float
    steps: int
    accepted_steps: int = 0
    trace: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_monotone(self):
        if self.final_mean_dist_mm > self.initial_mean_dist_mm:
            raise ValueError("Calibration must never increase the mean distance.")
        return self


# -------- #
# FEATURES #
# -------- #


class WindowSpec(BaseModel):
    """One of the eight input encodings.

    Attributes:
        combo: Window combination 1-8.
        include_temperature: Append the temperature at ``T`` (baseline only).
    """

    model_config = ConfigDict(frozen=True)

    combo: int = Field(default=1, ge=1, le=8)
    include_temperature: bool = False

    @property
    def position_offsets(self) -> Tuple[int, ...]:
        return WINDOW_COMBOS[self.combo][0]

    @property
    def force_offsets(self) -> Tuple[int, ...]:
        return WINDOW_COMBOS[self.combo][1]

    @property
    def timesteps(self) -> Tuple[int, ...]:
        """Sorted union of every offset the window reads."""
        return tuple(sorted(set(self.position_offsets) | set(self.force_offsets)))

    @property
    def input_size(self) -> int:
        size = 3 * len(self.position_offsets) + 3 * len(self.force_offsets)
        return size + int(self.include_temperature)


# ---------- #
# REGRESSORS #
# ---------- #


class GbtParams(BaseModel):
    """Hyperparameters of the boosted-tree regressor.

    Attributes:
        eta: Learning rate (shrinkage) applied to every leaf weight.
        gamma: Minimum loss reduction required to split a node.
        n_estimators: Trees per output channel.
        max_depth: Maximum tree depth (root has depth 0).
        min_child_weight: Minimum hessian sum in each child.
        max_delta_step: Leaf weights are capped at this magnitude when positive.
        subsample: Fraction of rows sampled per tree.
        colsample_bytree: Fraction of features sampled per tree.
        colsample_bylevel: Fraction of the tree's features sampled per level.
        colsample_bynode: Fraction of the level's features sampled per node.
        reg_lambda: L2 regularisation of leaf weights.
        objective: Training loss, ``"mae"`` or ``"squared"``.
    """

    model_config = ConfigDict(frozen=True)

    eta: float = Field(default=0.3, gt=0, le=1)
    gamma: float = Field(default=0.0, ge=0)
    n_estimators: int = Field(default=100, ge=0)
    max_depth: int = Field(default=6, ge=1)
    min_child_weight: float = Field(default=1.0, ge=0)
    max_delta_step: float = Field(default=0.0, ge=0)
    subsample: float = Field(default=1.0, gt=0, le=1)
    colsample_bytree: float = Field(default=1.0, gt=0, le=1)
    colsample_bylevel: float = Field(default=1.0, gt=0, le=1)
    colsample_bynode: float = Field(default=1.0, gt=0, le=1)
    reg_lambda: float = Field(default=1.0, ge=0)
    objective: GbtObjective = "mae"


class FeedForwardSpec(BaseModel):
    """Dense stack with one activation per hidden layer.

    Attributes:
        widths: Hidden layer widths.
        activations: Activation of each hidden layer.
        negative_slope: Slope of ``leakyrelu`` for negative inputs.
    """

    model_config = ConfigDict(frozen=True)

    widths: List[int]
    activations: List[Activation]
    negative_slope: float = Field(default=0.01, ge=0)

    @model_validator(mode="after")
    def _check_layers(self):
        if not self.widths:
            raise ValueError("A feed-forward network needs at least one hidden layer.")
        if any(w < 1 for w in self.widths):
            raise ValueError("Layer widths must be >= 1.")
        if len(self.activations) != len(self.widths):
            raise ValueError("One activation per hidden layer is required.")
        return self


class NetworkBSpec(BaseModel):
    """Midst-fusion baseline: position, force and temperature columns merge into a trunk.

    Attributes:
        position_widths: Hidden widths of the position column.
        force_widths: Hidden widths of the force column.
        temperature_widths: Hidden widths of the temperature column.
        trunk_widths: Hidden widths after the columns are concatenated.
        activation: Activation used in every hidden layer.
        temperature_fill: Temperature fed at inference when the true value is not
            available (the dataset mean in the original setup).
    """

    model_config = ConfigDict(frozen=True)

    position_widths: List[int] = Field(default_factory=lambda: [300, 300])
    force_widths: List[int] = Field(default_factory=lambda: [300, 300])
    temperature_widths: List[int] = Field(default_factory=lambda: [300, 300])
    trunk_widths: List[int] = Field(default_factory=lambda: [520, 128])
    activation: Activation = "relu"
    temperature_fill: Optional[float] = None

    @model_validator(mode="after")
    def _check_widths(self):
        for name in ("position_widths", "force_widths", "temperature_widths", "trunk_widths"):
            widths = getattr(self, name)
            if not widths or any(w < 1 for w in widths):
                raise ValueError(f"{name} must be a non-empty list of widths >= 1.")
        return self


class TransformerSpec(BaseModel):
    """Encoder-only transformer regressing from a learned regression token.

    Attributes:
        n_layers: Number of attention blocks ``L``.
        n_heads: Attention heads per block.
        embed_dim: Token embedding width.
        hidden_dim: Width of the block MLP.
        dropout_rate: Dropout after attention and MLP (training only).
    """

    model_config = ConfigDict(frozen=True)

    n_layers: int = Field(default=3, ge=1)
    n_heads: int = Field(default=4, ge=1)
    embed_dim: int = Field(default=128, ge=1)
    hidden_dim: int = Field(default=512, ge=1)
    dropout_rate: float = Field(default=0.0, ge=0, le=0.5)

    @model_validator(mode="after")
    def _check_heads(self):
        if self.embed_dim % self.n_heads:
            raise ValueError("embed_dim must be divisible by n_heads.")
        return self


class NetSpec(BaseModel):
    """Architecture of a neural regressor.

    Attributes:
        kind: Architecture family.
        feed_forward: Layer description when ``kind == "feed_forward"``.
        network_b: Column description when ``kind == "network_b"``.
        transformer: Encoder description when ``kind == "transformer"``.
        output_dim: 21 output channels (23 when replicating the baseline).
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["network_b", "feed_forward", "transformer"]
    feed_forward: Optional[FeedForwardSpec] = None
    network_b: Optional[NetworkBSpec] = None
    transformer: Optional[TransformerSpec] = None
    output_dim: int = Field(default=len(OUTPUT_CHANNELS), ge=1)

    @model_validator(mode="after")
    def _check_kind(self):
        if getattr(self, self.kind) is None:
            raise ValueError(f"NetSpec of kind '{self.kind}' needs a '{self.kind}' section.")
        return self


class TrainConfig(BaseModel):
    """Mini-batch training protocol for neural regressors.

    Attributes:
        batch_size: Samples per Adam step.
        lr: Adam learning rate.
        max_epochs: Upper bound on epochs.
        patience: Epochs without validation improvement before stopping.
        early_stopping: When ``False`` train exactly ``max_epochs`` and keep the final
            parameters.
        seed: Seed for initialisation, shuffling and dropout.
    """

    model_config = ConfigDict(frozen=True)

    batch_size: int = Field(default=256, ge=1)
    lr: float = Field(default=1e-3, gt=0)
    max_epochs: int = Field(default=100, ge=1)
    patience: int = Field(default=10, ge=0)
    early_stopping: bool = True
    seed: int = 0


class TrainingCurves(BaseModel):
    """Per-epoch loss history.

    Attributes:
        train_loss: Mean training loss of each epoch.
        val_loss: Validation loss after each epoch.
        best_epoch: 1-based epoch whose parameters were retained.
    """

    train_loss: List[float] = Field(default_factory=list)
    val_loss: List[float] = Field(default_factory=list)
    best_epoch: int = 0


# ---------- #
# EVALUATION #
# ---------- #


class FoldResult(BaseModel):
    """Test-set metrics of one trained model on one fold.

    Attributes:
        fold: Fold index.
        family: Regressor family.
        combo: Window combination.
        include_temperature: Whether temperature was an input.
        channels: Scored channels.
        channel_mae: Per-channel MAE in raw counts.
        channel_norm_mae: Per-channel MAE on z-scored values.
        mae_all: Mean of ``channel_mae``.
        norm_mae_all: Mean of ``channel_norm_mae``.
        mae_electrodes: Mean of ``channel_mae`` over electrodes.
        norm_mae_electrodes: Mean of ``channel_norm_mae`` over electrodes.
        n_train: Training windows.
        n_test: Test windows scored.
        param_count: Learnable parameters (nodes for tree ensembles).
        flops: Floating point operations per forward pass (neural networks only).
    """

    fold: int
    family: RegressorFamily
    combo: int
    include_temperature: bool = False
    channels: List[str]
    channel_mae: List[float]
    channel_norm_mae: List[float]
    mae_all: float
    norm_mae_all: float
    mae_electrodes: float
    norm_mae_electrodes: float
    n_train: int
    n_test: int
    param_count: int = 0
    flops: Optional[int] = None

    @model_validator(mode="after")
    def _check_aggregates(self):
        if any(c in UNSCORED_CHANNELS for c in self.channels):
            raise ValueError("pac1 and tac are never scored.")
        if not (len(self.channels) == len(self.channel_mae) == len(self.channel_norm_mae)):
            raise ValueError("Per-channel metric lengths disagree.")
        mae = np.asarray(self.channel_mae)
        nmae = np.asarray(self.channel_norm_mae)
        electrodes = np.array([c in ELECTRODE_NAMES for c in self.channels])
        expected = {
            "mae_all": mae.mean(),
            "norm_mae_all": nmae.mean(),
            "mae_electrodes": mae[electrodes].mean() if electrodes.any() else 0.0,
            "norm_mae_electrodes": nmae[electrodes].mean() if electrodes.any() else 0.0,
        }
        for name, value in expected.items():
            if abs(getattr(self, name) - float(value)) > 1e-12 * max(1.0, abs(value)):
                raise ValueError(f"{name} does not equal the mean of its channels.")
        return self

    @classmethod
    def from_channel_errors(
        cls,
        *,
        channels: List[str],
        channel_mae: List[float],
        channel_norm_mae: List[float],
        **kwargs: Any,
    ) -> "FoldResult":
        """Build a result whose aggregates are computed from the per-channel errors."""
        mae = np.asarray(channel_mae, dtype=np.float64)
        nmae = np.asarray(channel_norm_mae, dtype=np.float64)
        electrodes = np.array([c in ELECTRODE_NAMES for c in channels])
        return cls(
            channels=list(channels),
            channel_mae=mae.tolist(),
            channel_norm_mae=nmae.tolist(),
            mae_all=float(mae.mean()),
            norm_mae_all=float(nmae.mean()),
            mae_electrodes=float(mae[electrodes].mean()) if electrodes.any() else 0.0,
            norm_mae_electrodes=(
                float(nmae[electrodes].mean()) if electrodes.any() else 0.0
            ),
            **kwargs,
        )


class TTestReport(BaseModel):
    """Corrected resampled paired t-test of two cross-validated models.

    Attributes:
        mean_diff: Mean paired difference (first minus second).
        t_stat: Corrected t statistic, ``None`` when every difference is equal and
            non-zero.
        df: Degrees of freedom ``k - 1``.
        p_value: Left-tailed p-value ``P(T <= t)``.
        k: Number of paired folds.
        n_train: Training examples per fold used in the correction.
        n_test: Test examples per fold used in the correction.
        test_train_ratio: ``n_test / n_train``.
        label: Optional description of the comparison.
    """

    mean_diff: float
    t_stat: Optional[float]
    df: int
    p_value: float = Field(ge=0, le=1)
    k: int
    n_train: float
    n_test: float
    test_train_ratio: float
    label: Optional[str] = None

    @model_validator(mode="after")
    def _check_df(self):
        if self.df != self.k - 1:
            raise ValueError("df must equal k - 1.")
        return self


class SweepCurve(BaseModel):
    """Normalized MAE of a temperature-input model against a clamped temperature.

    Attributes:
        grid: Temperatures probed (raw counts).
        norm_mae: Normalized MAE at each grid value.
        true_temperature_norm_mae: Normalized MAE with the true per-sample temperatures.
        best_temperature: Grid value with the lowest error.
        best_norm_mae: The lowest error over the grid.
        mean_temperature: Mean temperature of the evaluated windows.
        mean_temperature_norm_mae: Error with the temperature fixed at that mean.
    """

    grid: List[float]
    norm_mae: List[float]
    true_temperature_norm_mae: float
    best_temperature: float
    best_norm_mae: float
    mean_temperature: float
    mean_temperature_norm_mae: float


class LatencyReport(BaseModel):
    """Per-call inference latency of one model.

    Attributes:
        family: Regressor family.
        input_size: Width of each random input.
        n_inputs: Timed calls.
        mean_ms: Mean wall-clock time per call.
        min_ms: Fastest call.
        max_ms: Slowest call.
        param_count: Learnable parameters of the model.
        flops: Forward-pass FLOPs (neural networks only).
    """

    family: str
    input_size: int
    n_inputs: int
    mean_ms: float
    min_ms: float
    max_ms: float
    param_count: int = 0
    flops: Optional[int] = None


# ----------- #
# EXPERIMENTS #
# ----------- #


class FoldPlanConfig(BaseModel):
    """Fold plan parameters of an experiment."""

    n_folds: int = Field(default=10, ge=1)
    chunk_size: int = Field(default=1000, ge=1)
    chunks_per_split: int = Field(default=30, ge=1)
    seed: int = 0


class ModelConfig(BaseModel):
    """Model family and its hyperparameters.

    Attributes:
        family: Regressor family.
        preset: Load the shipped selected configuration for the experiment's window
            combination. Explicit ``gbt``/``net``/``train`` sections override it.
        gbt: Boosted-tree hyperparameters.
        net: Neural architecture.
        train: Neural training protocol.
    """

    family: RegressorFamily
    preset: bool = False
    gbt: Optional[GbtParams] = None
    net: Optional[NetSpec] = None
    train: Optional[TrainConfig] = None


class ExperimentConfig(BaseModel):
    """Everything needed to reproduce a cross-validated run.

    Attributes:
        name: Run label used in result files.
        dataset: Dataset CSV path.
        layout: Electrode layout path (``None`` uses the default layout).
        folds: Fold plan parameters.
        model: Model family and hyperparameters.
        window: Input encoding.
        seed: Seed for model fitting.
        output_dir: Directory receiving results, models and plot data.
        train_fold: Fold used by the ``train`` command.
        temperature_grid_size: Grid points for the fixed-temperature sweep.
        n_jobs: Worker threads used to evaluate folds.
    """

    name: str = "experiment"
    dataset: str
    layout: Optional[str] = None
    folds: FoldPlanConfig = Field(default_factory=FoldPlanConfig)
    model: ModelConfig
    window: WindowSpec = Field(default_factory=WindowSpec)
    seed: int = 0
    output_dir: str = "runs"
    train_fold: int = Field(default=0, ge=0)
    temperature_grid_size: int = Field(default=25, ge=2)
    n_jobs: int = Field(default=1, ge=1)

    def resolve_paths(self, base_dir: Path) -> "ExperimentConfig":
        """Return a copy whose relative paths are anchored at ``base_dir``."""

        def _anchor(p: Optional[str]) -> Optional[str]:
            if p is None:
                return None
            path = Path(p)
            return str(path if path.is_absolute() else base_dir / path)

        return self.model_copy(
            update={
                "dataset": _anchor(self.dataset),
                "layout": _anchor(self.layout),
                "output_dir": _anchor(self.output_dir),
            }
        )
