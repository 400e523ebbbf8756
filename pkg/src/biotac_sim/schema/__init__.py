from .constants import (
    BASELINE_EPOCHS,
    BASELINE_OUTPUT_CHANNELS,
    CONTACT_DISTANCE_MM,
    DATASET_COLUMNS,
    ELECTRODE_NAMES,
    N_ELECTRODES,
    NEURAL_FAMILIES,
    NO_CYCLE,
    OUTPUT_CHANNELS,
    PROBE_FORCE_N,
    RAW_MAX,
    RAW_MIN,
    TICK_HZ,
    TIP_ELECTRODES,
    UNSCORED_CHANNELS,
    WINDOW_COMBOS,
    Activation,
    GbtObjective,
    ProbeMode,
    RegressorFamily,
    SUPPORTED_ACTIVATIONS,
)
from .exceptions import (
    BioTacError,
    DatasetParseError,
    DimensionMismatchError,
    EmptyBenchmarkError,
    FitError,
    FoldSizingError,
    InsufficientProbesError,
    TrainingDivergedError,
)
from .models import (
    CalibrationReport,
    Capsule,
    ChannelSet,
    CycleSpec,
    Dataset,
    DatasetMeta,
    DriftParams,
    ElectrodeLayout,
    ExperimentConfig,
    FeedForwardSpec,
    FoldAssignment,
    FoldPlan,
    FoldPlanConfig,
    FoldResult,
    FrameVerdict,
    GbtParams,
    LatencyReport,
    ModelConfig,
    NetSpec,
    NetworkBSpec,
    OracleConfig,
    PoseOffset,
    SensorFrame,
    SweepCurve,
    TrainConfig,
    TrainingCurves,
    TransformerSpec,
    TTestReport,
    WindowSpec,
)

__all__ = [
    # constants
    "BASELINE_EPOCHS",
    "BASELINE_OUTPUT_CHANNELS",
    "CONTACT_DISTANCE_MM",
    "DATASET_COLUMNS",
    "ELECTRODE_NAMES",
    "N_ELECTRODES",
    "NEURAL_FAMILIES",
    "NO_CYCLE",
    "OUTPUT_CHANNELS",
    "PROBE_FORCE_N",
    "RAW_MAX",
    "RAW_MIN",
    "TICK_HZ",
    "TIP_ELECTRODES",
    "UNSCORED_CHANNELS",
    "WINDOW_COMBOS",
    "Activation",
    "GbtObjective",
    "ProbeMode",
    "RegressorFamily",
    "SUPPORTED_ACTIVATIONS",
    # exceptions
    "BioTacError",
    "DatasetParseError",
    "DimensionMismatchError",
    "EmptyBenchmarkError",
    "FitError",
    "FoldSizingError",
    "InsufficientProbesError",
    "TrainingDivergedError",
    # models
    "CalibrationReport",
    "Capsule",
    "ChannelSet",
    "CycleSpec",
    "Dataset",
    "DatasetMeta",
    "DriftParams",
    "ElectrodeLayout",
    "ExperimentConfig",
    "FeedForwardSpec",
    "FoldAssignment",
    "FoldPlan",
    "FoldPlanConfig",
    "FoldResult",
    "FrameVerdict",
    "GbtParams",
    "LatencyReport",
    "ModelConfig",
    "NetSpec",
    "NetworkBSpec",
    "OracleConfig",
    "PoseOffset",
    "SensorFrame",
    "SweepCurve",
    "TrainConfig",
    "TrainingCurves",
    "TransformerSpec",
    "TTestReport",
    "WindowSpec",
]
