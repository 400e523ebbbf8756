from typing import Dict, List, Literal, Tuple

# ------- #
# Sensor  #
# ------- #

TICK_HZ: int = 100
POSITION_HZ: int = 10
POSITION_HOLD_TICKS: int = TICK_HZ // POSITION_HZ

RAW_MIN: float = 0.0
RAW_MAX: float = 4095.0

N_ELECTRODES: int = 19
ELECTRODE_NAMES: List[str] = [f"e{i}" for i in range(1, N_ELECTRODES + 1)]

# Electrodes sitting over the larger fluid volume at the fingertip (1-based).
TIP_ELECTRODES: Tuple[int, ...] = (7, 8, 9, 10)

# Channels predicted by the temperature-free models.
OUTPUT_CHANNELS: List[str] = ELECTRODE_NAMES + ["pdc", "pac0"]
# The baseline network is trained on pac1 and tac as well.
BASELINE_OUTPUT_CHANNELS: List[str] = OUTPUT_CHANNELS + ["pac1", "tac"]
# Channels never scored.
UNSCORED_CHANNELS: Tuple[str, ...] = ("pac1", "tac")

RAW_CHANNELS: List[str] = ["tdc", "tac", "pdc", "pac0", "pac1"] + ELECTRODE_NAMES

DATASET_COLUMNS: List[str] = [
    "tick",
    "cycle_id",
    "x_mm",
    "y_mm",
    "z_mm",
    "fx_n",
    "fy_n",
    "fz_n",
    "tdc",
    "tac",
    "pdc",
    "pac0",
    "pac1",
] + ELECTRODE_NAMES

NO_CYCLE: int = -1

# Probe selection thresholds used for calibration and the contact histogram.
PROBE_FORCE_N: float = 0.3
CONTACT_DISTANCE_MM: float = 2.0

ProbeMode = Literal["light_touch_end", "contact_start"]

# ------- #
# Windows #
# ------- #

# combo -> (position offsets, force offsets), offsets in ticks relative to T.
# Offsets are listed in ascending order; that is also the feature order.
WINDOW_COMBOS: Dict[int, Tuple[Tuple[int, ...], Tuple[int, ...]]] = {
    1: ((0,), (-10, 0, 10)),
    2: ((0,), (-10, 0)),
    3: ((0,), (0,)),
    4: ((0,), (-10, -5, 0, 5, 10)),
    5: ((0,), tuple(range(-10, 11))),
    6: ((0,), tuple(range(-10, 1))),
    7: ((-10, 0, 10), (-10, 0, 10)),
    8: ((-10, 0, 10), tuple(range(-10, 11))),
}

# Width of a transformer token: position triple then force triple.
TOKEN_WIDTH: int = 6

# ---------- #
# Regressors #
# ---------- #

RegressorFamily = Literal["gbt", "feed_forward", "transformer", "network_b", "naive"]
NEURAL_FAMILIES: Tuple[str, ...] = ("feed_forward", "transformer", "network_b")

Activation = Literal["sigmoid", "relu", "hardtanh", "tanh", "leakyrelu", "elu"]
SUPPORTED_ACTIVATIONS: Tuple[str, ...] = (
    "sigmoid",
    "relu",
    "hardtanh",
    "tanh",
    "leakyrelu",
    "elu",
)

GbtObjective = Literal["mae", "squared"]

ADAM_DEFAULTS: Dict[str, float] = {"beta1": 0.9, "beta2": 0.999, "epsilon": 1e-8}

# Baseline replication: fixed number of epochs, no early stopping.
BASELINE_EPOCHS: int = 50

# ---------- #
# Evaluation #
# ---------- #

LATENCY_WARMUP_CALLS: int = 10
LATENCY_DEFAULT_INPUTS: int = 100

# Calibration schedule: step sizes halve every CALIBRATION_ANNEAL_EVERY steps.
CALIBRATION_STEPS: int = 1000
CALIBRATION_TRANSLATION_STEP_MM: float = 0.5
CALIBRATION_ROTATION_STEP_RAD: float = 0.01
CALIBRATION_ANNEAL_EVERY: int = 200
CALIBRATION_MIN_PROBES: int = 10

# Reference values reported for the real dataset. Documentation only; the synthetic
# surrogate is not expected to reproduce them.
PUBLISHED_NORM_MAE_COMBO1: Dict[str, float] = {
    "network_b": 0.228,
    "gbt": 0.150,
    "transformer": 0.156,
    "feed_forward": 0.168,
}
PUBLISHED_FIXED_TEMPERATURE: Dict[str, float] = {
    "true_temperature": 0.096,
    "best_fixed_temperature": 0.228,
    "naive": 0.537,
    "relative_loss": 0.244,
}
PUBLISHED_CALIBRATION_MM: Dict[str, float] = {"initial": 5.039, "final": 0.444}
PUBLISHED_BASELINE_PARAMS: int = 806_000

# ------- #
# Output  #
# ------- #

RESULT_FILENAME: str = "results.csv"
SUMMARY_FILENAME: str = "summary.json"
MODEL_FILENAME: str = "model.json"
