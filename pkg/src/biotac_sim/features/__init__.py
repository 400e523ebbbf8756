from .scaler import Scaler, apply, fit_scaler, invert
from .windows import (
    build_targets,
    build_window,
    build_windows,
    feature_names,
    input_size,
    tokenize,
    valid_ticks_mask,
)

__all__ = [
    "Scaler",
    "apply",
    "build_targets",
    "build_window",
    "build_windows",
    "feature_names",
    "fit_scaler",
    "input_size",
    "invert",
    "tokenize",
    "valid_ticks_mask",
]
