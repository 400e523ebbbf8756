from .calibrator import (
    apply_offset,
    calibrate,
    correct_dataset,
    rotation_matrix,
    surface_distance,
)

__all__ = [
    "apply_offset",
    "calibrate",
    "correct_dataset",
    "rotation_matrix",
    "surface_distance",
]
