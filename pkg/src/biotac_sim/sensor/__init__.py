from .geometry import default_layout, load_layout, nearest_electrode, nearest_electrodes
from .probes import (
    contact_histogram,
    probe_indices,
    select_contact_probes,
    validate_frame,
)

__all__ = [
    "contact_histogram",
    "default_layout",
    "load_layout",
    "nearest_electrode",
    "nearest_electrodes",
    "probe_indices",
    "select_contact_probes",
    "validate_frame",
]
