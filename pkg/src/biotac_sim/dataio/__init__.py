from .config_io import load_model, read_structured, write_json
from .dataset_io import read_dataset, write_dataset
from .folds import load_fold_plan, make_fold_plan, save_fold_plan

__all__ = [
    "load_fold_plan",
    "load_model",
    "make_fold_plan",
    "read_dataset",
    "read_structured",
    "save_fold_plan",
    "write_dataset",
    "write_json",
]
