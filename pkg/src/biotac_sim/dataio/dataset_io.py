import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..schema import DATASET_COLUMNS, Dataset, DatasetMeta, DatasetParseError
from ..schema.models import coerce_table

logger = logging.getLogger(__name__)

_INTEGER_COLUMNS = ("tick", "cycle_id")


def _check_header(path: Path) -> None:
    try:
        header = pd.read_csv(path, nrows=0).columns.tolist()
    except pd.errors.EmptyDataError:
        header = None
    if header is None:
        raise DatasetParseError("header mismatch: file is empty")
    if header != DATASET_COLUMNS:
        missing = [c for c in DATASET_COLUMNS if c not in header]
        extra = [c for c in header if c not in DATASET_COLUMNS]
        detail = []
        if missing:
            detail.append(f"missing {missing}")
        if extra:
            detail.append(f"unexpected {extra}")
        if not detail:
            detail.append("columns out of order")
        raise DatasetParseError("header mismatch: " + ", ".join(detail))


def _first_bad_row(table: pd.DataFrame) -> Optional[tuple]:
    """(0-based row, column) of the earliest non-numeric or empty cell, if any."""
    worst = None
    for col in table.columns:
        values = table[col]
        if pd.api.types.is_numeric_dtype(values):
            bad = values.isna().to_numpy()
        else:
            bad = pd.to_numeric(values, errors="coerce").isna().to_numpy()
        if bad.any():
            row = int(np.argmax(bad))
            if worst is None or row < worst[0]:
                worst = (row, col)
    return worst


def read_dataset(path: Union[str, Path], layout_ref: Optional[str] = None) -> Dataset:
    """
    Read a dataset CSV.

    The header must equal ``tick,cycle_id,x_mm,y_mm,z_mm,fx_n,fy_n,fz_n,tdc,tac,pdc,
    pac0,pac1,e1,...,e19``; every cell must be numeric; ticks must run 0, 1, 2, ...

    Args:
        path: CSV file.
        layout_ref: Electrode layout the data refers to, kept in the metadata.

    Returns:
        Dataset: Frames in tick order, bit-identical to what ``write_dataset`` wrote.

    Raises:
        FileNotFoundError: If ``path`` does not exist.
        DatasetParseError: On a header mismatch, a non-numeric cell or a tick gap.
            ``row`` is the 1-based data row of the first offending line.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"file not found: {path}")
    _check_header(path)
    try:
        table = pd.read_csv(path, float_precision="round_trip", keep_default_na=True)
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DatasetParseError(f"malformed CSV: {e}")
    if table.empty:
        raise DatasetParseError("dataset has no rows")

    bad = _first_bad_row(table)
    if bad is not None:
        row, col = bad
        raise DatasetParseError(f"non-numeric value in column '{col}'", row=row + 1)
    table = table.apply(pd.to_numeric)

    for col in _INTEGER_COLUMNS:
        values = table[col].to_numpy(dtype=np.float64)
        fractional = values != np.round(values)
        if fractional.any():
            row = int(np.argmax(fractional))
            raise DatasetParseError(f"'{col}' must be an integer", row=row + 1)

    ticks = table["tick"].to_numpy(dtype=np.int64)
    gaps = ticks != np.arange(len(ticks))
    if gaps.any():
        row = int(np.argmax(gaps))
        raise DatasetParseError(
            f"non-contiguous tick: expected {row}, found {ticks[row]}", row=row + 1
        )

    logger.info("Read %d frames from %s", len(table), path)
    meta = DatasetMeta(source=str(path), layout_ref=layout_ref)
    return Dataset(table=coerce_table(table), meta=meta)


def write_dataset(dataset: Dataset, path: Union[str, Path]) -> Path:
    """
    Write a dataset as CSV with the fixed header.

    Floats are written with their shortest round-trip representation, so
    ``read_dataset(write_dataset(ds, p))`` reproduces ``ds`` bit for bit.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dataset.table.to_csv(path, index=False, lineterminator="\n")
    logger.info("Wrote %d frames to %s", len(dataset), path)
    return path
