from typing import Optional

import numpy as np
import pandas as pd
import pytest

from biotac_sim.oracle import default_oracle_config, generate_dataset
from biotac_sim.schema import DATASET_COLUMNS, ELECTRODE_NAMES, NO_CYCLE, Dataset
from biotac_sim.schema.models import coerce_table


def make_dataset(
    n: int,
    positions: Optional[np.ndarray] = None,
    forces: Optional[np.ndarray] = None,
    cycle_ids: Optional[np.ndarray] = None,
    tdc: Optional[np.ndarray] = None,
    seed: int = 0,
) -> Dataset:
    """Hand-built dataset; channels not given are random raw counts."""
    rng = np.random.default_rng(seed)
    positions = np.zeros((n, 3)) if positions is None else np.asarray(positions, float)
    forces = np.zeros((n, 3)) if forces is None else np.asarray(forces, float)
    cycle_ids = np.full(n, NO_CYCLE) if cycle_ids is None else np.asarray(cycle_ids)
    tdc = np.full(n, 2300.0) if tdc is None else np.asarray(tdc, float)
    table = pd.DataFrame(
        {
            "tick": np.arange(n),
            "cycle_id": cycle_ids,
            "x_mm": positions[:, 0],
            "y_mm": positions[:, 1],
            "z_mm": positions[:, 2],
            "fx_n": forces[:, 0],
            "fy_n": forces[:, 1],
            "fz_n": forces[:, 2],
            "tdc": tdc,
            "tac": np.full(n, 2000.0),
            "pdc": rng.uniform(1400, 1600, n),
            "pac0": rng.uniform(2000, 2100, n),
            "pac1": rng.uniform(2000, 2100, n),
            **{e: rng.uniform(1500, 2500, n) for e in ELECTRODE_NAMES},
        },
        columns=DATASET_COLUMNS,
    )
    return Dataset(table=coerce_table(table))


@pytest.fixture
def dataset_factory():
    return make_dataset


@pytest.fixture(scope="session")
def desk_dataset() -> Dataset:
    """A few thousand ticks of surrogate data with twelve contact cycles."""
    return generate_dataset(default_oracle_config(seed=3, n_cycles=12, noise_std_counts=1.0))
