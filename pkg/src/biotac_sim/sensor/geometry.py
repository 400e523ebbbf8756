import logging
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from ..dataio.config_io import load_model
from ..schema import ElectrodeLayout

logger = logging.getLogger(__name__)

DEFAULT_LAYOUT_RESOURCE = "default_layout.json"


@lru_cache(maxsize=1)
def default_layout() -> ElectrodeLayout:
    """
    The electrode layout shipped with the package.

    Nineteen electrodes on a capsule of radius 7 mm around the segment
    ``(0, 0, 0)``-``(16, 0, 0)``; electrodes 7-10 sit on the fingertip cap.
    The coordinates are approximate and can be replaced with ``load_layout``.
    """
    ref = resources.files("biotac_sim.sensor").joinpath("data", DEFAULT_LAYOUT_RESOURCE)
    with resources.as_file(ref) as path:
        return load_model(path, ElectrodeLayout)


def load_layout(path: Optional[Union[str, Path]] = None) -> ElectrodeLayout:
    """
    Load an electrode layout file.

    Args:
        path: JSON/YAML file with ``positions_mm`` (19x3) and ``capsule``
            (``p0``, ``p1``, ``radius_mm``). ``None`` returns the default layout.

    Returns:
        ElectrodeLayout: The validated layout.

    Raises:
        FileNotFoundError: If the file does not exist.
        pydantic.ValidationError: If the layout violates its invariants.
    """
    if path is None:
        return default_layout()
    layout = load_model(path, ElectrodeLayout)
    logger.info("Loaded electrode layout from %s", path)
    return layout


def nearest_electrodes(points_mm: Any, layout: ElectrodeLayout) -> np.ndarray:
    """
    1-based index of the closest electrode for every point.

    Args:
        points_mm: Array-like of shape ``(n, 3)``.
        layout: Electrode layout.

    Returns:
        np.ndarray: Integer array of shape ``(n,)`` with values in ``1..19``.
            Equidistant electrodes resolve to the lowest index.
    """
    pts = np.atleast_2d(np.asarray(points_mm, dtype=np.float64))
    diff = pts[:, None, :] - layout.positions[None, :, :]
    sq = np.einsum("nkd,nkd->nk", diff, diff)
    return np.argmin(sq, axis=1).astype(np.int64) + 1


def nearest_electrode(point_mm: Any, layout: ElectrodeLayout) -> int:
    """
    Index (1..19) of the electrode closest to ``point_mm``.

    Example:
        ```python
        layout = default_layout()
        nearest_electrode(layout.positions_mm[6], layout)
        ```
        ```python
        7
        ```
    """
    return int(nearest_electrodes([point_mm], layout)[0])
