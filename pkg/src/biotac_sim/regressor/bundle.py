import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..features import Scaler
from ..schema import WindowSpec
from .base_regressor import BaseRegressor
from .registry import REGRESSORS
from .utils.serialization import pack_arrays, unpack_arrays

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass
class ModelBundle:
    """
    A fitted regressor together with the scaler and window it was trained with.

    The bundle is the unit that is saved, loaded, benchmarked and evaluated: raw
    window features go in, raw channel counts come out.

    Attributes:
        regressor: Fitted regressor working on normalized values.
        scaler: Statistics fitted on the training windows and targets.
    """

    regressor: BaseRegressor
    scaler: Scaler

    @property
    def window(self) -> WindowSpec:
        return self.regressor.window

    @property
    def channels(self):
        return self.regressor.channels

    @property
    def family(self) -> str:
        return self.regressor.family

    def predict_normalized(self, X_raw: np.ndarray) -> np.ndarray:
        """Normalized outputs for raw feature vectors."""
        return self.regressor.predict(self.scaler.apply(X_raw, "inputs"))

    def predict_raw(self, X_raw: np.ndarray, temperature: Optional[float] = None) -> np.ndarray:
        """
        Raw channel counts for raw feature vectors.

        Args:
            X_raw: One feature vector or a batch.
            temperature: Clamp the temperature input to this value (raw counts); only
                meaningful for windows that include the temperature.

        Returns:
            np.ndarray: Channel counts in ``self.channels`` order.
        """
        if temperature is not None:
            if not self.window.include_temperature:
                raise ValueError("This model does not take a temperature input.")
            single = np.ndim(X_raw) == 1
            X_raw = np.array(X_raw, dtype=np.float64, ndmin=2)
            X_raw[:, -1] = temperature
            if single:
                X_raw = X_raw[0]
        return self.scaler.invert(self.predict_normalized(X_raw), "outputs")

    def save(self, path: Union[str, Path]) -> Path:
        """
        Write the bundle as a JSON header plus a ``.bin`` parameter blob next to it.

        The blob holds every tensor of ``get_arrays`` as little-endian float64; the
        header lists their names, shapes and offsets.

        Returns:
            Path: The header path.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        manifest, blob = pack_arrays(self.regressor.get_arrays())
        blob_path = path.with_suffix(".bin")
        header = {
            "format": FORMAT_VERSION,
            "family": self.family,
            "window": self.window.model_dump(mode="json"),
            "channels": list(self.channels),
            "scaler": self.scaler.model_dump(mode="json"),
            "regressor": self.regressor.get_config(),
            "param_count": self.regressor.param_count(),
            "flops": self.regressor.flops_count(),
            "blob": blob_path.name if manifest else None,
            "arrays": manifest,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(header, fh, indent=1, sort_keys=True)
            fh.write("\n")
        if manifest:
            blob_path.write_bytes(blob)
        logger.info("Saved %s model to %s", self.family, path)
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ModelBundle":
        """
        Read a bundle written by ``save``.

        Raises:
            FileNotFoundError: If the header or its blob is missing.
            ValueError: If the header is malformed or of an unknown family.
        """
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"file not found: {path}")
        try:
            header = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ValueError(f"{path} is not a model file: {e}")
        if header.get("format") != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported model format {header.get('format')!r}.")
        family = header.get("family")
        if family not in REGRESSORS:
            raise ValueError(f"{path}: unknown model family {family!r}.")
        arrays = {}
        if header.get("blob"):
            blob_path = path.parent / header["blob"]
            if not blob_path.is_file():
                raise FileNotFoundError(f"file not found: {blob_path}")
            arrays = unpack_arrays(header["arrays"], blob_path.read_bytes())
        window = WindowSpec.model_validate(header["window"])
        regressor = REGRESSORS[family].from_state(
            header["regressor"], arrays, window, header["channels"]
        )
        return cls(regressor=regressor, scaler=Scaler.model_validate(header["scaler"]))
