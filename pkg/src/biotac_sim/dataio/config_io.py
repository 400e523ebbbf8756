import json
import logging
from pathlib import Path
from typing import Any, Dict, Type, TypeVar, Union

import yaml
from pydantic import BaseModel

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)

STRUCTURED_EXTENSIONS = ("json", "yaml", "yml")


def read_structured(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a JSON or YAML file into a dictionary.

    Args:
        path: File with a ``.json``, ``.yaml`` or ``.yml`` extension.

    Returns:
        Dict[str, Any]: The parsed mapping.

    Raises:
        FileNotFoundError: If ``path`` does not exist.
        ValueError: If the extension is not supported, the content cannot be parsed
            or the top-level value is not a mapping.

    Example:
        ```python
        read_structured("experiments/gbt_combo1.json")["model"]["family"]
        ```
        ```python
        'gbt'
        ```
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"file not found: {path}")
    ext = path.suffix.lower().lstrip(".")
    if ext not in STRUCTURED_EXTENSIONS:
        raise ValueError(
            f"Unsupported config extension '.{ext}'; expected one of {STRUCTURED_EXTENSIONS}."
        )
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh) if ext == "json" else yaml.safe_load(fh)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ValueError(f"{path} could not be parsed: {e}")
    if not isinstance(data, dict):
        raise ValueError(f"{path} must contain a mapping at the top level.")
    return data


def load_model(path: Union[str, Path], model_cls: Type[M]) -> M:
    """
    Read a JSON/YAML file and validate it as ``model_cls``.

    Raises:
        FileNotFoundError: If ``path`` does not exist.
        pydantic.ValidationError: If the content does not match the schema.
    """
    data = read_structured(path)
    logger.debug("Loaded %s from %s", model_cls.__name__, path)
    return model_cls.model_validate(data)


def write_json(path: Union[str, Path], payload: Union[BaseModel, Dict[str, Any]]) -> Path:
    """Write a model or mapping as indented, key-sorted JSON and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
