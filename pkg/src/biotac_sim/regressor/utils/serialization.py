from typing import Dict, List, Tuple

import numpy as np

# Blob layout: every array flattened in C order, little-endian float64, concatenated.
BLOB_DTYPE = "<f8"


def pack_arrays(arrays: Dict[str, np.ndarray]) -> Tuple[List[Dict[str, object]], bytes]:
    """
    Flatten named arrays into one binary blob.

    Returns:
        Tuple[List[Dict[str, object]], bytes]: Manifest of ``{"name", "shape",
            "offset"}`` entries (offset in elements) and the blob.

    Example:
        ```python
        manifest, blob = pack_arrays({"w": np.ones((2, 3))})
        manifest, len(blob)
        ```
        ```python
        ([{'name': 'w', 'offset': 0, 'shape': [2, 3]}], 48)
        ```
    """
    manifest = []
    chunks = []
    offset = 0
    for name, value in arrays.items():
        flat = np.ascontiguousarray(value, dtype=BLOB_DTYPE).ravel()
        manifest.append({"name": name, "offset": offset, "shape": list(np.shape(value))})
        chunks.append(flat.tobytes())
        offset += flat.size
    return manifest, b"".join(chunks)


def unpack_arrays(manifest: List[Dict[str, object]], blob: bytes) -> Dict[str, np.ndarray]:
    """
    Inverse of ``pack_arrays``.

    Raises:
        ValueError: If the blob is shorter than the manifest requires.
    """
    data = np.frombuffer(blob, dtype=BLOB_DTYPE)
    arrays = {}
    for entry in manifest:
        shape = tuple(int(s) for s in entry["shape"])
        size = int(np.prod(shape, dtype=np.int64))
        start = int(entry["offset"])
        if start + size > data.size:
            raise ValueError(f"Parameter blob is truncated at '{entry['name']}'.")
        arrays[str(entry["name"])] = data[start : start + size].astype(np.float64).reshape(shape)
    return arrays
