import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..schema import Dataset, WindowSpec
from ..schema.constants import TOKEN_WIDTH

logger = logging.getLogger(__name__)

_AXES = ("x", "y", "z")
_FORCE_AXES = ("fx", "fy", "fz")


def input_size(spec: WindowSpec) -> int:
    """
    Width of the feature vector of ``spec``.

    Example:
        ```python
        [input_size(WindowSpec(combo=c)) for c in range(1, 9)]
        ```
        ```python
        [12, 9, 6, 18, 66, 36, 18, 72]
        ```
    """
    return spec.input_size


def feature_names(spec: WindowSpec) -> List[str]:
    """Names of the features in order: positions, then forces, then ``tdc``."""
    names = [f"{a}@{o}" for o in spec.position_offsets for a in _AXES]
    names += [f"{a}@{o}" for o in spec.force_offsets for a in _FORCE_AXES]
    if spec.include_temperature:
        names.append("tdc@0")
    return names


def valid_ticks_mask(
    ticks: np.ndarray,
    n_frames: int,
    spec: WindowSpec,
    chunk_size: Optional[int] = None,
) -> np.ndarray:
    """Whether every tick a window reads lies in the recording and in ``T``'s chunk."""
    ticks = np.asarray(ticks, dtype=np.int64)
    offsets = np.asarray(spec.timesteps, dtype=np.int64)
    needed = ticks[:, None] + offsets[None, :]
    ok = (ticks >= 0) & (ticks < n_frames)
    ok &= np.all((needed >= 0) & (needed < n_frames), axis=1)
    if chunk_size is not None:
        ok &= np.all(needed // chunk_size == (ticks // chunk_size)[:, None], axis=1)
    return ok


def build_windows(
    dataset: Dataset,
    ticks: Sequence[int],
    spec: WindowSpec,
    chunk_size: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Assemble the feature vectors of many ticks at once.

    Ticks whose window leaves the recording, or crosses a chunk boundary when
    ``chunk_size`` is given, are dropped.

    Args:
        dataset: Recording.
        ticks: Candidate ticks ``T``.
        spec: Window combination.
        chunk_size: Fold-plan chunk size, or ``None`` to ignore chunking.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Feature matrix of shape
            ``(n_valid, input_size(spec))`` and the ticks it was built at.
    """
    ticks = np.asarray(ticks, dtype=np.int64)
    valid = ticks[valid_ticks_mask(ticks, len(dataset), spec, chunk_size)]
    pos_idx = valid[:, None] + np.asarray(spec.position_offsets, dtype=np.int64)
    force_idx = valid[:, None] + np.asarray(spec.force_offsets, dtype=np.int64)
    parts = [
        dataset.positions[pos_idx].reshape(len(valid), 3 * pos_idx.shape[1]),
        dataset.forces[force_idx].reshape(len(valid), 3 * force_idx.shape[1]),
    ]
    if spec.include_temperature:
        parts.append(dataset.channels(["tdc"])[valid])
    X = np.concatenate(parts, axis=1)
    if len(valid) < len(ticks):
        logger.debug("Dropped %d ticks without full window context", len(ticks) - len(valid))
    return X, valid


def build_window(
    dataset: Dataset,
    t: int,
    spec: WindowSpec,
    chunk_size: Optional[int] = None,
) -> Optional[np.ndarray]:
    """
    Feature vector at tick ``t``.

    Order: position triples at ascending offsets, then force triples at ascending
    offsets, then the temperature when ``spec.include_temperature``.

    Returns:
        Optional[np.ndarray]: The vector, or ``None`` when the window is out of range.

    Example:
        ```python
        build_window(dataset, 5, WindowSpec(combo=1)) is None
        ```
        ```python
        True
        ```
    """
    X, valid = build_windows(dataset, [t], spec, chunk_size)
    return X[0] if len(valid) else None


def build_targets(dataset: Dataset, ticks: Sequence[int], channels: Sequence[str]) -> np.ndarray:
    """Raw target matrix of shape ``(len(ticks), len(channels))``."""
    return dataset.channels(list(channels))[np.asarray(ticks, dtype=np.int64)]


def token_gather(spec: WindowSpec) -> np.ndarray:
    """Column of the (zero-padded) feature matrix feeding each token slot."""
    pad = spec.input_size  # index of the appended zero column
    n_pos = len(spec.position_offsets)
    gather = []
    for step in spec.timesteps:
        if step in spec.position_offsets:
            i = spec.position_offsets.index(step)
            gather += [3 * i, 3 * i + 1, 3 * i + 2]
        else:
            gather += [pad] * 3
        if step in spec.force_offsets:
            j = 3 * n_pos + 3 * spec.force_offsets.index(step)
            gather += [j, j + 1, j + 2]
        else:
            gather += [pad] * 3
    return np.asarray(gather, dtype=np.int64)


def tokenize(X: np.ndarray, spec: WindowSpec) -> np.ndarray:
    """
    Group feature vectors into one token per timestep.

    Each token is ``[x, y, z, Fx, Fy, Fz]`` at that timestep; a missing position or
    force is zero-filled.

    Args:
        X: Feature matrix of shape ``(n, input_size(spec))`` without temperature.
        spec: Window combination the features were built with.

    Returns:
        np.ndarray: Array of shape ``(n, len(spec.timesteps), 6)``.

    Raises:
        ValueError: If ``spec`` includes temperature.
    """
    if spec.include_temperature:
        raise ValueError("Temperature inputs cannot be tokenized.")
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    padded = np.concatenate([X, np.zeros((X.shape[0], 1))], axis=1)
    return padded[:, token_gather(spec)].reshape(X.shape[0], len(spec.timesteps), TOKEN_WIDTH)
