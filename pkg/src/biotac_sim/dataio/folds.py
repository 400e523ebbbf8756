import logging
from pathlib import Path
from typing import Union

import numpy as np

from ..schema import FoldAssignment, FoldPlan, FoldSizingError
from .config_io import load_model, write_json

logger = logging.getLogger(__name__)


def make_fold_plan(
    dataset_len: int,
    n_folds: int,
    chunk_size: int,
    chunks_per_split: int,
    seed: int = 0,
) -> FoldPlan:
    """
    Split a recording into chunks and draw test/validation chunks per fold.

    The recording is cut into ``dataset_len // chunk_size`` chunks (a trailing partial
    chunk is unused). For every fold, ``chunks_per_split`` test chunks and then
    ``chunks_per_split`` validation chunks are drawn without replacement from one
    seeded generator; the remaining chunks form the training split. Folds are drawn
    independently of one another.

    Args:
        dataset_len: Number of ticks.
        n_folds: Number of folds.
        chunk_size: Ticks per chunk.
        chunks_per_split: Chunks in the test split and in the validation split.
        seed: Seed of the chunk sampler.

    Returns:
        FoldPlan: The plan.

    Raises:
        FoldSizingError: If there are not enough chunks for test, validation and at
            least one training chunk, or if a size argument is not positive.

    Example:
        ```python
        plan = make_fold_plan(300_000, 10, 1000, 30)
        [len(plan.folds[0].test), len(plan.folds[0].validation), len(plan.folds[0].train)]
        ```
        ```python
        [30, 30, 240]
        ```
    """
    if min(n_folds, chunk_size, chunks_per_split) < 1:
        raise FoldSizingError("n_folds, chunk_size and chunks_per_split must be >= 1.")
    n_chunks = dataset_len // chunk_size
    needed = 2 * chunks_per_split + 1
    if n_chunks < needed:
        raise FoldSizingError(
            f"{dataset_len} ticks give {n_chunks} chunks of {chunk_size}; "
            f"at least {needed} are needed."
        )
    rng = np.random.default_rng(seed)
    folds = []
    for _ in range(n_folds):
        order = rng.permutation(n_chunks)
        test = np.sort(order[:chunks_per_split])
        val = np.sort(order[chunks_per_split : 2 * chunks_per_split])
        train = np.sort(order[2 * chunks_per_split :])
        folds.append(
            FoldAssignment(test=test.tolist(), validation=val.tolist(), train=train.tolist())
        )
    logger.info(
        "Fold plan: %d folds over %d chunks (%d test / %d validation each)",
        n_folds,
        n_chunks,
        chunks_per_split,
        chunks_per_split,
    )
    return FoldPlan(
        n_folds=n_folds,
        chunk_size=chunk_size,
        chunks_per_split=chunks_per_split,
        n_chunks=n_chunks,
        seed=seed,
        folds=folds,
    )


def save_fold_plan(plan: FoldPlan, path: Union[str, Path]) -> Path:
    return write_json(path, plan)


def load_fold_plan(path: Union[str, Path]) -> FoldPlan:
    return load_model(path, FoldPlan)
