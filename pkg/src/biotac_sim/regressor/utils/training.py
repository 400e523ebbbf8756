import logging
from typing import Dict, Optional, Tuple

import numpy as np

from ...schema import TrainConfig, TrainingCurves, TrainingDivergedError
from .losses import l1_l2_loss, l1_l2_loss_grad
from .networks import Network
from .optim import Adam

logger = logging.getLogger(__name__)

Params = Dict[str, np.ndarray]


def _copy(params: Params) -> Params:
    return {k: v.copy() for k, v in params.items()}


def train_network(
    net: Network,
    params: Params,
    X: np.ndarray,
    Y: np.ndarray,
    X_val: Optional[np.ndarray],
    Y_val: Optional[np.ndarray],
    config: TrainConfig,
    rng: np.random.Generator,
) -> Tuple[Params, TrainingCurves]:
    """
    Mini-batch Adam on the absolute-plus-squared error.

    Every epoch visits the training set in a fresh permutation drawn from ``rng``.
    With early stopping the parameters of the epoch with the lowest validation loss
    are returned and training stops once ``patience`` epochs pass without
    improvement (``patience=0`` trains a single epoch). Without early stopping exactly
    ``max_epochs`` epochs run and the final parameters are kept.

    Args:
        net: Architecture.
        params: Initial parameters (not modified).
        X: Normalized training inputs.
        Y: Normalized training targets.
        X_val: Normalized validation inputs; the training loss is monitored when absent.
        Y_val: Normalized validation targets.
        config: Training protocol.
        rng: Source of shuffling and dropout randomness.

    Returns:
        Tuple[Params, TrainingCurves]: Retained parameters and per-epoch losses.

    Raises:
        TrainingDivergedError: If a batch loss becomes non-finite.
    """
    params = _copy(params)
    optimizer = Adam(lr=config.lr)
    curves = TrainingCurves()
    n = X.shape[0]
    has_val = X_val is not None and Y_val is not None and len(X_val) > 0

    best_loss = np.inf
    best_params = _copy(params)
    stale = 0
    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            yhat, cache = net.forward(params, X[idx], training=True, rng=rng)
            loss, dy = l1_l2_loss_grad(Y[idx], yhat)
            if not np.isfinite(loss):
                raise TrainingDivergedError(f"Non-finite loss at epoch {epoch}.")
            grads = net.backward(params, cache, dy)
            optimizer.step(params, grads)
            total += loss * idx.size
        train_loss = total / n
        monitor = (
            l1_l2_loss(Y_val, net.predict(params, X_val)) if has_val else train_loss
        )
        if not np.isfinite(monitor):
            raise TrainingDivergedError(f"Non-finite validation loss at epoch {epoch}.")
        curves.train_loss.append(train_loss)
        curves.val_loss.append(monitor)
        logger.debug("epoch %d: train %.5f, val %.5f", epoch, train_loss, monitor)

        if not config.early_stopping:
            curves.best_epoch = epoch
            continue
        if monitor < best_loss:
            best_loss = monitor
            best_params = _copy(params)
            curves.best_epoch = epoch
            stale = 0
        else:
            stale += 1
        if stale >= config.patience:
            break

    if config.early_stopping:
        params = best_params
    logger.info(
        "Trained %d epochs; retained epoch %d (val loss %.5f)",
        len(curves.train_loss),
        curves.best_epoch,
        curves.val_loss[curves.best_epoch - 1],
    )
    return params, curves
