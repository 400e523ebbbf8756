from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ...features.windows import token_gather
from ...schema import FeedForwardSpec, NetworkBSpec, TransformerSpec, WindowSpec
from ...schema.constants import TOKEN_WIDTH
from .attention import block_backward, block_flops, block_forward, init_block
from .layers import (
    activation_backward,
    activation_forward,
    dense_backward,
    dense_flops,
    dense_forward,
    init_dense,
    layer_norm_backward,
    layer_norm_forward,
)

Params = Dict[str, np.ndarray]

# leakyrelu slope inside Network B
_SLOPE = 0.01


class Network(ABC):
    """
    A differentiable architecture with parameters kept outside the object.

    ``forward`` and ``backward`` are pure: the same parameters and input always give
    the same result in eval mode, so one network object can serve many threads.
    """

    input_size: int
    output_dim: int

    @abstractmethod
    def init_params(self, rng: np.random.Generator) -> Params:
        """Freshly initialised parameters, in a fixed key order."""

    @abstractmethod
    def forward(
        self,
        params: Params,
        x: np.ndarray,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> Tuple[np.ndarray, Any]:
        """Outputs of shape ``(n, output_dim)`` and the cache for ``backward``."""

    @abstractmethod
    def backward(self, params: Params, cache: Any, dy: np.ndarray) -> Params:
        """Gradients of every parameter given ``dL/dy``."""

    @abstractmethod
    def flops(self) -> int:
        """FLOPs of one forward pass on a single input vector."""

    def param_count(self, params: Params) -> int:
        return int(sum(p.size for p in params.values()))

    def predict(self, params: Params, x: np.ndarray, batch_size: int = 4096) -> np.ndarray:
        """Eval-mode outputs, computed in fixed-size batches."""
        x = np.atleast_2d(x)
        if x.shape[0] <= batch_size:
            return self.forward(params, x)[0]
        return np.concatenate(
            [self.forward(params, x[i : i + batch_size])[0] for i in range(0, len(x), batch_size)]
        )


# --------- #
# MLP stack #
# --------- #


def _init_stack(
    rng: np.random.Generator, prefix: str, fan_in: int, widths: Sequence[int]
) -> Params:
    params = {}
    for i, width in enumerate(widths):
        W, b = init_dense(rng, fan_in, width)
        params[f"{prefix}.{i}.W"] = W
        params[f"{prefix}.{i}.b"] = b
        fan_in = width
    return params


def _stack_forward(
    params: Params,
    prefix: str,
    x: np.ndarray,
    activations: Sequence[str],
    negative_slope: float,
) -> Tuple[np.ndarray, List[Tuple[np.ndarray, np.ndarray, np.ndarray]]]:
    cache = []
    h = x
    for i, act in enumerate(activations):
        pre = dense_forward(h, params[f"{prefix}.{i}.W"], params[f"{prefix}.{i}.b"])
        post = activation_forward(act, pre, negative_slope)
        cache.append((h, pre, post))
        h = post
    return h, cache


def _stack_backward(
    params: Params,
    prefix: str,
    cache: List[Tuple[np.ndarray, np.ndarray, np.ndarray]],
    activations: Sequence[str],
    negative_slope: float,
    dh: np.ndarray,
    grads: Params,
) -> np.ndarray:
    for i in reversed(range(len(activations))):
        h_in, pre, post = cache[i]
        dpre = activation_backward(activations[i], pre, post, dh, negative_slope)
        dh, grads[f"{prefix}.{i}.W"], grads[f"{prefix}.{i}.b"] = dense_backward(
            dpre, h_in, params[f"{prefix}.{i}.W"]
        )
    return dh


def _stack_flops(fan_in: int, widths: Sequence[int]) -> int:
    total = 0
    for width in widths:
        total += dense_flops(fan_in, width)
        fan_in = width
    return total


# ------------ #
# Feed-forward #
# ------------ #


class FeedForwardNet(Network):
    """Dense hidden layers with per-layer activations and a linear head.

    Activations are not counted in ``flops``; only the dense layers are.
    """

    def __init__(self, input_size: int, spec: FeedForwardSpec, output_dim: int):
        self.input_size = input_size
        self.spec = spec
        self.output_dim = output_dim

    def init_params(self, rng: np.random.Generator) -> Params:
        params = _init_stack(rng, "hidden", self.input_size, self.spec.widths)
        W, b = init_dense(rng, self.spec.widths[-1], self.output_dim)
        params.update({"head.W": W, "head.b": b})
        return params

    def forward(self, params, x, training=False, rng=None):
        h, stack = _stack_forward(
            params, "hidden", x, self.spec.activations, self.spec.negative_slope
        )
        return dense_forward(h, params["head.W"], params["head.b"]), (h, stack)

    def backward(self, params, cache, dy):
        h, stack = cache
        grads: Params = {}
        dh, grads["head.W"], grads["head.b"] = dense_backward(dy, h, params["head.W"])
        _stack_backward(
            params, "hidden", stack, self.spec.activations, self.spec.negative_slope, dh, grads
        )
        return grads

    def flops(self) -> int:
        return _stack_flops(self.input_size, list(self.spec.widths) + [self.output_dim])


# --------- #
# Network B #
# --------- #


class NetworkBNet(Network):
    """
    Three input columns (position, force, temperature) merged into a dense trunk.

    The input vector is split as ``[positions | forces | temperature]`` following the
    window feature order. Activations are not counted in ``flops``.
    """

    _COLUMNS = ("position", "force", "temperature")

    def __init__(
        self, window: WindowSpec, spec: NetworkBSpec, output_dim: int
    ):
        if not window.include_temperature:
            raise ValueError("Network B needs a window that includes the temperature.")
        self.window = window
        self.spec = spec
        self.output_dim = output_dim
        n_pos = 3 * len(window.position_offsets)
        n_force = 3 * len(window.force_offsets)
        self.slices = {
            "position": slice(0, n_pos),
            "force": slice(n_pos, n_pos + n_force),
            "temperature": slice(n_pos + n_force, n_pos + n_force + 1),
        }
        self.input_size = window.input_size

    def _widths(self, column: str) -> List[int]:
        return list(getattr(self.spec, f"{column}_widths"))

    def _acts(self, n: int) -> List[str]:
        return [self.spec.activation] * n

    def init_params(self, rng: np.random.Generator) -> Params:
        params: Params = {}
        for col in self._COLUMNS:
            width = self.slices[col].stop - self.slices[col].start
            params.update(_init_stack(rng, col, width, self._widths(col)))
        merged = sum(self._widths(col)[-1] for col in self._COLUMNS)
        params.update(_init_stack(rng, "trunk", merged, self.spec.trunk_widths))
        W, b = init_dense(rng, self.spec.trunk_widths[-1], self.output_dim)
        params.update({"head.W": W, "head.b": b})
        return params

    def forward(self, params, x, training=False, rng=None):
        outs, caches = [], {}
        for col in self._COLUMNS:
            h, caches[col] = _stack_forward(
                params, col, x[:, self.slices[col]], self._acts(len(self._widths(col))), _SLOPE
            )
            outs.append(h)
        merged = np.concatenate(outs, axis=1)
        h, caches["trunk"] = _stack_forward(
            params, "trunk", merged, self._acts(len(self.spec.trunk_widths)), _SLOPE
        )
        caches["h"] = h
        return dense_forward(h, params["head.W"], params["head.b"]), caches

    def backward(self, params, cache, dy):
        grads: Params = {}
        dh, grads["head.W"], grads["head.b"] = dense_backward(dy, cache["h"], params["head.W"])
        dmerged = _stack_backward(
            params,
            "trunk",
            cache["trunk"],
            self._acts(len(self.spec.trunk_widths)),
            _SLOPE,
            dh,
            grads,
        )
        start = 0
        for col in self._COLUMNS:
            width = self._widths(col)[-1]
            _stack_backward(
                params,
                col,
                cache[col],
                self._acts(len(self._widths(col))),
                _SLOPE,
                dmerged[:, start : start + width],
                grads,
            )
            start += width
        return grads

    def flops(self) -> int:
        total = 0
        for col in self._COLUMNS:
            width = self.slices[col].stop - self.slices[col].start
            total += _stack_flops(width, self._widths(col))
        merged = sum(self._widths(col)[-1] for col in self._COLUMNS)
        return total + _stack_flops(merged, list(self.spec.trunk_widths) + [self.output_dim])


# ----------- #
# Transformer #
# ----------- #


class TransformerNet(Network):
    """
    Encoder-only transformer regressing from a learned regression token.

    Every timestep of the window becomes a token ``[x, y, z, Fx, Fy, Fz]``; tokens are
    embedded by a shared dense layer, a learned regression token is prepended, learned
    position embeddings are added, ``n_layers`` pre-norm blocks follow, and a final
    layer norm plus dense head read the regression token.
    """

    def __init__(self, window: WindowSpec, spec: TransformerSpec, output_dim: int):
        if window.include_temperature:
            raise ValueError("The transformer does not take a temperature input.")
        self.window = window
        self.spec = spec
        self.output_dim = output_dim
        self.input_size = window.input_size
        self.n_steps = len(window.timesteps)
        self.gather = token_gather(window)

    def init_params(self, rng: np.random.Generator) -> Params:
        E = self.spec.embed_dim
        W, b = init_dense(rng, TOKEN_WIDTH, E)
        params: Params = {
            "embed.W": W,
            "embed.b": b,
            "reg_token": rng.normal(0.0, 0.02, size=E),
            "pos": rng.normal(0.0, 0.02, size=(self.n_steps + 1, E)),
        }
        for layer in range(self.spec.n_layers):
            params.update(init_block(rng, f"blocks.{layer}", E, self.spec.hidden_dim))
        params["final_ln.g"] = np.ones(E)
        params["final_ln.b"] = np.zeros(E)
        W, b = init_dense(rng, E, self.output_dim)
        params.update({"head.W": W, "head.b": b})
        return params

    def tokens(self, x: np.ndarray) -> np.ndarray:
        padded = np.concatenate([x, np.zeros((x.shape[0], 1))], axis=1)
        return padded[:, self.gather].reshape(x.shape[0], self.n_steps, TOKEN_WIDTH)

    def forward(self, params, x, training=False, rng=None):
        tok = self.tokens(x)
        n = tok.shape[0]
        emb = dense_forward(tok, params["embed.W"], params["embed.b"])
        reg = np.broadcast_to(params["reg_token"], (n, 1, self.spec.embed_dim))
        z = np.concatenate([reg, emb], axis=1) + params["pos"][None]
        blocks = []
        for layer in range(self.spec.n_layers):
            z, cache = block_forward(
                z,
                params,
                f"blocks.{layer}",
                self.spec.n_heads,
                self.spec.dropout_rate,
                training,
                rng,
            )
            blocks.append(cache)
        out_ln, ln_cache = layer_norm_forward(z[:, 0, :], params["final_ln.g"], params["final_ln.b"])
        y = dense_forward(out_ln, params["head.W"], params["head.b"])
        return y, {"tok": tok, "blocks": blocks, "ln": ln_cache, "out_ln": out_ln, "T": z.shape[1]}

    def backward(self, params, cache, dy):
        grads: Params = {}
        dout_ln, grads["head.W"], grads["head.b"] = dense_backward(
            dy, cache["out_ln"], params["head.W"]
        )
        dreg_out, grads["final_ln.g"], grads["final_ln.b"] = layer_norm_backward(
            dout_ln, cache["ln"], params["final_ln.g"]
        )
        n = dy.shape[0]
        dz = np.zeros((n, cache["T"], self.spec.embed_dim))
        dz[:, 0, :] = dreg_out
        for layer in reversed(range(self.spec.n_layers)):
            dz, block_grads = block_backward(
                dz, cache["blocks"][layer], params, f"blocks.{layer}", self.spec.n_heads
            )
            grads.update(block_grads)
        grads["pos"] = dz.sum(axis=0)
        grads["reg_token"] = dz[:, 0, :].sum(axis=0)
        _, grads["embed.W"], grads["embed.b"] = dense_backward(
            dz[:, 1:, :], cache["tok"], params["embed.W"]
        )
        return grads

    def flops(self) -> int:
        """
        Token embedding (dense accounting per timestep), one FLOP per element for the
        position-embedding add, every encoder block, the final layer norm (five FLOPs
        per element) on the regression token and the dense head.
        """
        E, T = self.spec.embed_dim, self.n_steps + 1
        total = self.n_steps * dense_flops(TOKEN_WIDTH, E) + T * E
        total += self.spec.n_layers * block_flops(T, E, self.spec.hidden_dim, self.spec.n_heads)
        return total + 5 * E + dense_flops(E, self.output_dim)
