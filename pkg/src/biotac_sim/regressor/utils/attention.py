from typing import Any, Dict, Optional, Tuple

import numpy as np

from .layers import (
    dense_backward,
    dense_flops,
    dense_forward,
    dropout_backward,
    dropout_forward,
    gelu_backward,
    gelu_forward,
    init_dense,
    layer_norm_backward,
    layer_norm_forward,
    softmax,
)

Params = Dict[str, np.ndarray]

_PROJECTIONS = ("q", "k", "v", "o")

# -------------------- #
# Multi-head attention #
# -------------------- #


def init_attention(rng: np.random.Generator, prefix: str, embed_dim: int) -> Params:
    params = {}
    for name in _PROJECTIONS:
        W, b = init_dense(rng, embed_dim, embed_dim)
        params[f"{prefix}.W{name}"] = W
        params[f"{prefix}.b{name}"] = b
    return params


def _split_heads(x: np.ndarray, n_heads: int) -> np.ndarray:
    n, t, e = x.shape
    return x.reshape(n, t, n_heads, e // n_heads).transpose(0, 2, 1, 3)


def _merge_heads(x: np.ndarray) -> np.ndarray:
    n, h, t, d = x.shape
    return x.transpose(0, 2, 1, 3).reshape(n, t, h * d)


def attention_forward(
    x: np.ndarray, params: Params, prefix: str, n_heads: int
) -> Tuple[np.ndarray, Dict[str, Any]]:
    """
    Scaled dot-product self-attention over ``x`` of shape ``(n, tokens, embed_dim)``.

    Returns:
        Tuple[np.ndarray, Dict[str, Any]]: Output of the same shape and the cache.
    """
    p = {k: params[f"{prefix}.{k}"] for k in ("Wq", "bq", "Wk", "bk", "Wv", "bv", "Wo", "bo")}
    q = _split_heads(dense_forward(x, p["Wq"], p["bq"]), n_heads)
    k = _split_heads(dense_forward(x, p["Wk"], p["bk"]), n_heads)
    v = _split_heads(dense_forward(x, p["Wv"], p["bv"]), n_heads)
    scale = 1.0 / np.sqrt(q.shape[-1])
    attn = softmax(q @ k.transpose(0, 1, 3, 2) * scale, axis=-1)
    ctx = _merge_heads(attn @ v)
    out = dense_forward(ctx, p["Wo"], p["bo"])
    cache = {"x": x, "q": q, "k": k, "v": v, "attn": attn, "ctx": ctx, "scale": scale}
    return out, cache


def attention_backward(
    dout: np.ndarray, cache: Dict[str, Any], params: Params, prefix: str, n_heads: int
) -> Tuple[np.ndarray, Params]:
    """Gradients with respect to the input and the projection parameters."""
    x, q, k, v, attn, scale = (cache[key] for key in ("x", "q", "k", "v", "attn", "scale"))
    grads: Params = {}
    dctx, grads[f"{prefix}.Wo"], grads[f"{prefix}.bo"] = dense_backward(
        dout, cache["ctx"], params[f"{prefix}.Wo"]
    )
    dctx = _split_heads(dctx, n_heads)
    dattn = dctx @ v.transpose(0, 1, 3, 2)
    dv = attn.transpose(0, 1, 3, 2) @ dctx
    dscores = attn * (dattn - (dattn * attn).sum(axis=-1, keepdims=True))
    dq = dscores @ k * scale
    dk = dscores.transpose(0, 1, 3, 2) @ q * scale

    dx = np.zeros_like(x)
    for name, d in (("q", dq), ("k", dk), ("v", dv)):
        dxi, grads[f"{prefix}.W{name}"], grads[f"{prefix}.b{name}"] = dense_backward(
            _merge_heads(d), x, params[f"{prefix}.W{name}"]
        )
        dx += dxi
    return dx, grads


def attention_flops(tokens: int, embed_dim: int, n_heads: int) -> int:
    """
    FLOPs of one self-attention call.

    Four projections of every token (dense accounting), ``QK^T`` and ``AV`` at
    ``2 * tokens^2 * embed_dim`` each, the ``1/sqrt(d)`` scaling at one FLOP per score
    and the softmax at three FLOPs per score (exp, sum, divide).
    """
    projections = 4 * tokens * dense_flops(embed_dim, embed_dim)
    scores = 2 * tokens * tokens * embed_dim
    weighted = 2 * tokens * tokens * embed_dim
    softmax_and_scale = 4 * n_heads * tokens * tokens
    return projections + scores + weighted + softmax_and_scale


# ------------- #
# Encoder block #
# ------------- #


def init_block(
    rng: np.random.Generator, prefix: str, embed_dim: int, hidden_dim: int
) -> Params:
    params = {
        f"{prefix}.ln1.g": np.ones(embed_dim),
        f"{prefix}.ln1.b": np.zeros(embed_dim),
        f"{prefix}.ln2.g": np.ones(embed_dim),
        f"{prefix}.ln2.b": np.zeros(embed_dim),
    }
    params.update(init_attention(rng, f"{prefix}.attn", embed_dim))
    W1, b1 = init_dense(rng, embed_dim, hidden_dim)
    W2, b2 = init_dense(rng, hidden_dim, embed_dim)
    params.update(
        {f"{prefix}.mlp.W1": W1, f"{prefix}.mlp.b1": b1, f"{prefix}.mlp.W2": W2, f"{prefix}.mlp.b2": b2}
    )
    return params


def block_forward(
    x: np.ndarray,
    params: Params,
    prefix: str,
    n_heads: int,
    dropout_rate: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, Dict[str, Any]]:
    """Pre-norm block: ``x + Drop(MHA(LN(x)))`` then ``h + Drop(MLP(LN(h)))``."""
    a_in, ln1 = layer_norm_forward(x, params[f"{prefix}.ln1.g"], params[f"{prefix}.ln1.b"])
    a, attn = attention_forward(a_in, params, f"{prefix}.attn", n_heads)
    a, mask1 = dropout_forward(a, dropout_rate, training, rng)
    h = x + a

    m_in, ln2 = layer_norm_forward(h, params[f"{prefix}.ln2.g"], params[f"{prefix}.ln2.b"])
    pre = dense_forward(m_in, params[f"{prefix}.mlp.W1"], params[f"{prefix}.mlp.b1"])
    act = gelu_forward(pre)
    m = dense_forward(act, params[f"{prefix}.mlp.W2"], params[f"{prefix}.mlp.b2"])
    m, mask2 = dropout_forward(m, dropout_rate, training, rng)
    cache = {
        "ln1": ln1,
        "attn": attn,
        "mask1": mask1,
        "ln2": ln2,
        "m_in": m_in,
        "pre": pre,
        "act": act,
        "mask2": mask2,
    }
    return h + m, cache


def block_backward(
    dy: np.ndarray, cache: Dict[str, Any], params: Params, prefix: str, n_heads: int
) -> Tuple[np.ndarray, Params]:
    grads: Params = {}
    dm = dropout_backward(dy, cache["mask2"])
    dact, grads[f"{prefix}.mlp.W2"], grads[f"{prefix}.mlp.b2"] = dense_backward(
        dm, cache["act"], params[f"{prefix}.mlp.W2"]
    )
    dpre = gelu_backward(cache["pre"], dact)
    dm_in, grads[f"{prefix}.mlp.W1"], grads[f"{prefix}.mlp.b1"] = dense_backward(
        dpre, cache["m_in"], params[f"{prefix}.mlp.W1"]
    )
    dh_ln, grads[f"{prefix}.ln2.g"], grads[f"{prefix}.ln2.b"] = layer_norm_backward(
        dm_in, cache["ln2"], params[f"{prefix}.ln2.g"]
    )
    dh = dy + dh_ln

    da = dropout_backward(dh, cache["mask1"])
    da_in, attn_grads = attention_backward(da, cache["attn"], params, f"{prefix}.attn", n_heads)
    grads.update(attn_grads)
    dx_ln, grads[f"{prefix}.ln1.g"], grads[f"{prefix}.ln1.b"] = layer_norm_backward(
        da_in, cache["ln1"], params[f"{prefix}.ln1.g"]
    )
    return dh + dx_ln, grads


def block_flops(tokens: int, embed_dim: int, hidden_dim: int, n_heads: int) -> int:
    """
    FLOPs of one encoder block.

    Two layer norms at five FLOPs per element, attention as in ``attention_flops``,
    the MLP with dense accounting and GELU at eight FLOPs per element, and the two
    residual additions at one FLOP per element.
    """
    norms = 2 * 5 * tokens * embed_dim
    mlp = tokens * (dense_flops(embed_dim, hidden_dim) + dense_flops(hidden_dim, embed_dim))
    gelu = 8 * tokens * hidden_dim
    residual = 2 * tokens * embed_dim
    return norms + attention_flops(tokens, embed_dim, n_heads) + mlp + gelu + residual
