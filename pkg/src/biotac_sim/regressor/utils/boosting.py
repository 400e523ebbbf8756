import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ...schema import FitError, GbtParams

logger = logging.getLogger(__name__)

LEAF = -1

# ----- #
# Trees #
# ----- #


@dataclass
class Tree:
    """
    Regression tree stored as flat node arrays.

    Node ``0`` is the root. Internal nodes send ``x[feature] < threshold`` to ``left``
    and everything else to ``right``. Leaves have ``feature == -1`` and point to
    themselves, so a walk of ``max_depth`` steps always ends on a leaf.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def node_count(self) -> int:
        return int(self.feature.size)

    @property
    def depth(self) -> int:
        depths = np.zeros(self.node_count, dtype=np.int64)
        for i in range(self.node_count):
            if self.feature[i] != LEAF:
                depths[self.left[i]] = depths[i] + 1
                depths[self.right[i]] = depths[i] + 1
        return int(depths.max())

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            feat = self.feature[node]
            internal = feat != LEAF
            if not internal.any():
                return self.value[node]
            go_left = X[rows, np.where(internal, feat, 0)] < self.threshold[node]
            node = np.where(
                internal, np.where(go_left, self.left[node], self.right[node]), node
            )

    def to_dict(self, node: int = 0) -> Dict[str, Any]:
        """Nested-node representation rooted at ``node``."""
        if self.feature[node] == LEAF:
            return {"leaf": float(self.value[node])}
        return {
            "feature": int(self.feature[node]),
            "threshold": float(self.threshold[node]),
            "left": self.to_dict(int(self.left[node])),
            "right": self.to_dict(int(self.right[node])),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Tree":
        builder = _TreeBuilder()

        def visit(d: Dict[str, Any]) -> int:
            node = builder.add()
            if "leaf" in d:
                builder.make_leaf(node, float(d["leaf"]))
            else:
                left, right = visit(d["left"]), visit(d["right"])
                builder.make_split(node, int(d["feature"]), float(d["threshold"]), left, right)
            return node

        visit(data)
        return builder.build()


class _TreeBuilder:
    def __init__(self):
        self.feature: List[int] = []
        self.threshold: List[float] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.value: List[float] = []

    def add(self) -> int:
        node = len(self.feature)
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(node)
        self.right.append(node)
        self.value.append(0.0)
        return node

    def make_leaf(self, node: int, value: float) -> None:
        self.value[node] = value

    def make_split(self, node: int, feature: int, threshold: float, left: int, right: int):
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.left[node] = left
        self.right[node] = right

    def build(self) -> Tree:
        return Tree(
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            value=np.asarray(self.value, dtype=np.float64),
        )


@dataclass
class ChannelEnsemble:
    """Boosted trees of one output channel: ``base_score + eta * sum(tree leaves)``."""

    base_score: float
    eta: float
    trees: List[Tree] = field(default_factory=list)

    @property
    def node_count(self) -> int:
        return sum(t.node_count for t in self.trees)

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.full(X.shape[0], self.base_score, dtype=np.float64)
        for tree in self.trees:
            out += self.eta * tree.predict(X)
        return out


# ---------- #
# Split find #
# ---------- #


@dataclass
class Split:
    feature: int
    threshold: float
    gain: float
    left_rows: np.ndarray
    right_rows: np.ndarray


def best_split(
    X: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    rows: np.ndarray,
    features: np.ndarray,
    params: GbtParams,
) -> Optional[Split]:
    """
    Exact greedy split search over ``features`` for the samples ``rows``.

    Candidate thresholds are the midpoints between consecutive distinct sorted values.
    The gain is ``0.5 * (GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l))``; a split needs
    ``gain > gamma`` and a hessian sum of at least ``min_child_weight`` on both sides.
    Equal gains resolve to the lowest feature index, then the lowest threshold.

    Returns:
        Optional[Split]: The best admissible split, or ``None``.
    """
    m = rows.size
    if m < 2 or features.size == 0:
        return None
    Xn = X[np.ix_(rows, features)]
    order = np.argsort(Xn, axis=0, kind="stable")
    xs = np.take_along_axis(Xn, order, axis=0)
    gs = g[rows][order]
    hs = h[rows][order]
    GL = np.cumsum(gs, axis=0)[:-1]
    HL = np.cumsum(hs, axis=0)[:-1]
    G = gs.sum(axis=0)
    H = hs.sum(axis=0)
    GR = G - GL
    HR = H - HL
    lam = params.reg_lambda
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = 0.5 * (GL**2 / (HL + lam) + GR**2 / (HR + lam) - G**2 / (H + lam))
    admissible = (
        (xs[1:] > xs[:-1])
        & (HL >= params.min_child_weight)
        & (HR >= params.min_child_weight)
        & np.isfinite(gain)
    )
    gain = np.where(admissible, gain, -np.inf)
    # column-major flattening: lowest feature first, then lowest threshold
    flat = int(np.argmax(gain.ravel(order="F")))
    pos, col = flat % (m - 1), flat // (m - 1)
    best_gain = gain[pos, col]
    if not best_gain > params.gamma:
        return None
    threshold = 0.5 * (xs[pos, col] + xs[pos + 1, col])
    feature = int(features[col])
    goes_left = X[rows, feature] < threshold
    return Split(
        feature=feature,
        threshold=float(threshold),
        gain=float(best_gain),
        left_rows=rows[goes_left],
        right_rows=rows[~goes_left],
    )


def _sample_columns(rng: np.random.Generator, columns: np.ndarray, frac: float) -> np.ndarray:
    if frac >= 1.0:
        return columns
    k = max(1, int(columns.size * frac))
    return np.sort(rng.choice(columns, size=k, replace=False))


def _leaf_value(
    rows: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    residual: np.ndarray,
    params: GbtParams,
) -> float:
    if params.objective == "mae":
        # absolute error: refresh the leaf to the median residual
        value = float(np.median(residual[rows]))
    else:
        value = float(-g[rows].sum() / (h[rows].sum() + params.reg_lambda))
    if params.max_delta_step > 0:
        value = float(np.clip(value, -params.max_delta_step, params.max_delta_step))
    return value


def grow_tree(
    X: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    residual: np.ndarray,
    rows: np.ndarray,
    params: GbtParams,
    rng: np.random.Generator,
) -> Tree:
    """Grow one tree level by level on the sampled ``rows``."""
    builder = _TreeBuilder()
    tree_cols = _sample_columns(rng, np.arange(X.shape[1]), params.colsample_bytree)
    frontier: List[Tuple[int, np.ndarray]] = [(builder.add(), rows)]
    for depth in range(params.max_depth + 1):
        if not frontier:
            break
        level_cols = _sample_columns(rng, tree_cols, params.colsample_bylevel)
        next_frontier = []
        for node, node_rows in frontier:
            split = None
            if depth < params.max_depth:
                node_cols = _sample_columns(rng, level_cols, params.colsample_bynode)
                split = best_split(X, g, h, node_rows, node_cols, params)
            if split is None:
                builder.make_leaf(node, _leaf_value(node_rows, g, h, residual, params))
                continue
            left, right = builder.add(), builder.add()
            builder.make_split(node, split.feature, split.threshold, left, right)
            next_frontier += [(left, split.left_rows), (right, split.right_rows)]
        frontier = next_frontier
    return builder.build()


def fit_channel(X: np.ndarray, y: np.ndarray, params: GbtParams, seed: int = 0) -> ChannelEnsemble:
    """
    Boost ``params.n_estimators`` trees on one target column.

    With the ``"mae"`` objective the gradient is ``sign(pred - y)``, the hessian is 1,
    the base score is the median of ``y`` and every leaf is set to the median residual
    of its samples. With ``"squared"`` the gradient is ``pred - y`` and leaves are
    ``-G / (H + reg_lambda)`` around the mean. Leaves are capped at
    ``max_delta_step`` when it is positive.

    Args:
        X: Feature matrix ``(n, d)``.
        y: Target column ``(n,)``.
        params: Hyperparameters.
        seed: Seed of the row and column sampler.

    Returns:
        ChannelEnsemble: The fitted ensemble.

    Raises:
        FitError: If ``X`` is empty or its length differs from ``y``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise FitError("Cannot fit on an empty feature matrix.")
    if X.shape[0] != y.shape[0]:
        raise FitError(f"X has {X.shape[0]} rows but y has {y.shape[0]}.")
    rng = np.random.default_rng(seed)
    n = X.shape[0]
    base = float(np.median(y) if params.objective == "mae" else np.mean(y))
    ensemble = ChannelEnsemble(base_score=base, eta=params.eta)
    pred = np.full(n, base)
    all_rows = np.arange(n)
    h = np.ones(n)
    for _ in range(params.n_estimators):
        residual = y - pred
        g = np.sign(-residual) if params.objective == "mae" else -residual
        rows = all_rows
        if params.subsample < 1.0:
            k = max(1, int(round(params.subsample * n)))
            rows = np.sort(rng.choice(n, size=k, replace=False))
        tree = grow_tree(X, g, h, residual, rows, params, rng)
        ensemble.trees.append(tree)
        pred += params.eta * tree.predict(X)
    return ensemble


# -------------- #
# Packed predict #
# -------------- #


@dataclass
class PackedForest:
    """All trees of all channels in shared flat arrays for vectorised inference."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    roots: np.ndarray
    channel_of_tree: np.ndarray
    base_scores: np.ndarray
    eta: np.ndarray
    max_depth: int
    weights: np.ndarray = field(init=False)

    def __post_init__(self):
        # tree -> channel one-hot scaled by the channel learning rate
        self.weights = np.zeros((self.roots.size, self.base_scores.size))
        self.weights[np.arange(self.roots.size), self.channel_of_tree] = self.eta[
            self.channel_of_tree
        ]

    @classmethod
    def pack(cls, ensembles: Sequence[ChannelEnsemble]) -> "PackedForest":
        parts: Dict[str, List[np.ndarray]] = {k: [] for k in ("f", "t", "l", "r", "v")}
        roots, owner = [], []
        offset = 0
        depth = 0
        for c, ens in enumerate(ensembles):
            for tree in ens.trees:
                parts["f"].append(tree.feature)
                parts["t"].append(tree.threshold)
                parts["l"].append(tree.left + offset)
                parts["r"].append(tree.right + offset)
                parts["v"].append(tree.value)
                roots.append(offset)
                owner.append(c)
                offset += tree.node_count
                depth = max(depth, tree.depth)

        def cat(key, dtype):
            return np.concatenate(parts[key]) if parts[key] else np.zeros(0, dtype=dtype)

        return cls(
            feature=cat("f", np.int64),
            threshold=cat("t", np.float64),
            left=cat("l", np.int64),
            right=cat("r", np.int64),
            value=cat("v", np.float64),
            roots=np.asarray(roots, dtype=np.int64),
            channel_of_tree=np.asarray(owner, dtype=np.int64),
            base_scores=np.asarray([e.base_score for e in ensembles], dtype=np.float64),
            eta=np.asarray([e.eta for e in ensembles], dtype=np.float64),
            max_depth=depth,
        )

    def predict(self, X: np.ndarray) -> np.ndarray:
        n = X.shape[0]
        out = np.tile(self.base_scores, (n, 1))
        if self.roots.size == 0:
            return out
        node = np.broadcast_to(self.roots, (n, self.roots.size)).copy()
        rows = np.arange(n)[:, None]
        for _ in range(self.max_depth):
            feat = self.feature[node]
            internal = feat >= 0
            go_left = X[rows, np.where(internal, feat, 0)] < self.threshold[node]
            node = np.where(go_left, self.left[node], self.right[node])
        return out + self.value[node] @ self.weights
