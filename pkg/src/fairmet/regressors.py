"""Gap-filling regressors.

Three trainable kinds plus two baseline markers:

* OLS: least squares via ridge-stabilized normal equations.
* RANDOM_FOREST: bagged variance-reduction CART trees with per-node feature
  subsampling.
* GBDT: leaf-wise boosted trees on per-feature histograms (quantile bin
  edges, squared-error gradients, L2-regularized leaf values), the same
  family of model as LightGBM-style boosters.
* BASELINE_LINEAR_INTERP / BASELINE_DEBIAS: non-ML fills, applied directly
  to the series by ``filling.fill_gaps`` (the debias table is fitted by
  ``debias.fit_debias``).

Everything is deterministic given (data, params, seed): random draws come
from SplitMix64 streams keyed off the master seed, and tie-breaks resolve
to the lowest feature/bin index.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .errors import FairmetError
from .features import DesignMatrix
from .rng import SplitMix64, mix_seed

OLS = "OLS"
RANDOM_FOREST = "RANDOM_FOREST"
GBDT = "GBDT"
BASELINE_LINEAR_INTERP = "BASELINE_LINEAR_INTERP"
BASELINE_DEBIAS = "BASELINE_DEBIAS"

ML_MODEL_KINDS = (OLS, RANDOM_FOREST, GBDT)
BASELINE_MODEL_KINDS = (BASELINE_LINEAR_INTERP, BASELINE_DEBIAS)
MODEL_KINDS = ML_MODEL_KINDS + BASELINE_MODEL_KINDS


class SingularNormalEquations(FairmetError):
    pass


class TooFewRows(FairmetError):
    pass


class SchemaMismatch(FairmetError):
    pass


@dataclass(frozen=True)
class OlsParams:
    # small enough that exactly-linear data is recovered to < 1e-9 while
    # still guarding the normal equations against exact singularity
    ridge: float = 1e-10


@dataclass(frozen=True)
class ForestParams:
    trees: int = 100
    max_depth: int | None = 12
    min_leaf: int = 3
    mtry: int | None = None        # None -> ceil(p / 3)
    bootstrap: bool = True


@dataclass(frozen=True)
class GbdtParams:
    rounds: int = 200
    learning_rate: float = 0.1
    max_leaves: int = 31
    bins: int = 64
    l2: float = 1.0
    min_leaf: int = 1


# ---------------------------------------------------------------------------
# OLS

@dataclass(frozen=True)
class OlsFit:
    coefficients: np.ndarray     # one per feature column
    intercept: float

    @property
    def weights(self) -> np.ndarray:
        """(coefficients..., intercept), the layout quoted in reports."""
        return np.append(self.coefficients, self.intercept)


def _fit_ols(X: np.ndarray, y: np.ndarray, params: OlsParams) -> OlsFit:
    n, p = X.shape
    A = np.hstack([X, np.ones((n, 1))])
    gram = A.T @ A + params.ridge * np.eye(p + 1)
    try:
        beta = np.linalg.solve(gram, A.T @ y)
    except np.linalg.LinAlgError as exc:
        raise SingularNormalEquations(str(exc)) from None
    if not np.all(np.isfinite(beta)):
        raise SingularNormalEquations("normal equations produced non-finite weights")
    return OlsFit(coefficients=beta[:-1], intercept=float(beta[-1]))


# ---------------------------------------------------------------------------
# CART regression tree

@dataclass
class _Tree:
    """Flat node arrays; leaves have feature == -1."""

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def add_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0])
        for r in range(X.shape[0]):
            node = 0
            while self.feature[node] >= 0:
                if X[r, self.feature[node]] <= self.threshold[node]:
                    node = self.left[node]
                else:
                    node = self.right[node]
            out[r] = self.value[node]
        return out


def _best_split(X: np.ndarray, y: np.ndarray, rows: np.ndarray,
                features: list[int], min_leaf: int):
    """Highest variance-reduction split over the candidate features.
    Returns (feature, threshold) or None.  Ties keep the first candidate in
    feature order, so results are reproducible."""
    n = rows.size
    best_score = -np.inf
    best = None
    y_rows = y[rows]
    total = y_rows.sum()
    base = total * total / n
    for f in features:
        xv = X[rows, f]
        order = np.argsort(xv, kind="stable")
        xs = xv[order]
        ys = y_rows[order]
        cum = np.cumsum(ys)
        k = np.arange(1, n)
        distinct = xs[1:] > xs[:-1]
        valid = distinct & (k >= min_leaf) & (n - k >= min_leaf)
        if not valid.any():
            continue
        left_sum = cum[:-1]
        score = np.where(
            valid,
            left_sum ** 2 / k + (total - left_sum) ** 2 / (n - k),
            -np.inf,
        )
        pos = int(np.argmax(score))
        if score[pos] > best_score + 1e-12 and score[pos] > base + 1e-12:
            best_score = score[pos]
            best = (f, float((xs[pos] + xs[pos + 1]) / 2.0))
    return best


def _fit_tree(X: np.ndarray, y: np.ndarray, rng: SplitMix64,
              max_depth: int | None, min_leaf: int, mtry: int) -> _Tree:
    tree = _Tree()
    p = X.shape[1]
    root = tree.add_node()
    stack = [(root, np.arange(X.shape[0]), 0)]
    while stack:
        node, rows, depth = stack.pop()
        yv = y[rows]
        tree.value[node] = float(yv.mean())
        if (max_depth is not None and depth >= max_depth) \
                or rows.size < 2 * min_leaf or np.all(yv == yv[0]):
            continue
        candidates = list(range(p))
        if mtry < p:
            rng.shuffle(candidates)
            candidates = sorted(candidates[:mtry])
        split = _best_split(X, y, rows, candidates, min_leaf)
        if split is None:
            continue
        f, thr = split
        mask = X[rows, f] <= thr
        tree.feature[node] = f
        tree.threshold[node] = thr
        left = tree.add_node()
        right = tree.add_node()
        tree.left[node] = left
        tree.right[node] = right
        stack.append((right, rows[~mask], depth + 1))
        stack.append((left, rows[mask], depth + 1))
    return tree


@dataclass(frozen=True)
class ForestFit:
    trees: tuple[_Tree, ...]

    def tree_predictions(self, X: np.ndarray) -> np.ndarray:
        return np.stack([t.predict(X) for t in self.trees])

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.tree_predictions(X).mean(axis=0)


def _fit_forest(X: np.ndarray, y: np.ndarray, params: ForestParams,
                seed: int) -> ForestFit:
    n, p = X.shape
    mtry = params.mtry if params.mtry is not None else -(-p // 3)
    mtry = min(max(1, mtry), p)
    trees = []
    for t in range(params.trees):
        rng = SplitMix64(mix_seed(seed, f"tree:{t}"))
        if params.bootstrap:
            rows = np.array([rng.next_below(n) for _ in range(n)])
        else:
            rows = np.arange(n)
        trees.append(_fit_tree(X[rows], y[rows], rng,
                               params.max_depth, params.min_leaf, mtry))
    return ForestFit(trees=tuple(trees))


# ---------------------------------------------------------------------------
# Histogram GBDT (leaf-wise)

@dataclass
class _BoostedTree:
    feature: list[int] = field(default_factory=list)
    bin_threshold: list[int] = field(default_factory=list)   # go left if bin <= thr
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def add_node(self) -> int:
        self.feature.append(-1)
        self.bin_threshold.append(0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def predict_binned(self, binned: np.ndarray) -> np.ndarray:
        out = np.empty(binned.shape[0])
        for r in range(binned.shape[0]):
            node = 0
            while self.feature[node] >= 0:
                if binned[r, self.feature[node]] <= self.bin_threshold[node]:
                    node = self.left[node]
                else:
                    node = self.right[node]
            out[r] = self.value[node]
        return out


def _bin_edges(X: np.ndarray, bins: int) -> list[np.ndarray]:
    edges = []
    for f in range(X.shape[1]):
        qs = np.quantile(X[:, f], np.linspace(0.0, 1.0, bins + 1)[1:-1])
        edges.append(np.unique(qs))
    return edges


def _apply_bins(X: np.ndarray, edges: list[np.ndarray]) -> np.ndarray:
    binned = np.empty(X.shape, dtype=np.int32)
    for f, e in enumerate(edges):
        binned[:, f] = np.searchsorted(e, X[:, f], side="left")
    return binned


class _LeafCandidate:
    __slots__ = ("node", "rows", "gain", "feature", "bin", "order")

    def __init__(self, node, rows, gain, feature, bin_, order):
        self.node = node
        self.rows = rows
        self.gain = gain
        self.feature = feature
        self.bin = bin_
        self.order = order


def _leaf_best_split(binned, residual, rows, n_bins, l2, min_leaf):
    """Best (gain, feature, bin) for one leaf, or gain -inf when nothing
    beats keeping the leaf whole."""
    r = residual[rows]
    G = r.sum()
    H = rows.size
    parent = G * G / (H + l2)
    best_gain, best_f, best_b = -np.inf, -1, -1
    for f in range(binned.shape[1]):
        b = binned[rows, f]
        hist_sum = np.bincount(b, weights=r, minlength=n_bins)
        hist_cnt = np.bincount(b, minlength=n_bins)
        GL = np.cumsum(hist_sum)[:-1]
        HL = np.cumsum(hist_cnt)[:-1]
        GR = G - GL
        HR = H - HL
        valid = (HL >= min_leaf) & (HR >= min_leaf)
        if not valid.any():
            continue
        gain = np.where(valid,
                        GL ** 2 / (HL + l2) + GR ** 2 / (HR + l2) - parent,
                        -np.inf)
        pos = int(np.argmax(gain))
        if gain[pos] > best_gain + 1e-12:
            best_gain, best_f, best_b = float(gain[pos]), f, pos
    return best_gain, best_f, best_b


def _grow_boosted_tree(binned, residual, n_bins, params: GbdtParams):
    tree = _BoostedTree()
    root = tree.add_node()
    all_rows = np.arange(binned.shape[0])
    l2 = params.l2
    gain, f, b = _leaf_best_split(binned, residual, all_rows, n_bins, l2,
                                  params.min_leaf)
    leaves = [_LeafCandidate(root, all_rows, gain, f, b, 0)]
    next_order = 1
    n_leaves = 1
    train_pred = np.empty(binned.shape[0])
    while n_leaves < params.max_leaves:
        candidate = max(leaves, key=lambda c: (c.gain, -c.order))
        if candidate.gain <= 0:
            break
        leaves.remove(candidate)
        rows = candidate.rows
        mask = binned[rows, candidate.feature] <= candidate.bin
        left_rows, right_rows = rows[mask], rows[~mask]
        tree.feature[candidate.node] = candidate.feature
        tree.bin_threshold[candidate.node] = candidate.bin
        ln = tree.add_node()
        rn = tree.add_node()
        tree.left[candidate.node] = ln
        tree.right[candidate.node] = rn
        for node, subset in ((ln, left_rows), (rn, right_rows)):
            gain, f, b = _leaf_best_split(binned, residual, subset, n_bins,
                                          l2, params.min_leaf)
            leaves.append(_LeafCandidate(node, subset, gain, f, b, next_order))
            next_order += 1
        n_leaves += 1
    for leaf in leaves:
        value = residual[leaf.rows].sum() / (leaf.rows.size + l2)
        tree.value[leaf.node] = value
        train_pred[leaf.rows] = value
    return tree, train_pred


@dataclass(frozen=True)
class GbdtFit:
    base_score: float
    bin_edges: tuple[np.ndarray, ...]
    trees: tuple[_BoostedTree, ...]
    learning_rate: float
    training_rmse: tuple[float, ...]    # after each boosting round

    def predict(self, X: np.ndarray) -> np.ndarray:
        binned = _apply_bins(X, list(self.bin_edges))
        out = np.full(X.shape[0], self.base_score)
        for tree in self.trees:
            out += self.learning_rate * tree.predict_binned(binned)
        return out


def _fit_gbdt(X: np.ndarray, y: np.ndarray, params: GbdtParams) -> GbdtFit:
    edges = _bin_edges(X, params.bins)
    binned = _apply_bins(X, edges)
    n_bins = max(len(e) for e in edges) + 1
    base = float(y.mean())
    current = np.full(y.shape, base)
    trees = []
    losses = []
    for _ in range(params.rounds):
        residual = y - current
        tree, train_pred = _grow_boosted_tree(binned, residual, n_bins, params)
        current = current + params.learning_rate * train_pred
        trees.append(tree)
        losses.append(float(np.sqrt(np.mean((y - current) ** 2))))
    return GbdtFit(base_score=base, bin_edges=tuple(edges),
                   trees=tuple(trees), learning_rate=params.learning_rate,
                   training_rmse=tuple(losses))


# ---------------------------------------------------------------------------
# Model wrapper

@dataclass(frozen=True)
class ModelProvenance:
    fitted_at: datetime
    train_first: datetime | None
    train_last: datetime | None
    n_rows: int


@dataclass(frozen=True)
class GapFillModel:
    """A fitted fill method with provenance.  ``payload`` is the kind-specific
    fit (OlsFit, ForestFit, GbdtFit, DebiasTable, or None for the linear
    baseline)."""

    kind: str
    feature_set: str
    seed: int
    column_names: tuple[str, ...] | None
    payload: object
    provenance: ModelProvenance


def default_params(kind: str):
    return {OLS: OlsParams(), RANDOM_FOREST: ForestParams(),
            GBDT: GbdtParams()}[kind]


def fit(kind: str, X: DesignMatrix, params=None, seed: int = 0,
        feature_set: str | None = None) -> GapFillModel:
    """Fit an ML model kind on a design matrix.

    Baselines are not fitted here: BASELINE_LINEAR_INTERP needs no fit (see
    ``linear_baseline_model``) and BASELINE_DEBIAS comes from
    ``debias.fit_debias``.
    """
    if kind == BASELINE_LINEAR_INTERP:
        return linear_baseline_model(seed)
    if kind == BASELINE_DEBIAS:
        raise ValueError("BASELINE_DEBIAS models are produced by fit_debias")
    if kind not in ML_MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    if params is None:
        params = default_params(kind)

    n, p = X.X.shape
    if kind == OLS:
        if n < 2 * p:
            raise TooFewRows(f"OLS needs >= {2 * p} rows for {p} columns, got {n}")
        payload = _fit_ols(X.X, X.target, params)
    else:
        if n < 20:
            raise TooFewRows(f"{kind} needs >= 20 rows, got {n}")
        if kind == RANDOM_FOREST:
            payload = _fit_forest(X.X, X.target, params, seed)
        else:
            payload = _fit_gbdt(X.X, X.target, params)

    return GapFillModel(
        kind=kind,
        feature_set=feature_set or "",
        seed=seed,
        column_names=X.column_names,
        payload=payload,
        provenance=ModelProvenance(
            fitted_at=datetime.now(timezone.utc),
            train_first=min(X.timestamps) if X.timestamps else None,
            train_last=max(X.timestamps) if X.timestamps else None,
            n_rows=n,
        ),
    )


def linear_baseline_model(seed: int = 0) -> GapFillModel:
    return GapFillModel(
        kind=BASELINE_LINEAR_INTERP, feature_set="NONE", seed=seed,
        column_names=None, payload=None,
        provenance=ModelProvenance(datetime.now(timezone.utc), None, None, 0))


def predict(model: GapFillModel, X: DesignMatrix) -> np.ndarray:
    """Deterministic predictions in the target variable's units."""
    if model.kind in BASELINE_MODEL_KINDS:
        raise ValueError(f"{model.kind} predicts through fill_gaps, not a matrix")
    if X.column_names != model.column_names:
        raise SchemaMismatch(
            f"matrix columns {X.column_names} do not match "
            f"fit-time columns {model.column_names}")
    if model.kind == OLS:
        return X.X @ model.payload.coefficients + model.payload.intercept
    return model.payload.predict(X.X)


def model_signature(model: GapFillModel) -> str:
    """Digest of everything that determines predictions (provenance's
    wall-clock timestamp excluded), for determinism checks."""
    h = hashlib.sha256()
    h.update(model.kind.encode())
    h.update(str(model.column_names).encode())
    h.update(str(model.seed).encode())
    payload = model.payload
    if isinstance(payload, OlsFit):
        h.update(payload.weights.tobytes())
    elif isinstance(payload, ForestFit):
        for t in payload.trees:
            h.update(np.array(t.feature, dtype=np.int64).tobytes())
            h.update(np.array(t.threshold).tobytes())
            h.update(np.array(t.left, dtype=np.int64).tobytes())
            h.update(np.array(t.value).tobytes())
    elif isinstance(payload, GbdtFit):
        h.update(np.array([payload.base_score, payload.learning_rate]).tobytes())
        for e in payload.bin_edges:
            h.update(e.tobytes())
        for t in payload.trees:
            h.update(np.array(t.feature, dtype=np.int64).tobytes())
            h.update(np.array(t.bin_threshold, dtype=np.int64).tobytes())
            h.update(np.array(t.left, dtype=np.int64).tobytes())
            h.update(np.array(t.value).tobytes())
    elif payload is not None:
        h.update(repr(payload).encode())
    return h.hexdigest()
