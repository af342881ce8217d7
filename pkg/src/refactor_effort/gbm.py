"""Gradient-boosted regression trees with squared-error loss.

Each round fits a depth-limited tree to the current residuals on a seeded
row subsample; the model predicts ``base + learning_rate * sum(tree outputs)``
clamped at zero hours.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dataset import Dataset
from .errors import ConfigurationError, ContractViolation, DataError

MODEL_FORMAT = "refactor-effort-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class GbmHyperparams:
    n_trees: int = 300
    max_depth: int = 4
    learning_rate: float = 0.05
    min_samples_leaf: int = 5
    subsample: float = 0.8
    seed: int = 42
    early_stopping_rounds: Optional[int] = None

    def __post_init__(self):
        if self.n_trees < 1:
            raise ConfigurationError("n_trees must be >= 1")
        if self.max_depth < 0:
            raise ConfigurationError("max_depth must be >= 0")
        if self.min_samples_leaf < 1:
            raise ConfigurationError("min_samples_leaf must be >= 1")
        if not 0 < self.learning_rate <= 1:
            raise ConfigurationError("learning_rate must lie in (0, 1]")
        if not 0 < self.subsample <= 1:
            raise ConfigurationError("subsample must lie in (0, 1]")
        if self.early_stopping_rounds is not None and self.early_stopping_rounds < 1:
            raise ConfigurationError("early_stopping_rounds must be >= 1")


@dataclass
class RegressionTree:
    """Flat array tree. Leaves have ``feature == -1``; ``x <= threshold`` goes left."""

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def _add(self, feature=-1, threshold=0.0, value=0.0) -> int:
        self.feature.append(feature)
        self.threshold.append(threshold)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        return len(self.feature) - 1

    @property
    def depth(self) -> int:
        def walk(i):
            if self.feature[i] < 0:
                return 0
            return 1 + max(walk(self.left[i]), walk(self.right[i]))
        return walk(0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        value = np.asarray(self.value)
        node = np.zeros(len(X), dtype=int)
        rows = np.arange(len(X))
        while True:
            f = feature[node]
            active = f >= 0
            if not active.any():
                return value[node]
            go_left = X[rows[active], f[active]] <= threshold[node[active]]
            node[active] = np.where(go_left, left[node[active]], right[node[active]])


def _best_split(X: np.ndarray, r: np.ndarray, min_leaf: int):
    """Best (gain, feature, threshold) by variance reduction, or None.

    Ties in gain keep the lowest feature index, then the lowest threshold.
    """
    n = len(r)
    total = r.sum()
    base = total * total / n
    best = None
    k = np.arange(1, n)
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        csum = np.cumsum(r[order])[:-1]
        valid = (xs[:-1] < xs[1:]) & (k >= min_leaf) & (n - k >= min_leaf)
        if not valid.any():
            continue
        gain = csum ** 2 / k + (total - csum) ** 2 / (n - k) - base
        gain = np.where(valid, gain, -np.inf)
        pos = int(np.argmax(gain))
        g = float(gain[pos])
        if g > 0 and (best is None or g > best[0]):
            lo, hi = xs[pos], xs[pos + 1]
            thr = lo + (hi - lo) / 2.0
            if not lo <= thr < hi:
                thr = lo
            best = (g, j, float(thr))
    return best


def fit_tree(X: np.ndarray, r: np.ndarray, max_depth: int, min_leaf: int) -> RegressionTree:
    tree = RegressionTree()

    def grow(idx: np.ndarray, depth: int) -> int:
        node = tree._add(value=float(r[idx].mean()))
        if depth >= max_depth or len(idx) < 2 * min_leaf:
            return node
        split = _best_split(X[idx], r[idx], min_leaf)
        if split is None:
            return node
        _, j, thr = split
        mask = X[idx, j] <= thr
        tree.feature[node] = j
        tree.threshold[node] = thr
        tree.value[node] = 0.0
        tree.left[node] = grow(idx[mask], depth + 1)
        tree.right[node] = grow(idx[~mask], depth + 1)
        return node

    grow(np.arange(len(r)), 0)
    return tree


@dataclass
class GbmModel:
    base_prediction: float
    trees: list[RegressionTree]
    schema: tuple[str, ...]
    hyperparams: GbmHyperparams
    train_rmse_history: list[float] = field(default_factory=list, compare=False)
    kind = "gbm"

    def raw_predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, len(self.schema))
        out = np.zeros(len(X))
        for tree in self.trees:
            out += tree.predict(X)
        return self.base_prediction + self.hyperparams.learning_rate * out

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(self.schema):
            raise ContractViolation(f"expected {len(self.schema)} features per row, got shape {X.shape}")
        return np.maximum(self.raw_predict(X), 0.0)

    def predict_dataset(self, ds: Dataset) -> np.ndarray:
        check_schema(self.schema, ds.schema)
        return self.predict_many(ds.X)

    def to_dict(self) -> dict:
        return {
            "base_prediction": self.base_prediction,
            "hyperparams": asdict(self.hyperparams),
            "schema": list(self.schema),
            "trees": [asdict(t) for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GbmModel":
        return cls(
            base_prediction=float(d["base_prediction"]),
            trees=[RegressionTree(**t) for t in d["trees"]],
            schema=tuple(d["schema"]),
            hyperparams=GbmHyperparams(**d["hyperparams"]),
        )


def check_schema(expected: Sequence[str], actual: Sequence[str]) -> None:
    if tuple(expected) != tuple(actual):
        raise DataError(
            "feature schema mismatch\n  model:   " + ",".join(expected)
            + "\n  dataset: " + ",".join(actual)
        )


def _rmse(pred: np.ndarray, y: np.ndarray) -> float:
    return math.sqrt(float(np.mean((pred - y) ** 2)))


def fit(train: Dataset, valid: Optional[Dataset] = None,
        hp: GbmHyperparams = GbmHyperparams()) -> GbmModel:
    if len(train) == 0:
        raise DataError("cannot fit on an empty training set")
    if valid is not None:
        check_schema(train.schema, valid.schema)
    X, y = train.X, train.y
    n = len(y)
    rng = np.random.default_rng(hp.seed)
    base = float(y.mean())
    current = np.full(n, base)
    model = GbmModel(base, [], tuple(train.schema), hp)
    n_sub = max(1, int(math.floor(hp.subsample * n)))

    if valid is not None and len(valid):
        Xv, yv = valid.X, valid.y
        valid_pred = np.full(len(yv), base)
    else:
        Xv = None
    best_score, best_len, stale = math.inf, 0, 0

    for _ in range(hp.n_trees):
        resid = y - current
        if n_sub < n:
            idx = np.sort(rng.choice(n, size=n_sub, replace=False))
        else:
            idx = np.arange(n)
        tree = fit_tree(X[idx], resid[idx], hp.max_depth, hp.min_samples_leaf)
        model.trees.append(tree)
        current = current + hp.learning_rate * tree.predict(X)
        model.train_rmse_history.append(_rmse(current, y))
        if Xv is not None and hp.early_stopping_rounds:
            valid_pred = valid_pred + hp.learning_rate * tree.predict(Xv)
            score = _rmse(np.maximum(valid_pred, 0.0), yv)
            if score < best_score:
                best_score, best_len, stale = score, len(model.trees), 0
            else:
                stale += 1
                if stale >= hp.early_stopping_rounds:
                    break
    if Xv is not None and hp.early_stopping_rounds and best_len:
        del model.trees[best_len:]
        del model.train_rmse_history[best_len:]
    return model


def predict(model, x: Sequence[float]) -> float:
    """Person-hours for one feature vector (any estimator with ``predict_many``)."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != len(model.schema):
        raise ContractViolation(f"expected {len(model.schema)} features, got {x.size}")
    return float(model.predict_many(x.reshape(1, -1))[0])


def save_model(model, path) -> None:
    """Write any estimator (GBM or baseline) as versioned, sorted JSON."""
    doc = {"format": MODEL_FORMAT, "version": MODEL_VERSION, "kind": model.kind}
    doc.update(model.to_dict())
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc, sort_keys=True, indent=1, allow_nan=False))
        fh.write("\n")


def load_model(path):
    from . import baselines

    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read model file {path}: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise DataError(f"{path} is not a model file")
    if doc.get("version") != MODEL_VERSION:
        raise DataError(f"model version {doc.get('version')!r} not supported (expected {MODEL_VERSION})")
    kinds = {"gbm": GbmModel, **baselines.MODEL_KINDS}
    try:
        return kinds[doc["kind"]].from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"corrupted model file {path}: {exc!r}") from None
