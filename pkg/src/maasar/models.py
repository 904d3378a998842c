"""Trainable sentence classifiers and their persistence format.

Two learners, both self-contained and deterministic under a fixed seed:

* ``LinearMarginClassifier`` -- L2-regularized hinge loss minimized by
  full-batch subgradient descent, followed by a symmetric one-parameter
  sigmoid calibration fitted on the training margins (so a zero margin
  always maps to probability 0.5).
* ``TreeEnsembleClassifier`` -- bagged decision trees grown to purity with
  impurity (gini) splits; the predicted probability is exactly the fraction
  of trees voting for the positive class.

Model files are versioned JSON carrying the kind, feature schema version,
seed and all fitted state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .base import ParamsMixin, check_binary_labels, check_feature_matrix
from .features import FEATURE_SCHEMA_VERSION, NUM_FEATURES

MODEL_FORMAT_VERSION = 1

MODEL_KINDS = ("linear_margin", "tree_ensemble")

# CLI-facing aliases for the two learners.
KIND_ALIASES = {"svm": "linear_margin", "rf": "tree_ensemble"}


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


class LinearMarginClassifier(ParamsMixin):
    """Linear max-margin classifier trained by subgradient descent."""

    def __init__(
        self,
        learning_rate: float = 0.5,
        epochs: int = 800,
        l2: float = 1e-4,
        class_weight: str | None = "balanced",
        seed: int = 0,
    ):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.l2 = l2
        self.class_weight = class_weight
        self.seed = seed

    def fit(self, X, y):
        X = check_feature_matrix(X)
        y = check_binary_labels(y, X.shape[0])
        signs = 2.0 * y - 1.0
        n, d = X.shape
        if self.class_weight == "balanced":
            # weight the hinge term so rare positives are not drowned out
            class_counts = np.bincount(y, minlength=2)
            sample_weight = (n / (2.0 * class_counts))[y]
        else:
            sample_weight = np.ones(n)

        w = np.zeros(d)
        b = 0.0
        for epoch in range(1, self.epochs + 1):
            margins = signs * (X @ w + b)
            violating = margins < 1.0
            lr = self.learning_rate / (1.0 + 0.01 * epoch)
            grad_w = self.l2 * w
            grad_b = 0.0
            if violating.any():
                coef = (sample_weight * signs)[violating]
                grad_w -= (coef[:, None] * X[violating]).sum(axis=0) / n
                grad_b -= coef.sum() / n
            w -= lr * grad_w
            b -= lr * grad_b
        self.weights_ = w
        self.bias_ = b
        self.n_features_in_ = d
        self.calibration_scale_ = self._fit_calibration(self.decision_function(X), y)
        self.calibration_offset_ = 0.0
        return self

    @staticmethod
    def _fit_calibration(margins: np.ndarray, y: np.ndarray) -> float:
        """Fit the scale of P = sigmoid(scale * margin) on held-in margins."""
        scale = 1.0
        targets = y.astype(float)
        for _ in range(200):
            p = _sigmoid(scale * margins)
            grad = ((p - targets) * margins).mean()
            scale -= 0.5 * grad
            scale = float(np.clip(scale, 1e-3, 1e3))
        return float(scale)

    def decision_function(self, X) -> np.ndarray:
        X = check_feature_matrix(X, self.n_features_in_)
        return X @ self.weights_ + self.bias_

    def predict_proba(self, X) -> np.ndarray:
        margins = self.decision_function(X)
        pos = _sigmoid(self.calibration_scale_ * margins)
        return np.column_stack([1.0 - pos, pos])

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(int)

    def state_dict(self) -> dict:
        return {
            "weights": self.weights_.tolist(),
            "bias": self.bias_,
            "calibration": {
                "scale": self.calibration_scale_,
                "offset": self.calibration_offset_,
            },
        }

    def load_state_dict(self, state: dict) -> "LinearMarginClassifier":
        self.weights_ = np.asarray(state["weights"], dtype=float)
        self.bias_ = float(state["bias"])
        self.calibration_scale_ = float(state["calibration"]["scale"])
        self.calibration_offset_ = float(state["calibration"]["offset"])
        self.n_features_in_ = self.weights_.shape[0]
        return self


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return 1.0 - float((p * p).sum())


def _grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    indices: np.ndarray,
    rng: np.random.Generator,
    max_features: int,
    min_leaf: int,
    max_depth: int | None,
    depth: int = 0,
) -> dict:
    labels = y[indices]
    positive = int(labels.sum())
    if (
        positive == 0
        or positive == len(labels)
        or len(indices) <= min_leaf
        or (max_depth is not None and depth >= max_depth)
    ):
        return {"vote": 1 if 2 * positive > len(labels) else 0}

    n_features = X.shape[1]
    feature_order = rng.permutation(n_features)
    evaluated = 0
    best = None  # (impurity, feature, threshold)
    for f in feature_order:
        if evaluated >= max_features:
            break
        column = X[indices, f]
        order = np.argsort(column, kind="stable")
        sorted_vals = column[order]
        sorted_labels = labels[order]
        distinct = np.nonzero(np.diff(sorted_vals))[0]
        if distinct.size == 0:
            # constant on this node; does not count toward the feature budget
            continue
        evaluated += 1
        pos_prefix = np.cumsum(sorted_labels)
        total_pos = pos_prefix[-1]
        n = len(indices)
        for cut in distinct:
            left_n = cut + 1
            right_n = n - left_n
            if left_n < min_leaf or right_n < min_leaf:
                continue
            left_pos = pos_prefix[cut]
            left_counts = np.array([left_n - left_pos, left_pos], dtype=float)
            right_counts = np.array(
                [right_n - (total_pos - left_pos), total_pos - left_pos], dtype=float
            )
            impurity = (left_n * _gini(left_counts) + right_n * _gini(right_counts)) / n
            threshold = (sorted_vals[cut] + sorted_vals[cut + 1]) / 2.0
            key = (impurity, f, threshold)
            if best is None or key < best:
                best = key
    if best is None:
        return {"vote": 1 if 2 * positive > len(labels) else 0}

    _, feature, threshold = best
    mask = X[indices, feature] <= threshold
    left = _grow_tree(
        X, y, indices[mask], rng, max_features, min_leaf, max_depth, depth + 1
    )
    right = _grow_tree(
        X, y, indices[~mask], rng, max_features, min_leaf, max_depth, depth + 1
    )
    return {"feature": int(feature), "threshold": float(threshold), "left": left, "right": right}


def _tree_vote(tree: dict, row: np.ndarray) -> int:
    node = tree
    while "vote" not in node:
        node = node["left"] if row[node["feature"]] <= node["threshold"] else node["right"]
    return node["vote"]


class TreeEnsembleClassifier(ParamsMixin):
    """Bagged gini decision trees voting on the positive class."""

    def __init__(
        self,
        n_trees: int = 100,
        max_features: int | str = "sqrt",
        min_leaf: int = 1,
        max_depth: int | None = None,
        seed: int = 0,
    ):
        self.n_trees = n_trees
        self.max_features = max_features
        self.min_leaf = min_leaf
        self.max_depth = max_depth
        self.seed = seed

    def _resolve_max_features(self, n_features: int) -> int:
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(n_features)))
        if self.max_features == "all":
            return n_features
        return max(1, min(int(self.max_features), n_features))

    def fit(self, X, y):
        X = check_feature_matrix(X)
        y = check_binary_labels(y, X.shape[0])
        n = X.shape[0]
        max_features = self._resolve_max_features(X.shape[1])
        root_rng = np.random.default_rng(self.seed)
        tree_seeds = root_rng.integers(0, 2**63 - 1, size=self.n_trees)
        self.trees_ = []
        for tree_seed in tree_seeds:
            rng = np.random.default_rng(int(tree_seed))
            sample = np.sort(rng.integers(0, n, size=n))
            self.trees_.append(
                _grow_tree(
                    X, y, sample, rng, max_features, self.min_leaf, self.max_depth
                )
            )
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = check_feature_matrix(X, self.n_features_in_)
        votes = np.array(
            [[_tree_vote(tree, row) for tree in self.trees_] for row in X], dtype=float
        )
        pos = votes.sum(axis=1) / len(self.trees_)
        return np.column_stack([1.0 - pos, pos])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(int)

    def state_dict(self) -> dict:
        return {"trees": self.trees_, "n_features_in": self.n_features_in_}

    def load_state_dict(self, state: dict) -> "TreeEnsembleClassifier":
        self.trees_ = state["trees"]
        self.n_features_in_ = int(state.get("n_features_in", NUM_FEATURES))
        return self


@dataclass
class TrainedModel:
    """A fitted classifier plus everything needed to reuse it consistently."""

    kind: str
    classifier: LinearMarginClassifier | TreeEnsembleClassifier
    feature_schema_version: int
    rng_seed: int
    token_count_scale: int = 1

    def predict_proba(self, features) -> np.ndarray:
        X = check_feature_matrix(features)
        if self.feature_schema_version != FEATURE_SCHEMA_VERSION:
            raise ValueError(
                f"model carries feature schema v{self.feature_schema_version}, "
                f"library expects v{FEATURE_SCHEMA_VERSION}"
            )
        if X.shape[1] != NUM_FEATURES:
            raise ValueError(
                f"feature vector has {X.shape[1]} dimensions, schema has {NUM_FEATURES}"
            )
        return self.classifier.predict_proba(X)[:, 1]

    @property
    def calibration(self) -> dict | None:
        if isinstance(self.classifier, LinearMarginClassifier):
            return {
                "scale": self.classifier.calibration_scale_,
                "offset": self.classifier.calibration_offset_,
            }
        return None


def _normalize_kind(kind: str) -> str:
    kind = KIND_ALIASES.get(kind, kind)
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")
    return kind


def make_classifier(kind: str, seed: int, **hyperparams):
    kind = _normalize_kind(kind)
    if kind == "linear_margin":
        return LinearMarginClassifier(seed=seed, **hyperparams)
    return TreeEnsembleClassifier(seed=seed, **hyperparams)


def train(records, kind: str, config=None, seed: int | None = None, **hyperparams) -> TrainedModel:
    """Fit a model on (feature_vector, label) records.

    ``config`` may be any object with a ``seed`` attribute (e.g. the
    cross-validation config); an explicit ``seed`` wins over it.
    """
    if seed is None:
        seed = getattr(config, "seed", 0) if config is not None else 0
    records = list(records)
    if not records:
        raise ValueError("no training records")
    X = np.vstack([np.asarray(fv, dtype=float) for fv, _ in records])
    y = np.array([1 if label else 0 for _, label in records], dtype=int)
    classifier = make_classifier(kind, seed, **hyperparams).fit(X, y)
    return TrainedModel(
        kind=_normalize_kind(kind),
        classifier=classifier,
        feature_schema_version=FEATURE_SCHEMA_VERSION,
        rng_seed=seed,
    )


def predict_proba(model: TrainedModel, feature_vector) -> float:
    """Probability that a single sentence carries the punishment."""
    return float(model.predict_proba(np.asarray(feature_vector, dtype=float).reshape(1, -1))[0])


def save_model(model: TrainedModel, path: str | Path) -> None:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "feature_schema_version": model.feature_schema_version,
        "rng_seed": model.rng_seed,
        "token_count_scale": model.token_count_scale,
        "hyperparams": model.classifier.get_params(),
        "state": model.classifier.state_dict(),
    }
    Path(path).write_text(json.dumps(doc, ensure_ascii=False, sort_keys=True), encoding="utf-8")


def load_model(path: str | Path) -> TrainedModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {doc.get('format_version')}")
    kind = _normalize_kind(doc["kind"])
    classifier = make_classifier(kind, seed=doc["rng_seed"])
    classifier.set_params(**doc["hyperparams"])
    classifier.load_state_dict(doc["state"])
    return TrainedModel(
        kind=kind,
        classifier=classifier,
        feature_schema_version=int(doc["feature_schema_version"]),
        rng_seed=int(doc["rng_seed"]),
        token_count_scale=int(doc.get("token_count_scale", 1)),
    )
