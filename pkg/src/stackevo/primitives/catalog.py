"""Primitive catalog: names, hyperparameter grids and the fit/predict entry points."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from stackevo._seeding import make_rng
from stackevo.errors import GenomeError, WidthMismatchError
from stackevo.primitives.base import ConstantClassifier
from stackevo.primitives.ensemble import AdaBoost, Bagging, ExtraTrees, RandomForest
from stackevo.primitives.linear import LogisticRegression, Perceptron
from stackevo.primitives.naive_bayes import BernoulliNB, GaussianNB
from stackevo.primitives.neighbors import KNeighbors
from stackevo.primitives.tree import DecisionTree


@dataclass(frozen=True)
class PrimitiveSpec:
    name: str
    hyper_grid: dict  # name -> tuple of allowed values, in order

    def __post_init__(self):
        for key, values in self.hyper_grid.items():
            if len(values) < 1:
                raise ValueError(f"{self.name}: hyperparameter {key!r} has an empty grid")

    def to_json(self):
        return {"name": self.name, "hyper_grid": {k: list(v) for k, v in self.hyper_grid.items()}}


@dataclass(frozen=True)
class NodeSpec:
    """One node of a pipeline: a primitive name plus a value for every grid key.

    ``hypers`` is an ordered tuple of ``(name, value)`` pairs so the node
    is hashable and immutable; use :attr:`hyper_values` for a dict view.
    """

    primitive: str
    hypers: tuple = ()

    @classmethod
    def make(cls, primitive, hyper_values=None):
        hyper_values = dict(hyper_values or {})
        spec = get_spec(primitive)
        missing = set(spec.hyper_grid) - set(hyper_values)
        extra = set(hyper_values) - set(spec.hyper_grid)
        if missing or extra:
            raise GenomeError(f"{primitive}: hyperparameters missing {sorted(missing)} / unknown {sorted(extra)}")
        return cls(primitive, tuple((k, hyper_values[k]) for k in spec.hyper_grid))

    @property
    def hyper_values(self):
        return dict(self.hypers)

    def validate(self, allowed=None):
        if allowed is not None and self.primitive not in allowed:
            raise GenomeError(f"primitive {self.primitive!r} is not in the allowed set")
        spec = get_spec(self.primitive)
        if [k for k, _ in self.hypers] != list(spec.hyper_grid):
            raise GenomeError(f"{self.primitive}: hyperparameter keys {[k for k, _ in self.hypers]} do not match grid")
        for k, v in self.hypers:
            if not any(_same(v, g) for g in spec.hyper_grid[k]):
                raise GenomeError(f"{self.primitive}: {k}={v!r} not in grid {spec.hyper_grid[k]}")

    def to_json(self):
        return {"primitive": self.primitive, "hypers": self.hyper_values}

    @classmethod
    def from_json(cls, obj):
        node = cls.make(obj["primitive"], obj.get("hypers", {}))
        node.validate()
        return node


def _same(a, b):
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    return a == b


_CATALOG = {}
_CLASSES = {}


def register(spec: PrimitiveSpec, cls):
    """Add a primitive. ``cls(**hyper_values)`` must build an unfitted classifier."""
    _CATALOG[spec.name] = spec
    _CLASSES[spec.name] = cls


_DEPTHS = (3, 5, 8, None)
for _spec, _cls in [
    (PrimitiveSpec("perceptron", {"epochs": (10, 50), "learning_rate": (0.1, 1.0)}), Perceptron),
    (PrimitiveSpec("logistic_regression", {"l2_penalty": (0.0001, 0.001, 0.01, 0.1), "max_iters": (100, 500)}),
     LogisticRegression),
    (PrimitiveSpec("decision_tree", {"max_depth": (1, 2, 3, 5, 8, 12), "min_samples_leaf": (1, 2, 5),
                                     "criterion": ("gini", "entropy")}), DecisionTree),
    (PrimitiveSpec("knn", {"k": (1, 3, 5, 7, 11), "weighting": ("uniform", "inverse_distance")}), KNeighbors),
    (PrimitiveSpec("gaussian_nb", {"variance_smoothing": (1e-9, 1e-6)}), GaussianNB),
    (PrimitiveSpec("bernoulli_nb", {"alpha": (0.1, 1.0), "binarize": (0.0, 0.5)}), BernoulliNB),
    (PrimitiveSpec("random_forest", {"n_estimators": (10, 30, 100), "max_depth": _DEPTHS,
                                     "max_features": ("sqrt", "all")}), RandomForest),
    (PrimitiveSpec("extra_trees", {"n_estimators": (10, 30, 100), "max_depth": _DEPTHS,
                                   "max_features": ("sqrt", "all")}), ExtraTrees),
    (PrimitiveSpec("adaboost", {"n_estimators": (10, 50, 100), "max_depth": (1, 2, 3)}), AdaBoost),
    (PrimitiveSpec("bagging", {"n_estimators": (10, 30, 100), "max_depth": _DEPTHS}), Bagging),
]:
    register(_spec, _cls)


def catalog():
    return list(_CATALOG.values())


def catalog_names():
    return list(_CATALOG)


def get_spec(name):
    try:
        return _CATALOG[name]
    except KeyError:
        raise GenomeError(f"unknown primitive {name!r}; known: {', '.join(_CATALOG)}") from None


def build(node: NodeSpec):
    get_spec(node.primitive)
    return _CLASSES[node.primitive](**node.hyper_values)


class TrainedPrimitive:
    """A fitted node: its :class:`NodeSpec`, the fitted model and the width it expects."""

    def __init__(self, spec, model, n_classes_seen, n_features):
        self.spec = spec
        self.model = model
        self.n_classes_seen = int(n_classes_seen)
        self.n_features = int(n_features)

    @property
    def is_constant(self):
        return isinstance(self.model, ConstantClassifier)

    def predict(self, features):
        return predict(self, features)

    def to_json(self):
        return {
            "primitive": self.spec.primitive,
            "hypers": self.spec.hyper_values,
            "model": self.model.name,
            "n_classes": self.n_classes_seen,
            "n_features": self.n_features,
            "state": self.model.get_state(),
        }

    @classmethod
    def from_json(cls, obj):
        spec = NodeSpec.from_json(obj)
        model = ConstantClassifier() if obj["model"] == "constant" else build(spec)
        if obj["model"] not in ("constant", spec.primitive):
            raise GenomeError(f"fitted model kind {obj['model']!r} does not match primitive {spec.primitive!r}")
        model.n_classes = int(obj["n_classes"])
        model.n_features = int(obj["n_features"])
        model.set_state(obj["state"])
        return cls(spec, model, obj["n_classes"], obj["n_features"])


def fit_arrays(spec: NodeSpec, X, y, n_classes, seed):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] < 1:
        raise ValueError("cannot fit on an empty training set")
    if np.unique(y).size == 1:
        model = ConstantClassifier()
    else:
        model = build(spec)
    model.fit(X, y, n_classes, make_rng(seed))
    return TrainedPrimitive(spec, model, n_classes, X.shape[1])


def fit(spec: NodeSpec, train, seed):
    """Fit one primitive on a :class:`~stackevo.dataset.Dataset`.

    Deterministic in ``(spec, train, seed)``. Single-class training data
    yields a constant predictor instead of an error.
    """
    spec.validate()
    return fit_arrays(spec, train.features, train.labels, train.n_classes, seed)


def predict(p: TrainedPrimitive, features):
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != p.n_features:
        raise WidthMismatchError(p.n_features, X.shape[1] if X.ndim == 2 else X.shape, where=p.spec.primitive)
    return p.model.predict(X)
