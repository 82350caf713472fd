"""Uniform fit/predict interface shared by all classifier primitives."""

import numpy as np


class Classifier:
    """Base class for primitives.

    Subclasses set ``name``, implement ``_fit``/``_predict`` and the
    ``get_state``/``set_state`` pair. Fitted state must be JSON-serializable
    and must be the *only* thing ``_predict`` reads, so that a reloaded
    model predicts bit-for-bit like the in-memory one.
    """

    name = None

    def __init__(self, **hypers):
        self.hypers = dict(hypers)
        self.n_classes = None
        self.n_features = None

    def fit(self, X, y, n_classes, rng):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        self.n_classes = int(n_classes)
        self.n_features = X.shape[1]
        self._fit(X, y, rng)
        return self

    def predict(self, X):
        return self._predict(np.asarray(X, dtype=np.float64))

    def _fit(self, X, y, rng):
        raise NotImplementedError

    def _predict(self, X):
        raise NotImplementedError

    def get_state(self):
        raise NotImplementedError

    def set_state(self, state):
        raise NotImplementedError


class ConstantClassifier(Classifier):
    """Predicts one class everywhere; stands in for any primitive fit on single-class data."""

    name = "constant"

    def __init__(self, value=0):
        super().__init__()
        self.value = int(value)

    def _fit(self, X, y, rng):
        self.value = int(np.bincount(y, minlength=self.n_classes).argmax())

    def _predict(self, X):
        return np.full(X.shape[0], self.value, dtype=np.int64)

    def get_state(self):
        return {"value": self.value}

    def set_state(self, state):
        self.value = int(state["value"])


def argmax_first(scores):
    """Row-wise argmax; ties resolve to the smallest column index."""
    return np.argmax(scores, axis=1).astype(np.int64)


def as_float_list(a):
    return [float(v) for v in np.ravel(a)]
