"""CART decision tree with deterministic tie-breaking.

Among equally good splits the lowest feature index wins, then the lowest
threshold. Splits with zero impurity decrease are still taken while the node
is impure, so parity-like targets (XOR) remain learnable greedily.
"""

import math

import numpy as np

from stackevo.primitives import _tree_kernel
from stackevo.primitives.base import Classifier, as_float_list

LEAF = _tree_kernel.LEAF
_CRITERIA = {"gini": _tree_kernel._GINI, "entropy": _tree_kernel._ENTROPY}


def build_tree(X, y, n_classes, *, weights=None, criterion="gini", max_depth=None,
               min_samples_leaf=1, max_features=None, splitter="best", rng=None):
    """Grow a tree and return its flat arrays ``(feature, threshold, left, right, value)``.

    ``max_features`` is None (all features) or an int; the candidate features
    at each node are drawn from the node's non-constant columns. Nodes are
    numbered depth-first, left subtree first.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    w = np.ones(n) if weights is None else np.ascontiguousarray(weights, dtype=np.float64)
    seed = 0 if rng is None else int(rng.integers(0, 2**63))
    return _tree_kernel.grow(
        X,
        np.ascontiguousarray(y, dtype=np.int64),
        w,
        int(n_classes),
        _CRITERIA[criterion],
        -1 if max_depth is None else int(max_depth),
        int(min_samples_leaf),
        0 if max_features is None else int(max_features),
        splitter == "random",
        np.uint64(seed),
    )


def apply_tree(arrays, X):
    return _tree_kernel.apply(*arrays, np.ascontiguousarray(X, dtype=np.float64))


def tree_state(arrays):
    feature, threshold, left, right, value = arrays
    return {
        "feature": feature.tolist(),
        "threshold": as_float_list(threshold),
        "left": left.tolist(),
        "right": right.tolist(),
        "value": value.tolist(),
    }


def tree_from_state(state):
    return (
        np.asarray(state["feature"], dtype=np.int64),
        np.asarray(state["threshold"], dtype=np.float64),
        np.asarray(state["left"], dtype=np.int64),
        np.asarray(state["right"], dtype=np.int64),
        np.asarray(state["value"], dtype=np.int64),
    )


def resolve_max_features(spec, n_features):
    if spec in (None, "all"):
        return None
    if spec == "sqrt":
        return max(1, int(math.sqrt(n_features)))
    return int(spec)


class DecisionTree(Classifier):
    name = "decision_tree"

    def __init__(self, max_depth=None, min_samples_leaf=1, criterion="gini", max_features="all", splitter="best"):
        super().__init__(max_depth=max_depth, min_samples_leaf=min_samples_leaf, criterion=criterion)
        self.max_depth = max_depth
        self.min_samples_leaf = int(min_samples_leaf)
        self.criterion = criterion
        self.max_features = max_features
        self.splitter = splitter
        self.tree_ = None

    def fit_weighted(self, X, y, n_classes, rng, weights=None):
        X = np.asarray(X, dtype=np.float64)
        self.n_classes = int(n_classes)
        self.n_features = X.shape[1]
        self.tree_ = build_tree(
            X, np.asarray(y, dtype=np.int64), self.n_classes,
            weights=weights,
            criterion=self.criterion,
            max_depth=self.max_depth,
            min_samples_leaf=self.min_samples_leaf,
            max_features=resolve_max_features(self.max_features, X.shape[1]),
            splitter=self.splitter,
            rng=rng,
        )
        return self

    def _fit(self, X, y, rng):
        self.fit_weighted(X, y, self.n_classes, rng)

    def _predict(self, X):
        return apply_tree(self.tree_, X)

    @property
    def node_count(self):
        return len(self.tree_[0])

    def get_state(self):
        return tree_state(self.tree_)

    def set_state(self, state):
        self.tree_ = tree_from_state(state)
