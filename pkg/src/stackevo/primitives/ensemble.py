"""Tree ensembles: random forest, extra trees, bagging and SAMME AdaBoost."""

import math

import numpy as np

from stackevo.primitives.base import Classifier, argmax_first, as_float_list
from stackevo.primitives.tree import DecisionTree, apply_tree, tree_from_state, tree_state


def _vote(trees, weights, X, n_classes):
    scores = np.zeros((X.shape[0], n_classes))
    rows = np.arange(X.shape[0])
    for arrays, w in zip(trees, weights):
        np.add.at(scores, (rows, apply_tree(arrays, X)), w)
    return argmax_first(scores)


class _TreeEnsemble(Classifier):
    """Hard-voting ensemble of independently grown trees."""

    splitter = "best"
    default_bootstrap = True

    def __init__(self, n_estimators=10, max_depth=None, max_features="all", bootstrap=None,
                 criterion="gini", min_samples_leaf=1):
        super().__init__(n_estimators=n_estimators, max_depth=max_depth)
        self.n_estimators = int(n_estimators)
        self.max_depth = max_depth
        self.max_features = max_features
        self.bootstrap = self.default_bootstrap if bootstrap is None else bool(bootstrap)
        self.criterion = criterion
        self.min_samples_leaf = min_samples_leaf
        self.trees_ = []

    def _fit(self, X, y, rng):
        n = X.shape[0]
        seeds = rng.integers(0, 2**63, size=self.n_estimators)
        self.trees_ = []
        for s in seeds:
            trng = np.random.default_rng(int(s))
            if self.bootstrap:
                idx = trng.integers(0, n, size=n)
                Xb, yb = X[idx], y[idx]
            else:
                Xb, yb = X, y
            tree = DecisionTree(
                max_depth=self.max_depth,
                min_samples_leaf=self.min_samples_leaf,
                criterion=self.criterion,
                max_features=self.max_features,
                splitter=self.splitter,
            )
            tree.fit_weighted(Xb, yb, self.n_classes, trng)
            self.trees_.append(tree.tree_)

    def _predict(self, X):
        return _vote(self.trees_, [1.0] * len(self.trees_), X, self.n_classes)

    def get_state(self):
        return {"trees": [tree_state(t) for t in self.trees_]}

    def set_state(self, state):
        self.trees_ = [tree_from_state(t) for t in state["trees"]]


class RandomForest(_TreeEnsemble):
    name = "random_forest"

    def __init__(self, n_estimators=10, max_depth=None, max_features="sqrt", bootstrap=None, **kw):
        super().__init__(n_estimators, max_depth, max_features, bootstrap, **kw)
        self.hypers["max_features"] = max_features


class ExtraTrees(_TreeEnsemble):
    name = "extra_trees"
    splitter = "random"
    default_bootstrap = False

    def __init__(self, n_estimators=10, max_depth=None, max_features="sqrt", bootstrap=None, **kw):
        super().__init__(n_estimators, max_depth, max_features, bootstrap, **kw)
        self.hypers["max_features"] = max_features


class Bagging(_TreeEnsemble):
    """Bootstrap-aggregated full-feature decision trees."""

    name = "bagging"

    def __init__(self, n_estimators=10, max_depth=None, bootstrap=None, **kw):
        super().__init__(n_estimators, max_depth, "all", bootstrap, **kw)


class AdaBoost(Classifier):
    """Multiclass AdaBoost (SAMME) over shallow trees.

    Sample weights are kept normalised to sum to ``n`` so the first round
    sees unit weights, which makes a one-round model identical to its base
    tree.
    """

    name = "adaboost"

    def __init__(self, n_estimators=50, max_depth=1):
        super().__init__(n_estimators=n_estimators, max_depth=max_depth)
        self.n_estimators = int(n_estimators)
        self.max_depth = int(max_depth)
        self.trees_ = []
        self.alphas_ = []

    def _fit(self, X, y, rng):
        n = X.shape[0]
        K = self.n_classes
        w = np.ones(n)
        self.trees_, self.alphas_ = [], []
        for m in range(self.n_estimators):
            tree = DecisionTree(max_depth=self.max_depth).fit_weighted(X, y, K, rng, weights=w)
            miss = tree.predict(X) != y
            err = float(w[miss].sum() / w.sum())
            if err <= 0.0:
                self.trees_.append(tree.tree_)
                self.alphas_.append(1.0)
                break
            if err >= 1.0 - 1.0 / K:
                if m == 0:
                    self.trees_.append(tree.tree_)
                    self.alphas_.append(1.0)
                break
            alpha = math.log((1.0 - err) / err) + math.log(K - 1.0)
            self.trees_.append(tree.tree_)
            self.alphas_.append(alpha)
            w = w * np.exp(alpha * miss)
            w *= n / w.sum()

    def _predict(self, X):
        return _vote(self.trees_, self.alphas_, X, self.n_classes)

    def get_state(self):
        return {"trees": [tree_state(t) for t in self.trees_], "alphas": as_float_list(self.alphas_)}

    def set_state(self, state):
        self.trees_ = [tree_from_state(t) for t in state["trees"]]
        self.alphas_ = [float(a) for a in state["alphas"]]
