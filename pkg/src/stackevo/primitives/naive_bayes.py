import numpy as np

from stackevo.primitives.base import Classifier, argmax_first, as_float_list


def _log_prior(counts):
    with np.errstate(divide="ignore"):
        return np.log(counts / counts.sum())


class GaussianNB(Classifier):
    name = "gaussian_nb"

    def __init__(self, variance_smoothing=1e-9):
        super().__init__(variance_smoothing=variance_smoothing)
        self.variance_smoothing = float(variance_smoothing)

    def _fit(self, X, y, rng):
        C, d = self.n_classes, X.shape[1]
        eps = self.variance_smoothing * max(float(np.var(X, axis=0).max()), 0.0)
        if eps == 0.0:
            eps = self.variance_smoothing
        counts = np.bincount(y, minlength=C).astype(np.float64)
        means = np.zeros((C, d))
        var = np.ones((C, d))
        for c in np.flatnonzero(counts):
            Xc = X[y == c]
            means[c] = Xc.mean(0)
            var[c] = Xc.var(0) + eps
        self.class_count_, self.theta_, self.var_ = counts, means, var

    def _predict(self, X):
        jll = (
            _log_prior(self.class_count_)[None, :]
            - 0.5 * np.log(2.0 * np.pi * self.var_).sum(1)[None, :]
            - 0.5 * (((X[:, None, :] - self.theta_[None]) ** 2) / self.var_[None]).sum(-1)
        )
        return argmax_first(jll)

    def get_state(self):
        return {
            "class_count": as_float_list(self.class_count_),
            "theta": [as_float_list(r) for r in self.theta_],
            "var": [as_float_list(r) for r in self.var_],
        }

    def set_state(self, state):
        self.class_count_ = np.asarray(state["class_count"], dtype=np.float64)
        C = len(self.class_count_)
        self.theta_ = np.asarray(state["theta"], dtype=np.float64).reshape(C, -1)
        self.var_ = np.asarray(state["var"], dtype=np.float64).reshape(C, -1)


class BernoulliNB(Classifier):
    name = "bernoulli_nb"

    def __init__(self, alpha=1.0, binarize=0.0):
        super().__init__(alpha=alpha, binarize=binarize)
        self.alpha = float(alpha)
        self.binarize = float(binarize)

    def _fit(self, X, y, rng):
        B = (X > self.binarize).astype(np.float64)
        C = self.n_classes
        counts = np.bincount(y, minlength=C).astype(np.float64)
        ones = np.zeros((C, X.shape[1]))
        np.add.at(ones, y, B)
        self.class_count_ = counts
        self.feature_prob_ = (ones + self.alpha) / (counts[:, None] + 2.0 * self.alpha)

    def _predict(self, X):
        B = (X > self.binarize).astype(np.float64)
        lp = np.log(self.feature_prob_)
        lq = np.log1p(-self.feature_prob_)
        jll = _log_prior(self.class_count_)[None, :] + B @ lp.T + (1.0 - B) @ lq.T
        return argmax_first(jll)

    def get_state(self):
        return {
            "class_count": as_float_list(self.class_count_),
            "feature_prob": [as_float_list(r) for r in self.feature_prob_],
        }

    def set_state(self, state):
        self.class_count_ = np.asarray(state["class_count"], dtype=np.float64)
        self.feature_prob_ = np.asarray(state["feature_prob"], dtype=np.float64).reshape(len(self.class_count_), -1)
