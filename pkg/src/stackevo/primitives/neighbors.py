import numpy as np

from stackevo.primitives.base import Classifier, argmax_first, as_float_list

_CHUNK = 256


class KNeighbors(Classifier):
    """Euclidean k-nearest-neighbour vote.

    Equidistant neighbours are ranked by training-row order; vote ties go
    to the smallest class index. With inverse-distance weighting, any
    exact matches (distance 0) outvote everything else.
    """

    name = "knn"

    def __init__(self, k=5, weighting="uniform"):
        super().__init__(k=k, weighting=weighting)
        self.k = int(k)
        self.weighting = weighting

    def _fit(self, X, y, rng):
        self.X_ = X.copy()
        self.y_ = y.copy()

    def _predict(self, X):
        k = min(self.k, self.X_.shape[0])
        out = np.empty(X.shape[0], dtype=np.int64)
        for start in range(0, X.shape[0], _CHUNK):
            Q = X[start:start + _CHUNK]
            dist = np.sqrt(((Q[:, None, :] - self.X_[None, :, :]) ** 2).sum(-1))
            nn = np.argsort(dist, axis=1, kind="stable")[:, :k]
            nd = np.take_along_axis(dist, nn, axis=1)
            if self.weighting == "inverse_distance":
                exact = nd == 0.0
                with np.errstate(divide="ignore"):
                    w = np.where(exact.any(1, keepdims=True), exact.astype(np.float64), 1.0 / nd)
            else:
                w = np.ones_like(nd)
            scores = np.zeros((Q.shape[0], self.n_classes))
            np.add.at(scores, (np.repeat(np.arange(Q.shape[0]), k), self.y_[nn].ravel()), w.ravel())
            out[start:start + _CHUNK] = argmax_first(scores)
        return out

    def get_state(self):
        return {"X": [as_float_list(r) for r in self.X_], "y": self.y_.tolist()}

    def set_state(self, state):
        self.y_ = np.asarray(state["y"], dtype=np.int64)
        self.X_ = np.asarray(state["X"], dtype=np.float64).reshape(len(self.y_), -1)
