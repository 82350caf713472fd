"""Linear classifiers, one-vs-rest for multiclass."""

import numpy as np

from stackevo.primitives.base import Classifier, argmax_first, as_float_list


def _ovr_targets(y, n_classes):
    T = -np.ones((y.shape[0], n_classes))
    T[np.arange(y.shape[0]), y] = 1.0
    return T


class _LinearModel(Classifier):
    def _predict(self, X):
        return argmax_first(X @ self.coef_.T + self.intercept_)

    def get_state(self):
        return {
            "coef": [as_float_list(row) for row in self.coef_],
            "intercept": as_float_list(self.intercept_),
        }

    def set_state(self, state):
        self.coef_ = np.asarray(state["coef"], dtype=np.float64).reshape(len(state["intercept"]), -1)
        self.intercept_ = np.asarray(state["intercept"], dtype=np.float64)


class Perceptron(_LinearModel):
    """Online perceptron; the sample order is reshuffled every epoch from the seeded generator."""

    name = "perceptron"

    def __init__(self, epochs=10, learning_rate=1.0):
        super().__init__(epochs=epochs, learning_rate=learning_rate)
        self.epochs = int(epochs)
        self.learning_rate = float(learning_rate)

    def _fit(self, X, y, rng):
        n, d = X.shape
        T = _ovr_targets(y, self.n_classes)
        W = np.zeros((self.n_classes, d))
        b = np.zeros(self.n_classes)
        lr = self.learning_rate
        for _ in range(self.epochs):
            errors = 0
            for i in rng.permutation(n):
                x = X[i]
                wrong = T[i] * (W @ x + b) <= 0.0
                if wrong.any():
                    step = lr * T[i] * wrong
                    W += np.outer(step, x)
                    b += step
                    errors += 1
            if errors == 0:
                break
        self.coef_, self.intercept_ = W, b


class LogisticRegression(_LinearModel):
    """L2-regularised logistic regression fit by full-batch gradient descent.

    The step size is ``1 / L`` with ``L`` the Lipschitz constant of the
    gradient, so no learning-rate tuning is needed on unscaled features.
    """

    name = "logistic_regression"

    def __init__(self, l2_penalty=0.01, max_iters=100):
        super().__init__(l2_penalty=l2_penalty, max_iters=max_iters)
        self.l2_penalty = float(l2_penalty)
        self.max_iters = int(max_iters)

    def _fit(self, X, y, rng):
        n, d = X.shape
        Xb = np.hstack([X, np.ones((n, 1))])
        T = (_ovr_targets(y, self.n_classes) + 1.0) / 2.0
        lipschitz = 0.25 * np.linalg.norm(Xb, 2) ** 2 / n + self.l2_penalty
        step = 1.0 / lipschitz
        W = np.zeros((d + 1, self.n_classes))
        reg = np.full(d + 1, self.l2_penalty)
        reg[-1] = 0.0  # intercept is not penalised
        for _ in range(self.max_iters):
            Z = np.clip(Xb @ W, -500.0, 500.0)
            P = 1.0 / (1.0 + np.exp(-Z))
            grad = Xb.T @ (P - T) / n + reg[:, None] * W
            W -= step * grad
        self.coef_ = W[:-1].T.copy()
        self.intercept_ = W[-1].copy()
