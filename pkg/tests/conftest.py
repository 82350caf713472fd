import itertools

import numpy as np
import pytest

from stackevo.dataset import Dataset

ACCEPTANCE_LINES = []


def make_blobs(n=200, seed=0, sep=4.0, dims=2):
    rng = np.random.default_rng(seed)
    half = n // 2
    X = np.vstack([rng.normal(-sep, 1.0, (half, dims)), rng.normal(sep, 1.0, (n - half, dims))])
    y = np.array([0] * half + [1] * (n - half))
    return Dataset(X, y, 2, class_names=("a", "b"), feature_names=tuple(f"f{i}" for i in range(dims)),
                   label_name="label")


def make_parity(bits=5, reps=8):
    patterns = np.array(list(itertools.product([0.0, 1.0], repeat=bits)))
    X = np.repeat(patterns, reps, axis=0)
    y = (X.sum(1) % 2).astype(int)
    return Dataset(X, y, 2, class_names=("even", "odd"), feature_names=tuple(f"b{i}" for i in range(bits)),
                   label_name="parity")


def make_xor_grid(reps=2):
    """Noiseless XOR on a 10x10 cell-centred grid in [0,1]^2, each point repeated (200 rows)."""
    g = (np.arange(10) + 0.5) / 10
    xx, yy = np.meshgrid(g, g)
    X = np.repeat(np.column_stack([xx.ravel(), yy.ravel()]), reps, axis=0)
    y = ((X[:, 0] > 0.5) ^ (X[:, 1] > 0.5)).astype(int)
    return Dataset(X, y, 2)


def make_random(n=60, d=4, classes=3, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = np.concatenate([np.arange(classes), rng.integers(0, classes, n - classes)])
    return Dataset(X, y, classes)


@pytest.fixture
def blobs():
    return make_blobs()


@pytest.fixture
def parity():
    return make_parity()


@pytest.fixture
def xor_grid():
    return make_xor_grid()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
