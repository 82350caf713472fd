"""Tabular classification data: CSV loading, label encoding and seeded splits."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from stackevo.errors import (
    CellParseError,
    DataError,
    MissingFileError,
    MissingLabelColumnError,
    SplitError,
    TooFewClassesError,
)

RAW = ("raw",)


def synthetic(layer_index, node_index):
    return ("synthetic", int(layer_index), int(node_index))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix plus dense integer labels.

    ``column_meta`` holds one tag per column: ``("raw",)`` for original
    features or ``("synthetic", layer, node)`` for appended predictions.
    ``row_ids`` tracks each row's position in the originally loaded file.
    """

    features: np.ndarray
    labels: np.ndarray
    n_classes: int
    column_meta: tuple = ()
    class_names: tuple = ()
    feature_names: tuple = ()
    label_name: str | None = None
    row_ids: np.ndarray | None = field(default=None)

    def __post_init__(self):
        X = np.ascontiguousarray(self.features, dtype=np.float64)
        y = np.ascontiguousarray(self.labels, dtype=np.int64)
        if X.ndim != 2:
            raise DataError(f"features must be 2-D, got shape {X.shape}")
        n, d = X.shape
        if n < 1 or d < 1:
            raise DataError(f"dataset must have at least one row and one column, got {n}x{d}")
        if y.shape != (n,):
            raise DataError(f"labels length {y.shape} does not match {n} rows")
        if not np.all(np.isfinite(X)):
            r, c = np.argwhere(~np.isfinite(X))[0]
            raise DataError(f"non-finite feature value at row {r}, column {c}")
        if self.n_classes < 1:
            raise DataError("n_classes must be positive")
        if y.min() < 0 or y.max() >= self.n_classes:
            raise DataError(f"labels must lie in [0, {self.n_classes})")
        meta = tuple(self.column_meta) if self.column_meta else (RAW,) * d
        if len(meta) != d:
            raise DataError(f"column_meta has {len(meta)} entries for {d} columns")
        names = tuple(self.class_names) if self.class_names else tuple(str(i) for i in range(self.n_classes))
        fnames = tuple(self.feature_names) if self.feature_names else tuple(f"x{i}" for i in range(d))
        ids = np.arange(n, dtype=np.int64) if self.row_ids is None else np.asarray(self.row_ids, dtype=np.int64)
        X.setflags(write=False)
        y.setflags(write=False)
        ids.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "column_meta", meta)
        object.__setattr__(self, "class_names", names)
        object.__setattr__(self, "feature_names", fnames)
        object.__setattr__(self, "row_ids", ids)

    @property
    def n_rows(self):
        return self.features.shape[0]

    @property
    def n_cols(self):
        return self.features.shape[1]

    @property
    def raw_width(self):
        return sum(1 for m in self.column_meta if m[0] == "raw")

    def take(self, rows):
        """Row subset; keeps class table and column tags."""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            self.features[rows],
            self.labels[rows],
            self.n_classes,
            self.column_meta,
            self.class_names,
            self.feature_names,
            self.label_name,
            self.row_ids[rows],
        )

    def class_counts(self):
        return np.bincount(self.labels, minlength=self.n_classes)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0
    stratify: bool = False

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def _parse_real(text, row, column):
    try:
        value = float(text)
    except ValueError:
        raise CellParseError(row, column, text) from None
    if not math.isfinite(value):
        raise CellParseError(row, column, text)
    return value


def _resolve_column(header, column, path):
    if isinstance(column, str) and column in header:
        return header.index(column)
    try:
        idx = int(column)
    except (TypeError, ValueError):
        raise MissingLabelColumnError(f"{path}: label column {column!r} not found in header {header}") from None
    if idx < 0:
        idx += len(header)
    if not 0 <= idx < len(header):
        raise MissingLabelColumnError(f"{path}: label column index {column} out of range for {len(header)} columns")
    return idx


def _read_rows(path):
    if not os.path.isfile(path):
        raise MissingFileError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise DataError(f"{path}: empty file (a header row is required)")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    for i, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise DataError(f"{path}: line {i} has {len(r)} cells, header has {len(header)}")
    return header, body


def load_csv(path, label_column=-1):
    """Load a CSV with a header row into a :class:`Dataset`.

    Labels are encoded densely by first appearance. ``label_column`` may be a
    header name or an integer index (negative counts from the end). Parse
    errors report the 1-based file line and the column name.
    """
    path = os.fspath(path)
    header, body = _read_rows(path)
    if not body:
        raise DataError(f"{path}: no data rows")
    li = _resolve_column(header, label_column, path)
    feat_cols = [j for j in range(len(header)) if j != li]
    if not feat_cols:
        raise DataError(f"{path}: no feature columns besides the label")
    codes = {}
    labels = []
    X = np.empty((len(body), len(feat_cols)), dtype=np.float64)
    for i, r in enumerate(body):
        lab = r[li].strip()
        labels.append(codes.setdefault(lab, len(codes)))
        for k, j in enumerate(feat_cols):
            X[i, k] = _parse_real(r[j].strip(), i + 2, header[j])
    if len(codes) < 2:
        raise TooFewClassesError(f"{path}: label column {header[li]!r} has {len(codes)} distinct value(s); need at least 2")
    return Dataset(
        X,
        np.asarray(labels),
        len(codes),
        class_names=tuple(codes),
        feature_names=tuple(header[j] for j in feat_cols),
        label_name=header[li],
    )


def load_features(path, drop_columns: Sequence = ()):
    """Read only the feature matrix of a CSV, dropping the named/indexed columns.

    Returns ``(matrix, kept_header)``. Used when applying a trained pipeline,
    where label values (if present) are ignored.
    """
    path = os.fspath(path)
    header, body = _read_rows(path)
    drop = {_resolve_column(header, c, path) for c in drop_columns}
    keep = [j for j in range(len(header)) if j not in drop]
    X = np.empty((len(body), len(keep)), dtype=np.float64)
    for i, r in enumerate(body):
        for k, j in enumerate(keep):
            X[i, k] = _parse_real(r[j].strip(), i + 2, header[j])
    return X, [header[j] for j in keep]


def write_csv(d: Dataset, path):
    """Write raw columns and decoded labels; floats use repr so values round-trip exactly."""
    raw = [j for j, m in enumerate(d.column_meta) if m[0] == "raw"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([d.feature_names[j] for j in raw] + [d.label_name or "label"])
        for x, y in zip(d.features, d.labels):
            w.writerow([repr(float(x[j])) for j in raw] + [d.class_names[y]])


def _stratified_order(labels, n_train, rng):
    # per-class shuffles, then largest-remainder allocation of train slots
    classes = np.unique(labels)
    groups = {c: rng.permutation(np.flatnonzero(labels == c)) for c in classes}
    frac = n_train / len(labels)
    quotas = {c: len(groups[c]) * frac for c in classes}
    alloc = {c: int(math.floor(q)) for c, q in quotas.items()}
    rest = n_train - sum(alloc.values())
    for c in sorted(classes, key=lambda c: (-(quotas[c] - alloc[c]), c))[:rest]:
        alloc[c] += 1
    train = np.concatenate([groups[c][: alloc[c]] for c in classes])
    test = np.concatenate([groups[c][alloc[c]:] for c in classes])
    return rng.permutation(train), rng.permutation(test)


def shuffle_split(d: Dataset, s: SplitSpec):
    """Seeded shuffle and partition into (train, test).

    The train part holds ``floor(train_fraction * n_rows)`` rows. By default
    the split is a plain permutation; ``s.stratify`` allocates per class.
    Raises :class:`SplitError` if any class ends up missing from train.
    """
    counts = d.class_counts()
    if np.any(counts < 2):
        bad = [d.class_names[c] for c in np.flatnonzero(counts < 2)]
        raise SplitError(f"classes {bad} have fewer than 2 rows; cannot split")
    n_train = int(math.floor(s.train_fraction * d.n_rows))
    if n_train < 1 or n_train >= d.n_rows:
        raise SplitError(f"train fraction {s.train_fraction} leaves an empty partition for {d.n_rows} rows")
    rng = np.random.default_rng(int(s.seed))
    if s.stratify:
        tr, te = _stratified_order(d.labels, n_train, rng)
    else:
        perm = rng.permutation(d.n_rows)
        tr, te = perm[:n_train], perm[n_train:]
    missing = np.flatnonzero(np.bincount(d.labels[tr], minlength=d.n_classes) == 0)
    if missing.size:
        names = [d.class_names[c] for c in missing]
        raise SplitError(
            f"classes {names} are absent from the training partition with seed {s.seed}; "
            "choose another seed or pass --stratify"
        )
    return d.take(tr), d.take(te)
