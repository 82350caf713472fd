"""Balanced accuracy and cross-validated pipeline fitness."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from stackevo._seeding import derive_seed, make_rng
from stackevo.cascade import fit_pipeline, predict_pipeline
from stackevo.dataset import Dataset
from stackevo.errors import DataError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitnessRecord:
    genome_id: int
    cv_score: float
    fold_scores: tuple = field(default_factory=tuple)
    total_nodes: int = 0

    def sort_key(self):
        """Best first: higher score, then fewer nodes, then older genome."""
        return (-self.cv_score, self.total_nodes, self.genome_id)


def balanced_accuracy(y_true, y_pred, n_classes=None):
    """Mean per-class recall over the classes that occur in ``y_true``."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.size == 0:
        raise ValueError("balanced_accuracy of empty vectors")
    if y_true.shape != y_pred.shape:
        raise ValueError(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    if n_classes is None:
        n_classes = int(max(y_true.max(), y_pred.max())) + 1
    if y_true.min() < 0 or y_true.max() >= n_classes or y_pred.min() < 0 or y_pred.max() >= n_classes:
        raise ValueError(f"labels outside [0, {n_classes})")
    counts = np.bincount(y_true, minlength=n_classes)
    hits = np.bincount(y_true[y_true == y_pred], minlength=n_classes)
    present = counts > 0
    return float(np.mean(hits[present] / counts[present]))


def stratified_folds(labels, folds, seed):
    """Assign each row a fold id in ``[0, folds)``, spreading every class evenly.

    Rows of each class are shuffled and dealt round-robin; the starting fold
    rotates between classes so fold sizes stay within one of each other.
    Classes rarer than ``folds`` simply leave some folds without members.
    """
    labels = np.asarray(labels)
    if folds < 2:
        raise ValueError("need at least 2 folds")
    if labels.size < folds:
        raise DataError(f"{labels.size} training rows cannot be split into {folds} folds")
    rng = make_rng(seed)
    assign = np.empty(labels.size, dtype=np.int64)
    offset = 0
    for c in np.unique(labels):
        rows = rng.permutation(np.flatnonzero(labels == c))
        assign[rows] = (offset + np.arange(rows.size)) % folds
        offset = (offset + rows.size) % folds
    return assign


def cross_validate(genome, train: Dataset, folds=5, seed=0, fit_seed=None) -> FitnessRecord:
    """k-fold CV fitness of a genome on ``train``.

    The fold partition depends only on ``(train, folds, seed)`` so every genome
    in a run is scored on the same folds. ``fit_seed`` (default: derived from
    ``seed`` and the genome id) drives the primitives' randomness. A fold whose
    pipeline fails to fit scores 0.
    """
    assign = stratified_folds(train.labels, folds, seed)
    if fit_seed is None:
        fit_seed = derive_seed(seed, "fit", genome.id)
    scores = []
    for k in range(folds):
        held = assign == k
        tr, va = train.take(np.flatnonzero(~held)), train.take(np.flatnonzero(held))
        try:
            pipe = fit_pipeline(genome, tr, derive_seed(fit_seed, k))
            pred = predict_pipeline(pipe, va.features)
            scores.append(balanced_accuracy(va.labels, pred, train.n_classes))
        except Exception as exc:  # a broken candidate must not stop the search
            log.warning("genome %s fold %d failed: %s", genome.id, k, exc)
            scores.append(0.0)
    return FitnessRecord(genome.id, float(np.mean(scores)), tuple(scores), genome.total_nodes)
