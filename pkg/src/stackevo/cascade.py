"""Cascading stacked pipelines.

Each layer sees the raw features plus one synthetic column per node of
every earlier layer; the single node of the last layer gives the output.
Synthetic columns hold hard class indices cast to float.
"""

from __future__ import annotations

import json
import os

import numpy as np

from stackevo._seeding import derive_seed
from stackevo.dataset import Dataset, synthetic
from stackevo.errors import SchemaError, StackevoError, WidthMismatchError
from stackevo.genome import PipelineGenome
from stackevo.primitives import TrainedPrimitive, fit_arrays, predict

FORMAT = "stackevo-pipeline"
SCHEMA_VERSION = 1


class PipelineFitError(StackevoError):
    def __init__(self, layer, node, cause):
        self.layer = layer
        self.node = node
        super().__init__(f"layer {layer}, node {node}: {cause}")


def augment(d: Dataset, predictions, layer_index) -> Dataset:
    """Append one synthetic column per prediction vector, tagged with its (layer, node)."""
    if not len(predictions):
        return d
    cols = []
    for j, p in enumerate(predictions):
        p = np.asarray(p)
        if p.shape != (d.n_rows,):
            raise ValueError(f"prediction {j} has shape {p.shape}; expected ({d.n_rows},)")
        cols.append(p.astype(np.float64))
    return Dataset(
        np.hstack([d.features, np.column_stack(cols)]),
        d.labels,
        d.n_classes,
        d.column_meta + tuple(synthetic(layer_index, j) for j in range(len(cols))),
        d.class_names,
        d.feature_names + tuple(f"L{layer_index}N{j}" for j in range(len(cols))),
        d.label_name,
        d.row_ids,
    )


class TrainedPipeline:
    """A genome with every node fitted; applies the cascade to new rows."""

    def __init__(self, genome, fitted_nodes, raw_width, n_classes, class_names=None,
                 feature_names=None, label_name=None, seed=None):
        self.genome = genome
        self.fitted_nodes = fitted_nodes
        self.raw_width = int(raw_width)
        self.n_classes = int(n_classes)
        self.class_names = tuple(class_names or (str(i) for i in range(n_classes)))
        self.feature_names = tuple(feature_names or ())
        self.label_name = label_name
        self.seed = seed

    def predict(self, features):
        return predict_pipeline(self, features)

    def layer_widths(self):
        return [layer[0].n_features for layer in self.fitted_nodes]

    def to_json(self):
        return {
            "format": FORMAT,
            "version": SCHEMA_VERSION,
            "genome": self.genome.to_json(),
            "genome_id": self.genome.id,
            "seed": self.seed,
            "raw_width": self.raw_width,
            "n_classes": self.n_classes,
            "labels": list(self.class_names),
            "feature_names": list(self.feature_names),
            "label_column": self.label_name,
            "nodes": [[node.to_json() for node in layer] for layer in self.fitted_nodes],
        }

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict) or obj.get("format") != FORMAT:
            raise SchemaError("not a stackevo pipeline document")
        if obj.get("version") != SCHEMA_VERSION:
            raise SchemaError(f"pipeline schema version {obj.get('version')!r} is not supported "
                              f"(expected {SCHEMA_VERSION})")
        try:
            genome = PipelineGenome.from_json(obj["genome"], id=obj.get("genome_id", -1))
            fitted = [[TrainedPrimitive.from_json(n) for n in layer] for layer in obj["nodes"]]
            if [len(layer) for layer in fitted] != genome.shape:
                raise SchemaError("fitted node layout does not match the genome shape")
            return cls(genome, fitted, obj["raw_width"], obj["n_classes"], obj["labels"],
                       obj.get("feature_names"), obj.get("label_column"), obj.get("seed"))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed pipeline document: {exc!r}") from exc

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        if not os.path.isfile(path):
            raise SchemaError(f"no such pipeline file: {path}")
        try:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_json(obj)


def node_seed(seed, layer, node):
    return derive_seed(seed, layer, node)


def fit_pipeline(genome: PipelineGenome, train: Dataset, seed, return_train_predictions=False):
    """Train layer by layer on ``train``.

    Every node of a layer is fitted independently on the same matrix; the
    layer's in-sample predictions are then appended for the next layer.
    """
    genome.validate()
    d = train
    fitted = []
    final = None
    for i, layer in enumerate(genome.layers):
        trained, preds = [], []
        for j, node in enumerate(layer):
            try:
                p = fit_arrays(node, d.features, d.labels, d.n_classes, node_seed(seed, i, j))
                preds.append(predict(p, d.features))
            except Exception as exc:
                raise PipelineFitError(i, j, exc) from exc
            trained.append(p)
        fitted.append(trained)
        if i < len(genome.layers) - 1:
            d = augment(d, preds, i)
        else:
            final = preds[0]
    pipe = TrainedPipeline(genome, fitted, train.n_cols, train.n_classes, train.class_names,
                           train.feature_names, train.label_name, seed)
    if return_train_predictions:
        return pipe, final
    return pipe


def predict_pipeline(p: TrainedPipeline, features):
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != p.raw_width:
        raise WidthMismatchError(p.raw_width, X.shape[1] if X.ndim == 2 else X.shape, where="pipeline")
    for layer in p.fitted_nodes[:-1]:
        preds = [predict(node, X) for node in layer]
        X = np.hstack([X, np.column_stack(preds).astype(np.float64)])
    return predict(p.fitted_nodes[-1][0], X)
