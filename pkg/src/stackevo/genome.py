"""Evolvable pipeline encoding and its variation operators."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace

import numpy as np

from stackevo._seeding import make_rng
from stackevo.errors import GenomeError
from stackevo.primitives import NodeSpec, catalog_names, get_spec

CROSSOVER_ATTEMPTS = 16


@dataclass(frozen=True)
class SearchBounds:
    """Shape limits and primitive allow-list for a search.

    The single-node output layer counts toward ``max_layers``.
    """

    max_layers: int = 5
    max_nodes: int = 3
    allowed_primitives: tuple = field(default_factory=lambda: tuple(catalog_names()))

    def __post_init__(self):
        if self.max_layers < 1 or self.max_nodes < 1:
            raise GenomeError("max_layers and max_nodes must be at least 1")
        allowed = tuple(self.allowed_primitives)
        if not allowed:
            raise GenomeError("allowed_primitives must not be empty")
        for name in allowed:
            get_spec(name)
        object.__setattr__(self, "allowed_primitives", allowed)


@dataclass(frozen=True)
class PipelineGenome:
    layers: tuple  # tuple of layers, each a tuple of NodeSpec
    id: int = -1

    @property
    def shape(self):
        return [len(layer) for layer in self.layers]

    @property
    def total_nodes(self):
        return sum(self.shape)

    def nodes(self):
        for i, layer in enumerate(self.layers):
            for j, node in enumerate(layer):
                yield i, j, node

    def with_id(self, new_id):
        return replace(self, id=int(new_id))

    def validate(self, bounds: SearchBounds | None = None):
        if not self.layers:
            raise GenomeError("genome has no layers")
        if len(self.layers[-1]) != 1:
            raise GenomeError(f"final layer must have exactly one node, has {len(self.layers[-1])}")
        for i, layer in enumerate(self.layers):
            if not layer:
                raise GenomeError(f"layer {i} is empty")
        if bounds is not None:
            if len(self.layers) > bounds.max_layers:
                raise GenomeError(f"{len(self.layers)} layers exceeds max_layers={bounds.max_layers}")
            for i, layer in enumerate(self.layers[:-1]):
                if len(layer) > bounds.max_nodes:
                    raise GenomeError(f"layer {i} has {len(layer)} nodes; max_nodes={bounds.max_nodes}")
        allowed = None if bounds is None else bounds.allowed_primitives
        for _, _, node in self.nodes():
            node.validate(allowed)
        return self

    def to_json(self):
        return {"layers": [[node.to_json() for node in layer] for layer in self.layers]}

    @classmethod
    def from_json(cls, obj, id=-1):
        layers = tuple(tuple(NodeSpec.from_json(n) for n in layer) for layer in obj["layers"])
        return cls(layers, id).validate()

    def digest(self):
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def describe(self):
        return " | ".join("+".join(n.primitive for n in layer) for layer in self.layers)


def random_node(rng, allowed):
    name = allowed[int(rng.integers(len(allowed)))]
    return NodeSpec.make(name, _random_hypers(rng, name))


def _random_hypers(rng, name):
    grid = get_spec(name).hyper_grid
    return {k: values[int(rng.integers(len(values)))] for k, values in grid.items()}


def _random_layer(rng, bounds):
    count = int(rng.integers(1, bounds.max_nodes + 1))
    return tuple(random_node(rng, bounds.allowed_primitives) for _ in range(count))


def random_genome(bounds: SearchBounds, rng_seed) -> PipelineGenome:
    """Sample a genome: layer count, node counts, primitives and hyperparameters all uniform."""
    rng = make_rng(rng_seed)
    n_layers = int(rng.integers(1, bounds.max_layers + 1))
    layers = [_random_layer(rng, bounds) for _ in range(n_layers - 1)]
    layers.append((random_node(rng, bounds.allowed_primitives),))
    return PipelineGenome(tuple(layers))


def applicable_moves(g: PipelineGenome, bounds: SearchBounds):
    """Every concrete one-step change that keeps ``g`` within ``bounds``.

    Move kinds: ``primitive`` (i, j), ``hyper`` (i, j, key), ``insert_layer`` (pos),
    ``delete_layer`` (pos), ``add_node`` (i), ``delete_node`` (i, j).
    """
    moves = []
    n_layers = len(g.layers)
    for i, j, node in g.nodes():
        if len(bounds.allowed_primitives) >= 2:
            moves.append(("primitive", i, j))
        for key, values in get_spec(node.primitive).hyper_grid.items():
            if len(values) >= 2:
                moves.append(("hyper", i, j, key))
    if n_layers < bounds.max_layers:
        moves.extend(("insert_layer", pos) for pos in range(n_layers))
    moves.extend(("delete_layer", pos) for pos in range(n_layers - 1))
    for i, layer in enumerate(g.layers[:-1]):
        if len(layer) < bounds.max_nodes:
            moves.append(("add_node", i))
        moves.extend(("delete_node", i, j) for j in range(len(layer)))
    return moves


def _pick_other(rng, values, current):
    others = [v for v in values if not (type(v) is type(current) and v == current)]
    return others[int(rng.integers(len(others)))]


def apply_move(g: PipelineGenome, move, bounds: SearchBounds, rng):
    layers = [list(layer) for layer in g.layers]
    kind = move[0]
    if kind == "primitive":
        _, i, j = move
        name = _pick_other(rng, bounds.allowed_primitives, layers[i][j].primitive)
        layers[i][j] = NodeSpec.make(name, _random_hypers(rng, name))
    elif kind == "hyper":
        _, i, j, key = move
        hv = layers[i][j].hyper_values
        hv[key] = _pick_other(rng, get_spec(layers[i][j].primitive).hyper_grid[key], hv[key])
        layers[i][j] = NodeSpec.make(layers[i][j].primitive, hv)
    elif kind == "insert_layer":
        layers.insert(move[1], list(_random_layer(rng, bounds)))
    elif kind == "delete_layer":
        del layers[move[1]]
    elif kind == "add_node":
        layers[move[1]].append(random_node(rng, bounds.allowed_primitives))
    elif kind == "delete_node":
        _, i, j = move
        del layers[i][j]
        if not layers[i]:
            del layers[i]
    else:
        raise GenomeError(f"unknown move {move!r}")
    return PipelineGenome(tuple(tuple(layer) for layer in layers))


def mutate(g: PipelineGenome, bounds: SearchBounds, rng_seed) -> PipelineGenome:
    """Return a new genome differing from ``g`` by exactly one change.

    The change is drawn uniformly over all applicable concrete moves, so a
    node with many hyperparameters offers more moves than a small one.
    """
    rng = make_rng(rng_seed)
    moves = applicable_moves(g, bounds)
    if not moves:
        raise GenomeError("no applicable mutation: need >= 2 primitives or a multi-valued grid")
    move = moves[int(rng.integers(len(moves)))]
    return apply_move(g, move, bounds, rng)


def crossover(a: PipelineGenome, b: PipelineGenome, bounds: SearchBounds, rng_seed):
    """Splice layer prefixes and suffixes of two parents into two children.

    Cuts fall before each parent's final layer, so each suffix carries a
    single-node output layer. Over-long children trigger a re-draw; after
    16 failed attempts the parents are returned as clones.
    """
    rng = make_rng(rng_seed)
    for _ in range(CROSSOVER_ATTEMPTS):
        ca = int(rng.integers(len(a.layers)))
        cb = int(rng.integers(len(b.layers)))
        c1 = a.layers[:ca] + b.layers[cb:]
        c2 = b.layers[:cb] + a.layers[ca:]
        if len(c1) <= bounds.max_layers and len(c2) <= bounds.max_layers:
            return PipelineGenome(c1), PipelineGenome(c2)
    return PipelineGenome(a.layers), PipelineGenome(b.layers)
