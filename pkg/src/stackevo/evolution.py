"""Basic evolutionary search: mutate half, cross over half, keep the best N of 2N.

Seeds for every random decision derive from ``(master_seed, purpose, ...)``
and genome ids are assigned in creation order, so results do not depend on
how evaluation is scheduled across worker processes.
"""

from __future__ import annotations

import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from stackevo._seeding import derive_seed, make_rng
from stackevo.cascade import fit_pipeline
from stackevo.errors import ConfigError
from stackevo.genome import SearchBounds, crossover, mutate, random_genome
from stackevo.metrics import FitnessRecord, cross_validate

log = logging.getLogger(__name__)

TOP_K = 10


@dataclass(frozen=True)
class EAConfig:
    population_n: int = 200
    iterations_m: int = 10
    bounds: SearchBounds = field(default_factory=SearchBounds)
    cv_folds: int = 5
    master_seed: int = 0
    worker_count: int = 1

    def __post_init__(self):
        if self.population_n < 4 or self.population_n % 2:
            raise ConfigError(f"population must be an even number >= 4, got {self.population_n}")
        if self.iterations_m < 0:
            raise ConfigError("iterations must be >= 0")
        if self.cv_folds < 2:
            raise ConfigError("cv_folds must be >= 2")
        if self.worker_count < 1:
            raise ConfigError("worker_count must be >= 1")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    @property
    def fold_seed(self):
        return derive_seed(self.master_seed, "folds")

    def genome_seed(self, genome_id):
        return derive_seed(self.master_seed, "genome", genome_id)


@dataclass(frozen=True)
class GenerationReport:
    generation_index: int
    best_score: float
    median_score: float
    mean_score: float
    population_digest: tuple  # (genome_id, cv_score, total_nodes), best first

    @classmethod
    def from_records(cls, generation_index, records):
        scores = [r.cv_score for r in records]
        return cls(
            generation_index,
            max(scores),
            float(statistics.median(scores)),
            float(np.mean(scores)),
            tuple((r.genome_id, r.cv_score, r.total_nodes) for r in records),
        )

    def to_json(self):
        return {
            "generation": self.generation_index,
            "best": self.best_score,
            "median": self.median_score,
            "mean": self.mean_score,
            "population": [list(t) for t in self.population_digest],
        }


# per-process evaluation context, installed by the pool initializer
_CTX = {}


def _init_worker(train, config):
    _CTX["train"] = train
    _CTX["config"] = config


def _evaluate_one(genome):
    cfg = _CTX["config"]
    return cross_validate(genome, _CTX["train"], cfg.cv_folds, cfg.fold_seed, cfg.genome_seed(genome.id))


def _refit_one(genome):
    cfg = _CTX["config"]
    return fit_pipeline(genome, _CTX["train"], derive_seed(cfg.master_seed, "refit", genome.id))


class Evaluator:
    """Scores genomes by cross-validation, in a process pool when ``worker_count > 1``.

    Use as a context manager so the pool is shut down. Results always come
    back in input order.
    """

    def __init__(self, train, config: EAConfig):
        self.train = train
        self.config = config
        self._pool = None

    def __enter__(self):
        if self.config.worker_count > 1:
            self._pool = ProcessPoolExecutor(
                self.config.worker_count, initializer=_init_worker, initargs=(self.train, self.config)
            )
        else:
            _init_worker(self.train, self.config)
        return self

    def __exit__(self, *exc):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def _map(self, fn, items):
        if self._pool is None:
            _init_worker(self.train, self.config)
            return [fn(x) for x in items]
        return list(self._pool.map(fn, items))

    def __call__(self, genomes):
        return self._map(_evaluate_one, genomes)

    def refit(self, genomes):
        return self._map(_refit_one, genomes)


def initialize(config: EAConfig):
    return [
        random_genome(config.bounds, derive_seed(config.master_seed, "init", i)).with_id(i)
        for i in range(config.population_n)
    ]


def _evaluate_missing(genomes, cache, evaluate):
    todo = [g for g in genomes if g.id not in cache]
    for g, rec in zip(todo, evaluate(todo) if todo else []):
        cache[g.id] = rec


def rank(genomes, cache):
    return sorted(genomes, key=lambda g: cache[g.id].sort_key())


def make_offspring(population, config: EAConfig, gen_index):
    """Mutants of a random half plus crossover children of the other half.

    Crossover pairs are consecutive members of the shuffled half. If that
    half has odd size its last member is paired with its first and only
    one child is kept, so exactly N offspring are produced.
    """
    n = len(population)
    seed = config.master_seed
    perm = make_rng(seed, "partition", gen_index).permutation(n)
    half_a = [population[i] for i in perm[: n // 2]]
    half_b = [population[i] for i in perm[n // 2:]]
    children = [mutate(g, config.bounds, derive_seed(seed, "mutate", gen_index, k)) for k, g in enumerate(half_a)]
    for p in range(0, len(half_b), 2):
        a = half_b[p]
        b = half_b[p + 1] if p + 1 < len(half_b) else half_b[0]
        c1, c2 = crossover(a, b, config.bounds, derive_seed(seed, "crossover", gen_index, p // 2))
        children.extend([c1, c2] if p + 1 < len(half_b) else [c1])
    first_id = n * (gen_index + 1)
    return [c.with_id(first_id + k) for k, c in enumerate(children)]


def step(population, fitness_cache, config: EAConfig, gen_index, evaluate):
    """One generation. ``fitness_cache`` (genome id -> FitnessRecord) is updated in place.

    Returns the N survivors, best first, and the generation's report.
    """
    offspring = make_offspring(population, config, gen_index)
    pool = list(population) + offspring
    _evaluate_missing(pool, fitness_cache, evaluate)
    survivors = rank(pool, fitness_cache)[: len(population)]
    report = GenerationReport.from_records(gen_index + 1, [fitness_cache[g.id] for g in survivors])
    return survivors, report


@dataclass
class SearchResult:
    ranked: list  # (TrainedPipeline, FitnessRecord), best first
    reports: list
    population: list
    fitness_cache: dict


def run(config: EAConfig, train, evaluate=None, on_generation=None) -> SearchResult:
    """Initialise, evolve for ``iterations_m`` generations and refit the top 10 on all of ``train``.

    ``evaluate`` replaces cross-validation (a callable taking a list of genomes
    and returning FitnessRecords); when given, the final refit still uses
    ``train``. ``on_generation`` is called with each GenerationReport.
    """
    cache = {}
    reports = []
    with Evaluator(train, config) as ev:
        scorer = evaluate or ev
        population = initialize(config)
        _evaluate_missing(population, cache, scorer)
        population = rank(population, cache)
        reports.append(GenerationReport.from_records(0, [cache[g.id] for g in population]))
        if on_generation:
            on_generation(reports[-1])
        for g in range(config.iterations_m):
            population, report = step(population, cache, config, g, scorer)
            reports.append(report)
            log.info("generation %d: best %.4f median %.4f", report.generation_index,
                     report.best_score, report.median_score)
            if on_generation:
                on_generation(report)
        top = population[: min(TOP_K, len(population))]
        pipelines = ev.refit(top)
    ranked = [(p, cache[g.id]) for p, g in zip(pipelines, top)]
    return SearchResult(ranked, reports, population, cache)
