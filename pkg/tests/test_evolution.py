import numpy as np
import pytest

from conftest import make_blobs
from oracles import valid_genome
from stackevo.errors import ConfigError
from stackevo.evolution import EAConfig, GenerationReport, initialize, make_offspring, run, step
from stackevo.genome import SearchBounds
from stackevo.metrics import FitnessRecord
from stackevo.primitives import catalog

GRIDS = {s.name: s.hyper_grid for s in catalog()}
FAST = SearchBounds(3, 2, ("decision_tree", "gaussian_nb", "knn"))


class Stub:
    """Evaluator scoring genomes from a fixed table (default: a function of the id)."""

    def __init__(self, table=None, default=None):
        self.table = table or {}
        self.default = default or (lambda g: 0.0)
        self.seen = []

    def __call__(self, genomes):
        self.seen.extend(g.id for g in genomes)
        return [FitnessRecord(g.id, self.table.get(g.id, self.default(g)), (), g.total_nodes) for g in genomes]


def seeded_cache(population, scores):
    return {g.id: FitnessRecord(g.id, s, (), g.total_nodes) for g, s in zip(population, scores)}


def test_config_validation():
    for bad in (dict(population_n=3), dict(population_n=2), dict(population_n=7), dict(iterations_m=-1),
                dict(cv_folds=1), dict(worker_count=0)):
        with pytest.raises(ConfigError):
            EAConfig(**bad)


def test_initialize_ids_and_validity():
    cfg = EAConfig(population_n=200, bounds=SearchBounds(5, 3))
    pop = initialize(cfg)
    assert [g.id for g in pop] == list(range(200))
    assert all(valid_genome(g, 5, 3, cfg.bounds.allowed_primitives, GRIDS) for g in pop)
    assert pop == initialize(cfg)
    assert [g.layers for g in pop] != [g.layers for g in initialize(EAConfig(population_n=200, master_seed=1))]


def test_offspring_count_and_ids():
    for n in (4, 6, 10, 20):
        cfg = EAConfig(population_n=n, bounds=FAST)
        kids = make_offspring(initialize(cfg), cfg, 2)
        assert [k.id for k in kids] == list(range(3 * n, 4 * n))
        assert all(valid_genome(k, 3, 2, FAST.allowed_primitives, GRIDS) for k in kids)


def test_zero_scoring_offspring_keep_parents():
    cfg = EAConfig(population_n=8, bounds=FAST)
    pop = initialize(cfg)
    cache = seeded_cache(pop, [0.1 * (i + 1) for i in range(8)])
    survivors, report = step(pop, cache, cfg, 0, Stub())
    assert {g.id for g in survivors} == {g.id for g in pop}
    assert report.generation_index == 1
    assert report.best_score == pytest.approx(0.8)


def test_known_scores_select_by_hand():
    cfg = EAConfig(population_n=4, bounds=FAST)
    pop = initialize(cfg)  # ids 0..3 = p1..p4, offspring ids 4..7 = o1..o4
    cache = seeded_cache(pop, [0.9, 0.3, 0.5, 0.4])
    stub = Stub({4: 0.8, 5: 0.2, 6: 0.6, 7: 0.1})
    survivors, _ = step(pop, cache, cfg, 0, stub)
    assert [g.id for g in survivors] == [0, 4, 6, 2]
    assert sorted(stub.seen) == [4, 5, 6, 7]  # parents were not re-scored
    assert len(cache) == 8


def test_parsimony_tiebreak():
    cfg = EAConfig(population_n=10, bounds=SearchBounds(5, 3))
    pop = initialize(cfg)
    cache = seeded_cache(pop, [0.5] * 10)
    survivors, _ = step(pop, cache, cfg, 0, Stub(default=lambda g: 0.5))
    pool = sorted(cache.values(), key=lambda r: (r.total_nodes, r.genome_id))
    assert [g.id for g in survivors] == [r.genome_id for r in pool[:10]]
    sizes = [g.total_nodes for g in survivors]
    assert sizes == sorted(sizes)
    assert max(sizes) <= min(r.total_nodes for r in pool[10:])


def test_survivors_dominate_rest():
    cfg = EAConfig(population_n=10, bounds=FAST, master_seed=4)
    rng = np.random.default_rng(0)
    table = dict(enumerate(rng.random(200).round(2).tolist()))
    pop = initialize(cfg)
    cache = {}
    for gen in range(5):
        if not cache:
            cache = seeded_cache(pop, [table[g.id] for g in pop])
        pop, report = step(pop, cache, cfg, gen, Stub(table))
        assert len(pop) == 10
        kept = {g.id for g in pop}
        worst_kept = min(cache[i].cv_score for i in kept)
        assert all(r.cv_score <= worst_kept for r in cache.values() if r.genome_id not in kept)


def test_run_with_stub_is_predictable():
    cfg = EAConfig(population_n=4, iterations_m=1, bounds=FAST)
    table = {0: 0.9, 1: 0.3, 2: 0.5, 3: 0.4, 4: 0.8, 5: 0.2, 6: 0.6, 7: 0.1}
    result = run(cfg, make_blobs(40), evaluate=Stub(table))
    assert [rec.genome_id for _, rec in result.ranked] == [0, 4, 6, 2]
    assert [r.best_score for r in result.reports] == [0.9, 0.9]
    for pipe, rec in result.ranked:
        assert pipe.genome.id == rec.genome_id


def test_zero_iterations_returns_initial_top():
    cfg = EAConfig(population_n=12, iterations_m=0, bounds=FAST)
    result = run(cfg, make_blobs(40), evaluate=Stub(default=lambda g: g.id / 100))
    assert [rec.genome_id for _, rec in result.ranked] == list(range(11, 1, -1))
    assert len(result.reports) == 1 and result.reports[0].generation_index == 0


def test_odd_crossover_half():
    # N=10 gives a crossover half of 5: two full pairs plus one wrap-around child
    cfg = EAConfig(population_n=10, bounds=FAST, master_seed=3)
    kids = make_offspring(initialize(cfg), cfg, 0)
    assert len(kids) == 10


def test_real_run_is_monotone_and_deterministic(blobs):
    cfg = EAConfig(population_n=6, iterations_m=3, bounds=FAST, cv_folds=3, master_seed=9)
    seen = []
    a = run(cfg, blobs, on_generation=seen.append)
    b = run(cfg, blobs)
    bests = [r.best_score for r in a.reports]
    assert bests == sorted(bests)
    assert seen == a.reports
    assert [r.to_json() for r in a.reports] == [r.to_json() for r in b.reports]
    assert [rec for _, rec in a.ranked] == [rec for _, rec in b.ranked]
    assert len(a.ranked) == 6
    probe = blobs.features[:20]
    for (pa, _), (pb, _) in zip(a.ranked, b.ranked):
        assert np.array_equal(pa.predict(probe), pb.predict(probe))


def test_report_from_records():
    recs = [FitnessRecord(i, s, (), 1) for i, s in enumerate([0.9, 0.5, 0.4, 0.1])]
    r = GenerationReport.from_records(3, recs)
    assert (r.best_score, r.median_score, r.mean_score) == (0.9, 0.45, pytest.approx(0.475))
    assert r.to_json()["generation"] == 3
