"""End-to-end acceptance checks, one test per criterion.

Each test appends a PASS/FAIL line to ``conftest.ACCEPTANCE_LINES``; the lines
are printed in a summary section at the end of the pytest run.
"""

import csv
import itertools
import os
import time

import numpy as np
import pytest

import conftest
from conftest import make_blobs, make_parity, make_random
from oracles import brute_balanced_accuracy, expected_layer_widths, genome_diff_kind, valid_genome
from stackevo.cascade import fit_pipeline
from stackevo.cli import main
from stackevo.dataset import SplitSpec, load_csv, shuffle_split, write_csv
from stackevo.evolution import EAConfig, run
from stackevo.genome import SearchBounds, crossover, mutate, random_genome
from stackevo.metrics import balanced_accuracy
from stackevo.primitives import NodeSpec, catalog, catalog_names, fit, get_spec, predict
from stackevo.primitives.ensemble import AdaBoost, RandomForest
from stackevo.primitives.tree import DecisionTree

pytestmark = pytest.mark.slow

GRIDS = {s.name: s.hyper_grid for s in catalog()}
B53 = SearchBounds(5, 3)


def record(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def grid_points(name):
    grid = get_spec(name).hyper_grid
    for combo in itertools.product(*grid.values()):
        yield NodeSpec.make(name, dict(zip(grid, combo)))


def search_cli(tmp_path, data, out, *flags):
    out = str(tmp_path / out)
    code = main(["search", "--data", str(data), "--out", out, "--no-plots", *flags])
    assert code == 0
    return out


def test_1_width_law():
    t0 = time.perf_counter()
    d = make_random(40, 10, 3, seed=1)
    bad = 0
    for s in range(500):
        g = random_genome(B53, s)
        p = fit_pipeline(g, d, s)
        if p.layer_widths() != expected_layer_widths(10, g.shape):
            bad += 1
    elapsed = time.perf_counter() - t0
    record(1, "width law", bad == 0 and elapsed < 10.0,
           f"{500 - bad}/500 genomes match the column-counting oracle in {elapsed:.1f}s (limit 10s)")


def test_2_balanced_accuracy_oracle():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        k = int(rng.integers(2, 6))
        n = int(rng.integers(1, 201))
        y = rng.integers(0, k, n)
        p = rng.integers(0, k, n)
        worst = max(worst, abs(balanced_accuracy(y, p, k) - brute_balanced_accuracy(y.tolist(), p.tolist())))
    record(2, "balanced accuracy oracle", worst <= 1e-12, f"max |diff| over 1000 pairs = {worst:.1e} (tol 1e-12)")


def test_3_elitism_monotone():
    d = make_random(60, 4, 3, seed=3)
    violations = 0
    for s in range(20):
        cfg = EAConfig(population_n=8, iterations_m=6, bounds=B53, cv_folds=3, master_seed=s)
        bests = [r.best_score for r in run(cfg, d).reports]
        violations += sum(b < a for a, b in zip(bests, bests[1:]))
    record(3, "elitism monotonicity", violations == 0, f"{violations} decreases in best cv_score over 20 runs")


def test_4_variation_closure():
    rng = np.random.default_rng(4)
    pool = [random_genome(B53, s) for s in range(100)]
    allowed = B53.allowed_primitives
    invalid = not_one_step = 0
    for _ in range(10_000):
        g = pool[int(rng.integers(len(pool)))]
        child = mutate(g, B53, int(rng.integers(2**63)))
        invalid += not valid_genome(child, 5, 3, allowed, GRIDS)
        not_one_step += genome_diff_kind(g, child) is None
        pool[int(rng.integers(len(pool)))] = child
    for _ in range(10_000):
        a = pool[int(rng.integers(len(pool)))]
        b = pool[int(rng.integers(len(pool)))]
        c1, c2 = crossover(a, b, B53, int(rng.integers(2**63)))
        invalid += not valid_genome(c1, 5, 3, allowed, GRIDS)
        invalid += not valid_genome(c2, 5, 3, allowed, GRIDS)
        pool[int(rng.integers(len(pool)))] = c1
    record(4, "variation closure", invalid == 0 and not_one_step == 0,
           f"{invalid} invalid genomes and {not_one_step} non-single-step mutants "
           f"in 10^4 mutations + 10^4 crossovers")


def test_5_parallel_determinism(tmp_path):
    data = tmp_path / "d.csv"
    write_csv(make_random(120, 5, 3, seed=5), data)
    outs, times = {}, {}
    for w in (1, 4, 8):
        t0 = time.perf_counter()
        outs[w] = search_cli(tmp_path, data, f"w{w}", "--population", "20", "--iterations", "3",
                             "--workers", str(w), "--seed", "11")
        times[w] = time.perf_counter() - t0

    def payload(out):
        names = sorted(f for f in os.listdir(out) if f == "summary.csv" or f.startswith("pipeline_"))
        return {n: open(os.path.join(out, n), "rb").read() for n in names}

    ref = payload(outs[1])
    same = all(payload(outs[w]) == ref for w in (4, 8))
    slowest = max(times.values())
    record(5, "determinism under parallelism", same and slowest < 120.0,
           f"{len(ref)} files byte-identical across workers 1/4/8: {same}; "
           f"slowest run {slowest:.1f}s (limit 120s)")


def test_6_parity(tmp_path):
    d = make_parity(5, 8)
    train, test = shuffle_split(d, SplitSpec(0.8, 0))
    perceptron = max(
        balanced_accuracy(test.labels, predict(fit(spec, train, 0), test.features), 2)
        for spec in grid_points("perceptron")
    )
    data = tmp_path / "parity.csv"
    write_csv(d, data)
    t0 = time.perf_counter()
    out = search_cli(tmp_path, data, "parity", "--population", "20", "--iterations", "5",
                     "--max-layers", "5", "--max-nodes", "3", "--seed", "0")
    elapsed = time.perf_counter() - t0
    with open(os.path.join(out, "summary.csv")) as fh:
        best = float(next(csv.DictReader(fh))["test_score"])
    ok = perceptron <= 0.65 and best >= 0.95 and elapsed < 300
    record(6, "parity nonlinear check", ok,
           f"best perceptron test bal.acc {perceptron:.3f} (<= 0.65), search best test bal.acc {best:.3f} "
           f"(>= 0.95) in {elapsed:.1f}s (limit 300s)")


def test_7_blobs(tmp_path):
    d = make_blobs(200, seed=7)
    worst_name, worst = None, 2.0
    for name in catalog_names():
        for spec in grid_points(name):
            acc = balanced_accuracy(d.labels, predict(fit(spec, d, 0), d.features), 2)
            if acc < worst:
                worst_name, worst = spec.primitive, acc
    data = tmp_path / "blobs.csv"
    write_csv(d, data)
    t0 = time.perf_counter()
    out = search_cli(tmp_path, data, "blobs", "--population", "10", "--iterations", "2", "--seed", "0")
    elapsed = time.perf_counter() - t0
    with open(os.path.join(out, "summary.csv")) as fh:
        best = float(next(csv.DictReader(fh))["test_score"])
    ok = worst >= 0.9 and best >= 0.95 and elapsed < 60
    record(7, "separable blobs", ok,
           f"lowest training bal.acc over every grid point {worst:.3f} ({worst_name}, >= 0.9); "
           f"search test bal.acc {best:.3f} (>= 0.95) in {elapsed:.1f}s (limit 60s)")


def test_8_degenerate_ensembles():
    mismatches = checks = 0
    for s in range(5):
        d = make_random(80 + 10 * s, 3 + s, 2 + s % 3, seed=100 + s)
        k = d.n_classes
        probe = np.random.default_rng(s).normal(size=(200, d.n_cols))
        for depth in (3, 5, 8, None):
            rf = RandomForest(n_estimators=1, max_depth=depth, max_features="all", bootstrap=False)
            rf.fit(d.features, d.labels, k, np.random.default_rng(s))
            dt = DecisionTree(max_depth=depth, min_samples_leaf=1, criterion="gini")
            dt.fit(d.features, d.labels, k, np.random.default_rng(s))
            mismatches += not np.array_equal(rf.predict(probe), dt.predict(probe))
            checks += 1
        for depth in (1, 2, 3):
            ada = AdaBoost(n_estimators=1, max_depth=depth).fit(d.features, d.labels, k, np.random.default_rng(s))
            base = DecisionTree(max_depth=depth).fit(d.features, d.labels, k, np.random.default_rng(s))
            mismatches += not np.array_equal(ada.predict(probe), base.predict(probe))
            checks += 1
    record(8, "degenerate ensembles", mismatches == 0,
           f"{checks - mismatches}/{checks} forest-of-one and boost-of-one comparisons identical on 5 datasets")


def test_9_serialization_round_trip(tmp_path):
    data = tmp_path / "d.csv"
    write_csv(make_random(150, 4, 3, seed=9), data)
    out = search_cli(tmp_path, data, "rt", "--population", "20", "--iterations", "2", "--seed", "3")

    # same run in process, predictions from the live (never serialized) pipelines
    d = load_csv(data, -1)
    train, test = shuffle_split(d, SplitSpec(0.8, 3))
    result = run(EAConfig(population_n=20, iterations_m=2, bounds=B53, master_seed=3), train)
    pipes = sorted(f for f in os.listdir(out) if f.startswith("pipeline_"))
    assert len(pipes) == len(result.ranked) == 10
    mismatched = 0
    for k, (pipe, _) in enumerate(result.ranked, start=1):
        dest = tmp_path / f"pred_{k}.csv"
        assert main(["predict", "--pipeline", os.path.join(out, f"pipeline_{k}.json"),
                     "--data", os.path.join(out, "test.csv"), "--out", str(dest)]) == 0
        with open(dest, newline="") as fh:
            got = [r[0] for r in list(csv.reader(fh))[1:]]
        want = [d.class_names[c] for c in pipe.predict(test.features)]
        mismatched += got != want
    record(9, "serialization round trip", mismatched == 0,
           f"{10 - mismatched}/10 top pipelines reproduce in-process test predictions via `predict`")
