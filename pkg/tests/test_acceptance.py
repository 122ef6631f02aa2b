"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line (collected again in the terminal summary
under "acceptance criteria") and then asserts the criterion. The comparison
criteria share one session-scoped suite: every engine variant on the
standard blobs dataset (10 classes, 32 features, 200 samples per class) for
five seeds.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from lamarck.data import FeatureDataset, split, synth_blobs
from lamarck.engines import EngineConfig, LocalSearchParams, run
from lamarck.engines.nsga2 import fast_non_dominated_sort
from lamarck.genome import Bounds, Individual
from lamarck.harness.experiments import SEEDS, blobs_objective, run_variants
from lamarck.harness.metrics import roc_curve
from lamarck.harness.runner import write_history_csv
from lamarck.local_search import AdamState, adam_step
from lamarck.objectives import BenchmarkObjective, LinearSoftmaxObjective
from lamarck.operators import (OperatorParams, polynomial_delta, polynomial_mutation, roulette_indices,
                               sbx_beta, sbx_children)


def report(number, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def at_least_4_of_5(flags):
    return sum(bool(f) for f in flags) >= 4


@pytest.fixture(scope="session")
def blobs():
    return blobs_objective()


@pytest.fixture(scope="session")
def suite(blobs):
    return run_variants(blobs, ["memetic", "adam", "ga", "ga_generational", "memetic_gray", "nsga2"])


def brute_force_dominance(F):
    n, m = F.shape
    rows = [tuple(r) for r in F.tolist()]
    dom = [[False] * n for _ in range(n)]
    for i in range(n):
        a = rows[i]
        for j in range(n):
            b = rows[j]
            dom[i][j] = all(a[k] <= b[k] for k in range(m)) and any(a[k] < b[k] for k in range(m))
    return dom


def brute_force_fronts(F):
    dom = brute_force_dominance(F)
    remaining = list(range(len(F)))
    fronts = []
    while remaining:
        front = [i for i in remaining if not any(dom[j][i] for j in remaining)]
        fronts.append(front)
        remaining = [i for i in remaining if i not in front]
    return fronts


# ---------------------------------------------------------------- 1. ordering

def test_1_ordering(suite):
    rows, gaps = [], []
    for s in SEEDS:
        m = suite.get("memetic", s).final.train_acc
        a = suite.get("adam", s).final.train_acc
        g = suite.get("ga", s).final.train_acc
        rows.append(m >= a >= g)
        gaps.append(m - g)
    seconds = sum(suite.seconds[v] for v in ("memetic", "adam", "ga"))
    ok = at_least_4_of_5(rows) and min(gaps) >= 0.10 and seconds < 300
    report(1, "memetic >= Adam >= GA", ok,
           f"ordering on {sum(rows)}/5 seeds, min GA gap {100 * min(gaps):.1f}pp, {seconds:.0f}s")


# ---------------------------------------------------------------- 2. convergence speed

def test_2_convergence_speed(suite):
    to_ga, to_adam = [], []
    for s in SEEDS:
        memetic, adam, ga = suite.get("memetic", s), suite.get("adam", s), suite.get("ga", s)
        g = memetic.generations_to(ga.final.train_acc)
        to_ga.append(g is not None and g <= 50)
        target = adam.final.train_acc
        mg, ag = memetic.generations_to(target), adam.generations_to(target)
        to_adam.append(mg is not None and mg <= ag)
    ok = at_least_4_of_5(to_ga) and at_least_4_of_5(to_adam)
    report(2, "memetic convergence speed", ok,
           f"reaches GA final within 50 gens on {sum(to_ga)}/5, "
           f"reaches Adam final no later than Adam on {sum(to_adam)}/5")


# ---------------------------------------------------------------- 3. NSGA-II slowdown

def test_3_nsga2_slower(suite):
    slower = []
    for s in SEEDS:
        slower.append(suite.get("memetic", s).records[50].train_acc
                      >= suite.get("nsga2", s).records[50].train_acc)
    clean = True
    for s in SEEDS:
        F = np.array([ind.objectives for ind in suite.fronts["nsga2", s]])
        dom = brute_force_dominance(F)
        clean &= not any(any(row) for row in dom)
    ok = at_least_4_of_5(slower) and clean
    report(3, "NSGA-II slower than memetic", ok,
           f"memetic >= NSGA-II at gen 50 on {sum(slower)}/5, final fronts non-dominated: {clean}")


# ---------------------------------------------------------------- 4. steady-state vs generational

def test_4_steady_state_faster(suite):
    ss = {s: suite.get("ga", s) for s in SEEDS}
    gen = {s: suite.get("ga_generational", s) for s in SEEDS}
    # a common grid of thresholds every generational run reaches
    top = min(h.final.train_acc for h in gen.values())
    thresholds = np.round(np.arange(0.01, top + 1e-12, 0.01), 2)

    def first(s, t):
        a, b = ss[s].generations_to(t), gen[s].generations_to(t)
        return a is not None and a <= b

    # each threshold is fixed across seeds, then seeds are counted
    per_threshold = {t: sum(first(s, t) for s in SEEDS) for t in thresholds}
    weakest = min(per_threshold.values())
    # stricter seed-first reading, reported for reference: seeds winning at every threshold at once
    every = sum(all(first(s, t) for t in thresholds) for s in SEEDS)
    report(4, "steady-state reaches thresholds first", weakest >= 4,
           f"{len(thresholds)} thresholds up to {top:.2f}, worst threshold won on {weakest}/5 seeds "
           f"(seeds winning every threshold: {every}/5)")


# ---------------------------------------------------------------- 5. encoding insensitivity

def test_5_encoding(suite):
    diffs = [abs(suite.get("memetic", s).final.train_acc - suite.get("memetic_gray", s).final.train_acc)
             for s in SEEDS]
    mean = float(np.mean(diffs))
    report(5, "real vs Gray memetic", mean <= 0.05, f"mean |difference| {100 * mean:.2f}pp")


# ---------------------------------------------------------------- 6. operators

def test_6_operator_suite(suite):
    rng = np.random.default_rng(6)
    checks = {}

    # SBX preserves the parent mean
    worst = 0.0
    for _ in range(10_000):
        a, b = rng.uniform(-5, 5, 2)
        c1, c2 = sbx_children(a, b, sbx_beta(rng.random(), 15.0))
        worst = max(worst, abs((c1 + c2) - (a + b)) / 2)
    checks["SBX mean"] = worst <= 1e-12

    # polynomial mutation never leaves the box: the raw perturbation, before any clipping,
    # on 10^5 random (position, u, box) cases, then the full operator
    lo = rng.uniform(-3, 0, 100_000)
    hi = lo + rng.uniform(1e-3, 4, 100_000)
    x = lo + rng.random(100_000) * (hi - lo)
    raw = x + polynomial_delta(x, rng.random(100_000), 20.0, lo, hi) * (hi - lo)
    inside = bool(np.all((raw >= lo) & (raw <= hi)))
    y = polynomial_mutation(x, OperatorParams(mutation_prob=1.0), Bounds(lo, hi), rng)
    checks["PM closure"] = inside and bool(np.all((y >= lo) & (y <= hi)))

    # u = 0.5 fixed points
    c1, c2 = sbx_children(0.2, 0.7, sbx_beta(0.5, 15.0))
    checks["u=0.5"] = (sbx_beta(0.5, 15.0) == 1.0 and (c1, c2) == (0.2, 0.7)
                       and polynomial_delta(0.3, 0.5, 20.0, -1.0, 1.0) == 0.0)

    # roulette frequencies
    fitness = np.array([0.1, 0.2, 0.3, 0.4])
    pop = [Individual(np.zeros(1), float(f)) for f in fitness]
    counts = np.bincount(roulette_indices(pop, 100_000, rng), minlength=4)
    checks["roulette"] = bool(np.all(np.abs(counts / 1e5 - fitness / fitness.sum()) <= 0.01))

    # best fitness never drops on the full seeded runs (steady-state, and generational with an elite)
    monotone = all(np.all(np.diff(suite.get(v, s).column("best_fitness")) >= 0)
                   for v in ("ga", "ga_generational", "memetic") for s in SEEDS)
    checks["elitism monotone"] = monotone

    failed = [k for k, v in checks.items() if not v]
    report(6, "operator properties", not failed,
           "all hold" if not failed else "failed: " + ", ".join(failed))


# ---------------------------------------------------------------- 7. numerics

def test_7_numerical_suite():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        C, F, n = rng.integers(2, 6), rng.integers(1, 6), rng.integers(3, 12)
        obj = LinearSoftmaxObjective(FeatureDataset(rng.normal(size=(n, F)), rng.integers(0, C, n), int(C)))
        w = rng.normal(size=obj.dim)
        g = obj.gradient(w)
        h = 1e-5
        for k in range(obj.dim):
            e = np.zeros(obj.dim)
            e[k] = h
            fd = (obj.evaluate(w + e).loss - obj.evaluate(w - e).loss) / (2 * h)
            worst = max(worst, abs(fd - g[k]) / max(abs(fd), abs(g[k]), 1e-8))
    blobs = LinearSoftmaxObjective(split(synth_blobs(10, 32, 20, 3.0, 0.5, seed=0)))
    zero_err = abs(blobs.evaluate(np.zeros(blobs.dim)).loss - np.log(10))
    _, x = adam_step(AdamState.fresh(50, 0.001), np.zeros(50), np.ones(50))
    step_err = float(np.max(np.abs(np.abs(x) - 0.001)))
    ok = worst <= 1e-4 and zero_err <= 1e-9 and step_err <= 1e-6
    report(7, "numerics", ok,
           f"max FD rel err {worst:.2e}, zero-genome |loss - ln C| {zero_err:.1e}, Adam step err {step_err:.1e}")


# ---------------------------------------------------------------- 8. oracles

def test_8_oracle_equivalence(tmp_path):
    rng = np.random.default_rng(8)
    sort_ok = 0
    for _ in range(1000):
        m = int(rng.integers(2, 4))
        # half the populations on a coarse grid so ties and weak dominance appear
        F = rng.integers(0, 6, size=(50, m)).astype(float) if rng.random() < 0.5 else rng.random((50, m))
        sort_ok += fast_non_dominated_sort(F) == brute_force_fronts(F)

    auc_err = 0.0
    for _ in range(200):
        s = rng.integers(0, 20, 200) / 19 if rng.random() < 0.5 else rng.random(200)
        labels = rng.integers(0, 2, 200)
        labels[:2] = (0, 1)
        _, auc = roc_curve(np.column_stack([1 - s, s]), labels, 1)
        p, q = s[labels == 1], s[labels == 0]
        u = ((p[:, None] > q[None, :]).sum() + 0.5 * (p[:, None] == q[None, :]).sum()) / (p.size * q.size)
        auc_err = max(auc_err, abs(auc - u))

    obj = blobs_objective(n_per_class=40)
    ga = EngineConfig.defaults_for("ga", seed=2, generations=30)
    memetic = ga.with_(algorithm="memetic", local_search=LocalSearchParams(iters=0))
    write_history_csv(run(ga, obj, timing=False), tmp_path / "ga.csv")
    write_history_csv(run(memetic, obj, timing=False), tmp_path / "memetic.csv")
    same = (tmp_path / "ga.csv").read_bytes() == (tmp_path / "memetic.csv").read_bytes()

    ok = sort_ok == 1000 and auc_err <= 1e-9 and same
    report(8, "oracle equivalence", ok,
           f"sort matches brute force {sort_ok}/1000, max AUC gap {auc_err:.1e}, iters=0 CSV identical: {same}")


# ---------------------------------------------------------------- 9. benchmark sanity

def test_9_sphere_sanity():
    sphere = BenchmarkObjective("sphere", 10)
    t0 = time.perf_counter()
    results = {}
    for algorithm in ("ga", "pso", "memetic"):
        results[algorithm] = max(
            sphere.evaluate(run(EngineConfig.defaults_for(algorithm, seed=s), sphere).best_genes).loss
            for s in SEEDS)
    seconds = time.perf_counter() - t0
    ok = all(v < 0.05 for v in results.values()) and seconds < 30
    report(9, "sphere D=10", ok,
           ", ".join(f"{k} worst {v:.1e}" for k, v in results.items()) + f" over 5 seeds, {seconds:.1f}s")
