import csv
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lamarck.engines import CSV_COLUMNS
from lamarck.errors import ComparisonError, ConfigError, DataError
from lamarck.harness.cli import main
from lamarck.harness.compare import compare, generations_to_threshold, to_csv, to_text
from lamarck.harness.config import DATA_DEFAULTS, parse_config
from lamarck.harness.metrics import roc_curve
from lamarck.harness.runner import read_history_csv

SMALL_DATA = """
synth_classes = 4
synth_features = 8
synth_per_class = 30
synth_separation = 3.0
synth_noise_sd = 0.5
"""


def write_config(tmp_path, name, body):
    path = tmp_path / name
    path.write_text(body)
    return path


def mann_whitney_auc(s, positive):
    """Probability that a random positive outscores a random negative, ties counted half."""
    p, n = s[positive], s[~positive]
    greater = (p[:, None] > n[None, :]).sum()
    ties = (p[:, None] == n[None, :]).sum()
    return (greater + 0.5 * ties) / (p.size * n.size)


def binary_scores(s):
    return np.column_stack([1.0 - s, s])


# ---------------------------------------------------------------- config

def test_parse_config_basic(tmp_path):
    cfg = parse_config("algorithm = ga  # comment\n\n# full line\nseeds = 1, 2\npopulation_size = 20\n"
                       "ls_iters = 2\neta_c = 10\n", tmp_path)
    assert cfg.seeds == [1, 2]
    engine = cfg.engine_config(2)
    assert engine.population_size == 20 and engine.seed == 2
    assert engine.operators.eta_c == 10
    assert engine.local_search.iters == 2


def test_config_defaults_per_algorithm(tmp_path):
    memetic = parse_config("algorithm = memetic", tmp_path).engine_config(0)
    assert memetic.population_size == 50 and memetic.generations == 100
    assert (memetic.local_search.iters, memetic.local_search.lr) == (5, 0.001)
    assert memetic.operators.crossover_prob == 0.9
    ga = parse_config("algorithm = ga", tmp_path).engine_config(0)
    assert ga.population_size == 100 and ga.local_search is None
    assert (ga.lower, ga.upper) == (-1.0, 1.0)
    cfg = parse_config("algorithm = ga", tmp_path)
    assert {k: cfg.get(k) for k in DATA_DEFAULTS} == DATA_DEFAULTS


@pytest.mark.parametrize("text", [
    "algorithm = ga\npopulation = 10",        # unknown key
    "algorithm = ga\nalgorithm = pso",        # duplicate
    "population_size = 10",                   # no algorithm
    "algorithm = ga\ngenerations = many",     # bad value
    "algorithm = ga\nsurvival = sometimes",   # invalid engine setting
    "algorithm = ga\njust words",             # not key = value
    "algorithm = sgd",
])
def test_config_rejects(text, tmp_path):
    with pytest.raises(ConfigError):
        parse_config(text, tmp_path)


def test_cli_bad_config_exits_nonzero(tmp_path, capsys):
    path = write_config(tmp_path, "bad.cfg", "algorithm = ga\nfoo = 1\n")
    assert main(["run", str(path)]) != 0
    assert "unknown key" in capsys.readouterr().err


# ---------------------------------------------------------------- run

def test_cli_run_memetic_defaults(tmp_path):
    path = write_config(tmp_path, "m.cfg", "algorithm = memetic\noutput_dir = out\n" + SMALL_DATA)
    assert main(["run", str(path)]) == 0
    rows = read_history_csv(tmp_path / "out" / "memetic_0.csv")
    assert len(rows) == 101
    assert [r["generation"] for r in rows] == list(range(101))
    with open(tmp_path / "out" / "memetic_0.csv") as fh:
        assert tuple(next(csv.reader(fh))) == CSV_COLUMNS
    # closed-form evaluation budget: mu (G + 1) fitness and iters mu (G + 1) gradient evaluations
    assert rows[-1]["obj_evals"] == 50 * 101
    assert rows[-1]["grad_evals"] == 5 * 50 * 101
    summary = json.loads((tmp_path / "out" / "memetic_0.json").read_text())
    assert summary["seed"] == 0 and summary["algorithm"] == "memetic"
    assert summary["config"]["synth_classes"] == 4
    assert 0.0 <= summary["final"]["test"]["accuracy"] <= 1.0
    assert len(summary["dataset_hash"]) == 64


def test_cli_run_byte_identical(tmp_path):
    body = "algorithm = memetic\ngenerations = 10\ntiming = off\nseeds = 3\n" + SMALL_DATA
    outputs = []
    for name in ("a", "b"):
        path = write_config(tmp_path, f"{name}.cfg", body + f"output_dir = {name}\n")
        assert main(["run", str(path)]) == 0
        outputs.append((tmp_path / name / "memetic_3.csv").read_bytes())
    assert outputs[0] == outputs[1]


def test_cli_run_generations_zero(tmp_path):
    path = write_config(tmp_path, "z.cfg", "algorithm = ga\ngenerations = 0\npopulation_size = 6\n" + SMALL_DATA)
    assert main(["run", str(path)]) == 0
    rows = read_history_csv(tmp_path / "runs" / "ga_0.csv")
    assert len(rows) == 1 and rows[0]["generation"] == 0


@pytest.mark.parametrize("algorithm,mu,iters", [("ga", 8, 0), ("pso", 8, 0), ("nsga2", 8, 0),
                                                 ("memetic", 6, 3), ("adam", 1, 0)])
def test_cli_eval_counts_reconcile(tmp_path, algorithm, mu, iters):
    G = 7
    body = f"algorithm = {algorithm}\ngenerations = {G}\npopulation_size = {mu}\n" + SMALL_DATA
    if algorithm == "memetic":
        body += f"ls_iters = {iters}\n"
    path = write_config(tmp_path, "c.cfg", body)
    assert main(["run", str(path)]) == 0
    rows = read_history_csv(tmp_path / "runs" / f"{algorithm}_0.csv")
    for r in rows:
        g = r["generation"]
        if algorithm == "adam":
            assert (r["obj_evals"], r["grad_evals"]) == (g + 1, g)
        else:
            assert r["obj_evals"] == mu * (g + 1)
            assert r["grad_evals"] == iters * mu * (g + 1)


def test_cli_run_benchmark_and_dataset_file(tmp_path):
    data = tmp_path / "blobs.bin"
    assert main(["gen-data", "classes=3", "features=5", "per_class=12", "-o", str(data)]) == 0
    path = write_config(tmp_path, "f.cfg", "algorithm = pso\ngenerations = 3\npopulation_size = 5\n"
                                           "dataset = blobs.bin\nseeds = 0, 1\n")
    assert main(["run", str(path)]) == 0
    assert (tmp_path / "runs" / "pso_1.csv").exists()
    path = write_config(tmp_path, "s.cfg", "algorithm = ga\nbenchmark = sphere\nbenchmark_dim = 4\n"
                                           "generations = 5\npopulation_size = 10\n")
    assert main(["run", str(path)]) == 0
    summary = json.loads((tmp_path / "runs" / "ga_0.json").read_text())
    assert summary["final"]["train"]["accuracy"] is None


def test_cli_run_parallel_matches_sequential(tmp_path):
    body = "algorithm = ga\ngenerations = 5\npopulation_size = 8\ntiming = off\nseeds = 0, 1\n" + SMALL_DATA
    for name, workers in (("seq", 1), ("par", 2)):
        path = write_config(tmp_path, f"{name}.cfg", body + f"workers = {workers}\noutput_dir = {name}\n")
        assert main(["run", str(path)]) == 0
    for seed in (0, 1):
        assert (tmp_path / "seq" / f"ga_{seed}.csv").read_bytes() == (tmp_path / "par" / f"ga_{seed}.csv").read_bytes()


def test_memetic_zero_iters_csv_matches_ga(tmp_path):
    common = "generations = 8\npopulation_size = 10\ntiming = off\nseeds = 4\n" + SMALL_DATA
    write_config(tmp_path, "ga.cfg", "algorithm = ga\noutput_dir = g\n" + common)
    write_config(tmp_path, "mem.cfg", "algorithm = memetic\nls_iters = 0\noutput_dir = m\n" + common)
    assert main(["run", str(tmp_path / "ga.cfg")]) == 0
    assert main(["run", str(tmp_path / "mem.cfg")]) == 0
    assert (tmp_path / "g" / "ga_4.csv").read_bytes() == (tmp_path / "m" / "memetic_4.csv").read_bytes()


# ---------------------------------------------------------------- compare

@pytest.fixture
def two_runs(tmp_path):
    body = "generations = 6\npopulation_size = 8\ntiming = off\n" + SMALL_DATA
    write_config(tmp_path, "ga.cfg", "algorithm = ga\n" + body)
    write_config(tmp_path, "mem.cfg", "algorithm = memetic\n" + body)
    assert main(["run", str(tmp_path / "ga.cfg")]) == 0
    assert main(["run", str(tmp_path / "mem.cfg")]) == 0
    return tmp_path / "runs" / "ga_0.csv", tmp_path / "runs" / "memetic_0.csv"


def test_compare_rows(two_runs, tmp_path, capsys):
    header, table = compare(list(two_runs), thresholds=[0.3, 1.01])
    assert header == ["metric", "ga_0", "memetic_0"]
    assert [row[0] for row in table[:4]] == ["Train Loss", "Vall Loss", "Train Acc", "Vall Acc"]
    assert table[-1] == ["Gens to Train Acc >= 1.01", "not reached", "not reached"]
    assert to_csv(header, table).splitlines()[0] == "metric,ga_0,memetic_0"
    assert "Vall Acc" in to_text(header, table)
    out = tmp_path / "cmp.csv"
    assert main(["compare", *map(str, two_runs), "-t", "0.3", "-o", str(out)]) == 0
    assert "Train Loss" in capsys.readouterr().out
    assert out.read_text().startswith("metric,")


def test_compare_needs_two_runs(two_runs):
    with pytest.raises(ComparisonError):
        compare([two_runs[0]])
    assert main(["compare", str(two_runs[0])]) == 2


def test_compare_hash_mismatch(two_runs, tmp_path):
    write_config(tmp_path, "other.cfg", "algorithm = pso\ngenerations = 2\npopulation_size = 4\n"
                                        "output_dir = other\n" + SMALL_DATA.replace("30", "31"))
    assert main(["run", str(tmp_path / "other.cfg")]) == 0
    with pytest.raises(ComparisonError):
        compare([two_runs[0], tmp_path / "other" / "pso_0.csv"])


def test_generations_to_threshold_definition():
    rows = [{"generation": g, "train_acc": a} for g, a in enumerate([0.1, 0.4, 0.3, 0.6])]
    assert generations_to_threshold(rows, 0.35) == 1
    assert generations_to_threshold(rows, 0.6) == 3
    assert generations_to_threshold(rows, 0.7) is None


# ---------------------------------------------------------------- ROC

def test_roc_perfect():
    s = np.array([0.9, 0.8, 0.3, 0.1])
    points, auc = roc_curve(binary_scores(s), np.array([1, 1, 0, 0]), 1)
    assert auc == 1.0
    assert (points[0].fpr, points[0].tpr) == (0.0, 0.0)
    assert (points[-1].fpr, points[-1].tpr) == (1.0, 1.0)


def test_roc_identical_scores():
    points, auc = roc_curve(binary_scores(np.full(6, 0.4)), np.array([0, 1, 0, 1, 1, 0]), 1)
    assert auc == 0.5
    assert len(points) == 2


def test_roc_random_matches_rank_oracle():
    rng = np.random.default_rng(0)
    s = rng.random(200)
    labels = np.repeat([0, 1], 100)
    rng.shuffle(labels)
    points, auc = roc_curve(binary_scores(s), labels, 1)
    assert abs(auc - 0.5) <= 0.1
    assert abs(auc - mann_whitney_auc(s, labels == 1)) <= 1e-9


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2**31 - 1), st.integers(2, 11))
def test_roc_properties(n, seed, levels):
    rng = np.random.default_rng(seed)
    # quantized scores force ties
    s = rng.integers(0, levels, n) / (levels - 1)
    labels = rng.integers(0, 2, n)
    labels[0], labels[1] = 0, 1
    points, auc = roc_curve(binary_scores(s), labels, 1)
    fpr = np.array([p.fpr for p in points])
    tpr = np.array([p.tpr for p in points])
    assert np.all(np.diff(fpr) >= 0) and np.all(np.diff(tpr) >= 0)
    assert (fpr[0], tpr[0], fpr[-1], tpr[-1]) == (0.0, 0.0, 1.0, 1.0)
    assert abs(auc - mann_whitney_auc(s, labels == 1)) <= 1e-9


def test_roc_errors():
    scores = binary_scores(np.array([0.2, 0.7]))
    with pytest.raises(DataError):
        roc_curve(scores, np.array([0, 0]), 1)
    with pytest.raises(DataError):
        roc_curve(np.array([[0.5, 0.6], [0.5, 0.5]]), np.array([0, 1]), 1)
    with pytest.raises(DataError):
        roc_curve(scores, np.array([1, 1]), 1)


def test_cli_roc(tmp_path, capsys):
    path = write_config(tmp_path, "r.cfg", "algorithm = adam\ngenerations = 30\n" + SMALL_DATA)
    assert main(["run", str(path)]) == 0
    assert main(["roc", str(tmp_path / "runs"), "--class", "2"]) == 0
    out = tmp_path / "runs" / "adam_0_roc_class2.csv"
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["threshold", "fpr", "tpr"]
    assert (float(rows[1][1]), float(rows[1][2])) == (0.0, 0.0)
    assert (float(rows[-1][1]), float(rows[-1][2])) == (1.0, 1.0)
    assert "AUC=" in capsys.readouterr().out


def test_cli_gen_data(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["gen-data", "classes=3", "features=4", "per_class=5", "seed=2", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "f0,f1,f2,f3,label"
    assert len(lines) == 16
    assert main(["gen-data", "colour=red", "-o", str(out)]) == 2
