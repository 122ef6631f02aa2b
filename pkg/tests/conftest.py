import numpy as np
import pytest

from lamarck.data import FeatureDataset, split, synth_blobs
from lamarck.objectives import LinearSoftmaxObjective

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_blobs():
    return split(synth_blobs(4, 6, 30, 3.0, 1.0, seed=3), seed=3)


@pytest.fixture(scope="session")
def small_objective(small_blobs):
    return LinearSoftmaxObjective(small_blobs)


@pytest.fixture
def tiny_dataset(rng):
    X = rng.normal(size=(8, 3))
    y = np.array([0, 1, 2, 0, 1, 2, 0, 1])
    return FeatureDataset(X, y, 3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
