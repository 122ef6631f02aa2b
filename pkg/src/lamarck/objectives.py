"""Fitness functions: the softmax classifier layer, the L2 regularizer, benchmark functions.

A classifier genome is the flattened weight matrix ``W`` (C x F, row-major)
followed by the bias vector ``b`` (C).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import FeatureDataset
from .errors import ConfigError, DataError, ShapeError


def loss_to_fitness(loss: float) -> float:
    """Positive, bounded and strictly decreasing in the loss, so usable for roulette selection."""
    return 1.0 / (1.0 + loss)


@dataclass(frozen=True)
class ObjectiveValue:
    loss: float
    accuracy: float
    fitness: float

    @classmethod
    def from_loss(cls, loss: float, accuracy: float = math.nan) -> "ObjectiveValue":
        return cls(float(loss), float(accuracy), loss_to_fitness(float(loss)))


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def l2_regularizer(genes: np.ndarray) -> float:
    genes = np.asarray(genes, dtype=float)
    return float(genes @ genes)


def sphere(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    return float(x @ x)


def rastrigin(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


_BENCHMARKS = {
    "sphere": (sphere, lambda x: 2.0 * x),
    "rastrigin": (rastrigin, lambda x: 2.0 * x + 20.0 * np.pi * np.sin(2.0 * np.pi * x)),
}


def benchmark(name: str, x: np.ndarray) -> float:
    try:
        f, _ = _BENCHMARKS[name]
    except KeyError:
        raise ConfigError(f"unknown benchmark {name!r}; choose from {sorted(_BENCHMARKS)}") from None
    return f(x)


class LinearSoftmaxObjective:
    """Cross-entropy of a linear softmax layer over a fixed feature dataset.

    Pure and read-only: evaluation draws no randomness and never mutates the
    dataset, so distinct genomes may be evaluated concurrently.
    """

    has_gradient = True
    is_classifier = True

    def __init__(self, dataset: FeatureDataset):
        self.dataset = dataset
        self.n_classes = dataset.n_classes
        self.n_features = dataset.n_features
        self.dim = self.n_classes * self.n_features + self.n_classes
        # samples along the last axis: class-wise reductions run over contiguous memory
        self._parts = {}
        for s in ("train", "val", "test"):
            X, y = dataset.part(s)
            self._parts[s] = (X, np.ascontiguousarray(X.T), y)

    def unpack(self, genes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        genes = np.asarray(genes, dtype=float)
        if genes.shape != (self.dim,):
            raise ShapeError(f"genome has shape {genes.shape}, objective expects ({self.dim},)")
        C, F = self.n_classes, self.n_features
        return genes[: C * F].reshape(C, F), genes[C * F:]

    def _split(self, split: str):
        try:
            X, XT, y = self._parts[split]
        except KeyError:
            raise DataError(f"unknown split {split!r}") from None
        if y.size == 0:
            raise DataError(f"split {split!r} is empty")
        return X, XT, y

    def _logits_t(self, genes: np.ndarray, split: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        W, b = self.unpack(genes)
        X, XT, y = self._split(split)
        return W @ XT + b[:, None], X, y

    def logits(self, genes: np.ndarray, split: str = "train") -> np.ndarray:
        """Per-sample logits, shape (n, C)."""
        return self._logits_t(genes, split)[0].T

    def probabilities(self, genes: np.ndarray, split: str = "train") -> np.ndarray:
        return softmax(self.logits(genes, split))

    def evaluate(self, genes: np.ndarray, split: str = "train") -> ObjectiveValue:
        z, _, y = self._logits_t(genes, split)
        cols = np.arange(y.size)
        shifted = z - z.max(axis=0)
        log_norm = np.log(np.exp(shifted).sum(axis=0))
        loss = float(np.mean(log_norm - shifted[y, cols]))
        acc = float(np.mean(np.argmax(z, axis=0) == y))
        return ObjectiveValue.from_loss(max(loss, 0.0), acc)

    def gradient(self, genes: np.ndarray) -> np.ndarray:
        """Gradient of the mean training cross-entropy, in genome order."""
        z, X, y = self._logits_t(genes, "train")
        p = np.exp(z - z.max(axis=0))
        p /= p.sum(axis=0)
        p[y, np.arange(y.size)] -= 1.0
        p /= y.size
        return np.concatenate([(p @ X).ravel(), p.sum(axis=1)])

    def mo_objectives(self, genes: np.ndarray) -> tuple[ObjectiveValue, np.ndarray]:
        """Minimization pair (1 - accuracy, sum of squared weights)."""
        val = self.evaluate(genes)
        return val, np.array([1.0 - val.accuracy, l2_regularizer(genes)])


class BenchmarkObjective:
    """Closed-form test function wearing the objective interface.

    There are no data splits, so every split reports the same value and the
    accuracy is NaN.
    """

    has_gradient = True
    is_classifier = False

    def __init__(self, name: str, dim: int):
        if name not in _BENCHMARKS:
            raise ConfigError(f"unknown benchmark {name!r}; choose from {sorted(_BENCHMARKS)}")
        if dim < 1:
            raise ShapeError("dim must be >= 1")
        self.name = name
        self.dim = dim
        self._f, self._grad = _BENCHMARKS[name]

    def _check(self, genes):
        genes = np.asarray(genes, dtype=float)
        if genes.shape != (self.dim,):
            raise ShapeError(f"genome has shape {genes.shape}, objective expects ({self.dim},)")
        return genes

    def evaluate(self, genes: np.ndarray, split: str = "train") -> ObjectiveValue:
        return ObjectiveValue.from_loss(self._f(self._check(genes)))

    def gradient(self, genes: np.ndarray) -> np.ndarray:
        return self._grad(self._check(genes))

    def mo_objectives(self, genes: np.ndarray) -> tuple[ObjectiveValue, np.ndarray]:
        val = self.evaluate(genes)
        return val, np.array([val.loss, l2_regularizer(genes)])


def eval_softmax(genes: np.ndarray, obj: LinearSoftmaxObjective, split: str = "train") -> ObjectiveValue:
    return obj.evaluate(genes, split)


def grad_softmax(genes: np.ndarray, obj: LinearSoftmaxObjective) -> np.ndarray:
    return obj.gradient(genes)
