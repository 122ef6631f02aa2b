"""Adam from scratch and the Lamarckian refinement step."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ShapeError
from .genome import Bounds, Individual, clamp


@dataclass
class EvalCounter:
    """Budget bookkeeping shared by an engine and the refinements it launches."""

    objective: int = 0
    gradient: int = 0


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def fresh(cls, dim: int, lr: float = 0.001, **kw) -> "AdamState":
        return cls(np.zeros(dim), np.zeros(dim), 0, lr, **kw)


def adam_step(state: AdamState, genes: np.ndarray, grad: np.ndarray) -> tuple[AdamState, np.ndarray]:
    """One bias-corrected Adam update. Returns new state and genome; inputs are not mutated."""
    genes = np.asarray(genes, dtype=float)
    grad = np.asarray(grad, dtype=float)
    if grad.shape != genes.shape or state.m.shape != genes.shape:
        raise ShapeError(f"gradient {grad.shape}, genome {genes.shape}, state {state.m.shape} must match")
    t = state.t + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    with np.errstate(over="ignore"):
        v = state.beta2 * state.v + (1.0 - state.beta2) * grad * grad
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    new_genes = genes - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return replace(state, m=m, v=v, t=t), new_genes


def lamarckian_refine(ind: Individual, obj, iters: int, lr: float, bounds: Bounds,
                      counter: EvalCounter | None = None, snap=None) -> Individual:
    """Run ``iters`` Adam steps from a fresh state and write the result back into the genome.

    The final genome is clamped into ``bounds`` (and passed through ``snap``
    when the population uses a quantized encoding), then evaluated once.
    ``iters == 0`` returns ``ind`` untouched without spending an evaluation.
    """
    if iters < 0:
        raise ValueError("iters must be >= 0")
    if iters == 0:
        return ind
    state = AdamState.fresh(ind.genes.size, lr)
    genes = ind.genes
    for _ in range(iters):
        state, genes = adam_step(state, genes, obj.gradient(genes))
    genes = clamp(genes, bounds)
    if snap is not None:
        genes = snap(genes)
    val = obj.evaluate(genes)
    if counter is not None:
        counter.gradient += iters
        counter.objective += 1
    return replace(ind, genes=genes, fitness=val.fitness, loss=val.loss, accuracy=val.accuracy)
