"""NSGA-II: fast non-dominated sorting, crowding distance, elitist survival."""

from __future__ import annotations

from dataclasses import replace
from typing import Sequence

import numpy as np

from ..errors import DataError
from ..genome import Individual, clamp
from ..local_search import EvalCounter
from .config import EngineConfig
from .evolution import initial_genomes, make_bounds, vary
from .history import Clock, GenerationRecord, RunHistory, validation_metrics


def _objective_matrix(pop) -> np.ndarray:
    if isinstance(pop, np.ndarray):
        F = np.asarray(pop, dtype=float)
    else:
        F = np.array([ind.objectives if isinstance(ind, Individual) else ind for ind in pop], dtype=float)
    if F.size == 0:
        return F.reshape(0, 0)
    if F.ndim != 2:
        raise DataError("objective vectors must all have the same length")
    if np.isnan(F).any():
        raise DataError("NaN objective value")
    return F


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """Minimization: ``a`` no worse everywhere and strictly better somewhere."""
    return bool(np.all(a <= b) and np.any(a < b))


def fast_non_dominated_sort(pop) -> list[list[int]]:
    """Partition into fronts of indices; front 0 is the non-dominated set.

    ``pop`` is an (n, M) array or a sequence of individuals / objective vectors.
    Indices inside each front are ascending.
    """
    F = _objective_matrix(pop)
    n = F.shape[0]
    if n == 0:
        return []
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0)
    fronts = []
    current = np.flatnonzero(counts == 0)
    while current.size:
        fronts.append(current.tolist())
        counts = counts - dom[current].sum(axis=0)
        counts[current] = -1
        current = np.flatnonzero(counts == 0)
    return fronts


def crowding_distance(front) -> np.ndarray:
    """Per-point crowding distance within one front; boundary points get +inf."""
    F = _objective_matrix(front)
    n = F.shape[0]
    if n == 0:
        raise DataError("empty front")
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for m in range(F.shape[1]):
        order = np.argsort(F[:, m], kind="stable")
        vals = F[order, m]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = vals[-1] - vals[0]
        if span > 0:
            dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return dist


def _better(a: Individual, b: Individual) -> bool:
    return a.rank < b.rank or (a.rank == b.rank and a.crowding > b.crowding)


def binary_tournament(pop: Sequence[Individual], n: int, rng: np.random.Generator) -> list[int]:
    picks = rng.integers(0, len(pop), size=(n, 2))
    return [int(j) if _better(pop[j], pop[i]) else int(i) for i, j in picks]


def annotate(pop: list[Individual]) -> tuple[list[Individual], list[list[int]]]:
    """Attach rank and crowding distance to every individual."""
    fronts = fast_non_dominated_sort(pop)
    out = list(pop)
    for r, front in enumerate(fronts):
        cd = crowding_distance([pop[i] for i in front])
        for i, d in zip(front, cd):
            out[i] = replace(pop[i], rank=r, crowding=float(d))
    return out, fronts


def select_survivors(pool: list[Individual], mu: int) -> list[Individual]:
    """Fill front by front; the overflowing front is cut by descending crowding distance."""
    pool, fronts = annotate(pool)
    chosen: list[Individual] = []
    for front in fronts:
        if len(chosen) + len(front) <= mu:
            chosen.extend(pool[i] for i in front)
            continue
        need = mu - len(chosen)
        order = sorted(front, key=lambda i: (-pool[i].crowding, i))
        chosen.extend(pool[i] for i in order[:need])
        break
    # crowding is recomputed on the survivors so tournaments see the new population
    chosen, _ = annotate(chosen)
    return chosen


def compromise(front: Sequence[Individual]) -> Individual:
    """The front member with the largest finite crowding distance (an extreme if all are infinite)."""
    interior = [ind for ind in front if np.isfinite(ind.crowding)]
    pick = interior or list(front)
    return max(pick, key=lambda ind: ind.crowding)


def _mo_evaluate(obj, genes, counter: EvalCounter) -> Individual:
    val, objectives = obj.mo_objectives(genes)
    counter.objective += 1
    return Individual(genes, val.fitness, val.loss, val.accuracy, objectives=objectives)


def _record(pool, population, gen, obj, counter, clock, history) -> None:
    # for classifiers "best" is the pool's most accurate member; otherwise its fittest
    if getattr(obj, "is_classifier", False):
        best = max(pool, key=lambda ind: (ind.accuracy, ind.fitness))
    else:
        best = max(pool, key=lambda ind: ind.fitness)
    val_loss, val_acc = validation_metrics(obj, best.genes)
    history.records.append(GenerationRecord(
        generation=gen,
        best_fitness=max(ind.fitness for ind in pool),
        mean_fitness=float(np.mean([ind.fitness for ind in population])),
        train_loss=best.loss,
        train_acc=best.accuracy,
        val_loss=val_loss,
        val_acc=val_acc,
        obj_evals=counter.objective,
        grad_evals=counter.gradient,
        wall_ms=clock.ms(),
    ))
    front0 = [ind for ind in population if ind.rank == 0]
    history.extra.setdefault("selected_acc", []).append(compromise(front0).accuracy)


def run_nsga2(config: EngineConfig, obj, rng: np.random.Generator | None = None, *,
              timing: bool = True, observer=None) -> tuple[RunHistory, list[Individual]]:
    """Minimize (1 - accuracy, sum of squared weights).

    The initial population contains the all-zero genome (clamped into the box)
    as an anchor for the regularizer extreme; it is never dominated, so it
    stays on the first front for the whole run.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    clock = Clock(timing)
    counter = EvalCounter()
    bounds = make_bounds(config, obj)
    mu = config.population_size

    genomes = [clamp(np.zeros(obj.dim), bounds)] + initial_genomes(config, bounds, rng, mu - 1)
    population, _ = annotate([_mo_evaluate(obj, g, counter) for g in genomes])
    history = RunHistory(config.algorithm)
    _record(population, population, 0, obj, counter, clock, history)
    if observer:
        observer(0, population)

    n_parents = mu + (mu % 2)
    for gen in range(1, config.generations + 1):
        idx = binary_tournament(population, n_parents, rng)
        children = vary([population[i].genes for i in idx], config, bounds, rng)[:mu]
        offspring = [_mo_evaluate(obj, c, counter) for c in children]
        pool = population + offspring
        population = select_survivors(pool, mu)
        _record(pool, population, gen, obj, counter, clock, history)
        if observer:
            observer(gen, population)

    front = [ind for ind in population if ind.rank == 0]
    history.best_genes = max(population, key=lambda ind: (ind.accuracy, ind.fitness)).genes.copy()
    history.extra["final_population"] = population
    return history, front
