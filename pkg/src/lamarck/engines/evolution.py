"""Generational loop shared by the GA and the Lamarckian memetic algorithm."""

from __future__ import annotations

from functools import partial

import numpy as np

from ..errors import ConfigError
from ..genome import Bounds, Individual, gray_decode, gray_encode, quantize, random_genome
from ..local_search import EvalCounter, lamarckian_refine
from ..operators import (apply_elitism, bitflip_mutation, polynomial_mutation, roulette_indices,
                         sbx_crossover, single_point_crossover, survival_generational,
                         survival_steady_state)
from .config import EngineConfig
from .history import Clock, GenerationRecord, RunHistory, validation_metrics


def evaluate(obj, genes: np.ndarray, counter: EvalCounter) -> Individual:
    val = obj.evaluate(genes)
    counter.objective += 1
    return Individual(genes, val.fitness, val.loss, val.accuracy)


def record(population, generation: int, obj, counter: EvalCounter, clock: Clock,
           best: Individual | None = None) -> GenerationRecord:
    if best is None:
        best = max(population, key=lambda ind: ind.fitness)
    val_loss, val_acc = validation_metrics(obj, best.genes)
    return GenerationRecord(
        generation=generation,
        best_fitness=best.fitness,
        mean_fitness=float(np.mean([ind.fitness for ind in population])),
        train_loss=best.loss,
        train_acc=best.accuracy,
        val_loss=val_loss,
        val_acc=val_acc,
        obj_evals=counter.objective,
        grad_evals=counter.gradient,
        wall_ms=clock.ms(),
    )


def make_bounds(config: EngineConfig, obj) -> Bounds:
    return Bounds.uniform(config.lower, config.upper, obj.dim)


def snapper(config: EngineConfig, bounds: Bounds):
    """Projection onto the encoding's lattice (identity for real coding)."""
    if config.encoding == "gray":
        return partial(quantize, bounds=bounds, bits_per_gene=config.bits_per_gene)
    return None


def initial_genomes(config: EngineConfig, bounds: Bounds, rng: np.random.Generator, n: int) -> list[np.ndarray]:
    genomes = [random_genome(bounds, bounds.dim, rng) for _ in range(n)]
    snap = snapper(config, bounds)
    return [snap(g) for g in genomes] if snap else genomes


def vary(parents: list[np.ndarray], config: EngineConfig, bounds: Bounds,
         rng: np.random.Generator) -> list[np.ndarray]:
    """Pair consecutive parents, cross them over, then mutate every child.

    Random draws happen in a fixed order: all crossovers in pair order, then
    all mutations in child order.
    """
    ops = config.operators
    children: list[np.ndarray] = []
    if config.encoding == "real":
        for a, b in zip(parents[0::2], parents[1::2]):
            children.extend(sbx_crossover(a, b, ops, bounds, rng))
        return [polynomial_mutation(c, ops, bounds, rng) for c in children]

    B = config.bits_per_gene
    encoded = []
    for a, b in zip(parents[0::2], parents[1::2]):
        ga, gb = gray_encode(a, bounds, B), gray_encode(b, bounds, B)
        if rng.random() < ops.crossover_prob:
            ga, gb = single_point_crossover(ga, gb, rng)
        encoded.extend((ga, gb))
    p_bit = ops.gene_mutation_prob(bounds.dim * B)
    return [gray_decode(bitflip_mutation(g, p_bit, rng), bounds) for g in encoded]


def evolve(config: EngineConfig, obj, rng: np.random.Generator | None = None, *,
           timing: bool = True, observer=None) -> RunHistory:
    """GA when ``config.local_search`` is None (or 0 iterations), memetic otherwise.

    ``observer(generation, population)`` is called after every survival step
    (and once for the initial population).
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    ls = config.local_search
    iters = ls.iters if ls is not None else 0
    if iters and not getattr(obj, "has_gradient", False):
        raise ConfigError("local search needs an objective with gradients")

    clock = Clock(timing)
    counter = EvalCounter()
    bounds = make_bounds(config, obj)
    snap = snapper(config, bounds)
    mu = config.population_size

    def assess(genes: np.ndarray) -> Individual:
        if iters:
            # refinement ends with the individual's only fitness evaluation
            return lamarckian_refine(Individual(genes, float("nan")), obj, iters, ls.lr, bounds, counter, snap)
        return evaluate(obj, genes, counter)

    population = [assess(g) for g in initial_genomes(config, bounds, rng, mu)]
    history = RunHistory(config.algorithm)
    history.records.append(record(population, 0, obj, counter, clock))
    if observer:
        observer(0, population)

    n_parents = mu + (mu % 2)
    for gen in range(1, config.generations + 1):
        idx = roulette_indices(population, n_parents, rng)
        children = vary([population[i].genes for i in idx], config, bounds, rng)[:mu]
        offspring = [assess(c) for c in children]
        if config.survival == "steady_state":
            # (mu + lambda) already keeps every parent in the running, so elite copies would only add clones
            population = survival_steady_state(population, offspring, mu)
        else:
            pool = apply_elitism(population, offspring, config.operators.n_elites)
            population = survival_generational(pool, mu)
        history.records.append(record(population, gen, obj, counter, clock))
        if observer:
            observer(gen, population)

    best = max(population, key=lambda ind: ind.fitness)
    history.best_genes = best.genes.copy()
    history.extra["final_population"] = population
    return history


def run_ga(config: EngineConfig, obj, rng: np.random.Generator | None = None, *, timing: bool = True,
           observer=None) -> RunHistory:
    return evolve(config, obj, rng, timing=timing, observer=observer)


def run_memetic(config: EngineConfig, obj, rng: np.random.Generator | None = None, *,
                timing: bool = True, observer=None) -> RunHistory:
    if config.local_search is None:
        raise ConfigError("memetic needs local search parameters")
    return evolve(config, obj, rng, timing=timing, observer=observer)
