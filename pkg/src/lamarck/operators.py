"""Variation and selection operators.

Every stochastic operator takes the engine's generator explicitly and draws
from it in a fixed order, so a run is reproducible from its seed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ConfigError, PreconditionError, SelectionError, ShapeError
from .genome import Bounds, GrayGenome, Individual


@dataclass(frozen=True)
class OperatorParams:
    """Variation settings. ``mutation_prob=None`` means ``1 / genome length``."""

    crossover_prob: float = 0.9
    mutation_prob: float | None = None
    eta_c: float = 15.0
    eta_m: float = 20.0
    n_elites: int = 1

    def __post_init__(self):
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ConfigError("crossover_prob must be in [0, 1]")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigError("mutation_prob must be in [0, 1]")
        if self.eta_c < 0 or self.eta_m < 0:
            raise ConfigError("distribution indices must be >= 0")
        if self.n_elites < 0:
            raise ConfigError("n_elites must be >= 0")

    def gene_mutation_prob(self, length: int) -> float:
        return 1.0 / length if self.mutation_prob is None else self.mutation_prob


# --- parent selection -------------------------------------------------------

def _cumulative_fitness(population: Sequence[Individual]) -> np.ndarray:
    if len(population) == 0:
        raise SelectionError("cannot select from an empty population")
    fit = np.array([ind.fitness for ind in population], dtype=float)
    if np.any(fit < 0) or not np.all(np.isfinite(fit)) or fit.sum() <= 0:
        raise SelectionError("roulette selection needs finite, non-negative fitness with a positive total")
    return np.cumsum(fit)


def roulette_indices(population: Sequence[Individual], n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` indices with probability proportional to fitness."""
    cum = _cumulative_fitness(population)
    spins = rng.random(n) * cum[-1]
    return np.minimum(np.searchsorted(cum, spins, side="right"), len(population) - 1)


def roulette_select(population: Sequence[Individual], rng: np.random.Generator) -> Individual:
    return population[int(roulette_indices(population, 1, rng)[0])]


# --- real-coded variation ---------------------------------------------------

def sbx_beta(u: np.ndarray, eta_c: float) -> np.ndarray:
    """Spread factor for uniform draws ``u``."""
    u = np.asarray(u, dtype=float)
    expo = 1.0 / (eta_c + 1.0)
    with np.errstate(divide="ignore"):
        return np.where(u <= 0.5, (2.0 * u) ** expo, (1.0 / (2.0 * (1.0 - u))) ** expo)


def sbx_children(p1: np.ndarray, p2: np.ndarray, beta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unclamped SBX children; their mean equals the parents' mean."""
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    return c1, c2


def sbx_crossover(p1: np.ndarray, p2: np.ndarray, params: OperatorParams, bounds: Bounds,
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Gene-wise simulated binary crossover.

    Each gene is crossed with probability ``crossover_prob``; the rest copy
    through. Children are clamped into ``bounds``.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise ShapeError(f"parents differ in shape: {p1.shape} vs {p2.shape}")
    cross = rng.random(p1.shape) < params.crossover_prob
    u = rng.random(p1.shape)
    beta = np.where(cross, sbx_beta(u, params.eta_c), 1.0)
    # u == 1.0 is impossible from Generator.random, but beta could still overflow for tiny (1-u)
    beta = np.where(np.isfinite(beta), beta, 1.0)
    c1, c2 = sbx_children(p1, p2, beta)
    c1 = np.where(cross, c1, p1)
    c2 = np.where(cross, c2, p2)
    return np.clip(c1, bounds.lower, bounds.upper), np.clip(c2, bounds.lower, bounds.upper)


def polynomial_delta(p: np.ndarray, u: np.ndarray, eta_m: float, lower: np.ndarray,
                     upper: np.ndarray) -> np.ndarray:
    """Bounded perturbation ``dq`` so that ``p + dq * (upper - lower)`` stays in the box."""
    span = upper - lower
    d1 = (p - lower) / span
    d2 = (upper - p) / span
    expo = 1.0 / (eta_m + 1.0)
    low_branch = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta_m + 1.0)) ** expo - 1.0
    high_branch = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta_m + 1.0)) ** expo
    return np.where(u <= 0.5, low_branch, high_branch)


def polynomial_mutation(genes: np.ndarray, params: OperatorParams, bounds: Bounds,
                        rng: np.random.Generator) -> np.ndarray:
    genes = np.asarray(genes, dtype=float)
    if genes.shape != (bounds.dim,):
        raise ShapeError(f"genome has shape {genes.shape}, bounds expect ({bounds.dim},)")
    if not bounds.contains(genes):
        raise PreconditionError("polynomial mutation needs an in-bounds genome")
    hit = rng.random(genes.shape) < params.gene_mutation_prob(genes.size)
    u = rng.random(genes.shape)
    dq = polynomial_delta(genes, u, params.eta_m, bounds.lower, bounds.upper)
    out = np.where(hit, genes + dq * bounds.span, genes)
    # the formula is closed on the box; the clip only absorbs floating-point rounding
    return np.clip(out, bounds.lower, bounds.upper)


# --- binary (Gray) variation ------------------------------------------------

def bitflip_mutation(genome: GrayGenome, mutation_prob: float, rng: np.random.Generator) -> GrayGenome:
    flip = (rng.random(genome.bits.shape) < mutation_prob).astype(np.uint8)
    return GrayGenome(genome.bits ^ flip, genome.bits_per_gene)


def single_point_crossover(p1: GrayGenome, p2: GrayGenome,
                           rng: np.random.Generator) -> tuple[GrayGenome, GrayGenome]:
    """Swap the suffixes after a uniform cut in ``[1, len - 1]``."""
    if p1.bits.shape != p2.bits.shape or p1.bits_per_gene != p2.bits_per_gene:
        raise ShapeError("parents differ in bit length")
    n = p1.bits.shape[0]
    if n < 2:
        return p1, p2
    cut = int(rng.integers(1, n))
    c1 = np.concatenate([p1.bits[:cut], p2.bits[cut:]])
    c2 = np.concatenate([p2.bits[:cut], p1.bits[cut:]])
    return GrayGenome(c1, p1.bits_per_gene), GrayGenome(c2, p1.bits_per_gene)


# --- survival ---------------------------------------------------------------

def _best(candidates: list[tuple[Individual, int, int]], mu: int) -> list[Individual]:
    # key: fitness desc, offspring before parents, then lower index
    ranked = sorted(candidates, key=lambda t: (-t[0].fitness, t[1], t[2]))
    return [t[0] for t in ranked[:mu]]


def survival_steady_state(parents: Sequence[Individual], offspring: Sequence[Individual],
                          mu: int) -> list[Individual]:
    """(mu + lambda): the ``mu`` fittest of parents and offspring together."""
    if len(parents) + len(offspring) < mu:
        raise SelectionError(f"need {mu} candidates, have {len(parents) + len(offspring)}")
    pool = [(ind, 0, i) for i, ind in enumerate(offspring)] + [(ind, 1, i) for i, ind in enumerate(parents)]
    return _best(pool, mu)


def survival_generational(offspring: Sequence[Individual], mu: int) -> list[Individual]:
    """(mu, lambda): the ``mu`` fittest offspring; parents are discarded."""
    if len(offspring) < mu:
        raise SelectionError(f"need {mu} offspring, have {len(offspring)}")
    return _best([(ind, 0, i) for i, ind in enumerate(offspring)], mu)


def apply_elitism(parents: Sequence[Individual], offspring_pool: Sequence[Individual],
                  n_elites: int) -> list[Individual]:
    """Prepend copies of the ``n_elites`` fittest parents to the offspring pool."""
    if n_elites > len(parents):
        raise ConfigError(f"n_elites={n_elites} exceeds the {len(parents)} parents")
    if n_elites <= 0:
        return list(offspring_pool)
    order = sorted(range(len(parents)), key=lambda i: (-parents[i].fitness, i))
    elites = [replace(parents[i], genes=parents[i].genes.copy()) for i in order[:n_elites]]
    return elites + list(offspring_pool)
