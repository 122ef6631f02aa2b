from __future__ import annotations

import numpy as np

from ..genome import random_genome
from ..local_search import EvalCounter
from .config import EngineConfig
from .evolution import evaluate, make_bounds, record
from .history import Clock, RunHistory


def velocity_update(x, v, pbest, gbest, w, c1, c2, r1, r2, vmax):
    v = w * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x)
    return np.clip(v, -vmax, vmax)


def run_pso(config: EngineConfig, obj, rng: np.random.Generator | None = None, *,
            timing: bool = True, observer=None) -> RunHistory:
    """Global-best PSO with velocity clamping to half the box width.

    Velocities start at zero. Personal and global bests move only on strict
    improvement of fitness.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    clock = Clock(timing)
    counter = EvalCounter()
    bounds = make_bounds(config, obj)
    n, D = config.population_size, obj.dim
    vmax = bounds.span / 2.0

    x = np.array([random_genome(bounds, D, rng) for _ in range(n)])
    v = np.zeros_like(x)
    swarm = [evaluate(obj, xi.copy(), counter) for xi in x]
    pbest = list(swarm)
    gbest = max(pbest, key=lambda ind: ind.fitness)

    history = RunHistory(config.algorithm)
    history.records.append(record(swarm, 0, obj, counter, clock, best=gbest))
    if observer:
        observer(0, swarm)
    for gen in range(1, config.generations + 1):
        r1 = rng.random((n, D))
        r2 = rng.random((n, D))
        pb = np.array([p.genes for p in pbest])
        v = velocity_update(x, v, pb, gbest.genes, config.pso_w, config.pso_c1, config.pso_c2, r1, r2, vmax)
        x = np.clip(x + v, bounds.lower, bounds.upper)
        swarm = [evaluate(obj, xi.copy(), counter) for xi in x]
        for i, ind in enumerate(swarm):
            if ind.fitness > pbest[i].fitness:
                pbest[i] = ind
                if ind.fitness > gbest.fitness:
                    gbest = ind
        history.records.append(record(swarm, gen, obj, counter, clock, best=gbest))
        if observer:
            observer(gen, swarm)

    history.best_genes = gbest.genes.copy()
    history.extra["final_population"] = swarm
    return history
