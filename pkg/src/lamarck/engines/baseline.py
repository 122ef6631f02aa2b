from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..genome import Individual, random_genome
from ..local_search import AdamState, EvalCounter, adam_step
from .config import EngineConfig
from .evolution import evaluate, make_bounds, record
from .history import Clock, RunHistory


def run_adam_baseline(config: EngineConfig, obj, rng: np.random.Generator | None = None, *,
                      timing: bool = True, observer=None) -> RunHistory:
    """Plain full-batch Adam from one random genome, ``config.generations`` steps.

    Classifier weights start from the usual linear-layer init
    ``U(-1/sqrt(F), 1/sqrt(F))`` (``adam_init="fan_in"``); otherwise, or with
    ``adam_init="bounds"``, uniformly inside the bounds. Nothing is clamped. Each
    step logs one record so the history lines up with the population engines.
    """
    if not getattr(obj, "has_gradient", False):
        raise ConfigError("the Adam baseline needs an objective with gradients")
    if rng is None:
        rng = np.random.default_rng(config.seed)
    clock = Clock(timing)
    counter = EvalCounter()
    bounds = make_bounds(config, obj)
    if config.adam_init == "fan_in" and getattr(obj, "is_classifier", False):
        # standard linear-layer init; the baseline has no box to respect
        limit = 1.0 / np.sqrt(obj.n_features)
        genes = rng.uniform(-limit, limit, obj.dim)
    else:
        genes = random_genome(bounds, obj.dim, rng)
    state = AdamState.fresh(obj.dim, config.lr)

    current: Individual = evaluate(obj, genes, counter)
    history = RunHistory(config.algorithm)
    history.records.append(record([current], 0, obj, counter, clock))
    if observer:
        observer(0, [current])
    for step in range(1, config.generations + 1):
        grad = obj.gradient(genes)
        counter.gradient += 1
        state, genes = adam_step(state, genes, grad)
        current = evaluate(obj, genes, counter)
        history.records.append(record([current], step, obj, counter, clock))
        if observer:
            observer(step, [current])

    history.best_genes = genes.copy()
    history.extra["final_population"] = [current]
    return history
