"""The desk-scale comparison protocol: one fixed blobs dataset, every engine, several seeds."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..data import split, synth_blobs
from ..engines import EngineConfig, RunHistory, run, run_nsga2
from ..objectives import LinearSoftmaxObjective

# 10 classes, 32 features, 200 samples per class; dense sign directions so a
# 100-step Adam run makes visible but incomplete progress
BLOBS = dict(n_classes=10, n_features=32, n_per_class=200, separation=3.0, noise_sd=0.5,
             seed=0, directions="sign")
SPLIT = (4 / 6, 1 / 6, 1 / 6)
SEEDS = (0, 1, 2, 3, 4)

VARIANTS = {
    "adam": dict(algorithm="adam"),
    "ga": dict(algorithm="ga"),
    "ga_generational": dict(algorithm="ga", survival="generational"),
    "memetic": dict(algorithm="memetic"),
    "memetic_gray": dict(algorithm="memetic", encoding="gray"),
    "nsga2": dict(algorithm="nsga2"),
    "pso": dict(algorithm="pso"),
}


def blobs_objective(**overrides) -> LinearSoftmaxObjective:
    params = {**BLOBS, **overrides}
    return LinearSoftmaxObjective(split(synth_blobs(**params), SPLIT, seed=params["seed"]))


def variant_config(name: str, seed: int, **overrides) -> EngineConfig:
    spec = dict(VARIANTS[name])
    return EngineConfig.defaults_for(spec.pop("algorithm"), seed=seed, **spec, **overrides)


@dataclass
class Suite:
    """Histories keyed by (variant, seed), plus wall time per variant."""

    histories: dict = field(default_factory=dict)
    seconds: dict = field(default_factory=dict)
    fronts: dict = field(default_factory=dict)

    def get(self, variant: str, seed: int) -> RunHistory:
        return self.histories[variant, seed]


def run_variants(obj, variants, seeds=SEEDS, suite: Suite | None = None, **overrides) -> Suite:
    suite = suite or Suite()
    for name in variants:
        t0 = time.perf_counter()
        for seed in seeds:
            cfg = variant_config(name, seed, **overrides)
            if cfg.algorithm == "nsga2":
                hist, front = run_nsga2(cfg, obj)
                suite.fronts[name, seed] = front
            else:
                hist = run(cfg, obj)
            suite.histories[name, seed] = hist
        suite.seconds[name] = suite.seconds.get(name, 0.0) + time.perf_counter() - t0
    return suite
