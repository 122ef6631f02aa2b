"""Optimization loops: GA, memetic, PSO, Adam baseline, NSGA-II."""

from .baseline import run_adam_baseline
from .config import ALGORITHMS, EngineConfig, LocalSearchParams
from .evolution import run_ga, run_memetic
from .history import CSV_COLUMNS, GenerationRecord, RunHistory
from .nsga2 import crowding_distance, dominates, fast_non_dominated_sort, run_nsga2
from .pso import run_pso


def run(config: EngineConfig, obj, rng=None, *, timing: bool = True, observer=None) -> RunHistory:
    """Dispatch on ``config.algorithm``. NSGA-II's final front lands in ``history.extra['front']``."""
    if config.algorithm == "nsga2":
        history, front = run_nsga2(config, obj, rng, timing=timing, observer=observer)
        history.extra["front"] = front
        return history
    runner = {"ga": run_ga, "memetic": run_memetic, "pso": run_pso, "adam": run_adam_baseline}[config.algorithm]
    return runner(config, obj, rng, timing=timing, observer=observer)


__all__ = [
    "ALGORITHMS", "CSV_COLUMNS", "EngineConfig", "GenerationRecord", "LocalSearchParams", "RunHistory",
    "crowding_distance", "dominates", "fast_non_dominated_sort", "run", "run_adam_baseline", "run_ga",
    "run_memetic", "run_nsga2", "run_pso",
]
