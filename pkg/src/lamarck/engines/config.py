from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import ConfigError
from ..operators import OperatorParams

ALGORITHMS = ("ga", "memetic", "pso", "adam", "nsga2")
SURVIVALS = ("steady_state", "generational")
ENCODINGS = ("real", "gray")


@dataclass(frozen=True)
class LocalSearchParams:
    iters: int = 5
    lr: float = 0.001

    def __post_init__(self):
        if self.iters < 0:
            raise ConfigError("local search iters must be >= 0")
        if self.lr <= 0:
            raise ConfigError("local search lr must be > 0")


@dataclass(frozen=True)
class EngineConfig:
    """Settings for one engine run.

    ``generations`` doubles as the step count of the Adam baseline; ``lr``
    and ``adam_init`` are only read by that baseline. The ``pso_*`` coefficients are only read
    by PSO.
    """

    algorithm: str
    population_size: int = 100
    generations: int = 100
    operators: OperatorParams = field(default_factory=OperatorParams)
    local_search: LocalSearchParams | None = None
    survival: str = "steady_state"
    encoding: str = "real"
    bits_per_gene: int = 16
    lower: float = -1.0
    upper: float = 1.0
    seed: int = 0
    lr: float = 0.001
    adam_init: str = "fan_in"
    pso_w: float = 0.729
    pso_c1: float = 1.49445
    pso_c2: float = 1.49445

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.survival not in SURVIVALS:
            raise ConfigError(f"unknown survival {self.survival!r}; choose from {SURVIVALS}")
        if self.encoding not in ENCODINGS:
            raise ConfigError(f"unknown encoding {self.encoding!r}; choose from {ENCODINGS}")
        if self.population_size < 1 or (self.algorithm in ("ga", "memetic", "nsga2") and self.population_size < 2):
            raise ConfigError("population_size too small")
        if self.generations < 0:
            raise ConfigError("generations must be >= 0")
        if self.adam_init not in ("fan_in", "bounds"):
            raise ConfigError("adam_init must be 'fan_in' or 'bounds'")
        if not self.lower < self.upper:
            raise ConfigError("need lower < upper")
        if not 8 <= self.bits_per_gene <= 32:
            raise ConfigError("bits_per_gene must lie in [8, 32]")
        if self.algorithm == "memetic" and self.local_search is None:
            raise ConfigError("memetic needs local search parameters")
        if self.encoding == "gray" and self.algorithm in ("pso", "adam"):
            raise ConfigError(f"{self.algorithm} works on real vectors only")
        if self.operators.n_elites > self.population_size:
            raise ConfigError("n_elites exceeds population_size")

    @classmethod
    def defaults_for(cls, algorithm: str, **overrides) -> "EngineConfig":
        """Standard settings: 100 generations everywhere, population 100 (50 for memetic),
        one elite, bounds [-1, 1], local search 5 Adam steps at lr 0.001."""
        base = dict(algorithm=algorithm)
        if algorithm == "memetic":
            base.update(population_size=50, local_search=LocalSearchParams(5, 0.001))
        elif algorithm == "adam":
            base.update(population_size=1)
        base.update(overrides)
        return cls(**base)

    def with_(self, **changes) -> "EngineConfig":
        return replace(self, **changes)
