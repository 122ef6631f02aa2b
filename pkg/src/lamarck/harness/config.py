"""Flat ``key = value`` run configuration.

One setting per line, ``#`` starts a comment. Unknown keys are rejected.
Engine settings left out fall back to the per-algorithm standard settings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..data import FeatureDataset, load_features, split, synth_blobs
from ..engines import EngineConfig, LocalSearchParams
from ..errors import ConfigError
from ..objectives import BenchmarkObjective, LinearSoftmaxObjective
from ..operators import OperatorParams


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _seeds(text: str) -> list[int]:
    seeds = [int(p) for p in text.replace(";", ",").split(",") if p.strip()]
    if not seeds:
        raise ValueError("empty seed list")
    return seeds


def _opt_float(text: str):
    return None if text.strip().lower() in ("", "auto", "none") else float(text)


# key -> parser; engine keys are forwarded into EngineConfig / OperatorParams / LocalSearchParams
KEYS = {
    "algorithm": str,
    "output_dir": str,
    "seeds": _seeds,
    "workers": int,
    "timing": _bool,
    # data source
    "dataset": str,
    "dataset_format": str,
    "n_classes": int,
    "benchmark": str,
    "benchmark_dim": int,
    "synth_classes": int,
    "synth_features": int,
    "synth_per_class": int,
    "synth_separation": float,
    "synth_noise_sd": float,
    "synth_seed": int,
    "synth_directions": str,
    "split_train": float,
    "split_val": float,
    "split_test": float,
    "split_seed": int,
    # engine
    "population_size": int,
    "generations": int,
    "survival": str,
    "encoding": str,
    "bits_per_gene": int,
    "lower": float,
    "upper": float,
    "lr": float,
    "adam_init": str,
    "pso_w": float,
    "pso_c1": float,
    "pso_c2": float,
    "crossover_prob": float,
    "mutation_prob": _opt_float,
    "eta_c": float,
    "eta_m": float,
    "n_elites": int,
    "ls_iters": int,
    "ls_lr": float,
}

DATA_DEFAULTS = {
    "synth_classes": 10,
    "synth_features": 32,
    "synth_per_class": 200,
    "synth_separation": 3.0,
    "synth_noise_sd": 0.5,
    "synth_seed": 0,
    "synth_directions": "sign",
    "split_train": 4 / 6,
    "split_val": 1 / 6,
    "split_test": 1 / 6,
    "split_seed": 0,
    "benchmark_dim": 10,
}

_OPERATOR_KEYS = ("crossover_prob", "mutation_prob", "eta_c", "eta_m", "n_elites")
_ENGINE_KEYS = ("population_size", "generations", "survival", "encoding", "bits_per_gene", "lower",
                "upper", "lr", "adam_init", "pso_w", "pso_c1", "pso_c2")


@dataclass
class RunConfig:
    values: dict
    base_dir: Path = field(default_factory=Path.cwd)

    @property
    def algorithm(self) -> str:
        return self.values["algorithm"]

    @property
    def seeds(self) -> list[int]:
        return self.values.get("seeds", [0])

    @property
    def output_dir(self) -> Path:
        return self.base_dir / self.values.get("output_dir", "runs")

    @property
    def workers(self) -> int:
        return self.values.get("workers", 1)

    @property
    def timing(self) -> bool:
        return self.values.get("timing", True)

    def get(self, key: str):
        return self.values.get(key, DATA_DEFAULTS.get(key))

    def engine_config(self, seed: int) -> EngineConfig:
        v = self.values
        defaults = EngineConfig.defaults_for(self.algorithm)
        ops = {k: v[k] for k in _OPERATOR_KEYS if k in v}
        overrides = {k: v[k] for k in _ENGINE_KEYS if k in v}
        if ops:
            overrides["operators"] = OperatorParams(**{**defaults.operators.__dict__, **ops})
        if "ls_iters" in v or "ls_lr" in v:
            base = defaults.local_search or LocalSearchParams()
            overrides["local_search"] = LocalSearchParams(v.get("ls_iters", base.iters), v.get("ls_lr", base.lr))
        return EngineConfig.defaults_for(self.algorithm, seed=seed, **overrides)

    def dataset_path(self) -> Path:
        path = Path(self.values["dataset"])
        return path if path.is_absolute() else (self.base_dir / path).resolve()

    def dataset(self) -> FeatureDataset:
        if "dataset" in self.values:
            ds = load_features(self.dataset_path(), self.values.get("dataset_format"), self.values.get("n_classes"))
        else:
            ds = synth_blobs(self.get("synth_classes"), self.get("synth_features"), self.get("synth_per_class"),
                             self.get("synth_separation"), self.get("synth_noise_sd"), self.get("synth_seed"),
                             self.get("synth_directions"))
        fractions = (self.get("split_train"), self.get("split_val"), self.get("split_test"))
        return split(ds, fractions, self.get("split_seed"))

    def objective(self):
        if "benchmark" in self.values:
            return BenchmarkObjective(self.values["benchmark"], self.get("benchmark_dim"))
        return LinearSoftmaxObjective(self.dataset())

    def echo(self) -> dict:
        """Every setting in effect, explicit or defaulted, for the run summary."""
        out = {k: self.get(k) for k in sorted(set(self.values) | set(DATA_DEFAULTS))}
        out["seeds"] = self.seeds
        if "dataset" in out:
            out["dataset"] = str(self.dataset_path())
        return out


def parse_config(text: str, base_dir: Path | None = None) -> RunConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    if "algorithm" not in values:
        raise ConfigError("missing required key 'algorithm'")
    if "dataset" in values and "benchmark" in values:
        raise ConfigError("give either 'dataset' or 'benchmark', not both")
    cfg = RunConfig(values, base_dir or Path.cwd())
    cfg.engine_config(cfg.seeds[0])  # validate engine settings up front
    return cfg


def from_echo(echo: dict, base_dir: Path | None = None) -> RunConfig:
    """Rebuild a configuration from the ``config`` block of a run summary."""
    values = {k: v for k, v in echo.items() if k in KEYS and v is not None}
    return RunConfig(values, base_dir or Path.cwd())


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, path.parent)
