from __future__ import annotations

import math
import time
from dataclasses import astuple, dataclass, field, fields

import numpy as np

CSV_COLUMNS = ("generation", "best_fitness", "mean_fitness", "train_loss", "train_acc",
               "val_loss", "val_acc", "obj_evals", "grad_evals", "wall_ms")


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_fitness: float
    mean_fitness: float
    train_loss: float
    train_acc: float
    val_loss: float
    val_acc: float
    obj_evals: int
    grad_evals: int
    wall_ms: float = field(default=0.0, compare=False)

    def key(self) -> tuple:
        """Everything except wall time, with NaN made comparable."""
        return tuple("nan" if isinstance(v, float) and math.isnan(v) else v
                     for v in astuple(self)[:-1])


@dataclass
class RunHistory:
    """One record for the initial population plus one per generation.

    Equality compares the records only, ignoring wall-clock time, so that
    seeded runs compare equal.
    """

    algorithm: str
    records: list[GenerationRecord] = field(default_factory=list)
    best_genes: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, RunHistory):
            return NotImplemented
        return [r.key() for r in self.records] == [r.key() for r in other.records]

    def __len__(self):
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])

    @property
    def final(self) -> GenerationRecord:
        return self.records[-1]

    def generations_to(self, threshold: float, column: str = "train_acc") -> int | None:
        """First generation whose ``column`` reaches ``threshold``; None if never."""
        for r in self.records:
            if getattr(r, column) >= threshold:
                return r.generation
        return None


class Clock:
    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self._t0 = time.perf_counter()

    def ms(self) -> float:
        return (time.perf_counter() - self._t0) * 1000.0 if self.enabled else 0.0


def validation_metrics(obj, genes) -> tuple[float, float]:
    """Reporting-only evaluation on the validation split; not counted in the budget."""
    dataset = getattr(obj, "dataset", None)
    if dataset is not None and dataset.val.size == 0:
        return math.nan, math.nan
    v = obj.evaluate(genes, "val")
    return v.loss, v.accuracy


RECORD_FIELDS = tuple(f.name for f in fields(GenerationRecord))
assert RECORD_FIELDS == CSV_COLUMNS
