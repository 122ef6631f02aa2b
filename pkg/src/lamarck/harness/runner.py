"""Execute a run configuration and write per-seed CSV histories and JSON summaries."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from ..engines import CSV_COLUMNS, RunHistory, run
from .config import RunConfig


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    return "nan" if math.isnan(value) else repr(value)


def write_history_csv(history: RunHistory, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in history.records:
            w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])


def read_history_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        rows = []
        for row in reader:
            rows.append({k: (int(v) if k in ("generation", "obj_evals", "grad_evals") else float(v))
                         for k, v in row.items()})
        return rows


def _json_float(x):
    x = float(x)
    return None if math.isnan(x) else x


def _split_metrics(obj, genes) -> dict:
    out = {}
    dataset = getattr(obj, "dataset", None)
    for split in ("train", "val", "test"):
        if dataset is not None and dataset.indices(split).size == 0:
            out[split] = None
            continue
        v = obj.evaluate(genes, split)
        out[split] = {"loss": _json_float(v.loss), "accuracy": _json_float(v.accuracy)}
    return out


def summarize(cfg: RunConfig, seed: int, obj, history: RunHistory) -> dict:
    final = history.final
    summary = {
        "algorithm": cfg.algorithm,
        "seed": seed,
        "dataset_hash": obj.dataset.content_hash() if hasattr(obj, "dataset") else f"benchmark:{obj.name}:{obj.dim}",
        "config": cfg.echo(),
        "generations_run": final.generation,
        "obj_evals": final.obj_evals,
        "grad_evals": final.grad_evals,
        "wall_ms": final.wall_ms,
        "final": _split_metrics(obj, history.best_genes),
        "best_genes": [float(g) for g in history.best_genes],
    }
    if "front" in history.extra:
        summary["pareto_front"] = [
            {"error": float(ind.objectives[0]), "l2": float(ind.objectives[1]),
             "accuracy": _json_float(ind.accuracy)}
            for ind in sorted(history.extra["front"], key=lambda ind: tuple(ind.objectives))
        ]
        summary["selected_acc"] = [_json_float(a) for a in history.extra["selected_acc"]]
    return summary


def run_seed(cfg: RunConfig, seed: int, obj=None) -> tuple[Path, Path]:
    obj = obj if obj is not None else cfg.objective()
    history = run(cfg.engine_config(seed), obj, timing=cfg.timing)
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{cfg.algorithm}_{seed}.csv"
    json_path = out / f"{cfg.algorithm}_{seed}.json"
    write_history_csv(history, csv_path)
    json_path.write_text(json.dumps(summarize(cfg, seed, obj, history), indent=2) + "\n")
    return csv_path, json_path


def run_all(cfg: RunConfig) -> list[tuple[Path, Path]]:
    """Run every seed; sequentially unless ``workers > 1`` (independent processes)."""
    if cfg.workers <= 1 or len(cfg.seeds) == 1:
        obj = cfg.objective()
        return [run_seed(cfg, s, obj) for s in cfg.seeds]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(run_seed, [cfg] * len(cfg.seeds), cfg.seeds))
