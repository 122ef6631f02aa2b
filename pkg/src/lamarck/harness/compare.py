"""Side-by-side table of finished runs, one column per run, one row per metric."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from ..errors import ComparisonError
from .runner import read_history_csv

ROWS = (("Train Loss", "train_loss"), ("Vall Loss", "val_loss"),
        ("Train Acc", "train_acc"), ("Vall Acc", "val_acc"))


def generations_to_threshold(rows: list[dict], threshold: float) -> int | None:
    for row in rows:
        if row["train_acc"] >= threshold:
            return row["generation"]
    return None


def load_run(csv_path) -> tuple[str, list[dict], dict]:
    csv_path = Path(csv_path)
    summary_path = csv_path.with_suffix(".json")
    if not summary_path.exists():
        raise ComparisonError(f"no summary {summary_path.name} next to {csv_path.name}")
    try:
        rows = read_history_csv(csv_path)
    except (OSError, ValueError) as exc:
        raise ComparisonError(str(exc)) from None
    if not rows:
        raise ComparisonError(f"{csv_path} has no records")
    return csv_path.stem, rows, json.loads(summary_path.read_text())


def compare(csv_paths, thresholds=(0.5,)) -> tuple[list[str], list[list[str]]]:
    """Return (header, rows). Raises if fewer than two runs or their datasets differ."""
    if len(csv_paths) < 2:
        raise ComparisonError("need at least two runs to compare")
    runs = [load_run(p) for p in csv_paths]
    hashes = {summary.get("dataset_hash") for _, _, summary in runs}
    if len(hashes) != 1:
        raise ComparisonError("runs were made on different datasets (dataset_hash mismatch)")
    header = ["metric"] + [name for name, _, _ in runs]
    table = []
    for label, col in ROWS:
        table.append([label] + [f"{rows[-1][col]:.4f}" for _, rows, _ in runs])
    for t in thresholds:
        cells = []
        for _, rows, _ in runs:
            g = generations_to_threshold(rows, t)
            cells.append("not reached" if g is None else str(g))
        table.append([f"Gens to Train Acc >= {t:g}"] + cells)
    return header, table


def to_csv(header, table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(table)
    return buf.getvalue()


def to_text(header, table) -> str:
    widths = [max(len(str(r[i])) for r in [header] + table) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(str(c).ljust(w) for c, w in zip(row, widths)) for row in table]
    return "\n".join(lines)
