"""Command line: ``run``, ``compare``, ``gen-data``, ``roc``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..data import save_features, synth_blobs
from ..errors import LamarckError
from .compare import compare, to_csv, to_text
from .config import from_echo, load_config
from .metrics import roc_curve
from .runner import run_all

log = logging.getLogger("lamarck")

GEN_DATA_KEYS = {
    "classes": int, "features": int, "per_class": int, "separation": float,
    "noise_sd": float, "seed": int, "directions": str,
}
GEN_DATA_DEFAULTS = dict(classes=10, features=32, per_class=200, separation=3.0, noise_sd=0.5,
                         seed=0, directions="sign")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    for csv_path, json_path in run_all(cfg):
        summary = json.loads(json_path.read_text())
        test = summary["final"].get("test") or summary["final"]["train"]
        print(f"{csv_path}  final loss={test['loss']}  acc={test['accuracy']}")
    return 0


def cmd_compare(args) -> int:
    header, table = compare(args.csv, args.threshold or [0.5])
    print(to_text(header, table))
    if args.output:
        Path(args.output).write_text(to_csv(header, table))
    return 0


def cmd_gen_data(args) -> int:
    params = dict(GEN_DATA_DEFAULTS)
    for item in args.params:
        key, sep, value = item.partition("=")
        if not sep or key not in GEN_DATA_KEYS:
            raise LamarckError(f"bad parameter {item!r}; expected one of {sorted(GEN_DATA_KEYS)} as key=value")
        params[key] = GEN_DATA_KEYS[key](value)
    ds = synth_blobs(params["classes"], params["features"], params["per_class"], params["separation"],
                     params["noise_sd"], params["seed"], params["directions"])
    save_features(ds, args.output)
    print(f"wrote {ds.n_samples} samples x {ds.n_features} features to {args.output}")
    return 0


def cmd_roc(args) -> int:
    run_dir = Path(args.run_dir)
    summaries = sorted(run_dir.glob("*.json"))
    if not summaries:
        raise LamarckError(f"no run summaries in {run_dir}")
    for path in summaries:
        summary = json.loads(path.read_text())
        if "best_genes" not in summary:
            continue
        cfg = from_echo(summary["config"], run_dir)
        obj = cfg.objective()
        if not hasattr(obj, "probabilities"):
            raise LamarckError(f"{path.name}: ROC needs a classifier run")
        split = "test" if obj.dataset.test.size else "train"
        genes = np.array(summary["best_genes"])
        probs = obj.probabilities(genes, split)
        _, labels = obj.dataset.part(split)
        points, auc = roc_curve(probs, labels, args.class_index)
        out = path.with_name(f"{path.stem}_roc_class{args.class_index}.csv")
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["threshold", "fpr", "tpr"])
            for p in points:
                w.writerow([repr(p.threshold), repr(p.fpr), repr(p.tpr)])
        print(f"{path.stem}  class {args.class_index}  {split} AUC={auc:.6f}  -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lamarck", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the engine described by a config file, once per seed")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="tabulate two or more finished runs")
    p.add_argument("csv", nargs="+")
    p.add_argument("-t", "--threshold", type=float, action="append",
                   help="train-accuracy threshold for generations-to-threshold (repeatable, default 0.5)")
    p.add_argument("-o", "--output", help="also write the table as CSV")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen-data", help="write a synthetic blobs dataset (.csv or .bin)")
    p.add_argument("params", nargs="*", help="key=value among " + ", ".join(GEN_DATA_KEYS))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("roc", help="one-vs-rest ROC of the best genome of each run in a directory")
    p.add_argument("run_dir")
    p.add_argument("--class", dest="class_index", type=int, required=True)
    p.set_defaults(func=cmd_roc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except LamarckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
