"""Run every engine on the standard blobs dataset and print a results table.

Rows follow the usual train/val loss and accuracy layout, one column per
variant, averaged over seeds (with the standard deviation in brackets).
Per-seed histories can be written as CSV for later ``lamarck compare``.

    python scripts/run_comparison.py --seeds 0 1 2 3 4 --out runs/comparison
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

import numpy as np

from lamarck.harness.experiments import BLOBS, SEEDS, VARIANTS, blobs_objective, run_variants
from lamarck.harness.runner import write_history_csv

ROWS = (("Train Loss", "train_loss"), ("Vall Loss", "val_loss"),
        ("Train Acc", "train_acc"), ("Vall Acc", "val_acc"))


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--variants", nargs="+", default=list(VARIANTS), choices=list(VARIANTS))
    parser.add_argument("--seeds", nargs="+", type=int, default=list(SEEDS))
    parser.add_argument("--generations", type=int, default=100)
    parser.add_argument("--separation", type=float, default=BLOBS["separation"])
    parser.add_argument("--noise-sd", type=float, default=BLOBS["noise_sd"])
    parser.add_argument("--out", type=Path, help="directory for <variant>_<seed>.csv/.json")
    args = parser.parse_args(argv)

    obj = blobs_objective(separation=args.separation, noise_sd=args.noise_sd)
    t0 = time.perf_counter()
    suite = run_variants(obj, args.variants, args.seeds, generations=args.generations)
    print(f"{len(args.variants)} variants x {len(args.seeds)} seeds in {time.perf_counter() - t0:.1f}s\n")

    width = max(16, *(len(v) + 2 for v in args.variants))
    print("metric".ljust(14) + "".join(v.rjust(width) for v in args.variants))
    for label, col in ROWS:
        cells = []
        for v in args.variants:
            vals = np.array([getattr(suite.get(v, s).final, col) for s in args.seeds])
            cells.append(f"{vals.mean():.4f} ({vals.std():.4f})".rjust(width))
        print(label.ljust(14) + "".join(cells))
    print("seconds".ljust(14) + "".join(f"{suite.seconds[v]:.1f}".rjust(width) for v in args.variants))

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        digest = obj.dataset.content_hash()
        for (v, s), history in suite.histories.items():
            write_history_csv(history, args.out / f"{v}_{s}.csv")
            summary = {"algorithm": v, "seed": s, "dataset_hash": digest,
                       "final_train_acc": history.final.train_acc}
            (args.out / f"{v}_{s}.json").write_text(json.dumps(summary, indent=2) + "\n")
        print(f"\nhistories written to {args.out}")


if __name__ == "__main__":
    main()
