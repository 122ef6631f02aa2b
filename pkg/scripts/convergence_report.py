"""Seed-averaged best train accuracy at regular generation checkpoints.

Emits a CSV table (rows: checkpoints, columns: variants) to stdout or a file;
together with the generations-to-threshold summary this is the data behind a
convergence plot. No plotting is done here.

    python scripts/convergence_report.py --every 10 --thresholds 0.3 0.5 0.9
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from lamarck.harness.experiments import SEEDS, blobs_objective, run_variants

DEFAULT_VARIANTS = ["adam", "ga", "ga_generational", "memetic", "nsga2", "pso"]


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--variants", nargs="+", default=DEFAULT_VARIANTS)
    parser.add_argument("--seeds", nargs="+", type=int, default=list(SEEDS))
    parser.add_argument("--generations", type=int, default=100)
    parser.add_argument("--every", type=int, default=10)
    parser.add_argument("--thresholds", nargs="+", type=float, default=[0.3, 0.5, 0.9])
    parser.add_argument("--output", help="CSV path (default: stdout)")
    args = parser.parse_args(argv)

    suite = run_variants(blobs_objective(), args.variants, args.seeds, generations=args.generations)
    curves = {v: np.mean([suite.get(v, s).column("train_acc") for s in args.seeds], axis=0)
              for v in args.variants}

    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["generation"] + args.variants)
    for g in range(0, args.generations + 1, args.every):
        w.writerow([g] + [f"{curves[v][g]:.4f}" for v in args.variants])
    if fh is not sys.stdout:
        fh.close()

    print("\ngenerations to threshold (median over seeds; '-' = not reached on most seeds)", file=sys.stderr)
    for t in args.thresholds:
        cells = []
        for v in args.variants:
            gens = [suite.get(v, s).generations_to(t) for s in args.seeds]
            reached = sorted(g for g in gens if g is not None)
            cells.append(f"{v}={int(np.median(reached))}" if len(reached) * 2 > len(gens) else f"{v}=-")
        print(f"  acc >= {t:g}: " + "  ".join(cells), file=sys.stderr)


if __name__ == "__main__":
    main()
