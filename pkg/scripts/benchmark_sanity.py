"""Population engines on analytic benchmarks (sphere, Rastrigin) over several seeds.

    python scripts/benchmark_sanity.py --function rastrigin --dim 10
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lamarck.engines import EngineConfig, run
from lamarck.objectives import BenchmarkObjective


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--function", default="sphere", choices=["sphere", "rastrigin"])
    parser.add_argument("--dim", type=int, default=10)
    parser.add_argument("--bound", type=float, default=1.0, help="search box is [-bound, bound]^D")
    parser.add_argument("--algorithms", nargs="+", default=["ga", "pso", "memetic", "adam"])
    parser.add_argument("--seeds", nargs="+", type=int, default=[0, 1, 2, 3, 4])
    parser.add_argument("--generations", type=int, default=100)
    args = parser.parse_args(argv)

    obj = BenchmarkObjective(args.function, args.dim)
    print(f"{args.function} D={args.dim} on [-{args.bound}, {args.bound}]^D, {args.generations} generations")
    for algorithm in args.algorithms:
        t0 = time.perf_counter()
        best = []
        for seed in args.seeds:
            cfg = EngineConfig.defaults_for(algorithm, seed=seed, generations=args.generations,
                                            lower=-args.bound, upper=args.bound, adam_init="bounds")
            best.append(obj.evaluate(run(cfg, obj).best_genes).loss)
        best = np.array(best)
        print(f"  {algorithm:8s} median {np.median(best):.3e}  worst {best.max():.3e}  "
              f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
