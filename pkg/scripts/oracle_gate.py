"""Median final best of every algorithm vs the random-search oracle.

    python3 scripts/oracle_gate.py [--budget 5000] [--seeds 30] [--benchmark sphere] [--dims 2]

Exits 1 if any algorithm's median is not strictly below the oracle median.
"""
import argparse
import sys
import time

import numpy as np

from natcomp.algorithms import ROSTER, make_algorithm
from natcomp.benchmarks import get_benchmark, oracle_median
from natcomp.core import run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", type=int, default=5000)
    ap.add_argument("--seeds", type=int, default=30)
    ap.add_argument("--benchmark", default="sphere")
    ap.add_argument("--dims", type=int, default=2)
    ap.add_argument("--algo", default=",".join(ROSTER))
    args = ap.parse_args()

    bench = get_benchmark(args.benchmark)
    space = bench.space(args.dims)
    seeds = range(args.seeds)
    oracle = oracle_median(bench, space, args.budget, seeds)
    print(f"oracle median {oracle:.4e}")
    failed = []
    for a in args.algo.split(","):
        t = time.perf_counter()
        finals = [run(make_algorithm(a), bench, space, args.budget, s).final_best for s in seeds]
        med = float(np.median(finals))
        ok = med < oracle
        failed += [] if ok else [a]
        print(f"{a:6s} median {med:.3e}  ratio {med / oracle:.2e}  worst {max(finals):.2e}  "
              f"{time.perf_counter() - t:5.1f}s  {'ok' if ok else 'FAIL'}", flush=True)
    print("all below oracle" if not failed else f"above oracle: {', '.join(failed)}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
