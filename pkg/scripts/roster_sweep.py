"""Time a full-roster sweep: every algorithm, every seed, one benchmark.

    python3 scripts/roster_sweep.py [--budget 2000] [--seeds 30]

Checks that runs finish and best-so-far traces never increase.
"""
import argparse
import sys
import time

import numpy as np

from natcomp.algorithms import ROSTER, make_algorithm
from natcomp.benchmarks import get_benchmark
from natcomp.core import run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", type=int, default=2000)
    ap.add_argument("--seeds", type=int, default=30)
    ap.add_argument("--benchmark", default="sphere")
    ap.add_argument("--dims", type=int, default=2)
    args = ap.parse_args()

    bench = get_benchmark(args.benchmark)
    space = bench.space(args.dims)
    bad = []
    start = time.perf_counter()
    for a in ROSTER:
        t = time.perf_counter()
        finals = []
        for s in range(args.seeds):
            trace = run(make_algorithm(a), bench, space, args.budget, s)
            if np.any(np.diff(trace.column("best")) > 0):
                bad.append((a, s))
            finals.append(trace.final_best)
        print(f"{a:6s} median {np.median(finals):.3e}  {time.perf_counter() - t:5.2f}s", flush=True)
    total = time.perf_counter() - start
    print(f"total {total:.1f}s; non-monotone traces: {bad or 'none'}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
