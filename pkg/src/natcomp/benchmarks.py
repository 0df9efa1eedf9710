"""Standard continuous test functions and the random-search oracle."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from natcomp.core import InvalidArgument, Problem, RunTrace, SearchSpace, rng_stream


def sphere(x):
    x = np.asarray(x, dtype=float)
    return float(x @ x)


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def ackley(x):
    x = np.asarray(x, dtype=float)
    d = x.size
    a = -20.0 * np.exp(-0.2 * np.sqrt(x @ x / d))
    b = -np.exp(np.sum(np.cos(2.0 * np.pi * x)) / d)
    return float(a + b + 20.0 + np.e)


def griewank(x):
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.size + 1)
    return float(1.0 + x @ x / 4000.0 - np.prod(np.cos(x / np.sqrt(i))))


@dataclass(frozen=True)
class Benchmark:
    name: str
    function: Callable[[np.ndarray], float]
    lower: float
    upper: float
    optimum_coordinate: float  # optimum position is this value in every coordinate
    optimum_value: float = 0.0
    min_dims: int = 1

    def space(self, dims: int) -> SearchSpace:
        if dims < self.min_dims:
            raise InvalidArgument(f"{self.name} needs dims >= {self.min_dims}")
        return SearchSpace.box(self.lower, self.upper, dims)

    def optimum(self, dims: int) -> np.ndarray:
        return np.full(dims, self.optimum_coordinate)

    def __call__(self, x) -> float:
        return self.function(x)


BENCHMARKS = {
    b.name: b for b in (
        Benchmark("sphere", sphere, -5.12, 5.12, 0.0),
        Benchmark("rosenbrock", rosenbrock, -5.0, 10.0, 1.0, min_dims=2),
        Benchmark("rastrigin", rastrigin, -5.12, 5.12, 0.0),
        Benchmark("ackley", ackley, -32.768, 32.768, 0.0),
        Benchmark("griewank", griewank, -600.0, 600.0, 0.0),
    )
}


def get_benchmark(name: str) -> Benchmark:
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise InvalidArgument(
            f"unknown benchmark {name!r}; valid names: {', '.join(BENCHMARKS)}"
        ) from None


def evaluate_benchmark(name: str, x, dims: int | None = None) -> float:
    """Value of benchmark ``name`` at ``x``; ``x`` must lie in the canonical box.

    ``dims``, when given, is checked against the length of ``x``.
    """
    bench = get_benchmark(name)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidArgument("x must be a non-empty vector")
    if dims is not None and x.size != dims:
        raise InvalidArgument(f"expected {dims} coordinates, got {x.size}")
    space = bench.space(x.size)
    if not space.contains(x):
        raise InvalidArgument(f"x lies outside the {name} domain [{bench.lower}, {bench.upper}]")
    return bench(x)


def random_search(objective, space: SearchSpace, budget: int, rng, batch: int = 1000) -> RunTrace:
    """Oracle baseline: ``budget`` i.i.d. uniform samples, one trace record per sample.

    Samples are drawn in batches of ``batch`` rows (row-major), so the stream is
    the same as drawing one point at a time. Record k is written after sample k
    (1-based), with mean/spread over the samples so far.
    """
    if budget < 1:
        raise InvalidArgument("budget must be >= 1")
    rng = rng_stream(rng)
    problem = Problem(objective, space, budget)
    trace = RunTrace()
    total = total_sq = 0.0
    done = 0
    while done < budget:
        X = rng.uniform(space.lower, space.upper, size=(min(batch, budget - done), space.dims))
        values = problem.evaluate_many(X)
        for v in values:
            done += 1
            best = min(trace.records[-1].best, v) if trace.records else v
            total += v
            total_sq += v * v
            mean = total / done
            spread = float(np.sqrt(max(total_sq / done - mean * mean, 0.0)))
            trace.add(done, done, best, mean, spread)
    trace.best_position = problem.best_ever.position.copy()
    return trace


def oracle_median(objective, space: SearchSpace, budget: int, seeds) -> float:
    """Median final best of `random_search` over ``seeds``."""
    return float(np.median([random_search(objective, space, budget, s).final_best for s in seeds]))
