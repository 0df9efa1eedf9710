"""Search-space primitives, budgeted evaluation, and the synchronous run loop.

Everything here uses the minimization convention: lower objective values are
better, and the run archive keeps the lowest value ever evaluated.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

Objective = Callable[[np.ndarray], float]


class InvalidArgument(ValueError):
    """Raised when an operation's precondition is violated."""


class BudgetExhausted(Exception):
    """Raised by `Problem` when an evaluation would exceed the budget."""


def rng_stream(seed: int | np.random.Generator | None) -> np.random.Generator:
    """Return the per-run generator for ``seed``.

    PCG64 output for a given seed is platform independent, so identical seeds
    and identical call sequences give identical streams.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise InvalidArgument("a seed is required; runs are always reproducible")
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True)
class SearchSpace:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size == 0:
            raise InvalidArgument("bounds must be 1-D vectors of equal, nonzero length")
        if not np.all(np.isfinite(lower)) or not np.all(np.isfinite(upper)):
            raise InvalidArgument("bounds must be finite")
        if not np.all(lower < upper):
            raise InvalidArgument("invalid search space: need lower[i] < upper[i] for every i")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, low: float, high: float, dims: int) -> "SearchSpace":
        if dims < 1:
            raise InvalidArgument("dims must be >= 1")
        return cls(np.full(dims, float(low)), np.full(dims, float(high)))

    @property
    def dims(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class Candidate:
    position: np.ndarray
    value: float | None = None

    @property
    def evaluated(self) -> bool:
        return self.value is not None


def clamp(position: np.ndarray, space: SearchSpace) -> np.ndarray:
    """Project onto the box coordinate-wise. Accepts one vector or a stack of rows."""
    position = np.asarray(position, dtype=float)
    if position.shape[-1:] != (space.dims,):
        raise InvalidArgument(f"expected length {space.dims}, got shape {position.shape}")
    return np.minimum(np.maximum(position, space.lower), space.upper)


class Problem:
    """An objective bound to a search space, an evaluation budget and the best-ever archive.

    Every objective call in a run goes through `evaluate` or `evaluate_many`,
    so `evals_used` is exact and never passes `budget`.
    """

    def __init__(self, objective: Objective, space: SearchSpace, budget: int):
        if budget < 1:
            raise InvalidArgument("budget must be >= 1")
        self.objective = objective
        self.space = space
        self.budget = int(budget)
        self.evals_used = 0
        self.best_ever = Candidate(np.full(space.dims, np.nan), math.inf)

    @property
    def remaining(self) -> int:
        return self.budget - self.evals_used

    @property
    def progress(self) -> float:
        """Fraction of the budget spent, in [0, 1]."""
        return self.evals_used / self.budget

    def _check(self, X: np.ndarray):
        if (X < self.space.lower).any() or (X > self.space.upper).any():
            raise InvalidArgument("position outside the search space; clamp before evaluating")

    def evaluate(self, x: np.ndarray) -> float:
        if self.evals_used >= self.budget:
            raise BudgetExhausted
        x = np.asarray(x, dtype=float)
        self._check(x)
        value = float(self.objective(x))
        self.evals_used += 1
        if value < self.best_ever.value:
            self.best_ever = Candidate(x.copy(), value)
        return value

    def evaluate_many(self, X: np.ndarray) -> np.ndarray:
        """Evaluate rows in order. If the budget runs out part-way, the rows that
        fit are still evaluated (and archived) before `BudgetExhausted` is raised."""
        X = np.asarray(X, dtype=float)
        self._check(X)
        n = min(len(X), self.remaining)
        values = np.empty(len(X))
        obj = self.objective
        for i in range(n):
            values[i] = obj(X[i])
        self.evals_used += n
        if n:
            j = int(np.argmin(values[:n]))
            if values[j] < self.best_ever.value:
                self.best_ever = Candidate(X[j].copy(), float(values[j]))
        if n < len(X):
            raise BudgetExhausted
        return values


@dataclass
class Population:
    """Member positions (rows) and values, tied to the run's `Problem` archive."""

    positions: np.ndarray
    values: np.ndarray
    problem: Problem

    def __len__(self) -> int:
        return len(self.values)

    @property
    def members(self) -> list[Candidate]:
        return [Candidate(p.copy(), float(v)) for p, v in zip(self.positions, self.values)]

    @property
    def best_ever(self) -> Candidate:
        return self.problem.best_ever

    @property
    def evals_used(self) -> int:
        return self.problem.evals_used

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.values))

    @property
    def best_position(self) -> np.ndarray:
        return self.positions[self.best_index]

    def order(self) -> np.ndarray:
        """Indices sorted best first; ties keep population order."""
        return np.argsort(self.values, kind="stable")


def init_population(problem: Problem, n: int, rng: np.random.Generator) -> Population:
    """Uniformly sample and evaluate ``n`` members (draw order: row-major)."""
    if n < 1:
        raise InvalidArgument("population size must be >= 1")
    space = problem.space
    X = rng.uniform(space.lower, space.upper, size=(n, space.dims))
    values = problem.evaluate_many(X)
    return Population(X, values, problem)


@dataclass
class TraceRecord:
    iteration: int
    evals: int
    best: float
    mean: float
    spread: float


COLUMNS = ("iteration", "evals", "best", "mean", "spread")


def fmt_float(x: float) -> str:
    return format(x, ".17g")


@dataclass
class RunTrace:
    records: list[TraceRecord] = field(default_factory=list)
    best_position: np.ndarray | None = None
    terminated_early: bool = False

    def append(self, iteration: int, problem: Problem, values: np.ndarray | None):
        if values is None or len(values) == 0:
            mean = spread = math.nan
        else:
            values = np.asarray(values, dtype=float)
            mean = float(values.sum() / values.size)
            c = values - mean
            spread = math.sqrt(float(c @ c) / values.size)  # population std, cheaper than np.std
        self.records.append(
            TraceRecord(iteration, problem.evals_used, problem.best_ever.value, mean, spread)
        )

    def add(self, iteration: int, evals: int, best: float, mean: float, spread: float):
        self.records.append(TraceRecord(iteration, evals, best, mean, spread))

    def __len__(self) -> int:
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])

    @property
    def final_best(self) -> float:
        return self.records[-1].best

    def rows(self) -> list[list[str]]:
        return [
            [str(r.iteration), str(r.evals), fmt_float(r.best), fmt_float(r.mean), fmt_float(r.spread)]
            for r in self.records
        ]

    def to_csv(self, header: dict[str, Any] | None = None) -> str:
        lines = []
        if header:
            lines.append("# " + json.dumps(header, sort_keys=True))
        lines.append(",".join(COLUMNS))
        lines.extend(",".join(row) for row in self.rows())
        return "\n".join(lines) + "\n"

    def to_json(self, header: dict[str, Any] | None = None) -> str:
        doc = {
            "header": header or {},
            "columns": list(COLUMNS),
            "records": [
                [r.iteration, r.evals, _json_float(r.best), _json_float(r.mean), _json_float(r.spread)]
                for r in self.records
            ],
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _json_float(x: float):
    # NaN/inf are not JSON; keep them as strings so the document stays valid
    return x if math.isfinite(x) else repr(x)


def run(instance, objective: Objective, space: SearchSpace, budget: int, rng) -> RunTrace:
    """Drive ``instance`` until the budget is spent or it reports termination.

    Record 0 describes the initial population. Each later record is written
    after a step; if the budget runs out inside a step, that partial iteration
    still gets a record so the last row always equals the archive best.
    """
    rng = rng_stream(rng)
    if budget < instance.initial_size:
        raise InvalidArgument(
            f"budget {budget} is smaller than the initial population ({instance.initial_size})"
        )
    problem = Problem(objective, space, budget)
    trace = RunTrace()
    state = instance.initialize(problem, rng)
    trace.append(0, problem, state.population.values)
    iteration = 0
    while problem.remaining > 0 and not state.terminated:
        iteration += 1
        before = problem.evals_used
        state.iteration = iteration
        try:
            state = instance.step(state, problem, rng)
        except BudgetExhausted:
            trace.append(iteration, problem, state.population.values)
            break
        if problem.evals_used == before and not state.terminated:
            raise RuntimeError(f"{instance.id} step {iteration} consumed no evaluations")
        trace.append(iteration, problem, state.population.values)
    trace.best_position = problem.best_ever.position.copy()
    trace.terminated_early = bool(state.terminated) and problem.remaining > 0
    return trace


def as_space(bounds: Iterable[Sequence[float]]) -> SearchSpace:
    b = np.asarray(list(bounds), dtype=float)
    return SearchSpace(b[:, 0], b[:, 1])
