"""Algorithm interface, parameter validation and the roster registry."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields
from typing import Any, ClassVar

import numpy as np

from natcomp.components import DecaySchedule, schedule_value
from natcomp.core import InvalidArgument, Population, Problem, clamp, init_population

ROSTER = (
    "GA", "PSO", "ALO", "ABC", "BFO", "BA", "BeA", "BB-BC", "BBO", "BSO", "CSO", "CSS",
    "CRO", "COA", "CS", "FA", "FWA", "FPA", "FOA", "GwSO", "GSA", "GWO", "GSO", "HS",
    "ICA", "IWO", "KH", "MBO", "MFO", "SFLA", "SCA", "TLBO", "WCA", "WOA",
)

REGISTRY: dict[str, type["Algorithm"]] = {}


def param(default, lo=None, hi=None, doc: str = ""):
    """Dataclass field with an inclusive validity range and a one-line rationale."""
    return field(default=default, metadata={"range": (lo, hi), "doc": doc})


@dataclass(frozen=True)
class Params:
    population_size: int = param(50, 1, None, "common swarm size for 2-30 dimensional problems")

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            lo, hi = f.metadata.get("range", (None, None))
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                continue
            if (lo is not None and value < lo) or (hi is not None and value > hi):
                raise InvalidArgument(
                    f"{type(self).__qualname__}.{f.name}={value!r} outside [{lo}, {hi}]"
                )
        self.validate()

    def validate(self):
        """Cross-field checks; subclasses override."""

    def replace(self, **overrides) -> "Params":
        """Copy with fields overridden; ``"name.sub"`` keys set one field of a schedule."""
        names = {f.name: f for f in fields(self)}
        clean = {}
        for key, value in overrides.items():
            key, _, sub = key.partition(".")
            if key not in names:
                raise InvalidArgument(f"unknown parameter {key!r} for {type(self).__qualname__}")
            current = clean.get(key, getattr(self, key))
            if sub:
                if not isinstance(current, DecaySchedule) or sub not in {f.name for f in fields(current)}:
                    raise InvalidArgument(f"parameter {key!r} has no field {sub!r}")
                if isinstance(value, str) and sub != "kind":
                    value = _coerce(value, float)
                value = dataclasses.replace(current, **{sub: value})
            elif isinstance(current, DecaySchedule):
                if not isinstance(value, DecaySchedule):
                    raise InvalidArgument(f"set schedule {key!r} field by field, e.g. {key}.end=0.1")
            elif isinstance(value, str):
                value = _coerce(value, type(current))
            clean[key] = value
        return dataclasses.replace(self, **clean)


def _coerce(text: str, kind: type):
    try:
        if kind is bool:
            return text.lower() in ("1", "true", "yes", "on")
        if kind is int:
            return int(text)
        return float(text)
    except ValueError:
        raise InvalidArgument(f"cannot parse {text!r} as {kind.__name__}") from None


@dataclass
class AlgorithmState:
    """Mutable per-run state.

    ``velocities`` is set exactly for algorithms that declare velocities, and
    ``best_positions``/``best_values`` exactly for those that keep historical
    bests; every other algorithm leaves them as None.
    """

    population: Population
    iteration: int = 0  # number of the step being (or last) executed
    velocities: np.ndarray | None = None
    best_positions: np.ndarray | None = None
    best_values: np.ndarray | None = None
    counters: dict[str, np.ndarray] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    terminated: bool = False


class Algorithm:
    id: ClassVar[str]
    summary: ClassVar[str] = ""
    Params: ClassVar[type[Params]] = Params
    uses_velocity: ClassVar[bool] = False
    uses_historical_bests: ClassVar[bool] = False

    def __init_subclass__(cls, register: bool = True, **kw):
        super().__init_subclass__(**kw)
        if register and "id" in cls.__dict__:
            REGISTRY[cls.id] = cls

    def __init__(self, params: Params | None = None):
        params = self.Params() if params is None else params
        if not isinstance(params, self.Params):
            raise InvalidArgument(f"{self.id} expects {self.Params.__qualname__}")
        self.params = params

    def __repr__(self):
        return f"{type(self).__name__}({self.params!r})"

    @property
    def initial_size(self) -> int:
        return self.params.population_size

    # --- run-loop protocol --------------------------------------------------

    def initialize(self, problem: Problem, rng: np.random.Generator) -> AlgorithmState:
        pop = init_population(problem, self.initial_size, rng)
        state = AlgorithmState(pop)
        if self.uses_historical_bests:
            state.best_positions = pop.positions.copy()
            state.best_values = pop.values.copy()
        if self.uses_velocity:
            state.velocities = self.initial_velocities(problem, rng)
        self.setup(state, problem, rng)
        return state

    def initial_velocities(self, problem: Problem, rng) -> np.ndarray:
        return np.zeros((self.initial_size, problem.space.dims))

    def setup(self, state: AlgorithmState, problem: Problem, rng):
        """Hook for per-algorithm state; runs after population and velocities."""

    def step(self, state: AlgorithmState, problem: Problem, rng) -> AlgorithmState:
        raise NotImplementedError

    # --- helpers shared by step implementations -----------------------------

    @staticmethod
    def clamp(problem: Problem, X: np.ndarray) -> np.ndarray:
        return clamp(X, problem.space)

    @staticmethod
    def sched(problem: Problem, s: DecaySchedule) -> float:
        return schedule_value(s, problem.evals_used, problem.budget)

    @staticmethod
    def scale(problem: Problem) -> float:
        """Mean box width; radii given as fractions are multiplied by this."""
        return float(np.mean(problem.space.width))

    @staticmethod
    def update_historical_bests(state: AlgorithmState):
        pop = state.population
        better = pop.values < state.best_values
        state.best_positions[better] = pop.positions[better]
        state.best_values[better] = pop.values[better]


def make_algorithm(algorithm_id: str, params: Params | dict | None = None) -> Algorithm:
    cls = algorithm_class(algorithm_id)
    if isinstance(params, dict):
        params = cls.Params().replace(**params)
    return cls(params)


def algorithm_class(algorithm_id: str) -> type[Algorithm]:
    try:
        return REGISTRY[algorithm_id]
    except KeyError:
        raise InvalidArgument(
            f"unknown algorithm {algorithm_id!r}; valid ids: {', '.join(ROSTER)}"
        ) from None


def default_params(algorithm_id: str) -> Params:
    return algorithm_class(algorithm_id).Params()


def step(instance: Algorithm, state: AlgorithmState, problem: Problem, rng) -> AlgorithmState:
    """One iteration outside the run loop; numbers it the way `run` does."""
    state.iteration += 1
    return instance.step(state, problem, rng)
