"""GA and PSO baselines, plus the plain random-search instance used in tests."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from natcomp.algorithms.base import Algorithm, AlgorithmState, Params, param
from natcomp.components import (
    gaussian_sample,
    proportional_select,
    recombine,
    restart,
    spread_scale,
    truncation_select,
    velocity_update,
)
from natcomp.core import Population


@dataclass(frozen=True)
class GAParams(Params):
    parent_fraction: float = param(0.5, 0.01, 1.0, "top half of the population forms the mating pool")
    offspring_fraction: float = param(1.0, 0.01, 4.0, "one child per member per generation")
    mutation_rate: float = param(0.3, 0.0, 1.0, "per-coordinate chance of a random move")
    mutation_scale: float = param(0.5, 0.0, None, "move sigma as a multiple of population spread")


class GA(Algorithm):
    """Truncation pool, roulette pairing, uniform crossover, Gaussian moves,
    then the worst of parents+children are dropped."""

    id = "GA"
    summary = "select good points, recombine in pairs, random move, drop the worst"
    Params = GAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        pool = truncation_select(pop.values, max(2, min(n, round(p.parent_fraction * n))))
        n_children = max(1, round(p.offspring_fraction * n))
        sigma = p.mutation_scale * spread_scale(pop.positions, problem.space)
        pairs = pool[proportional_select(pop.values[pool], rng, size=(n_children, 2))]
        children = recombine(pop.positions[pairs[:, 0]], pop.positions[pairs[:, 1]], rng)
        mask = rng.random((n_children, d)) < p.mutation_rate
        children = self.clamp(problem, gaussian_sample(children, sigma * mask, rng))
        child_values = problem.evaluate_many(children)
        X = np.vstack([pop.positions, children])
        f = np.concatenate([pop.values, child_values])
        keep = truncation_select(f, n)
        state.population = Population(X[keep], f[keep], problem)
        return state


@dataclass(frozen=True)
class PSOParams(Params):
    inertia: float = param(0.7, 0.0, 1.5, "canonical constriction-equivalent inertia")
    c1: float = param(1.4, 0.0, 4.0, "cognitive weight toward the member's own best")
    c2: float = param(1.4, 0.0, 4.0, "social weight toward the informant best")
    initial_velocity: float = param(0.1, 0.0, 1.0, "initial speeds drawn within this fraction of the box width")
    max_velocity: float = param(0.5, 1e-6, 2.0, "speed cap per coordinate as a fraction of box width")


class PSO(Algorithm):
    """Velocity update toward personal and global bests; global-best topology."""

    id = "PSO"
    summary = "velocity toward own best and informant best, with momentum"
    Params = PSOParams
    uses_velocity = True
    uses_historical_bests = True

    def initial_velocities(self, problem, rng):
        w = self.params.initial_velocity * problem.space.width
        return rng.uniform(-w, w, size=(self.initial_size, problem.space.dims))

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        vmax = p.max_velocity * problem.space.width
        g = state.best_positions[int(np.argmin(state.best_values))].copy()
        V = state.velocities
        for i in range(len(pop)):
            v = velocity_update(V[i], pop.positions[i], state.best_positions[i], g,
                                p.inertia, p.c1, p.c2, rng)
            V[i] = np.clip(v, -vmax, vmax)
        X = self.clamp(problem, pop.positions + V)
        pop.positions = X
        pop.values = problem.evaluate_many(X)
        self.update_historical_bests(state)
        return state


@dataclass(frozen=True)
class RandomSearchParams(Params):
    population_size: int = param(10, 1, None, "batch of uniform samples per iteration")


class RandomSearch(Algorithm):
    """Uniform i.i.d. sampling wearing the algorithm interface (not part of the roster)."""

    id = "RS"
    summary = "uniform random sampling"
    Params = RandomSearchParams

    def step(self, state: AlgorithmState, problem, rng):
        X = restart(problem.space, rng, size=self.params.population_size)
        state.population = Population(X, problem.evaluate_many(X), problem)
        return state
