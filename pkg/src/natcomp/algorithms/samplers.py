"""Algorithms that mostly sample new points from regions around existing ones."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from natcomp.algorithms.base import Algorithm, Params, param
from natcomp.components import (
    DecaySchedule,
    fitness_weights,
    gaussian_sample,
    greedy_accept,
    hypersphere_sample,
    levy_step,
    project_to_ball,
    proportional_select,
    random_walk,
    restart,
    spread_scale,
    truncation_select,
    weighted_centroid,
)
from natcomp.core import Candidate, Population


# --- ALO --------------------------------------------------------------------

@dataclass(frozen=True)
class ALOParams(Params):
    elite_fraction: float = param(0.2, 0.01, 1.0, "share of members kept as sphere centres")
    radius: DecaySchedule = field(
        default=DecaySchedule("exponential", 0.3, 1e-5),
        metadata={"doc": "sphere radius as a fraction of box width"})
    walk_steps: int = param(5, 0, None, "random-walk steps inside the sphere after a restart")


class ALO(Algorithm):
    """Non-elites restart in shrinking balls around roulette-picked elites, then
    random-walk inside the ball; only the walk's end point is evaluated."""

    id = "ALO"
    summary = "restart weak members in shrinking spheres around elites, then random-walk inside"
    Params = ALOParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        n_elite = max(1, min(n - 1, round(p.elite_fraction * n))) if n > 1 else 1
        elites = truncation_select(pop.values, n_elite)
        rest = np.setdiff1d(np.arange(n), elites)
        if rest.size == 0:
            rest = elites
        r = self.sched(problem, p.radius) * self.scale(problem)
        step_sigma = r / np.sqrt(max(p.walk_steps, 1))
        picks = elites[proportional_select(pop.values[elites], rng, size=rest.size)]
        centres = pop.positions[picks]
        starts = np.array([hypersphere_sample(c, r, rng) for c in centres])
        walk = random_walk(starts, p.walk_steps,
                           lambda g: gaussian_sample(np.zeros((rest.size, d)), step_sigma, g), rng,
                           problem.space, lambda x: project_to_ball(x, centres, r))
        X = walk[-1]
        X = self.clamp(problem, X)
        pop.positions[rest] = X
        pop.values[rest] = problem.evaluate_many(X)
        return state


# --- BeA --------------------------------------------------------------------

@dataclass(frozen=True)
class BeAParams(Params):
    population_size: int = param(20, 2, None, "sites plus scouts")
    sites: int = param(5, 1, None, "best members searched around")
    elite_sites: int = param(2, 0, None, "top sites that get the larger recruit count")
    elite_recruits: int = param(10, 1, None, "samples per elite site")
    recruits: int = param(5, 1, None, "samples per other site")
    radius: DecaySchedule = field(
        default=DecaySchedule("exponential", 0.1, 1e-5),
        metadata={"doc": "sampling radius as a fraction of box width"})

    def validate(self):
        if self.sites > self.population_size:
            raise ValueError("sites cannot exceed population_size")


class BeA(Algorithm):
    """Ball sampling around the best sites with greedy replacement; remaining
    members are scouted by uniform restarts, also kept only if better."""

    id = "BeA"
    summary = "greedy sampling within a shrinking radius of the best, random scouts elsewhere"
    Params = BeAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        sites = truncation_select(pop.values, min(p.sites, len(pop)))
        r = self.sched(problem, p.radius) * self.scale(problem)
        proposals, owners = [], []
        for rank, i in enumerate(sites):
            m = p.elite_recruits if rank < p.elite_sites else p.recruits
            proposals += [hypersphere_sample(pop.positions[i], r, rng) for _ in range(m)]
            owners += [i] * m
        scouts = np.setdiff1d(np.arange(len(pop)), sites)
        for i in scouts:
            proposals.append(restart(problem.space, rng))
            owners.append(i)
        X = self.clamp(problem, np.array(proposals))
        values = problem.evaluate_many(X)
        owners = np.array(owners)
        for i in np.unique(owners):
            rows = np.flatnonzero(owners == i)
            j = rows[int(np.argmin(values[rows]))]
            kept = greedy_accept(Candidate(pop.positions[i], pop.values[i]), Candidate(X[j], values[j]))
            pop.positions[i], pop.values[i] = kept.position, kept.value
        return state


# --- BB-BC ------------------------------------------------------------------

@dataclass(frozen=True)
class BBBCParams(Params):
    width: DecaySchedule = field(
        default=DecaySchedule("exponential", 0.3, 1e-6),
        metadata={"doc": "normal sigma as a fraction of box width"})


class BBBC(Algorithm):
    id = "BB-BC"
    summary = "resample the whole population around the value-weighted centroid, narrowing"
    Params = BBBCParams

    def step(self, state, problem, rng):
        pop = state.population
        centre = weighted_centroid(pop.positions, pop.values)
        sigma = self.sched(problem, self.params.width) * problem.space.width
        X = self.clamp(problem, gaussian_sample(np.tile(centre, (len(pop), 1)), sigma, rng))
        pop.positions = X
        pop.values = problem.evaluate_many(X)
        return state


# --- FWA --------------------------------------------------------------------

@dataclass(frozen=True)
class FWAParams(Params):
    population_size: int = param(5, 1, None, "number of fireworks")
    sparks: int = param(40, 1, None, "total samples per iteration, shared by value")
    min_sparks: int = param(2, 1, None, "floor on samples per firework")
    amplitude: float = param(0.4, 0.0, None, "largest sigma as a fraction of box width")
    min_amplitude: DecaySchedule = field(
        default=DecaySchedule("exponential", 0.02, 1e-6),
        metadata={"doc": "sigma floor as a fraction of box width"})


class FWA(Algorithm):
    """Gaussian sparks around each firework. Better fireworks get more sparks
    and a narrower sigma, scaled by their value gap to the best; only
    improvements are kept."""

    id = "FWA"
    summary = "Gaussian sampling around the best points, width tied to value gap, greedy"
    Params = FWAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        f = pop.values
        gap = f - f.min()
        tiny = np.finfo(float).tiny
        amp = p.amplitude * (gap + tiny) / (gap.sum() + tiny)
        floor = self.sched(problem, p.min_amplitude)
        w = fitness_weights(f)
        counts = np.maximum(p.min_sparks, np.round(p.sparks * w / w.sum())).astype(int)
        proposals, owners = [], []
        for i in range(len(pop)):
            sigma = max(amp[i], floor) * problem.space.width
            proposals.append(gaussian_sample(np.tile(pop.positions[i], (counts[i], 1)), sigma, rng))
            owners += [i] * counts[i]
        X = self.clamp(problem, np.vstack(proposals))
        values = problem.evaluate_many(X)
        owners = np.array(owners)
        for i in range(len(pop)):
            rows = np.flatnonzero(owners == i)
            j = rows[int(np.argmin(values[rows]))]
            kept = greedy_accept(Candidate(pop.positions[i], pop.values[i]), Candidate(X[j], values[j]))
            pop.positions[i], pop.values[i] = kept.position, kept.value
        return state


# --- IWO --------------------------------------------------------------------

@dataclass(frozen=True)
class IWOParams(Params):
    population_size: int = param(10, 1, None, "initial members")
    max_population: int = param(30, 1, None, "cap applied after seeding")
    min_seeds: int = param(1, 0, None, "offspring of the worst member")
    max_seeds: int = param(5, 1, None, "offspring of the best member")
    spread: DecaySchedule = field(
        default=DecaySchedule("nonlinear-power", 0.2, 1e-5, 3.0),
        metadata={"doc": "offspring sigma as a fraction of box width, cubic decay"})

    def validate(self):
        if self.min_seeds > self.max_seeds:
            raise ValueError("min_seeds cannot exceed max_seeds")


class IWO(Algorithm):
    id = "IWO"
    summary = "offspring count by relative value, non-linearly shrinking spread, capped population"
    Params = IWOParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        f = pop.values
        span = f.max() - f.min()
        rel = (f.max() - f) / span if span > 0 else np.ones(len(f))
        counts = np.floor(p.min_seeds + (p.max_seeds - p.min_seeds) * rel).astype(int)
        counts = np.maximum(counts, 0)
        if counts.sum() == 0:
            counts[int(np.argmin(f))] = 1
        sigma = self.sched(problem, p.spread) * problem.space.width
        parents = np.repeat(np.arange(len(pop)), counts)
        seeds = self.clamp(problem, gaussian_sample(pop.positions[parents], sigma, rng))
        seed_values = problem.evaluate_many(seeds)
        X = np.vstack([pop.positions, seeds])
        values = np.concatenate([f, seed_values])
        if len(values) > p.max_population:
            keep = truncation_select(values, p.max_population)
            X, values = X[keep], values[keep]
        state.population = Population(X, values, problem)
        return state


# --- HS ---------------------------------------------------------------------

@dataclass(frozen=True)
class HSParams(Params):
    population_size: int = param(20, 2, None, "memory size")
    memory_rate: float = param(0.95, 0.0, 1.0, "chance a coordinate is copied rather than redrawn")
    adjust_rate: float = param(0.3, 0.0, 1.0, "chance a copied coordinate is nudged")
    bandwidth: float = param(0.5, 0.0, None, "nudge size as a multiple of population spread")


class HS(Algorithm):
    """One challenger per iteration, built coordinate-wise from random members
    or fresh uniform values; it replaces the worst member if better."""

    id = "HS"
    summary = "one coordinate-wise mixed challenger per iteration replaces the worst if better"
    Params = HSParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        u = rng.random((2, d))
        copy = u[0] < p.memory_rate
        adjust = copy & (u[1] < p.adjust_rate)
        x = pop.positions[rng.integers(n, size=d), np.arange(d)]
        # draws below happen only when needed; the order stays fixed
        if not copy.all():
            x = np.where(copy, x, restart(problem.space, rng))
        if adjust.any():
            bw = p.bandwidth * spread_scale(pop.positions, problem.space)
            x = self.clamp(problem, x + adjust * bw * rng.uniform(-1.0, 1.0, d))
        v = problem.evaluate(x)
        worst = int(np.argmax(pop.values))
        if v < pop.values[worst]:
            pop.positions[worst], pop.values[worst] = x, v
        return state


# --- CS ---------------------------------------------------------------------

@dataclass(frozen=True)
class CSParams(Params):
    population_size: int = param(15, 2, None, "small population, as the method prescribes")
    restart_fraction: float = param(0.25, 0.0, 1.0, "share of worst members restarted each iteration")
    uniform_prob: float = param(0.25, 0.0, 1.0, "chance a restart is uniform instead of a heavy-tailed jump")
    levy_scale: float = param(1.0, 1e-9, None, "jump scale as a multiple of population spread")
    tail_index: float = param(1.5, 0.01, 1.99, "Mantegna tail index")


class CS(Algorithm):
    """Worst members restart uniformly or by a heavy-tailed jump from a random other member."""

    id = "CS"
    summary = "restart weak members uniformly or by heavy-tailed jumps from random members"
    Params = CSParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        k = max(1, round(p.restart_fraction * n))
        order = np.argsort(pop.values, kind="stable")
        worst, keep = order[::-1][:k], order[:n - k]
        scale = p.levy_scale * float(np.mean(spread_scale(pop.positions, problem.space)))
        uniform = (rng.random(k) < p.uniform_prob) | (keep.size == 0)
        X = restart(problem.space, rng, size=k)
        jumpers = np.flatnonzero(~uniform)
        if jumpers.size:
            src = keep[rng.integers(keep.size, size=jumpers.size)]
            X[jumpers] = pop.positions[src] + levy_step(scale, p.tail_index, rng, d, size=jumpers.size)
        X = self.clamp(problem, X)
        pop.positions[worst] = X
        pop.values[worst] = problem.evaluate_many(X)
        return state
