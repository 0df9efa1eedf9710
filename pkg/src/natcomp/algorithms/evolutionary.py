"""Per-member recombination, local-search and run-length schemes: BBO, CRO, MBO, BFO."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from natcomp.algorithms.base import Algorithm, Params, param
from natcomp.components import (
    DecaySchedule,
    crowding_penalty,
    gaussian_sample,
    pick_other,
    probabilistic_accept,
    proportional_select,
    random_direction,
    random_walk,
    rank_fraction,
    recombine,
    restart,
    spread_scale,
    truncation_select,
)
from natcomp.core import Candidate, Population


# --- BBO --------------------------------------------------------------------

@dataclass(frozen=True)
class BBOParams(Params):
    elites: int = param(2, 0, None, "best members carried over unchanged")
    mutation_rate: float = param(0.3, 0.0, 1.0, "per-coordinate mutation chance of the worst member")
    mutation_scale: float = param(0.5, 0.0, None, "mutation sigma as a multiple of population spread")


class BBO(Algorithm):
    """Coordinates migrate from roulette-picked donors. A member imports each
    coordinate with chance equal to its rank fraction (0 for the best, 1 for
    the worst), so better members donate more and import less. Mutation
    chance scales the same way."""

    id = "BBO"
    summary = "copy coordinates from good donors, worse members import more; rank-scaled mutation"
    Params = BBOParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        P, f = pop.positions, pop.values
        rest = np.argsort(f, kind="stable")[min(p.elites, n - 1):]
        lam = rank_fraction(f)[rest][:, None]
        sigma = p.mutation_scale * spread_scale(P, problem.space)
        donors = proportional_select(f, rng, size=(rest.size, d))
        migrate = rng.random((rest.size, d)) < lam
        X = np.where(migrate, P[donors, np.arange(d)], P[rest])
        mutate = rng.random((rest.size, d)) < p.mutation_rate * lam
        X = self.clamp(problem, gaussian_sample(X, sigma * mutate, rng))
        P[rest], f[rest] = X, problem.evaluate_many(X)
        return state


# --- CRO --------------------------------------------------------------------

@dataclass(frozen=True)
class CROParams(Params):
    stagnation_limit: int = param(10, 0, None, "non-improving steps before a disruptive move")
    local_scale: float = param(0.3, 0.0, None, "local move sigma as a multiple of population spread")
    global_jitter: float = param(0.1, 0.0, None, "noise after a disruptive recombination, times spread")
    acceptance: float = param(0.2, 0.0, 1.0, "chance of accepting a worse point before any were accepted")
    acceptance_decay: float = param(0.5, 0.0, 1.0, "factor applied per previously accepted worse point")


class CRO(Algorithm):
    """Local Gaussian moves until a member stagnates, then one disruptive
    recombination with a random other member. Worse points are accepted with a
    chance that shrinks each time the member has accepted one before.

    Counters: ``stagnation`` and ``worse_accepted`` per member.
    """

    id = "CRO"
    summary = "local moves until stagnation, then recombination; shrinking chance of accepting worse"
    Params = CROParams

    def setup(self, state, problem, rng):
        n = len(state.population)
        state.counters["stagnation"] = np.zeros(n, dtype=int)
        state.counters["worse_accepted"] = np.zeros(n, dtype=int)

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n = len(pop)
        P, f = pop.positions, pop.values
        stag, worse = state.counters["stagnation"], state.counters["worse_accepted"]
        spread = spread_scale(P, problem.space)
        disrupt = stag > p.stagnation_limit
        X = np.empty_like(P)
        for i in range(n):
            if disrupt[i]:
                child = recombine(P[i], P[pick_other(n, i, rng)], rng)
                X[i] = gaussian_sample(child, p.global_jitter * spread, rng)
            else:
                X[i] = gaussian_sample(P[i], p.local_scale * spread, rng)
        X = self.clamp(problem, X)
        values = problem.evaluate_many(X)
        for i in range(n):
            old, new = Candidate(P[i], f[i]), Candidate(X[i], values[i])
            kept = probabilistic_accept(old, new, p.acceptance * p.acceptance_decay ** worse[i], rng)
            improved = values[i] < f[i]
            if kept is new:
                if not improved:
                    worse[i] += 1
                P[i], f[i] = X[i], values[i]
            stag[i] = 0 if improved or disrupt[i] else stag[i] + 1
        return state


# --- MBO --------------------------------------------------------------------

@dataclass(frozen=True)
class MBOParams(Params):
    queens: int = param(3, 1, None, "best members that start walks")
    walk_length: int = param(5, 1, None, "evaluated points per walk")
    walk_step: DecaySchedule = field(
        default=DecaySchedule("exponential", 0.2, 1e-5),
        metadata={"doc": "first walk step sigma as a fraction of box width"})
    walk_decay: float = param(0.7, 0.0, 1.0, "step and mating temperature factor per walk point")
    local_small: float = param(0.1, 0.0, None, "small local-search sigma, times population spread")
    local_large: float = param(1.0, 0.0, None, "large local-search sigma, times population spread")


class MBO(Algorithm):
    """Walks from the best members with shrinking steps. Each walk point may be
    recombined with the walk's start, with a chance that falls along the walk
    and with how much worse the point is. Each brood gets one local-search
    operator, picked by its smoothed success rate. The best members of
    everything seen this iteration survive.

    ``extra["operator_success"]`` and ``extra["operator_tries"]`` hold the
    statistics for the operators (small jitter, large jitter, coordinate reset).
    """

    id = "MBO"
    summary = "walks from elites, value-tied recombination with walk points, adaptive local search"
    Params = MBOParams

    OPERATORS = ("small-jitter", "large-jitter", "coordinate-reset")

    def setup(self, state, problem, rng):
        state.extra["operator_success"] = np.zeros(len(self.OPERATORS))
        state.extra["operator_tries"] = np.zeros(len(self.OPERATORS))

    def local_search(self, x, op, spread, problem, rng):
        if op == 0:
            return gaussian_sample(x, self.params.local_small * spread, rng)
        if op == 1:
            return gaussian_sample(x, self.params.local_large * spread, rng)
        y = x.copy()
        j = rng.integers(x.size)
        y[j] = restart(problem.space, rng)[j]
        return y

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        P, f = pop.positions, pop.values
        queens = truncation_select(f, min(p.queens, n))
        sigma0 = self.sched(problem, p.walk_step) * problem.space.width
        temp = float(np.std(f)) + np.finfo(float).tiny
        decay = p.walk_decay ** np.arange(p.walk_length)

        drones, broods = [], []
        for q in queens:
            sigmas = iter([sigma0 * c for c in decay])
            walk = random_walk(P[q], p.walk_length,
                               lambda g: gaussian_sample(np.zeros(d), next(sigmas), g), rng,
                               problem.space)[1:]
            values = problem.evaluate_many(walk)
            drones.append((walk, values))
            for k in range(p.walk_length):
                gap = max(0.0, values[k] - f[q])
                if rng.random() < np.exp(-gap / (decay[k] * temp)):
                    broods.append(recombine(P[q], walk[k], rng))

        X = [P] + [w for w, _ in drones]
        F = [f] + [v for _, v in drones]
        if broods:
            B = self.clamp(problem, np.array(broods))
            fb = problem.evaluate_many(B)
            succ, tries = state.extra["operator_success"], state.extra["operator_tries"]
            spread = spread_scale(P, problem.space)
            L = np.empty_like(B)
            ops = np.empty(len(B), dtype=int)
            for b in range(len(B)):
                rate = (succ + 1.0) / (tries + 2.0)
                ops[b] = rng.choice(rate.size, p=rate / rate.sum())
                L[b] = self.local_search(B[b], ops[b], spread, problem, rng)
            L = self.clamp(problem, L)
            fl = problem.evaluate_many(L)
            np.add.at(tries, ops, 1)
            np.add.at(succ, ops, (fl < fb).astype(float))
            X += [B, L]
            F += [fb, fl]
        X, F = np.vstack(X), np.concatenate(F)
        keep = truncation_select(F, n)
        state.population = Population(X[keep], F[keep], problem)
        return state


# --- BFO --------------------------------------------------------------------

@dataclass(frozen=True)
class BFOParams(Params):
    step: DecaySchedule = field(
        default=DecaySchedule("exponential", 0.1, 1e-5),
        metadata={"doc": "largest swim step as a fraction of mean box width"})
    grow: float = param(2.0, 1.0, None, "step factor after an improving swim")
    shrink: float = param(0.5, 0.0, 1.0, "step factor after a tumble")
    reproduce_every: int = param(5, 1, None, "iterations between copying the best half over the worst")
    eliminate_every: int = param(10, 1, None, "iterations between random eliminations")
    eliminate_prob: float = param(0.1, 0.0, 1.0, "chance a non-best member is restarted at an elimination")
    crowd_depth: float = param(0.05, 0.0, None, "attraction depth, times value range / size")
    crowd_height: float = param(0.05, 0.0, None, "repulsion height, times value range / size")
    crowd_attract_width: float = param(10.0, 0.0, None, "attraction kernel width on width-normalised distance")
    crowd_repel_width: float = param(100.0, 0.0, None, "repulsion kernel width on width-normalised distance")


class BFO(Algorithm):
    """Each member swims along its current direction. After an improving swim
    it keeps the direction and lengthens its step; otherwise it tumbles to a
    random direction with a shorter step. Moves are always taken. Comparisons
    use value plus a crowding term. The best half periodically replaces the
    worst half, and members are occasionally restarted.

    ``extra["direction"]`` and ``extra["step"]`` hold the swim state.
    """

    id = "BFO"
    summary = "keep swimming while improving, else tumble; crowding-adjusted values; reproduce/eliminate"
    Params = BFOParams

    def setup(self, state, problem, rng):
        n, d = len(state.population), problem.space.dims
        state.extra["direction"] = np.array([random_direction(d, rng) for _ in range(n)])
        state.extra["step"] = np.full(n, self.params.step.start)

    def health(self, positions, values, problem):
        p = self.params
        span = float(values.max() - values.min()) / len(values)
        Z = positions / problem.space.width
        return values + span * crowding_penalty(Z, p.crowd_depth, p.crowd_attract_width,
                                                p.crowd_height, p.crowd_repel_width)

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        P, f = pop.positions, pop.values
        D, S = state.extra["direction"], state.extra["step"]
        cap = self.sched(problem, p.step)
        S[:] = np.clip(S, 1e-9, cap)
        before = self.health(P, f, problem)
        X = self.clamp(problem, P + (S * self.scale(problem))[:, None] * D)
        values = problem.evaluate_many(X)
        after = self.health(X, values, problem)
        for i in range(n):
            if after[i] < before[i]:
                S[i] = min(S[i] * p.grow, cap)
            else:
                D[i] = random_direction(d, rng)
                S[i] *= p.shrink
        P[:], f[:] = X, values

        if state.iteration % p.reproduce_every == 0 and n > 1:
            order = np.argsort(f, kind="stable")
            half = n // 2
            good, bad = order[:half], order[n - half:]
            P[bad], f[bad], D[bad], S[bad] = P[good], f[good], D[good], S[good]

        if state.iteration % p.eliminate_every == 0:
            best = int(np.argmin(f))
            out = np.flatnonzero(rng.random(n) < p.eliminate_prob)
            out = out[out != best]
            if out.size:
                Y = restart(problem.space, rng, size=out.size)
                P[out], f[out] = Y, problem.evaluate_many(Y)
                D[out] = [random_direction(d, rng) for _ in out]
                S[out] = cap
        return state
