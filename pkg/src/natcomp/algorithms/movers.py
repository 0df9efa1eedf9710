"""Algorithms whose members move toward other members with vector arithmetic,
but carry no velocity."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from natcomp.algorithms.base import Algorithm, Params, param
from natcomp.components import (
    DecaySchedule,
    cone_direction,
    fitness_weights,
    gaussian_sample,
    greedy_accept,
    hypercube_sample,
    hypersphere_sample,
    levy_step,
    move_toward,
    pick_other,
    probabilistic_accept,
    proportional_select,
    random_direction,
    random_walk,
    recombine,
    restart,
    selection_probabilities,
    spiral_move,
    spread_scale,
    truncation_select,
    weighted_centroid,
)
from natcomp.core import Candidate


def _greedy_merge(pop, X, values):
    """Member-wise greedy acceptance of an evaluated proposal batch; ties keep the old point."""
    better = values < pop.values
    pop.positions[better], pop.values[better] = X[better], values[better]


# --- ABC --------------------------------------------------------------------

@dataclass(frozen=True)
class ABCParams(Params):
    stagnation_limit: int = param(20, 1, None, "failed trials before a member is restarted")
    move_size: DecaySchedule = field(
        default=DecaySchedule("linear", 1.0, 0.1),
        metadata={"doc": "upper bound of the move fraction, shrinking 1.0 -> 0.1 over the budget"})


class ABC(Algorithm):
    """Employed pass (one trial each), onlooker pass (trials by roulette), scout restart.

    The index of a member restarted in the last step is kept in
    ``state.extra["restarted"]``; every other member only changes greedily.
    """

    id = "ABC"
    summary = "greedy moves toward random members, more trials for good members, stagnation restarts"
    Params = ABCParams

    def setup(self, state, problem, rng):
        state.counters["trials"] = np.zeros(len(state.population), dtype=int)
        state.extra["restarted"] = []

    def _trial(self, pop, i, s, rng):
        k = pick_other(len(pop), i, rng)
        return move_toward(pop.positions[i], pop.positions[k], rng.uniform(0.0, 2.0 * s), 0.0, rng)

    def _accept(self, state, i, x, v):
        pop, trials = state.population, state.counters["trials"]
        if v < pop.values[i]:
            pop.positions[i], pop.values[i] = x, v
            trials[i] = 0
        else:
            trials[i] += 1

    def step(self, state, problem, rng):
        pop, n = state.population, len(state.population)
        s = self.sched(problem, self.params.move_size)
        state.extra["restarted"] = []
        k = pick_other(n, np.arange(n), rng)
        X = self.clamp(problem, move_toward(pop.positions, pop.positions[k],
                                            rng.uniform(0.0, 2.0 * s, (n, 1)), 0.0, rng))
        values = problem.evaluate_many(X)
        for i in range(n):
            self._accept(state, i, X[i], values[i])
        for i in proportional_select(pop.values, rng, size=n):
            x = self.clamp(problem, self._trial(pop, int(i), s, rng))
            self._accept(state, int(i), x, problem.evaluate(x))
        trials = state.counters["trials"].copy()
        trials[pop.best_index] = -1
        worst = int(np.argmax(trials))
        if trials[worst] > self.params.stagnation_limit:
            x = restart(problem.space, rng)
            pop.positions[worst], pop.values[worst] = x, problem.evaluate(x)
            state.counters["trials"][worst] = 0
            state.extra["restarted"] = [worst]
        return state


# --- BA ---------------------------------------------------------------------

@dataclass(frozen=True)
class BAParams(Params):
    max_fraction: float = param(2.0, 0.0, 4.0, "move fraction toward the best drawn from U(0, this)")
    local_prob: float = param(0.5, 0.0, 1.0, "initial chance of a local jump near the best")
    local_decay: float = param(0.9, 0.0, 1.0, "local-jump chance is multiplied by this per improvement")
    local_radius: float = param(0.1, 0.0, None, "jump radius as a multiple of mean distance to the best")
    accept_max: float = param(0.2, 0.0, 1.0, "ceiling on the chance of keeping a worse point")
    accept_growth: float = param(0.9, 0.0, 1.0, "acceptance = accept_max * (1 - growth**improvements)")


class BA(Algorithm):
    id = "BA"
    summary = "random-speed moves to the best, local jumps near it, probabilistic acceptance"
    Params = BAParams

    def setup(self, state, problem, rng):
        state.counters["improvements"] = np.zeros(len(state.population), dtype=int)

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n = len(pop)
        k = state.counters["improvements"]
        best = pop.best_position.copy()
        radius = p.local_radius * float(np.mean(np.linalg.norm(pop.positions - best, axis=1)))
        radius = max(radius, 1e-12 * self.scale(problem))
        X = move_toward(pop.positions, best, rng.uniform(0.0, p.max_fraction, (n, 1)), 0.0, rng)
        jump = rng.random(n) < p.local_prob * p.local_decay ** k
        if jump.any():
            X[jump] = hypersphere_sample(np.tile(best, (int(jump.sum()), 1)), radius, rng)
        X = self.clamp(problem, X)
        values = problem.evaluate_many(X)
        for i in range(n):
            old = Candidate(pop.positions[i], pop.values[i])
            acceptance = p.accept_max * (1.0 - p.accept_growth ** k[i])
            kept = probabilistic_accept(old, Candidate(X[i], values[i]), acceptance, rng)
            if kept.value < old.value:
                k[i] += 1
            pop.positions[i], pop.values[i] = kept.position, kept.value
        return state


# --- CSO --------------------------------------------------------------------

@dataclass(frozen=True)
class CSOParams(Params):
    tracing_ratio: float = param(0.2, 0.0, 1.0, "share of members moving to the best; the rest do local search")
    seeking_samples: int = param(5, 1, None, "points sampled per local search")
    seeking_range: float = param(0.5, 0.0, None, "local sample sigma as a multiple of population spread")
    trace_fraction: float = param(1.5, 0.0, 4.0, "move fraction toward the best drawn from U(0, this)")


class CSO(Algorithm):
    id = "CSO"
    summary = "each member either samples locally and keeps the best, or moves toward the best"
    Params = CSOParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n = len(pop)
        best = pop.best_position.copy()
        sigma = p.seeking_range * spread_scale(pop.positions, problem.space)
        m = p.seeking_samples
        tracing = rng.random(n) < p.tracing_ratio
        tr, sk = np.flatnonzero(tracing), np.flatnonzero(~tracing)
        T = move_toward(pop.positions[tr], best, rng.uniform(0.0, p.trace_fraction, (tr.size, 1)), 0.0, rng)
        S = gaussian_sample(np.repeat(pop.positions[sk], m, axis=0), sigma, rng)
        X = self.clamp(problem, np.vstack([T, S]))
        values = problem.evaluate_many(X)
        pop.positions[tr], pop.values[tr] = X[:tr.size], values[:tr.size]
        if sk.size:
            S, sv = X[tr.size:].reshape(sk.size, m, -1), values[tr.size:].reshape(sk.size, m)
            j = np.argmin(sv, axis=1)
            cand, cv = S[np.arange(sk.size), j], sv[np.arange(sk.size), j]
            better = cv < pop.values[sk]
            pop.positions[sk[better]], pop.values[sk[better]] = cand[better], cv[better]
        return state


# --- FOA --------------------------------------------------------------------

@dataclass(frozen=True)
class FOAParams(Params):
    jitter: DecaySchedule = field(
        default=DecaySchedule("exponential", 0.1, 1e-5),
        metadata={"doc": "noise sigma (fraction of box width) around the move to the best"})


class FOA(Algorithm):
    """Every non-best member takes a random fraction of the way to the best, plus noise.

    The mechanism is deliberately minimal: the published description does
    not say how the moves are made.
    """

    id = "FOA"
    summary = "jittered moves toward the population best (minimal reading)"
    Params = FOAParams

    def step(self, state, problem, rng):
        pop = state.population
        b = pop.best_index
        best = pop.positions[b].copy()
        sigma = self.sched(problem, self.params.jitter) * problem.space.width
        movers = np.flatnonzero(np.arange(len(pop)) != b)
        X = move_toward(pop.positions[movers], best, rng.random((movers.size, 1)), sigma, rng)
        X = self.clamp(problem, X)
        pop.positions[movers] = X
        pop.values[movers] = problem.evaluate_many(X)
        return state


# --- FPA --------------------------------------------------------------------

@dataclass(frozen=True)
class FPAParams(Params):
    switch_prob: float = param(0.8, 0.0, 1.0, "chance of the heavy-tailed move toward the best")
    levy_scale: float = param(0.5, 1e-9, None, "scale of the heavy-tailed move fraction")
    tail_index: float = param(1.5, 0.01, 1.99, "Mantegna tail index")


class FPA(Algorithm):
    id = "FPA"
    summary = "heavy-tailed steps toward the best or moves toward a random member"
    Params = FPAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        best = pop.best_position.copy()
        P = pop.positions
        X = np.empty_like(P)
        levy = rng.random(n) < p.switch_prob
        li, oi = np.flatnonzero(levy), np.flatnonzero(~levy)
        if li.size:
            fraction = np.abs(levy_step(p.levy_scale, p.tail_index, rng, d, size=li.size))
            X[li] = move_toward(P[li], best, fraction, 0.0, rng)
        if oi.size:
            j = pick_other(n, oi, rng)
            X[oi] = move_toward(P[oi], P[j], rng.random((oi.size, 1)), 0.0, rng)
        X = self.clamp(problem, X)
        _greedy_merge(pop, X, problem.evaluate_many(X))
        return state


# --- GwSO -------------------------------------------------------------------

@dataclass(frozen=True)
class GwSOParams(Params):
    decay: float = param(0.4, 0.0, 1.0, "share of progress value lost per iteration")
    gain: float = param(0.6, 0.0, None, "progress added on an improving move")
    initial_progress: float = param(5.0, 0.0, None, "starting progress value")
    initial_radius: float = param(0.3, 1e-9, None, "neighbourhood radius as a fraction of box width")
    radius_rate: float = param(0.08, 0.0, None, "radius change per missing/surplus neighbour (fraction of width)")
    desired_neighbours: int = param(5, 0, None, "neighbour count the radius adapts toward")
    local_scale: float = param(0.1, 0.0, None, "local-search sigma as a fraction of the radius")


class GwSO(Algorithm):
    """Progress-weighted pick among better neighbours inside an adaptive radius.

    Members with no better neighbour try a greedy local move instead.
    """

    id = "GwSO"
    summary = "progress values steer moves to better neighbours inside a crowd-shrinking radius"
    Params = GwSOParams

    def setup(self, state, problem, rng):
        n = len(state.population)
        state.counters["progress"] = np.full(n, self.params.initial_progress)
        state.counters["radius"] = np.full(n, self.params.initial_radius * self.scale(problem))

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, scale = len(pop), self.scale(problem)
        progress, radius = state.counters["progress"], state.counters["radius"]
        P, f = pop.positions.copy(), pop.values.copy()
        D = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=2)
        X = np.empty_like(P)
        local = np.zeros(n, dtype=bool)
        counts = np.zeros(n)
        for i in range(n):
            near = (D[i] < radius[i]) & (np.arange(n) != i)
            counts[i] = near.sum()
            better = np.flatnonzero(near & (f < f[i]))
            if better.size:
                w = progress[better] + 1e-12
                j = better[int(rng.choice(better.size, p=w / w.sum()))]
                X[i] = move_toward(P[i], P[j], rng.random(), 0.0, rng)
            else:
                local[i] = True
                X[i] = gaussian_sample(P[i], p.local_scale * radius[i], rng)
        X = self.clamp(problem, X)
        values = problem.evaluate_many(X)
        improved = values < f
        keep = local & ~improved
        X[keep], values[keep] = P[keep], f[keep]
        pop.positions, pop.values = X, values
        progress *= 1.0 - p.decay
        progress += p.gain * improved
        radius += p.radius_rate * scale * (p.desired_neighbours - counts)
        np.clip(radius, 1e-9 * scale, p.initial_radius * scale, out=radius)
        return state


# --- GWO --------------------------------------------------------------------

@dataclass(frozen=True)
class GWOParams(Params):
    shrink: DecaySchedule = field(
        default=DecaySchedule("linear", 1.0, 0.0),
        metadata={"doc": "cube half-width as a multiple of distance to target; 0 at the horizon"})
    jitter: float = param(0.1, 0.0, None, "noise sigma as a fraction of the cube half-width")


class GWO(Algorithm):
    id = "GWO"
    summary = "samples cube edges around targets inside the simplex of the three best"
    Params = GWOParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        a = self.sched(problem, p.shrink)
        leaders = pop.positions[truncation_select(pop.values, min(3, len(pop)))].copy()
        targets = rng.dirichlet(np.ones(len(leaders)), size=len(pop)) @ leaders
        hw = a * np.max(np.abs(targets - pop.positions), axis=1, keepdims=True)
        X = hypercube_sample(targets, hw, rng, edge_only=True)
        X = self.clamp(problem, gaussian_sample(X, p.jitter * hw, rng))
        pop.positions = X
        pop.values = problem.evaluate_many(X)
        return state


# --- GSO (group search) -----------------------------------------------------

@dataclass(frozen=True)
class GSOParams(Params):
    producers: int = param(3, 1, None, "best members that scan locally")
    scrounger_share: float = param(0.8, 0.0, 1.0, "share of the others that follow producers")
    max_angle: float = param(math.pi / 4, 0.0, math.pi, "cone half-angle of the scan")
    scan_samples: int = param(3, 1, None, "scan points per producer per iteration")
    scan_length: float = param(0.1, 1e-12, None, "initial scan distance as a fraction of box width")
    ranger_step: float = param(0.02, 0.0, None, "random-walk step sigma as a fraction of box width")
    ranger_steps: int = param(3, 1, None, "random-walk steps per ranger per iteration")


class GSO(Algorithm):
    """Producers scan inside a cone around their heading and keep improvements;
    scroungers move toward producers; rangers random-walk."""

    id = "GSO"
    summary = "cone-limited scans by the best, followers move to them, rangers random-walk"
    Params = GSOParams

    def setup(self, state, problem, rng):
        n, d = len(state.population), problem.space.dims
        state.extra["heading"] = random_direction(d, rng, size=n)
        state.counters["scan"] = np.full(n, self.params.scan_length * self.scale(problem))

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d, scale = len(pop), problem.space.dims, self.scale(problem)
        heading, scan = state.extra["heading"], state.counters["scan"]
        order = pop.order()
        producers = order[:min(p.producers, n)]
        others = rng.permutation(order[len(producers):])
        n_scroungers = round(p.scrounger_share * len(others))
        scroungers, rangers = others[:n_scroungers], others[n_scroungers:]
        anchors = pop.positions[producers].copy()

        for i in producers:
            dirs = [cone_direction(heading[i], p.max_angle, rng) for _ in range(p.scan_samples)]
            X = self.clamp(problem, np.array(
                [pop.positions[i] + rng.random() * scan[i] * u for u in dirs]))
            values = problem.evaluate_many(X)
            j = int(np.argmin(values))
            if values[j] < pop.values[i]:
                pop.positions[i], pop.values[i] = X[j], values[j]
                heading[i] = dirs[j]
                scan[i] = min(scan[i] * 1.5, scale)
            else:
                heading[i] = cone_direction(heading[i], p.max_angle, rng)
                scan[i] = max(scan[i] * 0.5, 1e-12 * scale)

        movers = np.concatenate([scroungers, rangers]).astype(int)
        sigma = p.ranger_step * problem.space.width
        targets = anchors[rng.integers(len(anchors), size=len(scroungers))]
        X_s = move_toward(pop.positions[scroungers], targets, rng.random((len(scroungers), 1)), 0.0, rng)
        walk = random_walk(pop.positions[rangers], p.ranger_steps,
                           lambda g: gaussian_sample(np.zeros((len(rangers), d)), sigma, g), rng,
                           problem.space)
        heading[rangers] = random_direction(d, rng, size=len(rangers))
        X = np.vstack([X_s, walk[-1]])
        if len(movers):
            X = self.clamp(problem, X)
            pop.positions[movers] = X
            pop.values[movers] = problem.evaluate_many(X)
        return state


# --- KH ---------------------------------------------------------------------

@dataclass(frozen=True)
class KHParams(Params):
    to_best: DecaySchedule = field(
        default=DecaySchedule("linear", 0.2, 1.0),
        metadata={"doc": "weight of the move to the population best, growing over time"})
    diffusion: DecaySchedule = field(
        default=DecaySchedule("linear", 0.05, 0.0),
        metadata={"doc": "random-motion sigma (fraction of box width), shrinking to 0"})
    to_history: float = param(0.3, 0.0, None, "weight of the move to the member's own best")
    to_centroid: float = param(0.3, 0.0, None, "weight of the move to the value-weighted centroid")
    neighbour_step: float = param(0.02, 0.0, None, "neighbour attraction/repulsion step (fraction of width)")
    sensing: float = param(0.2, 0.0, None, "neighbour radius as a multiple of mean distance to others")
    ga_fraction: float = param(0.2, 0.0, 1.0, "share of members recombined and jittered each iteration")
    ga_jitter: float = param(0.1, 0.0, None, "jitter sigma after recombination, multiple of spread")


class KH(Algorithm):
    id = "KH"
    summary = "moves to best, own best, weighted centroid and signed neighbours, plus GA pass"
    Params = KHParams
    uses_historical_bests = True

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        P, f = pop.positions.copy(), pop.values.copy()
        best = P[int(np.argmin(f))]
        centroid = weighted_centroid(P, f)
        w_best = self.sched(problem, p.to_best)
        sigma = self.sched(problem, p.diffusion) * problem.space.width
        span = max(f.max() - f.min(), 1e-300)
        offsets = P[None, :, :] - P[:, None, :]          # row i: vectors from member i to each j
        D = np.linalg.norm(offsets, axis=2)
        radius = p.sensing * D.sum(axis=1, keepdims=True) / max(n - 1, 1)
        near = (D < radius) & (D > 0)
        signed = np.where(near, (f[:, None] - f[None, :]) / span, 0.0)   # + pulls toward better
        local = np.einsum("ij,ijk->ik", signed / np.where(D > 0, D, 1.0), offsets)
        r = rng.random((n, 3))
        X = (P
             + w_best * r[:, :1] * (best - P)
             + p.to_history * r[:, 1:2] * (state.best_positions - P)
             + p.to_centroid * r[:, 2:] * (centroid - P)
             + p.neighbour_step * problem.space.width * local)
        if sigma.any():
            X = gaussian_sample(X, sigma, rng)
        X = self.clamp(problem, X)
        jitter = p.ga_jitter * spread_scale(X, problem.space)
        sel = np.flatnonzero(rng.random(n) < p.ga_fraction)
        if sel.size:
            mates = pick_other(n, sel, rng)
            X[sel] = gaussian_sample(recombine(X[sel], X[mates], rng), jitter, rng)
        X = self.clamp(problem, X)
        pop.positions = X
        pop.values = problem.evaluate_many(X)
        self.update_historical_bests(state)
        return state


# --- MFO --------------------------------------------------------------------

@dataclass(frozen=True)
class MFOParams(Params):
    turns: float = param(1.0, 0.0, None, "spiral turns between start and target")
    jitter: DecaySchedule = field(
        default=DecaySchedule("exponential", 0.02, 1e-7),
        metadata={"doc": "noise after the spiral move as a fraction of box width"})


class MFO(Algorithm):
    """Members ranked by current value spiral toward equally ranked historical
    bests, plus a small shrinking noise; the number of distinct targets
    shrinks linearly to one."""

    id = "MFO"
    summary = "spiral moves toward rank-paired historical bests, fewer targets over time"
    Params = MFOParams
    uses_historical_bests = True

    def step(self, state, problem, rng):
        pop = state.population
        n = len(pop)
        flames = state.best_positions[np.argsort(state.best_values, kind="stable")].copy()
        n_flames = max(1, round(n - problem.progress * (n - 1)))
        sigma = self.sched(problem, self.params.jitter) * problem.space.width
        X = np.empty_like(pop.positions)
        for rank, i in enumerate(pop.order()):
            target = flames[min(rank, n_flames - 1)]
            x = spiral_move(pop.positions[i], target, self.params.turns, rng.random())
            X[i] = gaussian_sample(x, sigma, rng)
        X = self.clamp(problem, X)
        pop.positions = X
        pop.values = problem.evaluate_many(X)
        self.update_historical_bests(state)
        return state


# --- TLBO -------------------------------------------------------------------

class TLBO(Algorithm):
    """Teacher pass along (best - mean), then learner pass toward/away from a
    random partner; both passes keep only improvements."""

    id = "TLBO"
    summary = "greedy moves along best-minus-mean, then toward better or away from worse partners"

    def step(self, state, problem, rng):
        pop = state.population
        n = len(pop)
        diff = pop.best_position - pop.positions.mean(axis=0)
        X = self.clamp(problem, pop.positions + rng.random(pop.positions.shape) * diff)
        _greedy_merge(pop, X, problem.evaluate_many(X))

        P, f = pop.positions.copy(), pop.values.copy()
        j = pick_other(n, np.arange(n), rng)
        r = rng.random(P.shape)
        target = np.where((f[j] < f)[:, None], P[j], 2 * P - P[j])   # toward better, away from worse
        X = self.clamp(problem, move_toward(P, target, r, 0.0, rng))
        _greedy_merge(pop, X, problem.evaluate_many(X))
        return state


# --- WCA --------------------------------------------------------------------

@dataclass(frozen=True)
class WCAParams(Params):
    elites: int = param(4, 1, None, "best member plus the secondary targets")
    max_fraction: float = param(2.0, 0.0, 4.0, "move fraction drawn from U(0, this)")
    near_best: DecaySchedule = field(
        default=DecaySchedule("exponential", 1e-2, 1e-6),
        metadata={"doc": "distance to the best (fraction of width) that triggers a local move"})
    local_scale: float = param(1.0, 0.0, None, "local-move sigma as a multiple of that distance")


class WCA(Algorithm):
    id = "WCA"
    summary = "elites move to the best, the rest to fitness-assigned elites, local moves near the best"
    Params = WCAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        order = pop.order()
        sea = order[0]
        elites = order[:min(p.elites, len(pop))]
        movers = order[1:]
        if movers.size == 0:
            movers = order
        near = self.sched(problem, p.near_best) * self.scale(problem)
        assigned = elites[proportional_select(pop.values[elites], rng, size=len(movers))]
        x_sea = pop.positions[sea].copy()
        P = pop.positions[movers]
        targets = np.where(np.isin(movers, elites)[:, None], x_sea, pop.positions[assigned])
        X = move_toward(P, targets, rng.uniform(0.0, p.max_fraction, (len(movers), 1)), 0.0, rng)
        local = np.linalg.norm(P - x_sea, axis=1) < near
        if local.any():
            X[local] = gaussian_sample(np.tile(x_sea, (int(local.sum()), 1)), p.local_scale * near, rng)
        X = self.clamp(problem, X)
        pop.positions[movers] = X
        pop.values[movers] = problem.evaluate_many(X)
        return state


# --- WOA --------------------------------------------------------------------

@dataclass(frozen=True)
class WOAParams(Params):
    shrink: DecaySchedule = field(
        default=DecaySchedule("linear", 1.0, 0.0),
        metadata={"doc": "cube half-width as a multiple of distance to target"})
    random_target_until: float = param(0.5, 0.0, 1.0, "budget share after which only the best is targeted")
    spiral_prob: float = param(0.5, 0.0, 1.0, "chance of a spiral move instead of cube sampling")
    turns: float = param(1.0, 0.0, None, "spiral turns between start and target")


class WOA(Algorithm):
    id = "WOA"
    summary = "shrinking-cube samples or spirals toward random members early, the best later"
    Params = WOAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n = len(pop)
        a = self.sched(problem, p.shrink)
        p_random = max(0.0, 1.0 - problem.progress / p.random_target_until) if p.random_target_until > 0 else 0.0
        best = pop.best_position.copy()
        P = pop.positions.copy()
        X = np.empty_like(P)
        for i in range(n):
            target = P[pick_other(n, i, rng)] if rng.random() < p_random else best
            if rng.random() < p.spiral_prob:
                X[i] = spiral_move(P[i], target, p.turns, rng.random())
            else:
                X[i] = hypercube_sample(target, a * np.abs(target - P[i]), rng)
        X = self.clamp(problem, X)
        pop.positions = X
        pop.values = problem.evaluate_many(X)
        return state
