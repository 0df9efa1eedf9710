"""Algorithms organised around clusters or sub-populations: BSO, COA, ICA, SFLA, SCA."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from natcomp.algorithms.base import Algorithm, Params, param
from natcomp.components import (
    DecaySchedule,
    fitness_weights,
    gaussian_sample,
    hypersphere_sample,
    kmeans,
    move_toward,
    pick_other,
    proportional_select,
    recombine,
    restart,
    spread_scale,
    truncation_select,
)
from natcomp.core import Population


# --- BSO --------------------------------------------------------------------

@dataclass(frozen=True)
class BSOParams(Params):
    clusters: int = param(5, 1, None, "k for k-means")
    p_one: float = param(0.8, 0.0, 1.0, "chance the challenger comes from one cluster rather than two")
    p_center: float = param(0.4, 0.0, 1.0, "chance a cluster contributes its best member rather than a random one")
    p_random: float = param(0.05, 0.0, 1.0, "chance the challenger is a uniform random point")
    step: DecaySchedule = field(
        default=DecaySchedule("exponential", 1.0, 0.01),
        metadata={"doc": "challenger sigma as a multiple of population spread"})


class BSO(Algorithm):
    """Cluster, then build one challenger per member from cluster bests or
    random cluster members; each member keeps the better of itself and its
    challenger."""

    id = "BSO"
    summary = "k-means clusters; challengers from cluster bests or their mix; pairwise keep-best"
    Params = BSOParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        P, f = pop.positions, pop.values
        clusters, _ = kmeans(P, min(p.clusters, n), rng)
        k = len(clusters)
        sizes = np.array([len(c.members) for c in clusters])
        heads = np.array([c.members[int(np.argmin(f[c.members]))] for c in clusters])
        flat = np.concatenate([c.members for c in clusters])
        starts = np.cumsum(sizes) - sizes
        sigma = self.sched(problem, p.step) * spread_scale(P, problem.space)

        def pick(c, u_center, u_member):
            member = flat[starts[c] + np.minimum((u_member * sizes[c]).astype(int), sizes[c] - 1)]
            return P[np.where(u_center < p.p_center, heads[c], member)]

        # per member: random-point?, one cluster?, cluster draw, then two picks
        u = rng.random((7, n))
        one = (u[1] < p.p_one) | (k == 1)
        by_size = np.minimum(np.searchsorted(np.cumsum(sizes) / n, u[2], side="right"), k - 1)
        a = np.minimum((u[2] * k).astype(int), k - 1)
        b = pick_other(k, a, rng)
        A = pick(np.where(one, by_size, a), u[3], u[4])
        B = pick(b, u[5], u[6])
        base = np.where(one[:, None], A, recombine(A, B, rng))
        X = gaussian_sample(base, sigma, rng)
        fresh = u[0] < p.p_random
        if fresh.any():
            X[fresh] = restart(problem.space, rng, size=int(fresh.sum()))
        X = self.clamp(problem, X)
        values = problem.evaluate_many(X)
        better = values < f
        pop.positions[better], pop.values[better] = X[better], values[better]
        return state


# --- COA --------------------------------------------------------------------

@dataclass(frozen=True)
class COAParams(Params):
    population_size: int = param(20, 2, None, "members kept after each egg-laying round")
    eggs: int = param(2, 1, None, "samples laid around each member per iteration")
    egg_radius: float = param(1.0, 0.0, None, "laying radius as a multiple of mean population spread")
    clusters: int = param(3, 1, None, "k for k-means")
    max_fraction: float = param(1.0, 0.0, 2.0, "largest fraction of the way to the goal point")
    jitter: float = param(0.05, 0.0, None, "move noise as a multiple of population spread")


class COA(Algorithm):
    id = "COA"
    summary = "sample around members in a radius, keep the best; clusters drift to the best cluster"
    Params = COAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n = len(pop)
        spread = spread_scale(pop.positions, problem.space)
        r = p.egg_radius * float(np.mean(spread))
        eggs = hypersphere_sample(np.repeat(pop.positions, p.eggs, axis=0), r, rng)
        eggs = self.clamp(problem, eggs)
        egg_values = problem.evaluate_many(eggs)
        X = np.vstack([pop.positions, eggs])
        f = np.concatenate([pop.values, egg_values])
        keep = truncation_select(f, n)
        X, f = X[keep], f[keep]

        clusters, _ = kmeans(X, min(p.clusters, n), rng)
        means = [f[c.members].mean() for c in clusters]
        home = clusters[int(np.argmin(means))]
        goal = X[home.members[int(np.argmin(f[home.members]))]]
        movers = np.setdiff1d(np.arange(n), home.members)
        if movers.size:
            sigma = p.jitter * spread_scale(X, problem.space)
            frac = rng.uniform(0.0, p.max_fraction, (movers.size, 1))
            Y = self.clamp(problem, move_toward(X[movers], goal, frac, sigma, rng))
            X[movers], f[movers] = Y, problem.evaluate_many(Y)
        state.population = Population(X, f, problem)
        return state


# --- ICA --------------------------------------------------------------------

@dataclass(frozen=True)
class ICAParams(Params):
    empires: int = param(5, 1, None, "initial number of sub-populations, led by the best members")
    max_fraction: float = param(2.0, 0.0, 4.0, "colonies move U(0, max_fraction) of the way to their leader")
    jitter: float = param(0.1, 0.0, None, "move noise as a multiple of the distance to the leader")
    colony_weight: float = param(0.05, 0.0, 1.0, "share of the colony mean in an empire's value")
    compete_every: int = param(1, 1, None, "iterations between colony transfers")


class ICA(Algorithm):
    """Empires with sizes set by their leader's value. Colonies move toward
    their leader and take over if they become better. The weakest empire
    periodically loses its worst colony; a run stops once one empire is left.

    State: ``extra["empire"]`` is each member's empire label and
    ``extra["leaders"]`` maps label to leader index.
    """

    id = "ICA"
    summary = "sub-populations sized by leader value, colonies move to leaders, weak empires absorbed"
    Params = ICAParams

    def setup(self, state, problem, rng):
        pop = state.population
        n = len(pop)
        k = min(self.params.empires, n)
        order = np.argsort(pop.values, kind="stable")
        leaders, colonies = order[:k], rng.permutation(order[k:])
        w = fitness_weights(pop.values[leaders])
        counts = np.floor(w / w.sum() * colonies.size).astype(int)
        for j in np.argsort(-w, kind="stable")[:colonies.size - counts.sum()]:
            counts[j] += 1
        label = np.empty(n, dtype=int)
        label[leaders] = np.arange(k)
        label[colonies] = np.repeat(np.arange(k), counts)
        state.extra["empire"] = label
        state.extra["leaders"] = {e: int(leaders[e]) for e in range(k)}
        state.terminated = k <= 1

    def empire_values(self, state):
        f, label = state.population.values, state.extra["empire"]
        out = {}
        for e, lead in state.extra["leaders"].items():
            col = np.flatnonzero((label == e) & (np.arange(len(f)) != lead))
            extra = self.params.colony_weight * f[col].mean() if col.size else 0.0
            out[e] = f[lead] + extra
        return out

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        label, leaders = state.extra["empire"], state.extra["leaders"]
        lead_of = np.array([leaders[e] for e in label])
        colonies = np.flatnonzero(lead_of != np.arange(len(pop)))
        if colonies.size:
            C, T = pop.positions[colonies], pop.positions[lead_of[colonies]]
            dist = np.sqrt(((T - C) ** 2).sum(axis=1, keepdims=True))
            frac = rng.uniform(0.0, p.max_fraction, (colonies.size, 1))
            X = move_toward(C, T, frac, p.jitter * dist / np.sqrt(problem.space.dims), rng)
            X = self.clamp(problem, X)
            pop.positions[colonies], pop.values[colonies] = X, problem.evaluate_many(X)
        for e in list(leaders):
            members = np.flatnonzero(label == e)
            leaders[e] = int(members[int(np.argmin(pop.values[members]))])

        if state.iteration % p.compete_every == 0 and len(leaders) > 1:
            values = self.empire_values(state)
            ids = list(values)
            weakest = ids[int(np.argmax([values[e] for e in ids]))]
            rivals = [e for e in ids if e != weakest]
            winner = rivals[proportional_select(np.array([values[e] for e in rivals]), rng)]
            members = np.flatnonzero(label == weakest)
            col = members[members != leaders[weakest]]
            if col.size:
                label[col[int(np.argmax(pop.values[col]))]] = winner
            else:
                label[leaders[weakest]] = winner
                del leaders[weakest]
        state.terminated = len(leaders) <= 1
        return state


# --- SFLA -------------------------------------------------------------------

@dataclass(frozen=True)
class SFLAParams(Params):
    memeplexes: int = param(5, 1, None, "sub-populations, filled by interleaving the value ranking")
    subsample: int = param(5, 2, None, "members drawn from a sub-population per local step")
    local_steps: int = param(5, 1, None, "local steps per sub-population per iteration")
    max_fraction: float = param(1.0, 0.0, 2.0, "worst moves U(0, max_fraction) toward the leader")


class SFLA(Algorithm):
    """Sub-populations with a broad value spread; within each, the worst of a
    rank-biased subsample moves toward the subsample best, then toward the
    population best, then restarts. Updates are sequential."""

    id = "SFLA"
    summary = "interleaved sub-populations; worst of a subsample moves to its best, else restarts"
    Params = SFLAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        P, f = pop.positions, pop.values
        order = np.argsort(f, kind="stable")
        m = min(p.memeplexes, len(pop))
        g = P[order[0]].copy()
        for k in range(m):
            plex = order[k::m]
            q = min(p.subsample, plex.size)
            if q < 2:
                continue
            for _ in range(p.local_steps):
                plex = plex[np.argsort(f[plex], kind="stable")]
                # rank-weighted draw without replacement (largest of u**(1/w))
                tri = np.arange(plex.size, 0, -1, dtype=float)
                keys = rng.random(plex.size) ** (1.0 / tri)
                sub = plex[np.sort(np.argsort(-keys, kind="stable")[:q])]
                best, worst = sub[0], sub[-1]
                for target in (P[best], g):
                    x = self.clamp(problem, move_toward(P[worst], target,
                                                        rng.uniform(0.0, p.max_fraction), 0.0, rng))
                    v = problem.evaluate(x)
                    if v < f[worst]:
                        P[worst], f[worst] = x, v
                        break
                else:
                    x = restart(problem.space, rng)
                    P[worst], f[worst] = x, problem.evaluate(x)
                g = P[int(np.argmin(f))].copy()
        return state


# --- SCA --------------------------------------------------------------------

@dataclass(frozen=True)
class SCAParams(Params):
    clusters: int = param(4, 1, None, "k for k-means")
    leader_fraction: float = param(0.2, 0.01, 1.0, "top share of each cluster acting as leaders")
    max_fraction: float = param(1.0, 0.0, 2.0, "members move U(0, max_fraction) toward a leader")
    jitter: float = param(0.1, 0.0, None, "move noise as a multiple of population spread")


class SCA(Algorithm):
    """Within each cluster, followers move toward a random leader. Then the
    worse half of all leaders moves toward the better half, keeping only
    improvements. The population best is never moved."""

    id = "SCA"
    summary = "clusters; followers move to cluster leaders, then weaker leaders move to stronger"
    Params = SCAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        n, d = len(pop), problem.space.dims
        P, f = pop.positions, pop.values
        clusters, _ = kmeans(P, min(p.clusters, n), rng)
        sigma = p.jitter * spread_scale(P, problem.space)
        best = int(np.argmin(f))

        leaders, followers, targets = [], [], []
        for c in clusters:
            m = c.members[np.argsort(f[c.members], kind="stable")]
            lead = m[:max(1, int(np.ceil(p.leader_fraction * m.size)))]
            leaders.append(lead)
            followers.append(m[lead.size:])
            targets.append(lead[rng.integers(lead.size, size=m.size - lead.size)])
        followers, targets = np.concatenate(followers), np.concatenate(targets)
        if followers.size:
            frac = rng.uniform(0.0, p.max_fraction, (followers.size, 1))
            X = self.clamp(problem, move_toward(P[followers], P[targets], frac, sigma, rng))
            P[followers], f[followers] = X, problem.evaluate_many(X)

        leaders = np.concatenate(leaders)
        leaders = leaders[np.argsort(f[leaders], kind="stable")]
        half = leaders.size // 2
        strong, weak = leaders[:leaders.size - half], leaders[leaders.size - half:]
        weak = weak[weak != best]
        if weak.size:
            to = strong[rng.integers(strong.size, size=weak.size)]
            frac = rng.uniform(0.0, p.max_fraction, (weak.size, 1))
            X = self.clamp(problem, move_toward(P[weak], P[to], frac, sigma, rng))
            values = problem.evaluate_many(X)
            better = values < f[weak]
            P[weak[better]], f[weak[better]] = X[better], values[better]
        return state
