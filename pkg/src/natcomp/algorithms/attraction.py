"""All-pairs attraction weighted by value over squared distance: CSS, FA, GSA.

Raw inverse-square weights are normalised per member, so each member is
pulled toward an attraction-weighted average of the others. Near, good
members dominate and distant ones barely matter. CSS and GSA narrow the set
of attracting members to the best ones over the run; without that the swarm
settles on a value-weighted mean and stalls.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from natcomp.algorithms.base import Algorithm, Params, param
from natcomp.components import DecaySchedule, gaussian_sample, inverse_square_matrix


def attraction(P: np.ndarray, f: np.ndarray, rng=None, mask=None) -> np.ndarray:
    """Weighted pull of every member toward its others, one row per member.

    Row i is sum_j w_ij (x_j - x_i) with w normalised to sum 1 over i's others
    (all members but i, narrowed by ``mask``: a member vector or an (n, n)
    row mask). With ``rng`` given every term gets its own U(0, 1) factor.
    Members with no others get a zero pull.
    """
    W = inverse_square_matrix(P, f, mask)
    total = W.sum(axis=1, keepdims=True)
    W = W / np.where(total > 0, total, 1.0)
    if rng is not None:
        W = W * rng.random(W.shape)
    return W @ P - W.sum(axis=1, keepdims=True) * P


def top_mask(f: np.ndarray, share: float, floor: int = 2) -> np.ndarray:
    """Boolean mask of the best max(floor, round(share * n)) members."""
    k = min(len(f), max(floor, round(share * len(f))))
    mask = np.zeros(len(f), dtype=bool)
    mask[np.argsort(f, kind="stable")[:k]] = True
    return mask


@dataclass(frozen=True)
class CSSParams(Params):
    memory: int = param(3, 0, None, "best points ever seen that are always kept in the population")
    max_velocity: float = param(0.2, 1e-6, None, "speed cap per coordinate, fraction of box width")
    momentum: DecaySchedule = field(
        default=DecaySchedule("linear", 0.5, 0.0),
        metadata={"doc": "weight on the previous velocity, fading out"})
    pull: DecaySchedule = field(
        default=DecaySchedule("linear", 0.5, 1.0),
        metadata={"doc": "weight on the attraction, growing over time"})
    attractors: DecaySchedule = field(
        default=DecaySchedule("linear", 0.5, 0.0),
        metadata={"doc": "share of members, best first, that attract; at least two"})


class CSS(Algorithm):
    id = "CSS"
    summary = "velocities driven by inverse-square attraction to the better others, elites preserved"
    Params = CSSParams
    uses_velocity = True

    def setup(self, state, problem, rng):
        pop = state.population
        keep = np.argsort(pop.values, kind="stable")[:self.params.memory]
        state.extra["memory"] = (pop.positions[keep].copy(), pop.values[keep].copy())

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        P, f = pop.positions.copy(), pop.values.copy()
        V = state.velocities
        kv, ka = self.sched(problem, p.momentum), self.sched(problem, p.pull)
        vmax = p.max_velocity * problem.space.width
        mask = top_mask(f, self.sched(problem, p.attractors))
        a = attraction(P, f, mask=mask)
        r = rng.random((len(pop), 2))
        V[:] = np.clip(kv * r[:, :1] * V + ka * r[:, 1:] * a, -vmax, vmax)
        X = self.clamp(problem, P + V)
        values = problem.evaluate_many(X)

        mem_X, mem_f = state.extra["memory"]
        worst_first = np.argsort(-values, kind="stable")
        for slot, m in zip(worst_first, np.argsort(mem_f, kind="stable")):
            if mem_f[m] < values[slot]:
                X[slot], values[slot] = mem_X[m], mem_f[m]
                V[slot] = 0.0
        pop.positions, pop.values = X, values
        if p.memory:
            allX, allf = np.vstack([mem_X, X]), np.concatenate([mem_f, values])
            keep = np.argsort(allf, kind="stable")[:p.memory]
            state.extra["memory"] = (allX[keep].copy(), allf[keep].copy())
        return state


@dataclass(frozen=True)
class FAParams(Params):
    attraction: float = param(0.9, 0.0, 2.0, "fraction of the pull toward brighter members applied")
    noise: DecaySchedule = field(
        default=DecaySchedule("exponential", 0.05, 1e-6),
        metadata={"doc": "random move sigma as a fraction of box width"})


class FA(Algorithm):
    """Members move toward every better member, weighted by inverse-square law;
    the current best only makes a random move."""

    id = "FA"
    summary = "inverse-square weighted moves toward all better members"
    Params = FAParams

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        P, f = pop.positions.copy(), pop.values.copy()
        sigma = self.sched(problem, p.noise) * problem.space.width
        pull = attraction(P, f, mask=f[None, :] < f[:, None])
        X = self.clamp(problem, gaussian_sample(P + p.attraction * pull, sigma, rng))
        pop.positions = X
        pop.values = problem.evaluate_many(X)
        return state


@dataclass(frozen=True)
class GSAParams(Params):
    gravity: DecaySchedule = field(
        default=DecaySchedule("exponential", 1.0, 0.05),
        metadata={"doc": "attraction strength, decaying so moves settle"})
    max_velocity: float = param(0.2, 1e-6, None, "speed cap per coordinate, fraction of box width")
    attractors: DecaySchedule = field(
        default=DecaySchedule("linear", 0.5, 0.0),
        metadata={"doc": "share of members, best first, that attract; at least two"})


class GSA(Algorithm):
    id = "GSA"
    summary = "velocities accumulate randomly weighted inverse-square pulls from the better others"
    Params = GSAParams
    uses_velocity = True

    def step(self, state, problem, rng):
        p, pop = self.params, state.population
        P, f = pop.positions.copy(), pop.values.copy()
        V = state.velocities
        G = self.sched(problem, p.gravity)
        vmax = p.max_velocity * problem.space.width
        mask = top_mask(f, self.sched(problem, p.attractors))
        a = G * attraction(P, f, rng, mask)
        V[:] = np.clip(rng.random((len(pop), 1)) * V + a, -vmax, vmax)
        X = self.clamp(problem, P + V)
        pop.positions = X
        pop.values = problem.evaluate_many(X)
        return state
