"""Reusable search operators.

Every algorithm in the roster is assembled from the functions in this module
plus the primitives in `natcomp.core`. Operators are pure apart from the
generator they are handed, and all of them follow the minimization
convention: a lower value is a better point.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from natcomp.core import Candidate, InvalidArgument, SearchSpace, clamp

# Shared by every operator that weighs members by objective value.
RANGE_EPS = 1e-12
# Guard for the d = 0 singularity in inverse-square attraction.
DIST_EPS = 1e-9


def _vec(x) -> np.ndarray:
    if type(x) is np.ndarray and x.dtype == np.float64:
        return x
    return np.asarray(x, dtype=float)


def _values(pop_or_values) -> np.ndarray:
    return _vec(getattr(pop_or_values, "values", pop_or_values))


def _same_length(*vs: np.ndarray):
    n = vs[0].shape[-1]
    if any(v.shape[-1] != n for v in vs[1:]):
        raise InvalidArgument("vector lengths differ")


def fitness_weights(values: np.ndarray) -> np.ndarray:
    """Positive weights, larger for better (lower) values.

    w = (worst - v) + eps, with eps = 1e-12 * range, or 1 when all values are
    equal (which makes the weights uniform).
    """
    values = _vec(values)
    if values.size == 0:
        raise InvalidArgument("empty value set")
    worst, best = values.max(), values.min()
    span = worst - best
    eps = RANGE_EPS * span if span > 0 else 1.0
    return (worst - values) + eps


# --- selection -------------------------------------------------------------

def truncation_select(values: np.ndarray, k: int) -> np.ndarray:
    """Indices of the ``k`` lowest values, best first; ties go to the lower index."""
    values = _values(values)
    if not 1 <= k <= values.size:
        raise InvalidArgument(f"k must lie in [1, {values.size}], got {k}")
    return np.argsort(values, kind="stable")[:k]


def selection_probabilities(values: np.ndarray) -> np.ndarray:
    w = fitness_weights(values)
    return w / w.sum()


def proportional_select(values: np.ndarray, rng: np.random.Generator, size: int | None = None):
    """Roulette-wheel draw with probability proportional to `fitness_weights`."""
    values = _values(values)
    if values.size == 0:
        raise InvalidArgument("cannot select from an empty population")
    p = selection_probabilities(values)
    if size is None:
        return int(rng.choice(values.size, p=p))
    return rng.choice(values.size, size=size, p=p)


# --- moves and samplers ----------------------------------------------------

def move_toward(x, target, fraction, jitter: float, rng: np.random.Generator) -> np.ndarray:
    """x + fraction * (target - x) + jitter * z, z standard normal per coordinate.

    ``fraction`` may be a scalar or a per-coordinate vector. With jitter = 0 no
    random numbers are drawn.
    """
    x, target = _vec(x), _vec(target)
    _same_length(x, target)
    if (fraction < 0) if isinstance(fraction, (float, int)) else (np.asarray(fraction) < 0).any():
        raise InvalidArgument("fraction must be >= 0")
    out = x + fraction * (target - x)
    if (jitter != 0) if isinstance(jitter, (float, int)) else (np.asarray(jitter) != 0).any():
        out = out + jitter * rng.standard_normal(x.shape)
    return out


def weighted_centroid(positions: np.ndarray, values: np.ndarray | None = None,
                      weights: np.ndarray | None = None) -> np.ndarray:
    """Weighted mean of positions. Weights default to `fitness_weights(values)`."""
    positions = np.atleast_2d(_vec(positions))
    if positions.shape[0] == 0:
        raise InvalidArgument("empty population")
    if weights is None:
        if values is None:
            raise InvalidArgument("need values or explicit weights")
        weights = fitness_weights(values)
    weights = _vec(weights)
    if weights.shape != (positions.shape[0],) or (weights < 0).any() or weights.sum() <= 0:
        raise InvalidArgument("weights must be non-negative, one per member, with positive sum")
    return weights @ positions / weights.sum()


def gaussian_sample(center, sigma, rng: np.random.Generator) -> np.ndarray:
    """center + sigma * z. ``center`` may be a stack of rows; ``sigma`` scalar or per-coordinate."""
    center = _vec(center)
    if (sigma < 0) if isinstance(sigma, (float, int)) else (np.asarray(sigma) < 0).any():
        raise InvalidArgument("sigma must be >= 0")
    return center + sigma * rng.standard_normal(center.shape)


def random_direction(dims: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Unit vector uniform on the sphere, or ``size`` of them as rows."""
    if size is None:
        while True:
            z = rng.standard_normal(dims)
            n = np.linalg.norm(z)
            if n > 0:
                return z / n
    z = rng.standard_normal((size, dims))
    n = np.linalg.norm(z, axis=1)
    while (n == 0).any():  # measure-zero, redraw the offending rows
        bad = n == 0
        z[bad] = rng.standard_normal((int(bad.sum()), dims))
        n = np.linalg.norm(z, axis=1)
    return z / n[:, None]


def hypersphere_sample(center, radius, rng: np.random.Generator) -> np.ndarray:
    """Volume-uniform point in the ball of ``radius`` around ``center``.

    A stack of centres gives one point per row; ``radius`` may then be per row.
    """
    center = _vec(center)
    if (radius < 0) if isinstance(radius, (float, int)) else (np.asarray(radius) < 0).any():
        raise InvalidArgument("radius must be >= 0")
    d = center.shape[-1]
    if center.ndim == 1:
        u = random_direction(d, rng)
        r = radius * rng.random() ** (1.0 / d)
        return center + r * u
    m = center.shape[0]
    u = random_direction(d, rng, size=m)
    r = np.asarray(radius, dtype=float) * rng.random(m) ** (1.0 / d)
    return center + r[:, None] * u


def hypercube_sample(center, half_width, rng: np.random.Generator, edge_only: bool = False) -> np.ndarray:
    """Uniform point in the axis-aligned cube; on its surface when ``edge_only``.

    Surface points are made by pinning one uniformly chosen coordinate to a
    random face. ``half_width`` may be per-coordinate. A stack of centres
    gives one point per row.
    """
    center = _vec(center)
    hw = np.broadcast_to(_vec(half_width), center.shape)
    if (hw < 0).any():
        raise InvalidArgument("half_width must be >= 0")
    offset = rng.uniform(-1.0, 1.0, center.shape)
    if edge_only:
        if center.ndim == 1:
            j = rng.integers(center.size)
            offset[j] = 1.0 if rng.random() < 0.5 else -1.0
        else:
            m = center.shape[0]
            j = rng.integers(center.shape[1], size=m)
            offset[np.arange(m), j] = np.where(rng.random(m) < 0.5, 1.0, -1.0)
    return center + offset * hw


def spiral_move(x, target, turns: float, t: float) -> np.ndarray:
    """Point on a shrinking spiral from ``x`` (t = 0) into ``target`` (t = 1).

    The offset from target is rotated by 2*pi*turns*t inside the plane spanned
    by the offset and the coordinate axis least aligned with it, and scaled by
    (1 - t) * exp(-t). Distance to the target is strictly decreasing in t.
    In one dimension there is no plane, so only the contraction applies.
    """
    x, target = _vec(x), _vec(target)
    _same_length(x, target)
    if not 0.0 <= t <= 1.0:
        raise InvalidArgument("t must lie in [0, 1]")
    offset = x - target
    r = np.linalg.norm(offset)
    if r == 0.0 or t == 1.0:
        return target.copy()
    shrink = (1.0 - t) * math.exp(-t)
    u = offset / r
    if x.size == 1:
        return target + shrink * offset
    axis = np.zeros_like(u)
    axis[int(np.argmin(np.abs(u)))] = 1.0
    w = axis - (axis @ u) * u
    w /= np.linalg.norm(w)
    theta = 2.0 * math.pi * turns * t
    return target + shrink * r * (math.cos(theta) * u + math.sin(theta) * w)


def cone_direction(heading, max_angle: float, rng: np.random.Generator) -> np.ndarray:
    """Unit vector at most ``max_angle`` radians away from ``heading``."""
    h = _vec(heading)
    norm = np.linalg.norm(h)
    if norm == 0:
        return random_direction(h.size, rng)
    h = h / norm
    if h.size == 1 or max_angle <= 0:
        return h
    p = rng.standard_normal(h.size)
    p -= (p @ h) * h
    pn = np.linalg.norm(p)
    if pn == 0:
        return h
    phi = rng.uniform(0.0, max_angle)
    return math.cos(phi) * h + math.sin(phi) * (p / pn)


def mantegna_sigma(tail_index: float) -> float:
    b = tail_index
    num = math.gamma(1 + b) * math.sin(math.pi * b / 2)
    den = math.gamma((1 + b) / 2) * b * 2 ** ((b - 1) / 2)
    return (num / den) ** (1 / b)


def levy_length(scale: float, tail_index: float, rng: np.random.Generator, size=None):
    """Heavy-tailed step length(s): scale * |u / |v|^(1/tail_index)| (Mantegna)."""
    if scale <= 0:
        raise InvalidArgument("scale must be > 0")
    if not 0 < tail_index < 2:
        raise InvalidArgument("tail_index must lie in (0, 2)")
    u = rng.normal(0.0, mantegna_sigma(tail_index), size)
    v = rng.standard_normal(size)
    return scale * np.abs(u / np.abs(v) ** (1.0 / tail_index))


def levy_step(scale: float, tail_index: float, rng: np.random.Generator, dims: int,
              size: int | None = None) -> np.ndarray:
    """Isotropic step: uniform direction times a Mantegna heavy-tailed length.

    The length survival function decays like length**(-tail_index). With
    ``size`` the result is ``size`` independent steps as rows.
    """
    if size is None:
        length = float(levy_length(scale, tail_index, rng))
        return length * random_direction(dims, rng)
    length = levy_length(scale, tail_index, rng, size)
    return length[:, None] * random_direction(dims, rng, size)


def random_walk(start, n_steps: int, step_sampler: Callable[[np.random.Generator], np.ndarray],
                rng: np.random.Generator, space: SearchSpace | None = None,
                project: Callable[[np.ndarray], np.ndarray] | None = None) -> np.ndarray:
    """Cumulative walk of ``n_steps`` sampled steps; returns n_steps + 1 points.

    ``start`` may be one point or a stack of rows walked together, in which
    case ``step_sampler`` returns a step per row and the result has shape
    (n_steps + 1, rows, dims). After every step the point is clamped to
    ``space`` and then passed through ``project`` (e.g. a ball projection).
    """
    if n_steps < 0:
        raise InvalidArgument("n_steps must be >= 0")
    x = _vec(start).copy()
    path = np.empty((n_steps + 1,) + x.shape)
    path[0] = x
    for k in range(1, n_steps + 1):
        x = x + step_sampler(rng)
        if space is not None:
            x = clamp(x, space)
        if project is not None:
            x = project(x)
        path[k] = x
    return path


def project_to_ball(x, center, radius) -> np.ndarray:
    """Nearest point of the closed ball; rows of ``x`` may have their own centre and radius."""
    x, center = _vec(x), _vec(center)
    off = x - center
    n = np.sqrt((off * off).sum(axis=-1, keepdims=True))
    r = np.asarray(radius, dtype=float)
    if x.ndim > 1 and r.ndim == 1:
        r = r[:, None]
    scale = np.where(n > r, r / np.where(n > 0, n, 1.0), 1.0)
    return center + off * scale


def inverse_square_weights(x, positions: np.ndarray, values: np.ndarray,
                           eps: float = DIST_EPS) -> np.ndarray:
    """Attraction of ``x`` to each other point: fitness_j / (d_j^2 + eps).

    Fitness is the shared transform of ``values``; callers normalise the result
    when they need move fractions.
    """
    x = _vec(x)
    positions = np.atleast_2d(_vec(positions))
    values = _vec(values)
    if positions.shape[0] == 0:
        raise InvalidArgument("need at least one other point")
    _same_length(x, positions)
    d2 = np.sum((positions - x) ** 2, axis=1)
    return fitness_weights(values) / (d2 + eps)


def inverse_square_matrix(positions: np.ndarray, values: np.ndarray, mask=None,
                          eps: float = DIST_EPS) -> np.ndarray:
    """Row i equals `inverse_square_weights` of member i against its others, scattered
    into an (n, n) matrix with zeros elsewhere.

    The others of i are every j != i, narrowed by ``mask``: a length-n boolean
    vector (same set for every row) or an (n, n) matrix (row-specific sets).
    The fitness transform is taken over each row's own others, as in the
    single-point form.
    """
    P = np.atleast_2d(_vec(positions))
    f = _vec(values)
    n = P.shape[0]
    if f.shape != (n,):
        raise InvalidArgument("need one value per position")
    others = ~np.eye(n, dtype=bool)
    if mask is not None:
        others &= np.asarray(mask, dtype=bool)
    diff = P[None, :, :] - P[:, None, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    worst = np.where(others, f, -np.inf).max(axis=1)
    best = np.where(others, f, np.inf).min(axis=1)
    span = worst - best
    fit_eps = np.where(span > 0, RANGE_EPS * np.where(span > 0, span, 0.0), 1.0)
    W = (worst[:, None] - f[None, :] + fit_eps[:, None]) / (d2 + eps)
    return np.where(others, W, 0.0)


# --- schedules -------------------------------------------------------------

@dataclass(frozen=True)
class DecaySchedule:
    kind: str = "linear"
    start: float = 1.0
    end: float = 0.0
    exponent: float = 2.0

    def __post_init__(self):
        if self.kind not in ("linear", "exponential", "nonlinear-power"):
            raise InvalidArgument(f"unknown schedule kind {self.kind!r}")
        if self.kind == "exponential" and (self.start <= 0 or self.end <= 0):
            raise InvalidArgument("exponential schedules need positive start and end")
        if self.kind == "nonlinear-power" and self.exponent <= 0:
            raise InvalidArgument("exponent must be > 0")

    def __call__(self, t: float, T: float) -> float:
        return schedule_value(self, t, T)


def schedule_value(s: DecaySchedule, t: float, T: float) -> float:
    if T <= 0:
        raise InvalidArgument("horizon must be > 0")
    if not 0 <= t <= T:
        raise InvalidArgument(f"t={t} outside [0, {T}]")
    if t == 0:
        return s.start
    if t == T:
        return s.end
    frac = t / T
    if s.kind == "linear":
        return s.start + (s.end - s.start) * frac
    if s.kind == "exponential":
        return s.start * (s.end / s.start) ** frac
    return s.end + (s.start - s.end) * (1.0 - frac) ** s.exponent


# --- clustering ------------------------------------------------------------

@dataclass
class Cluster:
    members: np.ndarray
    centroid: np.ndarray


def _assign(points: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(len(points)), labels]


def wcss(points: np.ndarray, labels: np.ndarray, k: int) -> float:
    total = 0.0
    for c in range(k):
        p = points[labels == c]
        if len(p):
            total += float(((p - p.mean(axis=0)) ** 2).sum())
    return total


def lloyd(points: np.ndarray, centroids: np.ndarray, max_iter: int = 100,
          history: list | None = None) -> np.ndarray:
    """Lloyd iterations from the given centroids; returns final labels.

    Empty clusters are reseeded with the point farthest from its centroid
    (taken from a cluster that keeps at least one member).
    """
    k = len(centroids)
    centroids = centroids.copy()
    labels = None
    for _ in range(max_iter):
        new_labels, d2 = _assign(points, centroids)
        counts = np.bincount(new_labels, minlength=k)
        while (counts == 0).any():
            c = int(np.flatnonzero(counts == 0)[0])
            movable = np.where(counts[new_labels] > 1, d2, -1.0)
            far = int(np.argmax(movable))
            counts[new_labels[far]] -= 1
            counts[c] += 1
            new_labels[far] = c
            d2[far] = 0.0
        changed = labels is None or (new_labels != labels).any()
        labels = new_labels
        for c in range(k):
            centroids[c] = points[labels == c].mean(axis=0)
        if history is not None:
            history.append(wcss(points, labels, k))
        if not changed:
            break
    return labels


# Inputs with at most this many distinct seedings are clustered from every one of them.
EXHAUSTIVE_SEEDINGS = 120


def kmeans(points, k: int, rng: np.random.Generator, max_iter: int = 100,
           n_init: int | None = None, history: list | None = None) -> tuple[list[Cluster], np.ndarray]:
    """k-means from member seedings, keeping the lowest within-cluster sum of squares.

    With ``n_init=None`` small inputs (C(n, k) <= EXHAUSTIVE_SEEDINGS) run
    `lloyd` from every k-subset of members and draw nothing from ``rng``;
    larger inputs use one seeding of ``k`` distinct members drawn from
    ``rng``. An explicit ``n_init`` forces that many random seedings. Ties
    keep the earliest seeding. ``history`` receives the per-round WCSS of the
    first seeding. Returns (clusters, labels).
    """
    points = np.atleast_2d(_vec(points))
    n = points.shape[0]
    if not 1 <= k <= n:
        raise InvalidArgument(f"k must lie in [1, {n}], got {k}")
    if n_init is not None and n_init < 1:
        raise InvalidArgument("n_init must be >= 1")
    if n_init is None and math.comb(n, k) <= EXHAUSTIVE_SEEDINGS:
        seedings = (list(s) for s in itertools.combinations(range(n), k))
    else:
        seedings = (rng.choice(n, size=k, replace=False) for _ in range(n_init or 1))
    best_labels, best_cost = None, math.inf
    for r, idx in enumerate(seedings):
        labels = lloyd(points, points[idx], max_iter, history if r == 0 else None)
        cost = wcss(points, labels, k)
        if cost < best_cost:
            best_labels, best_cost = labels, cost
    clusters = [Cluster(np.flatnonzero(best_labels == c), points[best_labels == c].mean(axis=0))
                for c in range(k)]
    return clusters, best_labels


# --- acceptance ------------------------------------------------------------

def _require_evaluated(*cs: Candidate):
    if any(c.value is None for c in cs):
        raise InvalidArgument("candidate has not been evaluated")


def greedy_accept(old: Candidate, new: Candidate) -> Candidate:
    """Keep the lower value; a tie keeps ``old``."""
    _require_evaluated(old, new)
    return new if new.value < old.value else old


def probabilistic_accept(old: Candidate, new: Candidate, acceptance: float,
                         rng: np.random.Generator) -> Candidate:
    """Improvements always win; a non-improving ``new`` wins with probability ``acceptance``.

    With acceptance 0 no random number is drawn, so the call is identical to
    `greedy_accept`.
    """
    _require_evaluated(old, new)
    if not 0.0 <= acceptance <= 1.0:
        raise InvalidArgument("acceptance must lie in [0, 1]")
    if new.value < old.value:
        return new
    if acceptance == 0.0:
        return old
    return new if rng.random() < acceptance else old


# --- recombination, restart, velocity --------------------------------------

def recombine(a, b, rng: np.random.Generator) -> np.ndarray:
    """Uniform crossover: each coordinate from ``a`` or ``b`` with probability 1/2."""
    a, b = _vec(a), _vec(b)
    _same_length(a, b)
    mask = rng.random(a.shape) < 0.5
    return np.where(mask, a, b)


def restart(space: SearchSpace, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Fresh uniform point(s) in the space; the caller evaluates them."""
    shape = (space.dims,) if size is None else (size, space.dims)
    return rng.uniform(space.lower, space.upper, size=shape)


def velocity_update(v, x, personal_best, informant_best, inertia: float, c1: float, c2: float,
                    rng: np.random.Generator) -> np.ndarray:
    """inertia*v + c1*r1*(personal_best - x) + c2*r2*(informant_best - x).

    r1 is drawn before r2, each uniform on [0, 1) per coordinate.
    """
    v, x, pb, ib = _vec(v), _vec(x), _vec(personal_best), _vec(informant_best)
    _same_length(v, x, pb, ib)
    if inertia < 0 or c1 < 0 or c2 < 0:
        raise InvalidArgument("inertia and acceleration coefficients must be >= 0")
    r1 = rng.random(x.shape)
    r2 = rng.random(x.shape)
    return inertia * v + c1 * r1 * (pb - x) + c2 * r2 * (ib - x)


# --- small population statistics used by several algorithms ---------------

def spread_scale(positions: np.ndarray, space: SearchSpace, floor: float = 1e-9) -> np.ndarray:
    """Per-coordinate standard deviation of the population, floored at floor * width."""
    P = np.atleast_2d(positions)
    C = P - P.sum(axis=0) / P.shape[0]
    s = np.sqrt((C * C).sum(axis=0) / P.shape[0])
    return np.maximum(s, floor * space.width)


def crowding_penalty(positions: np.ndarray, depth_attract: float, width_attract: float,
                     height_repel: float, width_repel: float) -> np.ndarray:
    """Pairwise Gaussian attraction/repulsion term added to each member's value.

    term_i = sum_j -depth_attract * exp(-width_attract * d_ij^2)
                   + height_repel * exp(-width_repel * d_ij^2)
    """
    P = np.atleast_2d(positions)
    d2 = ((P[:, None, :] - P[None, :, :]) ** 2).sum(axis=2)
    return (-depth_attract * np.exp(-width_attract * d2) + height_repel * np.exp(-width_repel * d2)).sum(axis=1)


def rank_fraction(values: np.ndarray) -> np.ndarray:
    """0 for the best member, 1 for the worst, evenly spaced by rank."""
    values = _vec(values)
    n = values.size
    if n == 1:
        return np.zeros(1)
    ranks = np.empty(n)
    ranks[np.argsort(values, kind="stable")] = np.arange(n)
    return ranks / (n - 1)


def pick_other(n: int, i, rng: np.random.Generator):
    """Uniform index in range(n) other than ``i`` (``i`` itself when n == 1).

    ``i`` may be an integer array; one partner is drawn per entry.
    """
    if np.ndim(i):
        i = np.asarray(i)
        if n == 1:
            return i.copy()
        j = rng.integers(n - 1, size=i.shape)
        return j + (j >= i)
    if n == 1:
        return i
    j = int(rng.integers(n - 1))
    return j + 1 if j >= i else j


__all__: Sequence[str] = [
    "Cluster", "DecaySchedule", "cone_direction", "crowding_penalty", "fitness_weights",
    "gaussian_sample", "greedy_accept", "hypercube_sample", "hypersphere_sample",
    "inverse_square_weights", "kmeans", "levy_length", "lloyd", "levy_step", "move_toward",
    "pick_other", "probabilistic_accept", "project_to_ball", "proportional_select",
    "random_direction", "random_walk", "rank_fraction", "recombine", "restart",
    "schedule_value", "selection_probabilities", "spread_scale", "truncation_select",
    "velocity_update", "wcss", "weighted_centroid",
]
