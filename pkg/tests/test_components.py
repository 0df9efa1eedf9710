import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from natcomp.components import (
    DecaySchedule,
    cone_direction,
    crowding_penalty,
    fitness_weights,
    gaussian_sample,
    greedy_accept,
    hypercube_sample,
    hypersphere_sample,
    inverse_square_matrix,
    inverse_square_weights,
    kmeans,
    levy_length,
    levy_step,
    lloyd,
    move_toward,
    pick_other,
    probabilistic_accept,
    project_to_ball,
    proportional_select,
    random_direction,
    random_walk,
    rank_fraction,
    recombine,
    restart,
    schedule_value,
    selection_probabilities,
    spiral_move,
    truncation_select,
    velocity_update,
    wcss,
    weighted_centroid,
)
from natcomp.core import Candidate, InvalidArgument, SearchSpace

finite = st.floats(-100, 100, allow_nan=False)


def rng(seed=0):
    return np.random.default_rng(seed)


# --- fitness transform and selection -------------------------------------------

def test_fitness_weights_transform():
    w = fitness_weights([1.0, 3.0])
    eps = 1e-12 * 2
    np.testing.assert_allclose(w, [2 + eps, eps], rtol=0, atol=1e-15)
    np.testing.assert_array_equal(fitness_weights([4.0, 4.0]), [1.0, 1.0])


@pytest.mark.parametrize("values, k, expected", [
    ((3, 1, 2), 1, [1]), ((1, 1, 2), 1, [0]), ((5, 4, 3, 2, 1), 2, [4, 3])])
def test_truncation_select(values, k, expected):
    assert list(truncation_select(np.array(values, float), k)) == expected


def test_truncation_select_bad_k():
    with pytest.raises(InvalidArgument):
        truncation_select(np.ones(3), 4)


def test_proportional_select_singleton_and_empty():
    assert proportional_select(np.array([5.0]), rng()) == 0
    with pytest.raises(InvalidArgument):
        proportional_select(np.array([]), rng())


def test_proportional_select_equal_values_half():
    draws = proportional_select(np.array([2.0, 2.0]), rng(1), size=10000)
    assert abs(np.mean(draws == 0) - 0.5) <= 0.02


def test_proportional_select_matches_computed_probabilities():
    values = np.array([1.0, 3.0, 2.0, 2.5])
    # oracle: w = (worst - v) + 1e-12 * range
    eps = 1e-12 * 2.0
    w = np.array([2.0, 0.0, 1.0, 0.5]) + eps
    p = w / w.sum()
    np.testing.assert_allclose(selection_probabilities(values), p)
    n = 20000
    freq = np.bincount(proportional_select(values, rng(2), size=n), minlength=4) / n
    se = np.sqrt(p * (1 - p) / n)
    assert np.all(np.abs(freq - p) <= 3 * se + 1e-12)


# --- moves -------------------------------------------------------------------------

def test_move_toward_examples():
    x, t = np.zeros(2), np.array([2.0, 2.0])
    np.testing.assert_array_equal(move_toward(x, t, 0.0, 0.0, rng()), x)
    np.testing.assert_array_equal(move_toward(x, t, 1.0, 0.0, rng()), t)
    np.testing.assert_array_equal(move_toward(x, t, 0.5, 0.0, rng()), [1.0, 1.0])
    with pytest.raises(InvalidArgument):
        move_toward(x, np.zeros(3), 0.5, 0.0, rng())
    with pytest.raises(InvalidArgument):
        move_toward(x, t, -0.1, 0.0, rng())


def test_weighted_centroid_examples():
    P = np.array([[0.0, 0.0], [4.0, 0.0]])
    np.testing.assert_allclose(weighted_centroid(P, weights=np.array([3.0, 1.0])), [1.0, 0.0])
    np.testing.assert_allclose(weighted_centroid(P, np.array([2.0, 2.0])), [2.0, 0.0])
    np.testing.assert_allclose(weighted_centroid(P[:1], np.array([7.0])), [0.0, 0.0])
    with pytest.raises(InvalidArgument):
        weighted_centroid(np.empty((0, 2)), np.empty(0))


def test_gaussian_sample_degenerate_and_error():
    c = np.array([1.0, -2.0])
    np.testing.assert_array_equal(gaussian_sample(c, 0.0, rng()), c)
    with pytest.raises(InvalidArgument):
        gaussian_sample(c, -1.0, rng())


def test_gaussian_sample_moments():
    n = 100000
    X = gaussian_sample(np.zeros((n, 3)), 1.0, rng(4))
    # oracle: mean se = 1/sqrt(n); variance se = sqrt(2/(n-1))
    assert np.all(np.abs(X.mean(axis=0)) < 3 / math.sqrt(n))
    assert np.all(np.abs(X.var(axis=0, ddof=1) - 1) < 3 * math.sqrt(2 / (n - 1)))
    Y = gaussian_sample(np.zeros((n, 3)), 2.0, rng(5))
    ratio = Y.var(axis=0) / X.var(axis=0)
    assert np.all(np.abs(ratio - 4) < 0.1)


def test_hypersphere_examples():
    c = np.array([1.0, 2.0])
    np.testing.assert_array_equal(hypersphere_sample(c, 0.0, rng()), c)
    with pytest.raises(InvalidArgument):
        hypersphere_sample(c, -1.0, rng())


def test_hypersphere_volume_uniform():
    n = 100000
    X = hypersphere_sample(np.zeros((n, 2)), np.ones(n), rng(6))
    r = np.linalg.norm(X, axis=1)
    assert np.all(r <= 1.0)
    # oracle: area ratio of the r=0.5 disk is 0.25
    assert abs(np.mean(r <= 0.5) - 0.25) < 3 * math.sqrt(0.25 * 0.75 / n)


def test_hypersphere_stack_matches_single_draw_order():
    g1, g2 = rng(8), rng(8)
    one = hypersphere_sample(np.zeros(3), 2.0, g1)
    assert np.linalg.norm(one) <= 2.0
    many = hypersphere_sample(np.zeros((4, 3)), np.array([1.0, 2.0, 0.0, 3.0]), g2)
    assert np.all(np.linalg.norm(many, axis=1) <= [1.0, 2.0, 0.0, 3.0])


def test_hypercube_examples():
    c = np.array([1.0, 1.0, 1.0])
    np.testing.assert_array_equal(hypercube_sample(c, 0.0, rng()), c)
    with pytest.raises(InvalidArgument):
        hypercube_sample(c, -0.5, rng())
    g = rng(9)
    for _ in range(200):
        x = hypercube_sample(c, 0.5, g)
        assert np.max(np.abs(x - c)) <= 0.5
        e = hypercube_sample(c, 0.5, g, edge_only=True)
        assert np.max(np.abs(e - c)) == 0.5
    E = hypercube_sample(np.zeros((100, 4)), 0.25, g, edge_only=True)
    assert np.all(np.max(np.abs(E), axis=1) == 0.25)


def test_spiral_examples():
    x, t = np.array([3.0, -1.0]), np.array([0.5, 0.5])
    np.testing.assert_array_equal(spiral_move(x, t, 1.0, 1.0), t)
    np.testing.assert_array_equal(spiral_move(t, t, 1.0, 0.4), t)
    np.testing.assert_allclose(spiral_move(x, t, 1.0, 0.0), x)
    with pytest.raises(InvalidArgument):
        spiral_move(x, np.zeros(3), 1.0, 0.5)


@settings(max_examples=60)
@given(hnp.arrays(float, 3, elements=finite), hnp.arrays(float, 3, elements=finite),
       st.floats(0, 5), st.floats(0, 1), st.floats(0, 1))
def test_spiral_distance_decreases(x, target, turns, t1, t2):
    assume(np.linalg.norm(x - target) > 1e-6)
    lo, hi = sorted((t1, t2))
    assume(hi - lo > 1e-6)
    d = lambda t: np.linalg.norm(spiral_move(x, target, turns, t) - target)
    assert d(hi) < d(lo) + 1e-12 * (1 + np.linalg.norm(x - target))


def test_cone_direction_within_angle():
    g = rng(10)
    h = np.array([1.0, 2.0, -1.0])
    for _ in range(200):
        u = cone_direction(h, 0.3, g)
        cos = u @ h / np.linalg.norm(h)
        assert math.isclose(np.linalg.norm(u), 1.0)
        assert cos >= math.cos(0.3) - 1e-12


def test_random_direction_unit_rows():
    D = random_direction(5, rng(), size=100)
    np.testing.assert_allclose(np.linalg.norm(D, axis=1), 1.0)


# --- levy ---------------------------------------------------------------------------

def test_levy_errors():
    with pytest.raises(InvalidArgument):
        levy_step(1.0, 2.0, rng(), 2)
    with pytest.raises(InvalidArgument):
        levy_step(1.0, 0.0, rng(), 2)
    with pytest.raises(InvalidArgument):
        levy_step(0.0, 1.5, rng(), 2)


def test_levy_scale_doubles_median():
    a = levy_length(1.0, 1.5, rng(11), 100000)
    b = levy_length(2.0, 1.5, rng(12), 100000)
    assert abs(np.median(b) / np.median(a) - 2) < 0.1


def test_levy_isotropic():
    S = levy_step(1.0, 1.5, rng(13), 3, size=100000)
    U = S / np.linalg.norm(S, axis=1)[:, None]
    # oracle: each coordinate of a uniform unit vector in 3-D has variance 1/3
    assert np.all(np.abs(U.mean(axis=0)) < 3 * math.sqrt(1 / 3 / 100000))


def tail_slope(lengths):
    """Slope of log survival vs log length over the decade above the 90th percentile."""
    L = np.sort(lengths)
    surv = 1 - np.arange(L.size) / L.size
    lo = np.quantile(L, 0.9)
    m = (L >= lo) & (L <= 10 * lo)
    return np.polyfit(np.log(L[m]), np.log(surv[m]), 1)[0]


@pytest.mark.parametrize("tail", [1.2, 1.5, 1.8])
def test_levy_tail_slope(tail):
    assert abs(tail_slope(levy_length(1.0, tail, rng(14), 100000)) + tail) <= 0.3


# --- random walk and projection ------------------------------------------------------

def test_random_walk_examples():
    start = np.array([0.5, -0.5])
    np.testing.assert_array_equal(random_walk(start, 0, lambda g: g.standard_normal(2), rng()), [start])
    path = random_walk(start, 5, lambda g: np.zeros(2), rng())
    assert path.shape == (6, 2) and np.all(path == start)
    with pytest.raises(InvalidArgument):
        random_walk(start, -1, lambda g: np.zeros(2), rng())


def test_random_walk_diffusion():
    # oracle: n i.i.d. N(0, I_d) steps give mean 0 and mean squared displacement n * d
    n, walkers, d = 64, 4000, 2
    path = random_walk(np.zeros((walkers, d)), n, lambda g: g.standard_normal((walkers, d)), rng(15))
    disp = path[-1]
    assert np.all(np.abs(disp.mean(axis=0)) < 3 * math.sqrt(n / walkers))
    msd = (disp ** 2).sum(axis=1).mean()
    assert abs(msd / (n * d) - 1) < 0.06


def test_random_walk_clamped_and_projected():
    space = SearchSpace.box(-1, 1, 2)
    path = random_walk(np.zeros(2), 50, lambda g: g.standard_normal(2), rng(16), space,
                       lambda x: project_to_ball(x, np.zeros(2), 0.5))
    assert np.all(np.linalg.norm(path, axis=1) <= 0.5 + 1e-12)


def test_project_to_ball_rows():
    X = np.array([[3.0, 4.0], [0.1, 0.0]])
    Y = project_to_ball(X, np.zeros((2, 2)), np.array([1.0, 1.0]))
    np.testing.assert_allclose(Y, [[0.6, 0.8], [0.1, 0.0]])


# --- inverse square -------------------------------------------------------------------

def test_inverse_square_examples():
    x = np.zeros(2)
    w = inverse_square_weights(x, np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 0.0]]), np.array([1.0, 1.0, 0.0]))
    assert w[0] == w[1]
    P = np.array([[1.0, 0.0], [2.0, 0.0], [5.0, 5.0]])
    w = inverse_square_weights(x, P, np.array([0.0, 0.0, 1.0]), eps=0.0)
    assert math.isclose(w[0] / w[1], 4.0)
    w = inverse_square_weights(x, np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([0.0, 1.0]))
    assert np.isfinite(w[0]) and math.isclose(w[0], (1.0 + 1e-12) / 1e-9)
    with pytest.raises(InvalidArgument):
        inverse_square_weights(x, np.empty((0, 2)), np.empty(0))


@settings(max_examples=40)
@given(hnp.arrays(float, (5, 2), elements=st.floats(-10, 10)), hnp.arrays(float, 5, elements=finite),
       hnp.arrays(float, 2, elements=st.floats(-10, 10)), st.permutations(range(5)))
def test_inverse_square_permutation_and_translation(P, f, shift, perm):
    x = np.array([0.3, -0.7])
    w = inverse_square_weights(x, P, f)
    perm = list(perm)
    np.testing.assert_allclose(inverse_square_weights(x, P[perm], f[perm]), w[perm], rtol=1e-12)
    np.testing.assert_allclose(inverse_square_weights(x + shift, P + shift, f), w, rtol=1e-6)


@settings(max_examples=40)
@given(hnp.arrays(float, (6, 3), elements=st.floats(-10, 10)), hnp.arrays(float, 6, elements=finite),
       hnp.arrays(bool, (6, 6)))
def test_inverse_square_matrix_matches_rows(P, f, mask):
    W = inverse_square_matrix(P, f, mask)
    for i in range(6):
        others = [j for j in range(6) if j != i and mask[i, j]]
        expected = np.zeros(6)
        if others:
            expected[others] = inverse_square_weights(P[i], P[others], f[others])
        np.testing.assert_allclose(W[i], expected, rtol=1e-9, atol=0)


# --- schedules --------------------------------------------------------------------------

def test_schedule_examples():
    assert schedule_value(DecaySchedule("linear", 1, 0), 50, 100) == 0.5
    assert schedule_value(DecaySchedule("exponential", 1, 0.01), 100, 100) == 0.01
    for kind in ("linear", "exponential", "nonlinear-power"):
        assert schedule_value(DecaySchedule(kind, 2.0, 0.5), 0, 10) == 2.0
    with pytest.raises(InvalidArgument):
        schedule_value(DecaySchedule(), 11, 10)
    with pytest.raises(InvalidArgument):
        DecaySchedule("cosine")
    with pytest.raises(InvalidArgument):
        DecaySchedule("exponential", 1.0, 0.0)


@given(st.sampled_from(["linear", "exponential", "nonlinear-power"]),
       st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.1, 5),
       st.integers(1, 10000), st.data())
def test_schedule_monotone_with_exact_endpoints(kind, start, end, exponent, T, data):
    s = DecaySchedule(kind, start, end, exponent)
    t1 = data.draw(st.integers(0, T))
    t2 = data.draw(st.integers(t1, T))
    assert s(0, T) == start and s(T, T) == end
    a, b = s(t1, T), s(t2, T)
    tol = 1e-12 * max(start, end)
    assert (b <= a + tol) if start >= end else (b >= a - tol)


# --- k-means -------------------------------------------------------------------------------

def brute_force_wcss(points, k):
    """Exact optimum over all labelings that use every cluster."""
    n = len(points)
    best = math.inf
    for labels in itertools.product(range(k), repeat=n):
        labels = np.array(labels)
        if len(set(labels)) == k:
            best = min(best, wcss(points, labels, k))
    return best


def test_kmeans_examples():
    P = rng(17).random((6, 2))
    clusters, labels = kmeans(P, 6, rng())
    assert sorted(len(c.members) for c in clusters) == [1] * 6
    clusters, _ = kmeans(P, 1, rng())
    np.testing.assert_allclose(clusters[0].centroid, P.mean(axis=0))
    with pytest.raises(InvalidArgument):
        kmeans(P, 7, rng())


def test_kmeans_separated_blobs():
    g = rng(18)
    a = g.normal(0, 0.1, (30, 2))
    b = g.normal(10, 0.1, (30, 2))
    _, labels = kmeans(np.vstack([a, b]), 2, g)
    assert len(set(labels[:30])) == 1 and len(set(labels[30:])) == 1 and labels[0] != labels[30]


def test_kmeans_fixed_point_and_monotone_history():
    P = rng(19).random((40, 2))
    hist = []
    clusters, labels = kmeans(P, 4, rng(20), n_init=1, history=hist)
    assert all(b <= a + 1e-12 for a, b in zip(hist, hist[1:]))
    C = np.array([c.centroid for c in clusters])
    d2 = ((P[:, None] - C[None]) ** 2).sum(axis=2)
    assert np.all(d2[np.arange(40), labels] <= d2.min(axis=1) + 1e-12)
    for c in clusters:
        np.testing.assert_allclose(c.centroid, P[c.members].mean(axis=0))


def test_lloyd_repairs_empty_clusters():
    P = np.array([[0.0], [0.1], [0.2], [5.0]])
    labels = lloyd(P, np.array([[0.0], [100.0], [200.0]]))
    assert sorted(set(labels)) == [0, 1, 2]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_kmeans_near_brute_force(n, k, seed):
    assume(k <= n)
    P = rng(seed).normal(size=(n, 2))
    _, labels = kmeans(P, k, rng(seed))
    assert wcss(P, labels, k) <= 1.05 * brute_force_wcss(P, k) + 1e-12


# --- acceptance ---------------------------------------------------------------------------

def test_greedy_accept_examples():
    a, b = Candidate(np.zeros(1), 3.0), Candidate(np.ones(1), 2.0)
    assert greedy_accept(a, b) is b
    assert greedy_accept(b, a) is b
    c = Candidate(np.ones(1), 2.0)
    assert greedy_accept(b, c) is b
    with pytest.raises(InvalidArgument):
        greedy_accept(a, Candidate(np.ones(1)))


@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=30))
def test_probabilistic_zero_equals_greedy(pairs):
    g = rng(21)
    for u, v in pairs:
        old, new = Candidate(np.zeros(1), u), Candidate(np.ones(1), v)
        assert probabilistic_accept(old, new, 0.0, g) is greedy_accept(old, new)


def test_probabilistic_accept_rates():
    old, worse = Candidate(np.zeros(1), 1.0), Candidate(np.ones(1), 2.0)
    g = rng(22)
    assert all(probabilistic_accept(old, worse, 1.0, g) is worse for _ in range(100))
    freq = np.mean([probabilistic_accept(old, worse, 0.3, g) is worse for _ in range(10000)])
    assert abs(freq - 0.3) <= 0.02
    with pytest.raises(InvalidArgument):
        probabilistic_accept(old, worse, 1.5, g)


# --- recombination, restart, velocity -----------------------------------------------------

def test_recombine():
    a = np.arange(5.0)
    np.testing.assert_array_equal(recombine(a, a, rng()), a)
    b = -np.arange(5.0) - 1
    g = rng(23)
    kids = np.array([recombine(a, b, g) for _ in range(10000)])
    assert np.all((kids == a) | (kids == b))
    assert np.all(np.abs((kids == a).mean(axis=0) - 0.5) <= 0.02)
    with pytest.raises(InvalidArgument):
        recombine(a, np.zeros(2), g)


def test_restart_uniform():
    space = SearchSpace.box(-2, 6, 3)
    X = restart(space, rng(24), size=20000)
    assert all(space.contains(x) for x in X[:100]) and space.contains(X)
    se = (8 / math.sqrt(12)) / math.sqrt(20000)
    assert np.all(np.abs(X.mean(axis=0) - 2) < 3 * se)
    np.testing.assert_array_equal(restart(space, rng(5)), restart(space, rng(5)))


def test_velocity_update_examples():
    v, x = np.array([0.5, -1.0]), np.array([1.0, 2.0])
    np.testing.assert_array_equal(velocity_update(v, x, x, x, 1.0, 1.4, 1.4, rng()), v)
    np.testing.assert_array_equal(velocity_update(v, x, x + 1, x - 1, 0.0, 0.0, 0.0, rng()), [0, 0])
    pb, ib = np.array([0.0, 0.0]), np.array([3.0, 3.0])
    g = rng(25)
    r1, r2 = g.random(2), g.random(2)
    expected = 0.7 * v + 1.4 * r1 * (pb - x) + 1.4 * r2 * (ib - x)
    np.testing.assert_allclose(velocity_update(v, x, pb, ib, 0.7, 1.4, 1.4, rng(25)), expected)
    with pytest.raises(InvalidArgument):
        velocity_update(v, x, pb, np.zeros(3), 0.7, 1.4, 1.4, g)


# --- small helpers --------------------------------------------------------------------------

def test_rank_fraction_and_pick_other():
    np.testing.assert_allclose(rank_fraction([3.0, 1.0, 2.0]), [1.0, 0.0, 0.5])
    g = rng(26)
    assert all(pick_other(5, 2, g) != 2 for _ in range(200))
    idx = np.arange(5).repeat(50)
    assert np.all(pick_other(5, idx, g) != idx)
    assert pick_other(1, 0, g) == 0


def test_crowding_penalty_formula():
    P = np.array([[0.0], [1.0]])
    term = -0.1 * (1 + math.exp(-2.0)) + 0.2 * (1 + math.exp(-3.0))
    np.testing.assert_allclose(crowding_penalty(P, 0.1, 2.0, 0.2, 3.0), [term, term])
