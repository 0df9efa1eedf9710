import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from natcomp.benchmarks import (
    BENCHMARKS,
    evaluate_benchmark,
    get_benchmark,
    oracle_median,
    random_search,
    rastrigin,
    sphere,
)
from natcomp.core import InvalidArgument, SearchSpace


@pytest.mark.parametrize("name", list(BENCHMARKS))
@pytest.mark.parametrize("dims", [2, 5, 10])
def test_known_optimum(name, dims):
    b = get_benchmark(name)
    assert abs(b(b.optimum(dims)) - b.optimum_value) <= 1e-12


def test_textbook_examples():
    assert evaluate_benchmark("sphere", [0.0, 0.0, 0.0]) == 0.0
    assert evaluate_benchmark("rastrigin", [0.0, 0.0]) == 0.0
    assert evaluate_benchmark("rosenbrock", [1.0, 1.0]) == 0.0
    assert evaluate_benchmark("sphere", [1.0, 2.0]) == 5.0
    assert evaluate_benchmark("rosenbrock", [0.0, 0.0]) == 1.0
    assert evaluate_benchmark("rastrigin", [1.0]) == pytest.approx(1.0)
    assert evaluate_benchmark("griewank", [0.0]) == 0.0


def test_benchmark_errors():
    with pytest.raises(InvalidArgument, match="valid names"):
        get_benchmark("nope")
    with pytest.raises(InvalidArgument):
        evaluate_benchmark("sphere", [1.0, 2.0], dims=3)
    with pytest.raises(InvalidArgument):
        evaluate_benchmark("sphere", [9.0])
    with pytest.raises(InvalidArgument):
        get_benchmark("rosenbrock").space(1)


@given(hnp.arrays(float, 6, elements=st.floats(-5.12, 5.12)))
def test_separable_benchmarks_decompose(x):
    assert sphere(x) == pytest.approx(sum(sphere(x[i:i + 1]) for i in range(6)), abs=1e-9)
    assert rastrigin(x) == pytest.approx(sum(rastrigin(x[i:i + 1]) for i in range(6)), abs=1e-9)


@given(st.sampled_from(list(BENCHMARKS)), hnp.arrays(float, 4, elements=st.floats(-1, 1)))
def test_benchmarks_deterministic_and_nonnegative(name, x):
    b = get_benchmark(name)
    assert b(x) == b(x.copy()) and b(x) >= 0


def test_random_search_trace():
    space = SearchSpace.box(-5, 5, 2)
    t = random_search(sphere, space, 1, 0)
    assert len(t) == 1
    t = random_search(sphere, space, 2500, 0, batch=700)
    assert len(t) == 2500 and t.records[-1].evals == 2500
    assert np.all(np.diff(t.column("best")) <= 0)
    assert t.final_best == sphere(t.best_position)
    with pytest.raises(InvalidArgument):
        random_search(sphere, space, 0, 0)


def test_random_search_batching_does_not_change_stream():
    space = SearchSpace.box(-5, 5, 3)
    a = random_search(sphere, space, 300, 4, batch=1)
    b = random_search(sphere, space, 300, 4, batch=128)
    assert a.to_csv() == b.to_csv()


def test_random_search_running_stats():
    space = SearchSpace.box(-5, 5, 2)
    t = random_search(sphere, space, 50, 1)
    rng = np.random.Generator(np.random.PCG64(1))
    values = np.array([sphere(x) for x in rng.uniform(-5, 5, (50, 2))])
    np.testing.assert_allclose(t.column("mean"), np.cumsum(values) / np.arange(1, 51))
    np.testing.assert_allclose(t.column("spread")[-1], values.std())


def test_oracle_median_order_statistics():
    # oracle: the best of n uniform samples in the 2-D box is below r^2 with
    # probability 1 - (1 - pi r^2 / 100)^n; its median solves this = 1/2
    n = 10**4
    r2 = 100 * (1 - 0.5 ** (1 / n)) / np.pi
    med = oracle_median(sphere, SearchSpace.box(-5, 5, 2), n, range(30))
    assert med < 0.05
    assert 0.2 * r2 < med < 5 * r2
