import ast
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sphere
from natcomp import algorithms
from natcomp.algorithms import REGISTRY, ROSTER, default_params, make_algorithm, step
from natcomp.components import DecaySchedule
from natcomp.core import InvalidArgument, Problem, SearchSpace, run

SPACE = SearchSpace.box(-5.12, 5.12, 2)


def fresh(algorithm_id, seed=0, budget=10**6, space=SPACE, objective=sphere, **params):
    algo = make_algorithm(algorithm_id, params or None)
    problem = Problem(objective, space, budget)
    g = np.random.default_rng(seed)
    return algo, problem, algo.initialize(problem, g), g


def test_roster_is_complete():
    assert len(ROSTER) == 34 == len(set(ROSTER))
    assert set(ROSTER) <= set(REGISTRY)
    for a in ROSTER:
        cls = REGISTRY[a]
        assert cls.id == a and cls.summary


@pytest.mark.parametrize("algorithm_id", ROSTER)
def test_every_algorithm_runs_on_sphere(algorithm_id):
    trace = run(make_algorithm(algorithm_id), sphere, SPACE, 1000, 3)
    best = trace.column("best")
    assert np.all(np.diff(best) <= 0)
    assert trace.records[-1].evals <= 1000
    assert SPACE.contains(trace.best_position)
    if algorithm_id != "ICA":
        assert trace.records[-1].evals == 1000


@pytest.mark.parametrize("algorithm_id", ROSTER)
def test_every_algorithm_keeps_members_inside(algorithm_id):
    algo, problem, state, g = fresh(algorithm_id, seed=1, objective=lambda x: float(np.sum(np.abs(x - 5))))
    for _ in range(5):
        state = step(algo, state, problem, g)
        assert np.all(state.population.positions >= SPACE.lower)
        assert np.all(state.population.positions <= SPACE.upper)
        np.testing.assert_array_equal(state.population.values,
                                      [float(np.sum(np.abs(x - 5))) for x in state.population.positions])


@pytest.mark.parametrize("algorithm_id", ROSTER)
def test_parameters_documented_and_ranged(algorithm_id):
    import dataclasses
    p = default_params(algorithm_id)
    for f in dataclasses.fields(p):
        assert f.metadata.get("doc"), f"{algorithm_id}.{f.name} lacks a rationale"
        if not isinstance(getattr(p, f.name), DecaySchedule):
            assert "range" in f.metadata


def test_invalid_params():
    with pytest.raises(InvalidArgument):
        make_algorithm("GA", {"population_size": 0})
    with pytest.raises(InvalidArgument):
        make_algorithm("XYZ")
    with pytest.raises(InvalidArgument):
        default_params("PSO").replace(nope=1)
    with pytest.raises(InvalidArgument):
        default_params("BB-BC").replace(**{"width.kind": "cosine"})


def test_schedule_field_override():
    p = default_params("ABC").replace(**{"move_size.end": "0.5", "stagnation_limit": "7"})
    assert p.move_size == DecaySchedule("linear", 1.0, 0.5) and p.stagnation_limit == 7
    with pytest.raises(InvalidArgument):
        default_params("ABC").replace(move_size="0.3")


def test_documented_defaults():
    assert default_params("CS").population_size <= 25 < default_params("PSO").population_size
    pso = default_params("PSO")
    assert (pso.inertia, pso.c1, pso.c2) == (0.7, 1.4, 1.4)
    assert default_params("GWO").shrink.end == 0


def test_state_fields_follow_manifest():
    for a in ROSTER:
        algo, problem, state, g = fresh(a)
        assert (state.velocities is not None) == (a in {"PSO", "CSS", "GSA"}), a
        assert (state.best_positions is not None) == (a in {"PSO", "KH", "MFO"}), a
    _, _, state, _ = fresh("FA")
    assert state.velocities is None and state.best_positions is None


def test_bbbc_identical_points_sample_around_them():
    algo, problem, state, g = fresh("BB-BC", population_size=10)
    point = np.array([1.0, -2.0])
    state.population.positions[:] = point
    state.population.values[:] = sphere(point)
    state = step(algo, state, problem, g)
    sigma = algo.sched(problem, algo.params.width) * SPACE.width
    assert np.all(np.abs(state.population.positions - point) < 6 * sigma)


@pytest.mark.parametrize("algorithm_id", ["ABC", "BeA", "FWA", "TLBO"])
def test_greedy_algorithms_never_worsen_members(algorithm_id):
    algo, problem, state, g = fresh(algorithm_id, seed=4)
    for _ in range(30):
        before = state.population.values.copy()
        state = step(algo, state, problem, g)
        after = state.population.values
        keep = np.ones(len(after), dtype=bool)
        keep[state.extra.get("restarted", [])] = False
        assert np.all(after[keep] <= before[keep])


def test_tlbo_best_never_worsens():
    algo, problem, state, g = fresh("TLBO", seed=5)
    best = state.population.values.min()
    state = step(algo, state, problem, g)
    assert state.population.values.min() <= best


def test_only_ica_terminates_early():
    trace = run(make_algorithm("ICA"), sphere, SPACE, 20000, 0)
    assert trace.terminated_early and trace.records[-1].evals < 20000
    assert not run(make_algorithm("GA"), sphere, SPACE, 3000, 0).terminated_early


def test_mbo_operator_statistics_accumulate():
    algo, problem, state, g = fresh("MBO")
    for _ in range(5):
        state = step(algo, state, problem, g)
    assert state.extra["operator_tries"].sum() > 0
    assert np.all(state.extra["operator_success"] <= state.extra["operator_tries"])


def test_ica_empires_partition_population():
    algo, problem, state, g = fresh("ICA")
    for _ in range(3):
        state = step(algo, state, problem, g)
        labels = state.extra["empire"]
        assert len(labels) == len(state.population)
        for label, leader in state.extra["leaders"].items():
            assert labels[leader] == label


def test_step_numbers_iterations():
    algo, problem, state, g = fresh("PSO")
    assert state.iteration == 0
    step(algo, state, problem, g)
    step(algo, state, problem, g)
    assert state.iteration == 2


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(ROSTER), st.integers(0, 2**32 - 1))
def test_runs_are_deterministic(algorithm_id, seed):
    a = run(make_algorithm(algorithm_id), sphere, SPACE, 400, seed)
    b = run(make_algorithm(algorithm_id), sphere, SPACE, 400, seed)
    assert a.to_csv() == b.to_csv()


@pytest.mark.parametrize("algorithm_id", ["PSO", "GWO", "CS", "FA"])
def test_higher_dimensions(algorithm_id):
    space = SearchSpace.box(-5.12, 5.12, 10)
    trace = run(make_algorithm(algorithm_id), sphere, space, 3000, 0)
    assert trace.final_best < trace.records[0].best


def test_one_dimensional_problems():
    space = SearchSpace.box(-5.12, 5.12, 1)
    for a in ROSTER:
        trace = run(make_algorithm(a), sphere, space, 600, 0)
        assert math.isfinite(trace.final_best), a


# --- composition purity -----------------------------------------------------------------

ALLOWED = {"__future__", "math", "dataclasses", "typing", "numpy",
           "natcomp.core", "natcomp.components", "natcomp.algorithms.base"}


def imported_modules(path: Path):
    tree = ast.parse(path.read_text())
    for node in ast.walk(tree):
        if isinstance(node, ast.Import):
            yield from (a.name for a in node.names)
        elif isinstance(node, ast.ImportFrom):
            yield node.module


@pytest.mark.parametrize("module", ["attraction", "baselines", "clustered", "evolutionary",
                                    "movers", "samplers"])
def test_algorithm_modules_compose_only_shared_operators(module):
    path = Path(algorithms.__file__).parent / f"{module}.py"
    names = set(imported_modules(path))
    assert names <= ALLOWED, names - ALLOWED
