"""End-to-end solver agreement, infeasibility reporting, and config knobs."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvtsp import (
    INF,
    Infeasible,
    Instance,
    SolverConfig,
    brute_permutation,
    brute_psaraftis,
    is_valid_tour_edgeset,
    multigraph_cost,
    solve,
)
from mvtsp.cli import generate_instance
from mvtsp.solvers import ALGORITHMS

DECOMPOSED = ("enum", "enum_grouped", "dp", "dc", "dc2")


def check_solution(inst, sol):
    assert is_valid_tour_edgeset(sol.edges, inst)
    assert multigraph_cost(sol.edges, inst) == sol.cost
    if sol.expansion is not None:
        assert len(sol.expansion) == inst.total_visits
        walk = sol.expansion
        counts = {}
        for t in range(len(walk)):
            arc = (walk[t], walk[(t + 1) % len(walk)])
            counts[arc] = counts.get(arc, 0) + 1
        assert counts == dict(sol.edges.mult)


def test_all_algorithms_agree_on_small_instances():
    cases = [(2, 4), (3, 2), (4, 2)]
    for n, k_max in cases:
        for trial in range(8):
            inst = generate_instance(
                n, k_max, cost_max=15, inf_prob=0.1, seed=1000 * n + trial
            )
            costs = {}
            for alg in ALGORITHMS:
                sol = solve(inst, SolverConfig(algorithm=alg))
                check_solution(inst, sol)
                costs[alg] = sol.cost
            assert len(set(costs.values())) == 1, costs


def test_infeasible_carries_best_tree_bound():
    # Finite trees exist (cheapest costs 2) but no closed tour does.
    cost = (
        (INF, 1, INF),
        (INF, INF, 1),
        (INF, INF, INF),
    )
    inst = Instance(cost, (1, 1, 1))
    for alg in DECOMPOSED:
        with pytest.raises(Infeasible) as exc:
            solve(inst, SolverConfig(algorithm=alg))
        assert exc.value.best_bound == 2
    for alg in ("brute_psaraftis", "brute_permutation"):
        with pytest.raises(Infeasible) as exc:
            solve(inst, SolverConfig(algorithm=alg))
        assert exc.value.best_bound is None


def test_infeasible_without_any_finite_tree():
    inst = Instance(((INF, INF), (INF, INF)), (1, 1))
    for alg in DECOMPOSED:
        with pytest.raises(Infeasible) as exc:
            solve(inst, SolverConfig(algorithm=alg))
        assert exc.value.best_bound is None


def test_single_city_self_loops():
    inst = Instance(((7,),), (5,))
    for alg in ALGORITHMS:
        sol = solve(inst, SolverConfig(algorithm=alg))
        assert sol.cost == 35
        assert sol.edges.mult == {(0, 0): 5}
        assert sol.expansion == (0, 0, 0, 0, 0)


def test_single_city_infinite_loop_is_infeasible():
    inst = Instance(((INF,),), (3,))
    for alg in ALGORITHMS:
        with pytest.raises(Infeasible):
            solve(inst, SolverConfig(algorithm=alg))


def test_expansion_threshold_controls_walk_materialization():
    inst = generate_instance(4, 3, seed=42)
    total = inst.total_visits
    for alg in ("dp", "brute_psaraftis"):
        roomy = solve(inst, SolverConfig(algorithm=alg, expansion_threshold=total))
        assert roomy.expansion is not None
        assert len(roomy.expansion) == total
        tight = solve(
            inst, SolverConfig(algorithm=alg, expansion_threshold=total - 1)
        )
        assert tight.expansion is None
        assert tight.cost == roomy.cost


def test_parallel_sweep_matches_sequential():
    for seed in range(5):
        inst = generate_instance(5, 3, inf_prob=0.1, seed=seed)
        seq = solve(inst, SolverConfig(algorithm="dp"))
        for workers in (2, 3):
            par = solve(inst, SolverConfig(algorithm="dp", parallelism=workers))
            assert par.cost == seq.cost
            assert par.edges.mult == seq.edges.mult
            assert par.expansion == seq.expansion


def test_cache_flag_does_not_change_results():
    for alg in ("dc", "dc2"):
        for seed in range(4):
            inst = generate_instance(5, 3, inf_prob=0.1, seed=70 + seed)
            plain = solve(inst, SolverConfig(algorithm=alg))
            cached = solve(inst, SolverConfig(algorithm=alg, cache=True))
            assert cached.cost == plain.cost
            check_solution(inst, cached)


def test_nonzero_root_same_cost_walk_starts_there():
    inst = generate_instance(4, 2, seed=9)
    base = solve(inst, SolverConfig(algorithm="dp", root=0))
    for root in (1, 2, 3):
        sol = solve(inst, SolverConfig(algorithm="dp", root=root))
        assert sol.cost == base.cost
        assert sol.expansion[0] == root
        check_solution(inst, sol)


def test_certificate_present_for_decomposition_absent_for_brute():
    inst = generate_instance(3, 2, seed=5)
    for alg in DECOMPOSED:
        sol = solve(inst, SolverConfig(algorithm=alg))
        cert = sol.certificate
        assert cert is not None
        assert cert.cost <= sol.cost
        assert len(cert.pi_source) == inst.n
        assert len(cert.pi_sink) == inst.n
    for alg in ("brute_psaraftis", "brute_permutation"):
        assert solve(inst, SolverConfig(algorithm=alg)).certificate is None


@pytest.mark.parametrize(
    "kwargs",
    [
        {"algorithm": "simplex"},
        {"root": -1},
        {"parallelism": 0},
        {"expansion_threshold": -1},
    ],
)
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_solve_rejects_root_outside_instance():
    inst = generate_instance(3, 1, seed=0)
    with pytest.raises(ValueError):
        solve(inst, SolverConfig(algorithm="dp", root=3))
    with pytest.raises(ValueError):
        solve(inst, SolverConfig(algorithm="enum", root=5))


def test_brute_force_guards():
    big_states = Instance(tuple(tuple(1 for _ in range(9)) for _ in range(9)), (9,) * 9)
    with pytest.raises(ValueError):
        brute_psaraftis(big_states)
    long_walk = Instance(((1,),), (11,))
    with pytest.raises(ValueError):
        brute_permutation(long_walk)


def test_brute_oracles_return_inf_when_stuck():
    inst = Instance(((INF, 1), (INF, INF)), (1, 1))
    assert brute_psaraftis(inst) == INF
    assert brute_permutation(inst) == INF


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_dp_matches_visit_state_oracle(data):
    n = data.draw(st.integers(2, 4), label="n")
    k = tuple(data.draw(st.integers(1, 2), label=f"k{i}") for i in range(n))
    seed = data.draw(st.integers(0, 10**6), label="seed")
    rng = random.Random(seed)
    cost = tuple(
        tuple(INF if rng.random() < 0.2 else rng.randint(0, 9) for _ in range(n))
        for _ in range(n)
    )
    inst = Instance(cost, k)
    oracle = brute_psaraftis(inst)
    try:
        sol = solve(inst, SolverConfig(algorithm="dp"))
    except Infeasible:
        assert oracle == INF
    else:
        assert sol.cost == oracle
        check_solution(inst, sol)
