from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pivotlab.instances import gen_cube, gen_km_dantzig, gen_random_lp
from pivotlab.lp_model import BoundedStandardLP, reformulate
from pivotlab.oracle import (
    OracleUnavailable,
    acquire_oracle,
    check_monotone,
    cube_brute_force,
    diff_opt,
    oracle_from_outcome,
)
from pivotlab.simplex import SolverConfig, SolveStatus, make_state, solve, solve_with_basis

statuses = st.integers(1, 12).flatmap(
    lambda n: st.tuples(*[st.lists(st.sampled_from([0, 1, 2]), min_size=n, max_size=n) for _ in range(3)])
)


def test_diff_opt_examples():
    assert diff_opt([1, 0, 2, 1, 0], [1, 1, 0, 0, 0]) == 4
    assert diff_opt([0, 1], [0, 1]) == 0
    with pytest.raises(ValueError):
        diff_opt([0, 1], [0, 1, 1])


@given(statuses)
def test_diff_opt_is_a_metric(triple):
    a, b, c = triple
    assert diff_opt(a, b) >= 0
    assert diff_opt(a, a) == 0
    assert diff_opt(a, b) == diff_opt(b, a)
    assert diff_opt(a, c) <= diff_opt(a, b) + diff_opt(b, c)
    assert (diff_opt(a, b) == 0) == (a == b)


def test_cube_example_distances():
    # n = 2, optimum (1, 0): statuses are (x, 1 - x)
    star = [1, 0, 0, 1]
    assert diff_opt([1, 0, 0, 1], star) == 0
    assert diff_opt([1, 1, 0, 0], star) == 2
    assert diff_opt([0, 1, 1, 0], star) == 4


@pytest.mark.parametrize("n", range(1, 7))
def test_cube_brute_force_passes(n):
    rep = cube_brute_force(n)
    assert rep.vertices == 2**n
    assert rep.passed, rep.failures[:5]


def test_cube_brute_force_rejects_large_n():
    with pytest.raises(ValueError):
        cube_brute_force(7)


def test_check_monotone_on_sequences():
    star = np.array([1, 0, 0, 1])
    rep = check_monotone([[0, 1, 1, 0], [1, 0, 1, 0], [1, 0, 0, 1]], star)
    assert rep.values == [4, 2, 0] and rep.deltas == [-2, -2]
    assert rep.monotone and rep.all_minus_two
    rep = check_monotone([[1, 0, 1, 0], [0, 1, 1, 0]], star)
    assert rep.deltas == [2] and not rep.monotone


@pytest.mark.parametrize("n", [3, 5])
def test_expert_deltas_on_cube(n):
    for seed in range(4):
        lp = reformulate(gen_cube(n, seed=seed))
        oracle = acquire_oracle(lp).sta_star
        start = list(range(n, 2 * n))  # all y basic, x = 0
        for rule in ("exp", "exp2", "nolocal"):
            out = solve_with_basis(lp, make_state(lp, start), rule, oracle=oracle)
            assert out.status is SolveStatus.OPTIMAL
            rep = check_monotone(out.trace, oracle)
            assert set(rep.deltas) <= {-2}, (rule, seed, rep.deltas)
            assert rep.values[-1] == 0


def test_expert_deltas_are_reported_on_general_lps():
    # on boxed LPs deltas outside {-2, -1, 0} can occur; the report must still describe them
    seen = set()
    for seed in range(30):
        lp = reformulate(gen_random_lp(3, 7, seed=seed, m_ineq=1))
        out = solve(lp, "se")
        oracle = oracle_from_outcome(out).sta_star
        for rule in ("exp", "exp2"):
            o = solve(lp, rule, oracle=oracle)
            if o.lp.m != out.lp.m:
                continue
            rep = check_monotone(o.trace, oracle)
            assert len(rep.deltas) == len(o.trace.records)
            seen.update(rep.deltas)
    assert seen


def test_acquire_oracle_deterministic():
    lp = reformulate(gen_random_lp(4, 8, seed=3))
    a = acquire_oracle(lp, SolverConfig(seed=1))
    b = acquire_oracle(lp, SolverConfig(seed=1))
    np.testing.assert_array_equal(a.sta_star, b.sta_star)
    assert a.objective_star == b.objective_star
    assert int((a.sta_star == 1).sum()) == lp.m
    assert a.source["rule"] == "se"


def test_acquire_oracle_infeasible():
    lp = BoundedStandardLP([1.0, 1.0], [[1.0, 1.0]], [5.0], [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(OracleUnavailable):
        acquire_oracle(lp)


def test_acquire_oracle_unbounded():
    lp = BoundedStandardLP([-1.0, 0.0], [[1.0, -1.0]], [0.0], [0.0, 0.0], [np.inf, np.inf])
    with pytest.raises(OracleUnavailable):
        acquire_oracle(lp)


def test_km_oracle_reached_in_one_expert_pivot():
    glp, start = gen_km_dantzig(6)
    lp = reformulate(glp)
    oracle = oracle_from_outcome(solve_with_basis(lp, make_state(lp, start), "se")).sta_star
    for rule in ("exp", "exp2", "nolocal"):
        out = solve_with_basis(lp, make_state(lp, start), rule, oracle=oracle)
        rep = check_monotone(out.trace, oracle)
        assert out.phase2_pivots <= 6 and rep.all_minus_two
