from __future__ import annotations

import json

import numpy as np
import pytest

from oracles import brute_force_optimum, gaussian_rank, general_to_box_standard
from pivotlab.instances import gen_km_dantzig, gen_random_lp
from pivotlab.lp_model import BoundedStandardLP, GeneralLP, reformulate
from pivotlab.oracle import acquire_oracle, oracle_from_outcome
from pivotlab.simplex import (
    AT_LOWER,
    AT_UPPER,
    BASIC,
    NumericalFailure,
    SolverConfig,
    SolveStatus,
    build_auxiliary,
    candidate_set,
    make_state,
    phase1,
    phase1_initial_point,
    phase2,
    pivot,
    ratio_test,
    refactor,
    solve,
    solve_with_basis,
)

INF = np.inf


def std(c, A, b, l=None, u=None):
    A = np.atleast_2d(np.asarray(A, float))
    n = A.shape[1]
    return BoundedStandardLP(c, A, b, np.zeros(n) if l is None else l, np.full(n, INF) if u is None else u)


# --- Phase I construction ----------------------------------------------------

def test_initial_point_cases():
    lp = std([0, 0, 0, 0], [[1, 1, 1, 1]], [0], l=[0, -INF, -INF, 2], u=[INF, 3, INF, 5])
    np.testing.assert_array_equal(phase1_initial_point(lp), [0, 3, 0, 2])


def test_auxiliary_negative_residual():
    lp = std([1.0], [[1.0]], [-1.0], l=[-INF], u=[INF])
    aux, st = build_auxiliary(lp, np.zeros(1))
    np.testing.assert_array_equal(aux.A, [[1.0, -1.0]])
    np.testing.assert_array_equal(st.x, [0.0, 1.0])
    np.testing.assert_array_equal(aux.c, [0.0, 1.0])
    assert st.basic.tolist() == [1]


def test_auxiliary_zero_residual_needs_no_pivots():
    lp = std([1.0, 1.0], [[1.0, 1.0]], [0.0])
    res = phase1(lp)
    assert res.status is SolveStatus.OPTIMAL
    assert res.aux_objective == 0.0
    # one zero-step pivot drives the artificial out, nothing else
    assert res.pivots <= lp.m


@pytest.mark.parametrize("seed", range(10))
def test_auxiliary_start_satisfies_rows(seed):
    r = np.random.default_rng(seed)
    lp = std(r.normal(size=2), r.normal(size=(2, 2)), r.normal(size=2), l=[-1, 0], u=[INF, 2])
    aux, st = build_auxiliary(lp)
    assert np.max(np.abs(aux.A @ st.x - aux.b)) == pytest.approx(0.0, abs=1e-14)
    assert np.all(st.x[2:] >= 0)


def test_duplicate_rows_are_removed():
    A = np.array([[1.0, 1.0, 1.0, 0.0], [1.0, 1.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]])
    lp = std([1.0, 2.0, 0.0, 1.0], A, [2.0, 2.0, 1.0])
    res = phase1(lp)
    assert res.status is SolveStatus.OPTIMAL
    assert len(res.removed_rows) == 1
    assert res.lp.m == 2
    assert gaussian_rank(res.lp.A[:, res.basis.basic]) == 2
    assert gaussian_rank(A) == 2


def test_infeasible_detected():
    glp = GeneralLP.build([1.0], A_ineq=[[1.0], [1.0]], l_constr=[1.0, -INF], u_constr=[INF, 0.0])
    out = solve(reformulate(glp))
    assert out.status is SolveStatus.INFEASIBLE


# --- candidates, ratio test, pivot -----------------------------------------

def test_candidate_set_basic():
    lp = std([-1.0, 2.0, 0.0, 0.0], np.hstack([np.eye(2), np.eye(2)]), [1.0, 1.0])
    st = make_state(lp, [2, 3])
    assert candidate_set(st, lp, SolverConfig()).tolist() == [0]


def test_candidate_at_upper_with_positive_rc():
    lp = std([3.0, 0.0], [[1.0, 1.0]], [5.0], u=[2.0, INF])
    st = make_state(lp, [1], status=np.array([AT_UPPER, BASIC]))
    assert st.x.tolist() == [2.0, 3.0]
    assert candidate_set(st, lp, SolverConfig()).tolist() == [0]


def test_candidate_tolerance_boundary():
    cfg = SolverConfig()
    lp = std([-cfg.eps_cost / 2, 0.0], [[1.0, 1.0]], [1.0])
    st = make_state(lp, [1])
    assert candidate_set(st, lp, cfg).size == 0


def test_ratio_single_blocker():
    lp = std([-1.0, 0.0], [[1.0, 1.0]], [1.0])
    st = make_state(lp, [1])
    out = ratio_test(st, lp, 0)
    assert out.step == 1.0 and out.blockers == (0,) and not out.flip


def test_ratio_flip():
    lp = std([-1.0, 0.0], [[1.0, 1.0]], [10.0], u=[2.0, INF])
    st = make_state(lp, [1])
    out = ratio_test(st, lp, 0)
    assert out.flip and out.step == 2.0 and out.blockers == ()
    new = pivot(st, lp, 0, out, None)
    assert new.basic.tolist() == [1] and new.status[0] == AT_UPPER
    np.testing.assert_allclose(new.x, [2.0, 8.0])
    np.testing.assert_allclose(lp.A @ new.x, lp.b)


def test_ratio_unbounded():
    lp = std([-1.0, 0.0], [[-1.0, 1.0]], [1.0])
    st = make_state(lp, [1])
    out = ratio_test(st, lp, 0)
    assert out.unbounded and out.blockers == () and not out.flip
    assert solve_with_basis(lp, st, "dantzig").status is SolveStatus.UNBOUNDED


def test_degenerate_pivot_keeps_objective():
    lp = std([-1.0, 0.0, 0.0], [[1.0, 1.0, 0.0], [1.0, 0.0, 1.0]], [0.0, 1.0])
    st = make_state(lp, [1, 2])
    out = ratio_test(st, lp, 0)
    assert out.step == 0.0
    new = pivot(st, lp, 0, out, out.blockers[-1])
    assert new.objective(lp) == st.objective(lp)
    assert 0 in new.basic.tolist()


@pytest.mark.parametrize("seed", range(10))
def test_product_form_matches_fresh_inverse(seed):
    r = np.random.default_rng(seed)
    A = np.hstack([np.eye(3), r.uniform(-1, 1, (3, 3))])
    lp = std(np.concatenate([np.zeros(3), -r.uniform(0.1, 1, 3)]), A, r.uniform(1, 2, 3))
    st = make_state(lp, [0, 1, 2])
    j = int(candidate_set(st, lp, SolverConfig())[0])
    out = ratio_test(st, lp, j)
    if out.unbounded or out.flip:
        pytest.skip("no basis change for this draw")
    new = pivot(st, lp, j, out, out.blockers[0])
    fresh = np.linalg.inv(lp.A[:, new.basic])
    np.testing.assert_allclose(new.B_inv, fresh, atol=1e-10)


def test_refactor_restores_inverse():
    lp = reformulate(gen_km_dantzig(4)[0])
    cfg = SolverConfig(refactor_period=3)
    out = solve_with_basis(lp, make_state(lp, list(range(4, 8))), "dantzig", cfg)
    st = out.basis
    np.testing.assert_allclose(st.B_inv @ lp.A[:, st.basic], np.eye(4), atol=cfg.eps_fact)
    again = refactor(st, lp, cfg)
    np.testing.assert_allclose(again.x, st.x, atol=1e-9)


def test_singular_basis_raises():
    lp = std([0.0, 0.0, 0.0], [[1.0, 1.0, 0.0], [1.0, 1.0, 1.0]], [1.0, 2.0])
    with pytest.raises(NumericalFailure):
        make_state(lp, [0, 1])


def test_basis_validation():
    lp = std([0.0, 0.0], [[1.0, 1.0]], [1.0])
    with pytest.raises(ValueError):
        make_state(lp, [0, 0])


# --- phase II and solve ------------------------------------------------------

def test_km3_dantzig_takes_seven_pivots():
    lp = reformulate(gen_km_dantzig(3)[0])
    out = solve_with_basis(lp, make_state(lp, [3, 4, 5]), "dantzig")
    assert out.status is SolveStatus.OPTIMAL and out.phase2_pivots == 7
    assert out.objective == -10000.0


def test_dual_feasible_start_is_optimal_immediately():
    lp = std([1.0, 0.0], [[1.0, 1.0]], [1.0])
    out = solve_with_basis(lp, make_state(lp, [1]), "se")
    assert out.status is SolveStatus.OPTIMAL and out.phase2_pivots == 0


def test_km3_expert_at_most_three():
    lp = reformulate(gen_km_dantzig(3)[0])
    start = make_state(lp, [3, 4, 5])
    oracle = oracle_from_outcome(solve_with_basis(lp, start, "se"))
    out = solve_with_basis(lp, start, "exp", oracle=oracle.sta_star)
    assert out.phase2_pivots <= 3


def test_solve_shares_phase1_between_rules():
    lp = reformulate(gen_random_lp(4, 7, seed=9, m_ineq=2))
    a = solve(lp, "dantzig")
    b = solve(lp, "bland")
    assert a.phase1_pivots == b.phase1_pivots
    np.testing.assert_array_equal(a.trace.initial_status, b.trace.initial_status)
    p1 = phase1(lp)
    np.testing.assert_array_equal(p1.basis.status, a.trace.initial_status)


@pytest.mark.parametrize("seed", range(25))
def test_solve_matches_brute_force(seed):
    glp = gen_random_lp(3, 6, seed=seed, m_ineq=1)
    ref = brute_force_optimum(*general_to_box_standard(glp))
    out = solve(reformulate(glp), "se")
    assert out.status is SolveStatus.OPTIMAL
    assert out.objective == pytest.approx(ref, abs=1e-6)


def test_free_variable_is_handled():
    # x1 = 1 - x2 gives objective -1 + 2 x2, minimised at x2 = 0
    glp = GeneralLP.build([-1.0, 1.0], A_eq=[[1.0, 1.0]], b_eq=[1.0], l_x=[-INF, 0.0], u_x=[INF, 3.0])
    out = solve(reformulate(glp), "dantzig")
    assert out.status is SolveStatus.OPTIMAL and out.objective == pytest.approx(-1.0)
    # min x1 = 1 - x2 is reached at x2 = 3
    glp = GeneralLP.build([1.0, 0.0], A_eq=[[1.0, 1.0]], b_eq=[1.0], l_x=[-INF, 0.0], u_x=[INF, 3.0])
    assert solve(reformulate(glp), "se").objective == pytest.approx(-2.0)


def test_free_nonbasic_with_positive_rc_can_decrease():
    lp = std([1.0, 0.0], [[1.0, 1.0]], [1.0], l=[-INF, 0.0], u=[INF, 4.0])
    st = make_state(lp, [1], status=np.array([AT_LOWER, BASIC]))
    assert st.x.tolist() == [0.0, 1.0]
    assert candidate_set(st, lp, SolverConfig()).tolist() == [0]
    out = solve_with_basis(lp, st, "dantzig")
    assert out.objective == pytest.approx(-3.0)


def test_iteration_limit():
    lp = reformulate(gen_km_dantzig(5)[0])
    out = solve_with_basis(lp, make_state(lp, list(range(5, 10))), "dantzig", SolverConfig(max_iters=4))
    assert out.status is SolveStatus.ITERATION_LIMIT and out.phase2_pivots == 4


def test_time_limit():
    lp = reformulate(gen_km_dantzig(10)[0])
    out = solve_with_basis(lp, make_state(lp, list(range(10, 20))), "dantzig", SolverConfig(time_limit_s=1e-9))
    assert out.status is SolveStatus.TIME_LIMIT


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(eps_feas=0)
    with pytest.raises(ValueError):
        SolverConfig(refactor_period=0)


def test_trace_csv_and_summary():
    lp = reformulate(gen_km_dantzig(2)[0])
    start = make_state(lp, [2, 3])
    oracle = oracle_from_outcome(solve_with_basis(lp, start, "se")).sta_star
    out = solve_with_basis(lp, start, "dantzig", oracle=oracle)
    lines = out.trace.to_csv().strip().splitlines()
    assert lines[0] == "iter,entering,leaving,step,objective,diff_opt"
    assert len(lines) == 1 + out.phase2_pivots
    assert lines[-1].split(",")[-1] == "0"
    doc = json.loads(out.summary_json())
    assert doc["status"] == "Optimal" and doc["phase2_pivots"] == 3


def test_flip_recorded_in_trace():
    lp = std([-1.0, 0.0], [[1.0, 1.0]], [10.0], u=[2.0, INF])
    out = solve_with_basis(lp, make_state(lp, [1]), "dantzig")
    assert out.trace.records[0].leave is None
    assert "flip" in out.trace.to_csv()


def test_determinism_bitwise():
    lp = reformulate(gen_random_lp(4, 8, seed=3, m_ineq=2))
    orc = acquire_oracle(lp)
    for rule in ("se", "gi", "exp2", "nolocal"):
        kw = {"oracle": orc.sta_star} if rule in ("exp2", "nolocal") else {}
        a = solve(lp, rule, SolverConfig(seed=7), **kw)
        b = solve(lp, rule, SolverConfig(seed=7), **kw)
        assert a.trace.to_csv() == b.trace.to_csv()
        np.testing.assert_array_equal(a.x, b.x)


def test_expert_without_oracle_rejected():
    lp = std([-1.0, 0.0], [[1.0, 1.0]], [1.0])
    with pytest.raises(ValueError):
        phase2(lp, make_state(lp, [1]), "exp")
