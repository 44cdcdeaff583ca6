"""Acceptance criteria 1-10, one test each, at the stated tolerances.

Every test records a one-line PASS/FAIL verdict that is echoed in the pytest
terminal summary.  Run ``python tests/test_acceptance.py`` to print the lines
without pytest.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from pivotlab.bench import run_benchmark
from pivotlab.instances import gen_avis_chvatal, gen_km_dantzig, gen_random_lp, gen_set_cover
from pivotlab.lp_model import GeneralLP, reformulate
from pivotlab.oracle import check_monotone, cube_brute_force, oracle_from_outcome
from pivotlab.rules import RULES
from pivotlab.simplex import BASIC, SolverConfig, SolveStatus, make_state, phase1, phase2, solve_with_basis

from acceptance_report import record
from netlib_data import REFERENCE, load
from oracles import brute_force_optimum, general_to_box_standard

CFG = SolverConfig()
EXPERTS = ("exp", "exp2", "nolocal")


def _km(n):
    glp, start = gen_km_dantzig(n)
    lp = reformulate(glp)
    return lp, start


# --- 1 ------------------------------------------------------------------------

def test_criterion_01_km_dantzig_exponential():
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 11):
        lp, start = _km(n)
        out = solve_with_basis(lp, make_state(lp, start), "dantzig", CFG)
        if out.status is not SolveStatus.OPTIMAL or out.phase2_pivots != 2**n - 1:
            bad.append((n, out.phase2_pivots))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    record(1, ok, f"Dantzig pivots == 2^n - 1 for n=1..10; mismatches={bad}; {dt:.1f}s")
    assert ok


# --- 2 ------------------------------------------------------------------------

def test_criterion_02_expert_linear_on_km():
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 11):
        lp, start = _km(n)
        oracle = oracle_from_outcome(solve_with_basis(lp, make_state(lp, start), "se", CFG)).sta_star
        for rule in EXPERTS:
            seeds = range(5) if rule == "nolocal" else [0]
            for seed in seeds:
                cfg = SolverConfig(seed=seed)
                out = solve_with_basis(lp, make_state(lp, start), rule, cfg, oracle=oracle)
                rep = check_monotone(out.trace, oracle)
                if out.status is not SolveStatus.OPTIMAL or out.phase2_pivots > n or not rep.all_minus_two:
                    bad.append((n, rule, seed, out.phase2_pivots, rep.deltas))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    record(2, ok, f"expert pivots <= n and all #DiffOpt deltas == -2 for n=1..10; failures={bad[:3]}; {dt:.1f}s")
    assert ok


# --- 3 ------------------------------------------------------------------------

def _fib(n):
    a, b = 1, 1
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def test_criterion_03_avis_chvatal_bland_lower_bound():
    t0 = time.perf_counter()
    counts, bad = {}, []
    for n in range(3, 9):
        glp, start = gen_avis_chvatal(n, 0.3)
        lp = reformulate(glp)
        out = solve_with_basis(lp, make_state(lp, start), "bland", CFG)
        counts[n] = out.phase2_pivots
        if out.status is not SolveStatus.OPTIMAL or out.phase2_pivots < _fib(n):
            bad.append(n)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    detail = ", ".join(f"n={n}: {k}>={_fib(n)}" for n, k in counts.items())
    record(3, ok, f"Bland pivots vs Fib(n): {detail}; {dt:.1f}s")
    assert ok


# --- 4 ------------------------------------------------------------------------

def _random_pool(count=200):
    """Random LPs with m <= 4 equality rows and n <= 7 columns."""
    out = []
    for s in range(count):
        m = 1 + s % 4
        n = min(7, m + 2 + s % 3)
        out.append(gen_random_lp(m, n, seed=s, m_ineq=s % 2))
    return out


def _unboxed(glp: GeneralLP) -> GeneralLP:
    return GeneralLP.build(glp.c, A_eq=glp.A_eq, b_eq=glp.b_eq, A_ineq=glp.A_ineq,
                           l_constr=glp.l_constr, u_constr=glp.u_constr,
                           l_x=glp.l_x, u_x=np.full(glp.n, np.inf), name=glp.name + "_unboxed")


def _oracle_candidate_scan(pool):
    """Counts of suboptimal expert pivots where the oracle-basic candidate set is empty,
    and where no candidate has an oracle status different from its current one."""
    pivots = empty_basic = empty_general = solved = 0
    examples = []
    for glp in pool:
        lp = reformulate(glp)
        p1 = phase1(lp, CFG)
        if p1.status is not SolveStatus.OPTIMAL:
            continue
        se = phase2(p1.lp, p1.basis, "se", CFG)
        if se.status is not SolveStatus.OPTIMAL:
            continue
        solved += 1
        oracle = oracle_from_outcome(se).sta_star
        opt = se.objective
        thresh = opt + 1e-6 * (1.0 + abs(opt))

        def observe(ctx, choice, outcome):
            nonlocal pivots, empty_basic, empty_general
            if ctx.state.objective(ctx.lp) <= thresh:
                return
            pivots += 1
            cand = ctx.candidates
            if not np.any(oracle[cand] == BASIC):
                empty_basic += 1
                if len(examples) < 3 and glp.name not in examples:
                    examples.append(glp.name)
            if not np.any(oracle[cand] != ctx.state.status[cand]):
                empty_general += 1

        for rule in EXPERTS:
            phase2(p1.lp, p1.basis, rule, CFG, oracle=oracle, observer=observe)
    return {"solved": solved, "pivots": pivots, "empty_basic": empty_basic,
            "empty_general": empty_general, "examples": examples}


@pytest.fixture(scope="module")
def random_pool():
    return _random_pool()


@pytest.fixture(scope="module")
def candidate_scan_boxed(random_pool):
    return _oracle_candidate_scan(random_pool)


def test_criterion_04_expert_candidate_exists(candidate_scan_boxed):
    r = candidate_scan_boxed
    ok = r["empty_basic"] == 0
    record(4, ok, f"suboptimal expert pivots with no oracle-basic candidate: {r['empty_basic']} "
                  f"of {r['pivots']} over {r['solved']} LPs (e.g. {r['examples']})")
    assert ok


def test_criterion_04_companion_status_mismatch_candidate_exists(candidate_scan_boxed):
    # with finite upper bounds an improving move can also send a variable to its
    # oracle bound; some candidate always disagrees with the oracle status
    assert candidate_scan_boxed["empty_general"] == 0


def test_criterion_04_companion_holds_without_upper_bounds(random_pool):
    r = _oracle_candidate_scan([_unboxed(g) for g in random_pool])
    assert r["solved"] > 50
    assert r["empty_basic"] == 0


def test_criterion_04_companion_minimal_flip_example():
    # x1 in [0, 1], x1 + s = 2, minimise -x1: the optimum is x1 at its upper bound
    # with s basic, so the single improving candidate x1 is not oracle-basic
    lp = reformulate(GeneralLP.build([-1.0, 0.0], A_eq=[[1.0, 1.0]], b_eq=[2.0], u_x=[1.0, np.inf]))
    start = make_state(lp, [1])
    oracle = oracle_from_outcome(solve_with_basis(lp, start, "se", CFG)).sta_star
    assert oracle.tolist() == [2, 1]
    seen = []
    out = solve_with_basis(lp, start, "exp", CFG, oracle=oracle,
                           observer=lambda ctx, ch, o: seen.append(ctx.candidates.tolist()))
    assert seen == [[0]] and oracle[0] != BASIC
    assert out.status is SolveStatus.OPTIMAL and out.objective == -1.0


# --- 5 ------------------------------------------------------------------------

def test_criterion_05_rules_match_enumeration(random_pool):
    t0 = time.perf_counter()
    mismatches = []
    for glp in random_pool:
        ref = brute_force_optimum(*general_to_box_standard(glp))
        lp = reformulate(glp)
        p1 = phase1(lp, CFG)
        se = phase2(p1.lp, p1.basis, "se", CFG)
        oracle = oracle_from_outcome(se).sta_star
        for rule in RULES:
            out = se if rule == "se" else phase2(p1.lp, p1.basis, rule, CFG,
                                                 oracle=oracle if RULES[rule].needs_oracle else None)
            if out.status is not SolveStatus.OPTIMAL or abs(out.objective - ref) > 1e-6:
                mismatches.append((glp.name, rule, out.status.value))
    dt = time.perf_counter() - t0
    ok = not mismatches and dt < 120
    record(5, ok, f"{len(random_pool)} LPs x {len(RULES)} rules vs enumeration: "
                  f"{len(mismatches)} mismatches {mismatches[:3]}; {dt:.1f}s")
    assert ok


# --- 6 ------------------------------------------------------------------------

def test_criterion_06_cube_identities():
    t0 = time.perf_counter()
    failed = [n for n in range(1, 7) if not cube_brute_force(n).passed]
    dt = time.perf_counter() - t0
    ok = not failed and dt < 10
    record(6, ok, f"cube identities for n=1..6; failing n={failed}; {dt:.1f}s")
    assert ok


# --- 7 and 8 --------------------------------------------------------------------

@pytest.fixture(scope="module")
def sc_bench():
    t0 = time.perf_counter()
    insts = [(f"sc_{s}", gen_set_cover(seed=s)) for s in range(20)]
    res = run_benchmark(insts, ["se", "exp", "exp2", "nolocal"], CFG, workers=2)
    return res, {a.rule: a for a in res.aggregates()}, time.perf_counter() - t0


def test_criterion_07_experts_beat_steepest_edge(sc_bench):
    res, agg, dt = sc_bench
    g = {r: agg[r].geomean_pivots for r in agg}
    ok = g["exp"] <= g["se"] and g["exp2"] <= g["se"] and not res.any_flagged and dt < 600
    record(7, ok, f"20 SC geomeans: SE {g['se']:.1f}, EXP {g['exp']:.1f}, EXP2 {g['exp2']:.1f}; {dt:.1f}s")
    assert ok


def test_criterion_08_nolocal_ablation(sc_bench):
    res, agg, _ = sc_bench
    ok = agg["nolocal"].geomean_pivots >= agg["exp"].geomean_pivots and not res.any_flagged
    record(8, ok, f"20 SC geomeans: NO-LOCAL {agg['nolocal'].geomean_pivots:.1f} >= "
                  f"EXP {agg['exp'].geomean_pivots:.1f}")
    assert ok


# --- 9 ------------------------------------------------------------------------

def test_criterion_09_property_suites():
    import test_properties as tp

    t0 = time.perf_counter()
    prep = {}
    for name, glp in tp.POOL:
        p1 = phase1(reformulate(glp), tp.CFG)
        prep[name] = (p1, oracle_from_outcome(phase2(p1.lp, p1.basis, "se", tp.CFG)).sta_star)
    failures, skipped, ran = [], 0, 0
    checks = [(tp.test_pivot_invariants, (prep, name, rule)) for name in tp.IDS for rule in sorted(RULES)]
    checks += [(tp.test_objective_scaling_leaves_choices_unchanged, (prep, name)) for name in tp.IDS]
    checks += [(tp.test_sample_schema_over_pool, ())]
    for fn, args in checks:
        try:
            fn(*args)
            ran += 1
        except pytest.skip.Exception:
            skipped += 1
        except AssertionError as e:
            failures.append(f"{fn.__name__}{args[1:]}: {e}")
    dt = time.perf_counter() - t0
    ok = not failures
    record(9, ok, f"{ran} property checks over {len(tp.IDS)} instances green, {skipped} skipped "
                  f"(Bland iteration limit), failures={failures[:2]}; {dt:.1f}s")
    assert ok


# --- 10 -----------------------------------------------------------------------

def test_criterion_10_netlib_smoke():
    from pivotlab.lp_model import reformulate as ref_
    from pivotlab.simplex import solve

    rows, bad, mps_ok = [], [], 0
    for name in sorted(REFERENCE):
        out = solve(ref_(load(name)), "se", CFG)
        want = REFERENCE[name]["highs_objective"]
        good = out.status is SolveStatus.OPTIMAL and abs(out.objective - want) <= 1e-5 * abs(want)
        rows.append(f"{name}[{REFERENCE[name]['source']}]={'ok' if good else out.status.value}")
        if not good:
            bad.append(name)
        elif REFERENCE[name]["source"] == "mps":
            mps_ok += 1
    ok = not bad and mps_ok >= 5
    record(10, ok, f"{mps_ok} MPS files optimal within 1e-5 rel; " + " ".join(rows))
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
