"""Two-phase bounded-variable revised primal simplex.

The basis inverse is stored densely and updated with an elementary
(product-form) row transformation after each basis change; every
``refactor_period`` pivots it is recomputed from scratch and its residual
checked.  Duals and reduced costs are recomputed exactly at every pivot.

Variable status codes::

    AT_LOWER = 0   nonbasic at lower bound (free nonbasic variables sit at 0)
    BASIC    = 1
    AT_UPPER = 2   nonbasic at upper bound

Pivot selection is delegated to a rule object (see :mod:`pivotlab.rules`)
with a ``choose(ctx) -> PivotChoice`` method.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import time
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Sequence

import numpy as np

from .lp_model import BoundedStandardLP, Origin

__all__ = [
    "AT_LOWER",
    "BASIC",
    "AT_UPPER",
    "SolveStatus",
    "SolverConfig",
    "BasisState",
    "RatioOutcome",
    "LeavePolicy",
    "PivotChoice",
    "PivotContext",
    "PivotRecord",
    "PivotTrace",
    "Phase1Result",
    "SolveOutcome",
    "NumericalFailure",
    "phase1_initial_point",
    "initial_status",
    "make_state",
    "build_auxiliary",
    "candidate_set",
    "entering_direction",
    "ratio_test",
    "choose_leaving",
    "pivot",
    "refactor",
    "phase1",
    "phase2",
    "solve",
    "solve_with_basis",
]

log = logging.getLogger(__name__)

AT_LOWER, BASIC, AT_UPPER = 0, 1, 2


class SolveStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    UNBOUNDED = "Unbounded"
    INFEASIBLE = "Infeasible"
    ITERATION_LIMIT = "IterationLimit"
    TIME_LIMIT = "TimeLimit"
    NUMERICAL_FAILURE = "NumericalFailure"


class NumericalFailure(RuntimeError):
    """The basis inverse could not be recovered to within ``eps_fact``."""


@dataclass(frozen=True)
class SolverConfig:
    eps_feas: float = 1e-7
    eps_cost: float = 1e-7
    eps_ratio_tie: float = 1e-9
    eps_fact: float = 1e-6
    # smallest |alpha_i| treated as a nonzero pivot element in the ratio test
    eps_pivot: float = 1e-9
    # tied blockers whose |alpha_i| is below this fraction of the largest tied |alpha| are dropped
    pivot_rel_tol: float = 1e-3
    refactor_period: int = 100
    max_iters: int = 50_000
    time_limit_s: float = 300.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("eps_feas", "eps_cost", "eps_ratio_tie", "eps_fact", "eps_pivot"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.pivot_rel_tol < 1:
            raise ValueError("pivot_rel_tol must lie in [0, 1)")
        if self.refactor_period < 1:
            raise ValueError("refactor_period must be >= 1")
        if self.max_iters < 0 or not self.time_limit_s > 0:
            raise ValueError("max_iters must be >= 0 and time_limit_s > 0")


@dataclass
class BasisState:
    """Current basis, point and duals.

    ``basic[i]`` is the column occupying basis position ``i`` (row ``i`` of
    ``B_inv``).  Instances are treated as values: :func:`pivot` returns a
    new state and leaves its argument untouched.
    """

    basic: np.ndarray
    status: np.ndarray
    B_inv: np.ndarray
    x: np.ndarray
    y: np.ndarray
    rc: np.ndarray
    iter: int = 0
    since_refactor: int = 0

    def copy(self) -> BasisState:
        return BasisState(
            self.basic.copy(), self.status.copy(), self.B_inv.copy(), self.x.copy(),
            self.y.copy(), self.rc.copy(), self.iter, self.since_refactor,
        )

    def objective(self, lp: BoundedStandardLP) -> float:
        return float(lp.c @ self.x)

    @property
    def m(self) -> int:
        return self.basic.shape[0]


@dataclass(frozen=True)
class RatioOutcome:
    """Result of the ratio test for one entering column.

    ``direction`` is +1 when the entering variable increases and -1 when it
    decreases; ``alpha`` is ``B^-1 A_j``.  ``blockers`` lists basis positions
    whose ratio ties the minimum; it is empty for flips and unbounded rays.
    """

    step: float
    blockers: tuple[int, ...]
    flip: bool
    direction: int
    alpha: np.ndarray = field(repr=False)

    @property
    def unbounded(self) -> bool:
        return self.step == np.inf


class LeavePolicy(enum.Enum):
    DEFAULT_MAX_INDEX = "default"
    PREFER_OPT_NONBASIC = "prefer_opt_nonbasic"
    FORCED = "forced"


@dataclass(frozen=True)
class PivotChoice:
    enter: int
    leave_policy: LeavePolicy = LeavePolicy.DEFAULT_MAX_INDEX
    forced_position: int | None = None
    # rules that already ran the ratio test for ``enter`` hand it over
    ratio: RatioOutcome | None = None


@dataclass
class PivotContext:
    """Everything a pivot rule may look at; rules must not mutate it."""

    state: BasisState
    lp: BoundedStandardLP
    candidates: np.ndarray
    config: SolverConfig
    oracle: np.ndarray | None = None
    rng: np.random.Generator | None = None
    _alpha: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    def alphas(self, cols: Sequence[int] | np.ndarray) -> np.ndarray:
        """``B^-1 A[:, cols]`` as an (m, len(cols)) array, cached per column."""
        cols = np.asarray(cols, dtype=int)
        missing = [int(j) for j in cols if int(j) not in self._alpha]
        if missing:
            block = self.state.B_inv @ self.lp.A[:, missing]
            for k, j in enumerate(missing):
                self._alpha[j] = block[:, k]
        if cols.size == 0:
            return np.zeros((self.state.m, 0))
        return np.column_stack([self._alpha[int(j)] for j in cols])

    def alpha(self, j: int) -> np.ndarray:
        return self.alphas([j])[:, 0]

    def ratio(self, j: int) -> RatioOutcome:
        return ratio_test(self.state, self.lp, j, self.config, alpha=self.alpha(j))


@dataclass(frozen=True)
class PivotRecord:
    iter: int
    enter: int
    leave: int | None  # None for a bound flip
    step: float
    objective: float
    diff_opt: int | None
    status: np.ndarray = field(repr=False)


@dataclass
class PivotTrace:
    """Ordered per-pivot records plus the status vector before the first pivot."""

    initial_status: np.ndarray | None = None
    initial_objective: float | None = None
    records: list[PivotRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def status_sequence(self) -> list[np.ndarray]:
        head = [] if self.initial_status is None else [self.initial_status]
        return head + [r.status for r in self.records]

    def objectives(self) -> list[float]:
        head = [] if self.initial_objective is None else [self.initial_objective]
        return head + [r.objective for r in self.records]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "entering", "leaving", "step", "objective", "diff_opt"])
        for r in self.records:
            w.writerow([
                r.iter, r.enter, "flip" if r.leave is None else r.leave, repr(float(r.step)),
                repr(float(r.objective)), "" if r.diff_opt is None else r.diff_opt,
            ])
        return buf.getvalue()


@dataclass
class Phase1Result:
    status: SolveStatus
    lp: BoundedStandardLP
    basis: BasisState | None
    pivots: int
    wall_time: float
    aux_objective: float
    removed_rows: tuple[int, ...] = ()


@dataclass
class SolveOutcome:
    status: SolveStatus
    objective: float
    x: np.ndarray
    basis: BasisState | None
    lp: BoundedStandardLP
    phase1_pivots: int = 0
    phase2_pivots: int = 0
    trace: PivotTrace = field(default_factory=PivotTrace)
    wall_time: float = 0.0
    phase2_time: float = 0.0
    rule: str = ""

    def summary(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "objective": self.objective,
            "phase1_pivots": self.phase1_pivots,
            "phase2_pivots": self.phase2_pivots,
            "wall_time": self.wall_time,
            "phase2_time": self.phase2_time,
            "rule": self.rule,
            "m": self.lp.m,
            "n": self.lp.n,
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)


# --- construction ----------------------------------------------------------


def phase1_initial_point(lp: BoundedStandardLP) -> np.ndarray:
    """Starting point for the auxiliary problem: lower bound if finite, else
    upper bound if finite, else 0."""
    x0 = np.where(np.isfinite(lp.l), lp.l, np.where(np.isfinite(lp.u), lp.u, 0.0))
    return x0.astype(float)


def initial_status(lp: BoundedStandardLP, x0: np.ndarray) -> np.ndarray:
    """Nonbasic status codes matching :func:`phase1_initial_point`."""
    st = np.full(lp.n, AT_LOWER, dtype=np.int8)
    st[~np.isfinite(lp.l) & np.isfinite(lp.u)] = AT_UPPER
    return st


def _nonbasic_values(lp: BoundedStandardLP, status: np.ndarray) -> np.ndarray:
    x = np.zeros(lp.n)
    lo = status == AT_LOWER
    up = status == AT_UPPER
    x[lo] = np.where(np.isfinite(lp.l[lo]), lp.l[lo], 0.0)
    x[up] = lp.u[up]
    return x


def _refresh_duals(state: BasisState, lp: BoundedStandardLP) -> None:
    state.y = state.B_inv.T @ lp.c[state.basic]
    state.rc = lp.c - lp.A.T @ state.y
    state.rc[state.basic] = 0.0


def _invert(lp: BoundedStandardLP, basic: np.ndarray, config: SolverConfig) -> np.ndarray:
    B = lp.A[:, basic]
    try:
        B_inv = np.linalg.inv(B)
    except np.linalg.LinAlgError:
        B_inv = None
    if B_inv is None or not _healthy(B_inv, B, config):
        # one retry through a least-squares solve before giving up
        B_inv = np.linalg.lstsq(B, np.eye(B.shape[0]), rcond=None)[0]
        if not _healthy(B_inv, B, config):
            raise NumericalFailure("basis matrix is singular or too ill-conditioned")
    return B_inv


def _healthy(B_inv: np.ndarray, B: np.ndarray, config: SolverConfig) -> bool:
    if B.shape[0] == 0:
        return True
    resid = np.max(np.abs(B_inv @ B - np.eye(B.shape[0])))
    return bool(np.isfinite(resid) and resid <= config.eps_fact)


def make_state(
    lp: BoundedStandardLP,
    basic: Sequence[int],
    status: np.ndarray | None = None,
    config: SolverConfig | None = None,
    x: np.ndarray | None = None,
) -> BasisState:
    """Build a state from a basis list, inverting the basis from scratch.

    Nonbasic variables take their bound per ``status`` (default: lower bound
    if finite, upper if only that is finite, otherwise 0); basic values are
    solved from ``Ax = b``.  If ``x`` is given its nonbasic entries are used
    instead.
    """
    config = config or SolverConfig()
    basic = np.asarray(basic, dtype=int)
    if basic.shape != (lp.m,) or len(set(basic.tolist())) != lp.m:
        raise ValueError(f"basis must list {lp.m} distinct columns")
    if status is None:
        status = initial_status(lp, phase1_initial_point(lp))
    status = np.asarray(status, dtype=np.int8).copy()
    status[basic] = BASIC
    if x is None:
        x = _nonbasic_values(lp, status)
    else:
        x = np.asarray(x, dtype=float).copy()
    B_inv = _invert(lp, basic, config)
    x[basic] = 0.0
    x[basic] = B_inv @ (lp.b - lp.A @ x)
    state = BasisState(basic, status, B_inv, x, np.zeros(lp.m), np.zeros(lp.n))
    _refresh_duals(state, lp)
    return state


def build_auxiliary(
    lp: BoundedStandardLP, x0: np.ndarray | None = None
) -> tuple[BoundedStandardLP, BasisState]:
    """Auxiliary problem ``min 1'z`` s.t. ``Ax + Ez = b`` with an all-artificial basis.

    ``E`` is diagonal with ``+1`` where ``b - A x0 >= 0`` and ``-1`` otherwise,
    so ``z0 = |b - A x0|`` is feasible.
    """
    if x0 is None:
        x0 = phase1_initial_point(lp)
    x0 = np.asarray(x0, dtype=float)
    m, n = lp.m, lp.n
    resid = lp.b - lp.A @ x0
    e = np.where(resid >= 0, 1.0, -1.0)
    A = np.hstack([lp.A, np.diag(e)])
    c = np.concatenate([np.zeros(n), np.ones(m)])
    lo = np.concatenate([lp.l, np.zeros(m)])
    hi = np.concatenate([lp.u, np.full(m, np.inf)])
    origin = tuple(lp.col_origin) + tuple(Origin("artificial", i) for i in range(m))
    aux = BoundedStandardLP(c, A, lp.b, lo, hi, origin, lp.row_origin, 0.0, lp.name)

    basic = np.arange(n, n + m)
    status = np.concatenate([initial_status(lp, x0), np.full(m, BASIC, dtype=np.int8)])
    x = np.concatenate([x0, np.abs(resid)])
    state = BasisState(basic, status, np.diag(e), x, np.zeros(m), np.zeros(n + m))
    _refresh_duals(state, aux)
    return aux, state


# --- pivoting primitives ---------------------------------------------------


def entering_direction(state: BasisState, lp: BoundedStandardLP, j: int) -> int:
    if state.status[j] == AT_UPPER:
        return -1
    if not np.isfinite(lp.l[j]) and not np.isfinite(lp.u[j]) and state.rc[j] > 0:
        return -1
    return 1


def candidate_set(state: BasisState, lp: BoundedStandardLP, config: SolverConfig) -> np.ndarray:
    """Improving nonbasic columns in increasing index order.

    At lower with ``rc < -eps_cost``, at upper with ``rc > eps_cost``, and
    free nonbasic columns with ``|rc| > eps_cost``.
    """
    rc, st = state.rc, state.status
    lower = (st == AT_LOWER) & (rc < -config.eps_cost)
    upper = (st == AT_UPPER) & (rc > config.eps_cost)
    free = (st == AT_LOWER) & ~np.isfinite(lp.l) & ~np.isfinite(lp.u) & (rc > config.eps_cost)
    return np.flatnonzero(lower | upper | free)


def ratio_test(
    state: BasisState,
    lp: BoundedStandardLP,
    j: int,
    config: SolverConfig | None = None,
    alpha: np.ndarray | None = None,
) -> RatioOutcome:
    """Longest step along the edge for entering column ``j``."""
    config = config or SolverConfig()
    if alpha is None:
        alpha = state.B_inv @ lp.A[:, j]
    sigma = entering_direction(state, lp, j)
    delta = -sigma * alpha  # d x_B / d t
    xb = state.x[state.basic]
    lb = lp.l[state.basic]
    ub = lp.u[state.basic]

    ratios = np.full(alpha.shape[0], np.inf)
    dec = (delta < -config.eps_pivot) & np.isfinite(lb)
    inc = (delta > config.eps_pivot) & np.isfinite(ub)
    ratios[dec] = np.maximum(xb[dec] - lb[dec], 0.0) / -delta[dec]
    ratios[inc] = np.maximum(ub[inc] - xb[inc], 0.0) / delta[inc]

    span = lp.u[j] - lp.l[j]
    best = float(ratios.min()) if ratios.size else np.inf
    if np.isfinite(span) and span <= best:
        return RatioOutcome(float(span), (), True, sigma, alpha)
    if best == np.inf:
        return RatioOutcome(np.inf, (), False, sigma, alpha)
    tol = config.eps_ratio_tie * max(1.0, best)
    tied = np.flatnonzero(ratios <= best + tol)
    mags = np.abs(alpha[tied])
    tied = tied[mags >= config.pivot_rel_tol * mags.max()]
    blockers = tuple(int(i) for i in tied)
    return RatioOutcome(best, blockers, False, sigma, alpha)


def choose_leaving(
    state: BasisState,
    outcome: RatioOutcome,
    policy: LeavePolicy = LeavePolicy.DEFAULT_MAX_INDEX,
    oracle: np.ndarray | None = None,
    forced: int | None = None,
) -> int | None:
    """Basis position that leaves; ``None`` for a flip.

    Ties among blockers go to the largest column index.  With
    ``PREFER_OPT_NONBASIC`` blockers that are nonbasic in the oracle status
    vector are preferred first.
    """
    if outcome.flip:
        return None
    if not outcome.blockers:
        raise ValueError("no blocking variable: the step is unbounded")
    pool = list(outcome.blockers)
    if policy is LeavePolicy.FORCED:
        if forced not in pool:
            raise ValueError(f"forced position {forced} is not a blocker")
        return forced
    if policy is LeavePolicy.PREFER_OPT_NONBASIC and oracle is not None:
        preferred = [i for i in pool if oracle[state.basic[i]] != BASIC]
        if preferred:
            pool = preferred
    return max(pool, key=lambda i: int(state.basic[i]))


def pivot(
    state: BasisState,
    lp: BoundedStandardLP,
    j: int,
    outcome: RatioOutcome,
    leave_pos: int | None,
    config: SolverConfig | None = None,
) -> BasisState:
    """Apply one pivot (basis change or bound flip) and return the new state."""
    config = config or SolverConfig()
    if not np.isfinite(outcome.step):
        raise ValueError("cannot pivot along an unbounded ray")
    new = state.copy()
    t, sigma, alpha = outcome.step, outcome.direction, outcome.alpha
    new.x[new.basic] -= sigma * t * alpha
    new.x[j] += sigma * t
    new.iter += 1

    if outcome.flip or leave_pos is None:
        new.status[j] = AT_UPPER if sigma > 0 else AT_LOWER
        new.x[j] = lp.u[j] if sigma > 0 else lp.l[j]
        _refresh_duals(new, lp)
        return new

    r = leave_pos
    k = int(new.basic[r])
    # the leaving variable rests on the bound it reached (nearest finite one)
    to_lower = abs(new.x[k] - lp.l[k]) <= abs(lp.u[k] - new.x[k])
    if not np.isfinite(lp.l[k]) and not np.isfinite(lp.u[k]):
        raise NumericalFailure(f"leaving column {k} has no finite bound to rest on")
    if to_lower:
        new.status[k], new.x[k] = AT_LOWER, lp.l[k]
    else:
        new.status[k], new.x[k] = AT_UPPER, lp.u[k]

    piv = alpha[r]
    row = new.B_inv[r] / piv
    new.B_inv -= np.outer(alpha, row)
    new.B_inv[r] = row
    new.basic[r] = j
    new.status[j] = BASIC
    new.since_refactor += 1
    if new.since_refactor >= config.refactor_period:
        new = refactor(new, lp, config)
    _refresh_duals(new, lp)
    return new


def refactor(state: BasisState, lp: BoundedStandardLP, config: SolverConfig | None = None) -> BasisState:
    """Recompute ``B_inv`` and the basic values from scratch."""
    config = config or SolverConfig()
    new = state.copy()
    new.B_inv = _invert(lp, new.basic, config)
    xn = new.x.copy()
    xn[new.basic] = 0.0
    new.x[new.basic] = new.B_inv @ (lp.b - lp.A @ xn)
    new.since_refactor = 0
    _refresh_duals(new, lp)
    return new


# --- phases ----------------------------------------------------------------

Observer = Callable[[PivotContext, PivotChoice, RatioOutcome], None]


def _rule_obj(rule: Any) -> Any:
    if isinstance(rule, str):
        from .rules import make_rule

        return make_rule(rule)
    return rule


def _diff(status: np.ndarray, oracle: np.ndarray | None) -> int | None:
    if oracle is None:
        return None
    return int(np.abs(status.astype(int) - oracle.astype(int)).sum())


def phase2(
    lp: BoundedStandardLP,
    basis: BasisState,
    rule: Any = "se",
    config: SolverConfig | None = None,
    oracle: np.ndarray | None = None,
    observer: Observer | None = None,
    deadline: float | None = None,
    target: float | None = None,
) -> SolveOutcome:
    """Pivot from a feasible basis until no candidate remains.

    ``oracle`` is an optimal status vector; rules that need one read it from
    the pivot context, and each trace record then carries #DiffOpt.  With
    ``target`` set, the loop also stops (as optimal) once the objective is at
    or below it; Phase I uses this because zero infeasibility is optimal there.
    """
    config = config or SolverConfig()
    rule = _rule_obj(rule)
    if getattr(rule, "needs_oracle", False) and oracle is None:
        raise ValueError(f"rule {rule.name!r} needs an optimal-basis oracle")
    oracle = None if oracle is None else np.asarray(oracle, dtype=np.int8)
    if hasattr(rule, "reset"):
        rule.reset()
    rng = np.random.default_rng(config.seed)
    t0 = time.perf_counter()
    if deadline is None:
        deadline = t0 + config.time_limit_s
    state = basis.copy()
    trace = PivotTrace(state.status.copy(), state.objective(lp))
    status = SolveStatus.OPTIMAL
    pivots = 0
    while True:
        if target is not None and state.objective(lp) <= target:
            status = SolveStatus.OPTIMAL
            break
        cand = candidate_set(state, lp, config)
        if cand.size == 0:
            status = SolveStatus.OPTIMAL
            break
        if pivots >= config.max_iters:
            status = SolveStatus.ITERATION_LIMIT
            break
        if time.perf_counter() > deadline:
            status = SolveStatus.TIME_LIMIT
            break
        ctx = PivotContext(state, lp, cand, config, oracle, rng)
        choice = rule.choose(ctx)
        j = choice.enter
        outcome = choice.ratio if choice.ratio is not None else ctx.ratio(j)
        if observer is not None:
            observer(ctx, choice, outcome)
        if outcome.unbounded:
            status = SolveStatus.UNBOUNDED
            break
        leave = choose_leaving(state, outcome, choice.leave_policy, oracle, choice.forced_position)
        leave_col = None if leave is None else int(state.basic[leave])
        try:
            state = pivot(state, lp, j, outcome, leave, config)
        except NumericalFailure as e:
            log.warning("numerical failure at pivot %d: %s", pivots, e)
            status = SolveStatus.NUMERICAL_FAILURE
            break
        pivots += 1
        trace.records.append(
            PivotRecord(state.iter, int(j), leave_col, outcome.step, state.objective(lp),
                        _diff(state.status, oracle), state.status.copy())
        )
    elapsed = time.perf_counter() - t0
    return SolveOutcome(
        status, state.objective(lp), state.x.copy(), state, lp,
        phase2_pivots=pivots, trace=trace, wall_time=elapsed, phase2_time=elapsed,
        rule=getattr(rule, "name", str(rule)),
    )


def _drive_out_artificials(
    aux: BoundedStandardLP, state: BasisState, n: int, config: SolverConfig
) -> tuple[BasisState, list[int], int]:
    """Pivot zero-valued artificials out of the basis; report rows that cannot be."""
    redundant: list[int] = []
    pivots = 0
    for r in range(state.m):
        if state.basic[r] < n:
            continue
        row = state.B_inv[r] @ aux.A[:, :n]
        row[state.basic[state.basic < n]] = 0.0
        k = int(np.argmax(np.abs(row)))
        if abs(row[k]) <= config.eps_feas:
            redundant.append(r)
            continue
        alpha = state.B_inv @ aux.A[:, k]
        sigma = entering_direction(state, aux, k)
        out = RatioOutcome(0.0, (r,), False, sigma, alpha)
        state = pivot(state, aux, k, out, r, config)
        pivots += 1
    return state, redundant, pivots


def phase1(
    lp: BoundedStandardLP,
    config: SolverConfig | None = None,
    rule: Any = "se",
    deadline: float | None = None,
) -> Phase1Result:
    """Find a basic feasible solution through the auxiliary problem.

    On success the returned LP may have fewer rows than ``lp`` (redundant rows
    removed) and the basis contains original columns only.
    """
    config = config or SolverConfig()
    t0 = time.perf_counter()
    n = lp.n
    aux, state = build_auxiliary(lp)
    scale = 1.0 + (float(np.max(np.abs(lp.b))) if lp.m else 0.0)
    threshold = config.eps_feas * scale
    res = phase2(aux, state, rule, config, deadline=deadline, target=threshold)
    pivots = res.phase2_pivots
    if res.status not in (SolveStatus.OPTIMAL,):
        return Phase1Result(res.status, lp, None, pivots, time.perf_counter() - t0, res.objective)
    state = res.basis
    if res.objective > threshold:
        return Phase1Result(SolveStatus.INFEASIBLE, lp, None, pivots, time.perf_counter() - t0, res.objective)

    try:
        state, redundant, extra = _drive_out_artificials(aux, state, n, config)
    except NumericalFailure:
        return Phase1Result(SolveStatus.NUMERICAL_FAILURE, lp, None, pivots,
                            time.perf_counter() - t0, res.objective)
    pivots += extra
    keep = np.setdiff1d(np.arange(state.m), redundant)
    reduced = lp.drop_rows(redundant) if redundant else lp
    basic = state.basic[keep]
    x = state.x[:n].copy()
    try:
        new = make_state(reduced, basic, state.status[:n], config, x=x)
    except NumericalFailure:
        return Phase1Result(SolveStatus.NUMERICAL_FAILURE, lp, None, pivots,
                            time.perf_counter() - t0, res.objective)
    return Phase1Result(SolveStatus.OPTIMAL, reduced, new, pivots, time.perf_counter() - t0,
                        res.objective, tuple(int(r) for r in redundant))


def solve_with_basis(
    lp: BoundedStandardLP,
    basis: BasisState,
    rule: Any = "se",
    config: SolverConfig | None = None,
    oracle: np.ndarray | None = None,
    observer: Observer | None = None,
) -> SolveOutcome:
    """Phase II only, from a caller-supplied feasible basis."""
    return phase2(lp, basis, rule, config, oracle=oracle, observer=observer)


def solve(
    lp: BoundedStandardLP,
    rule: Any = "se",
    config: SolverConfig | None = None,
    oracle: np.ndarray | None = None,
    observer: Observer | None = None,
) -> SolveOutcome:
    """Phase I with steepest edge, then Phase II with ``rule``."""
    config = config or SolverConfig()
    t0 = time.perf_counter()
    deadline = t0 + config.time_limit_s
    p1 = phase1(lp, config, "se", deadline=deadline)
    if p1.status is not SolveStatus.OPTIMAL:
        return SolveOutcome(p1.status, np.nan, np.full(lp.n, np.nan), None, lp,
                            phase1_pivots=p1.pivots, wall_time=time.perf_counter() - t0,
                            rule=getattr(_rule_obj(rule), "name", str(rule)))
    out = phase2(p1.lp, p1.basis, rule, config, oracle=oracle, observer=observer, deadline=deadline)
    return replace(out, phase1_pivots=p1.pivots, wall_time=time.perf_counter() - t0)
