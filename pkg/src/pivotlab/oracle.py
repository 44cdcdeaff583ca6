"""Optimal-basis oracle, the #DiffOpt distance and cube verification.

#DiffOpt of a basis is the L1 distance between its status vector and the
status vector of an optimal basis (codes 0 = at lower, 1 = basic,
2 = at upper).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .lp_model import BoundedStandardLP
from .simplex import BasisState, PivotTrace, SolverConfig, SolveStatus, solve

__all__ = [
    "OracleUnavailable",
    "OracleBasis",
    "acquire_oracle",
    "oracle_from_outcome",
    "status_vector",
    "diff_opt",
    "MonotoneReport",
    "check_monotone",
    "CubeReport",
    "cube_brute_force",
]


class OracleUnavailable(RuntimeError):
    """The oracle solve did not reach optimality."""


@dataclass(frozen=True)
class OracleBasis:
    sta_star: np.ndarray
    objective_star: float
    source: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"sta_star": self.sta_star.tolist(), "objective_star": self.objective_star, "source": self.source}


def oracle_from_outcome(outcome, source: dict[str, Any] | None = None) -> OracleBasis:
    if outcome.status is not SolveStatus.OPTIMAL or outcome.basis is None:
        raise OracleUnavailable(f"oracle solve ended with status {outcome.status.value}")
    sta = status_vector(outcome.basis)
    if int((sta == 1).sum()) != outcome.lp.m:
        raise OracleUnavailable("oracle basis does not have one basic variable per row")
    return OracleBasis(sta, float(outcome.objective), source or {"rule": outcome.rule})


def acquire_oracle(lp: BoundedStandardLP, config: SolverConfig | None = None, rule: str = "se") -> OracleBasis:
    """Solve with ``rule`` (steepest edge by default) and keep its terminal basis.

    The returned status vector refers to ``outcome.lp``, which may have fewer
    rows than ``lp`` when Phase I removed redundant ones.
    """
    config = config or SolverConfig()
    out = solve(lp, rule, config)
    return oracle_from_outcome(out, {"rule": rule, "seed": config.seed, "max_iters": config.max_iters})


def status_vector(state: BasisState) -> np.ndarray:
    return np.asarray(state.status, dtype=np.int8).copy()


def diff_opt(sta: Any, sta_star: Any) -> int:
    a = np.asarray(sta, dtype=int)
    b = np.asarray(sta_star, dtype=int)
    if a.shape != b.shape:
        raise ValueError(f"status vectors differ in length: {a.shape} vs {b.shape}")
    return int(np.abs(a - b).sum())


@dataclass
class MonotoneReport:
    values: list[int]
    deltas: list[int]
    monotone: bool
    all_minus_two: bool

    def to_dict(self) -> dict[str, Any]:
        return {"values": self.values, "deltas": self.deltas, "monotone": self.monotone,
                "all_minus_two": self.all_minus_two}


def check_monotone(trace: PivotTrace | Iterable[np.ndarray], sta_star: Any) -> MonotoneReport:
    """#DiffOpt along a trace (or a sequence of status vectors) and its deltas."""
    seq = trace.status_sequence() if isinstance(trace, PivotTrace) else list(trace)
    vals = [diff_opt(s, sta_star) for s in seq]
    deltas = [b - a for a, b in zip(vals, vals[1:])]
    return MonotoneReport(vals, deltas, all(d <= 0 for d in deltas), all(d == -2 for d in deltas))


@dataclass
class CubeReport:
    n: int
    vertices: int
    checks: dict[str, bool]
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "vertices": self.vertices, "checks": self.checks,
                           "passed": self.passed, "failures": self.failures[:20]}, indent=2)


def _cube_status(x: np.ndarray) -> np.ndarray:
    # on x + y = 1 a vertex has exactly one of x_i, y_i basic (the one equal to 1)
    return np.concatenate([x, 1 - x]).astype(np.int8)


def cube_brute_force(n: int) -> CubeReport:
    """Exhaustive check of the #DiffOpt identities on the cube ``x + y = 1``.

    For every choice of optimal vertex ``v*`` and every vertex ``v``:
    #DiffOpt(v) equals the L1 distance between (x, y) and (x*, y*) and is at
    most 2n; adjacent vertices differ in #DiffOpt by exactly 2; and a path
    along which #DiffOpt strictly decreases has exactly #DiffOpt(v)/2 <= n
    edges.  The last check walks every such path by depth-first search.
    """
    if not 1 <= n <= 6:
        raise ValueError("n must be in [1, 6]")
    verts = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int8)
    stas = np.array([_cube_status(v) for v in verts])
    points = np.hstack([verts, 1 - verts]).astype(int)
    index = {tuple(v): k for k, v in enumerate(verts.tolist())}
    nbrs = []
    for v in verts:
        row = []
        for i in range(n):
            w = v.copy()
            w[i] ^= 1
            row.append(index[tuple(w.tolist())])
        nbrs.append(row)

    failures: list[str] = []
    checks = {"l1_identity": True, "bound_2n": True, "adjacent_delta_2": True,
              "decreasing_path_length": True}
    for s in range(len(verts)):
        d = np.abs(stas - stas[s]).sum(axis=1)
        l1 = np.abs(points - points[s]).sum(axis=1)
        if not np.array_equal(d, l1):
            checks["l1_identity"] = False
            failures.append(f"opt={verts[s].tolist()}: #DiffOpt != L1")
        if d.max() > 2 * n:
            checks["bound_2n"] = False
            failures.append(f"opt={verts[s].tolist()}: #DiffOpt exceeds 2n")
        for k in range(len(verts)):
            if any(abs(int(d[k]) - int(d[w])) != 2 for w in nbrs[k]):
                checks["adjacent_delta_2"] = False
                failures.append(f"opt={verts[s].tolist()} v={verts[k].tolist()}: adjacent delta != 2")
        # longest and shortest strictly decreasing paths to the optimum, by DP over #DiffOpt levels
        order = np.argsort(d, kind="stable")
        longest = np.zeros(len(verts), dtype=int)
        shortest = np.zeros(len(verts), dtype=int)
        for k in order:
            down = [w for w in nbrs[k] if d[w] < d[k]]
            if d[k] == 0:
                continue
            if not down:
                checks["decreasing_path_length"] = False
                failures.append(f"opt={verts[s].tolist()} v={verts[k].tolist()}: stuck before optimum")
                continue
            longest[k] = 1 + max(longest[w] for w in down)
            shortest[k] = 1 + min(shortest[w] for w in down)
        bad = (longest != d // 2) | (shortest != d // 2) | (longest > n)
        if bad.any():
            checks["decreasing_path_length"] = False
            failures.append(f"opt={verts[s].tolist()}: decreasing path length != #DiffOpt/2")
    return CubeReport(n, len(verts), checks, failures)
