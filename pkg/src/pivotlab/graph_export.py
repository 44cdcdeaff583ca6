"""Bipartite-graph snapshots of simplex states for imitation learning.

One JSON object per pivot (JSON Lines).  Schema of a line::

    meta                 {"instance": str, "pivot": int, "rule": str}
    constraint_features  m rows of [cos(c, a_i), b_i, y_i]
    edges                [[i, j, A_ij], ...] for every nonzero A_ij
    variable_features    n rows of VARIABLE_FEATURES (12 columns)
    candidate_mask       n booleans
    label                entering column chosen by the rule

Infinite bounds are written as 0 with the matching ``has_*`` flag at 0.
Values are raw (no normalisation).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import IO, Any, Iterable, Iterator

import numpy as np

from .lp_model import BoundedStandardLP, GeneralLP, reformulate
from .oracle import OracleUnavailable, oracle_from_outcome
from .simplex import (
    AT_LOWER,
    AT_UPPER,
    BASIC,
    BasisState,
    PivotChoice,
    PivotContext,
    RatioOutcome,
    SolverConfig,
    SolveStatus,
    candidate_set,
    entering_direction,
    phase1,
    phase2,
)

__all__ = [
    "CONSTRAINT_FEATURES",
    "VARIABLE_FEATURES",
    "PivotSample",
    "encode_state",
    "collect_samples",
    "write_jsonl",
    "read_jsonl",
]

log = logging.getLogger(__name__)

CONSTRAINT_FEATURES = ("cos_c_a", "b", "y")
VARIABLE_FEATURES = (
    "c", "has_lb", "has_ub", "lb", "ub",
    "status_lower", "status_basic", "status_upper",
    "rc", "x", "se_score", "is_slack",
)


@dataclass(frozen=True)
class PivotSample:
    constraint_features: np.ndarray
    edges: np.ndarray  # (nnz, 3): row, column, value
    variable_features: np.ndarray
    candidate_mask: np.ndarray
    label: int
    meta: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {
            "meta": self.meta,
            "constraint_features": self.constraint_features.tolist(),
            "edges": [[int(i), int(j), float(v)] for i, j, v in self.edges],
            "variable_features": self.variable_features.tolist(),
            "candidate_mask": self.candidate_mask.astype(bool).tolist(),
            "label": self.label,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PivotSample:
        edges = np.array(d["edges"], dtype=float).reshape(-1, 3)
        return cls(
            np.array(d["constraint_features"], dtype=float).reshape(-1, len(CONSTRAINT_FEATURES)),
            edges,
            np.array(d["variable_features"], dtype=float).reshape(-1, len(VARIABLE_FEATURES)),
            np.array(d["candidate_mask"], dtype=bool),
            int(d["label"]),
            dict(d["meta"]),
        )


def _se_all(state: BasisState, lp: BoundedStandardLP) -> np.ndarray:
    """Sign-adjusted steepest-edge score of every nonbasic column, 0 for basic ones."""
    al = state.B_inv @ lp.A
    score = state.rc / np.sqrt(np.einsum("ij,ij->j", al, al) + 1.0)
    sign = np.array([entering_direction(state, lp, j) for j in range(lp.n)], dtype=float)
    score = sign * score
    score[state.status == BASIC] = 0.0
    return score


def encode_state(
    state: BasisState,
    lp: BoundedStandardLP,
    chosen: int,
    config: SolverConfig | None = None,
    candidates: np.ndarray | None = None,
    meta: dict[str, Any] | None = None,
) -> PivotSample:
    """Snapshot ``state`` with ``chosen`` as the label."""
    config = config or SolverConfig()
    if candidates is None:
        candidates = candidate_set(state, lp, config)
    mask = np.zeros(lp.n, dtype=bool)
    mask[candidates] = True
    if not mask[chosen]:
        raise ValueError(f"chosen column {chosen} is not a candidate")

    cn = np.linalg.norm(lp.c)
    rn = np.linalg.norm(lp.A, axis=1)
    denom = cn * rn
    cos = np.divide(lp.A @ lp.c, denom, out=np.zeros(lp.m), where=denom > 0)
    cons = np.column_stack([cos, lp.b, state.y])

    rows, cols = np.nonzero(lp.A)
    edges = np.column_stack([rows, cols, lp.A[rows, cols]]).astype(float)

    has_lb = np.isfinite(lp.l)
    has_ub = np.isfinite(lp.u)
    rc = state.rc.copy()
    rc[state.status == BASIC] = 0.0
    var = np.column_stack([
        lp.c,
        has_lb,
        has_ub,
        np.where(has_lb, lp.l, 0.0),
        np.where(has_ub, lp.u, 0.0),
        state.status == AT_LOWER,
        state.status == BASIC,
        state.status == AT_UPPER,
        rc,
        state.x,
        _se_all(state, lp),
        [o.kind != "var" for o in lp.col_origin],
    ]).astype(float)
    return PivotSample(cons, edges, var, mask, int(chosen), dict(meta or {}))


class _CapReached(Exception):
    pass


def collect_samples(
    instances: Iterable[tuple[str, GeneralLP | BoundedStandardLP]],
    rule: str = "exp",
    config: SolverConfig | None = None,
    cap_per_instance: int = 50,
) -> Iterator[PivotSample]:
    """Yield one sample per Phase II pivot of ``rule`` on each instance.

    Phase I and the steepest-edge oracle run first, as in the benchmark;
    instances where either fails are skipped with a log message.
    """
    from .rules import make_rule

    config = config or SolverConfig()
    for inst_id, lp in instances:
        if isinstance(lp, GeneralLP):
            lp = reformulate(lp)
        p1 = phase1(lp, config)
        if p1.status is not SolveStatus.OPTIMAL:
            log.warning("skipping %s: phase I ended with %s", inst_id, p1.status.value)
            continue
        try:
            oracle = oracle_from_outcome(phase2(p1.lp, p1.basis, "se", config))
        except OracleUnavailable as e:
            log.warning("skipping %s: %s", inst_id, e)
            continue
        batch: list[PivotSample] = []
        r = make_rule(rule)

        def observe(ctx: PivotContext, choice: PivotChoice, outcome: RatioOutcome) -> None:
            if len(batch) >= cap_per_instance:
                raise _CapReached
            meta = {"instance": inst_id, "pivot": len(batch), "rule": r.name}
            batch.append(encode_state(ctx.state, ctx.lp, choice.enter, config, ctx.candidates, meta))

        if cap_per_instance > 0:
            try:
                phase2(p1.lp, p1.basis, r, config, oracle=oracle.sta_star if r.needs_oracle else None,
                       observer=observe)
            except _CapReached:
                pass
        yield from batch


def write_jsonl(samples: Iterable[PivotSample], fh: IO[str]) -> int:
    count = 0
    for s in samples:
        fh.write(s.to_json())
        fh.write("\n")
        count += 1
    return count


def read_jsonl(fh: IO[str]) -> Iterator[PivotSample]:
    for line in fh:
        if line.strip():
            yield PivotSample.from_dict(json.loads(line))
