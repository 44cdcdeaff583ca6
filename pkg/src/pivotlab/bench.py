"""Rule-by-instance benchmark grid.

Per instance, Phase I runs once with steepest edge; every rule then starts
Phase II from that same basis.  The steepest-edge Phase II solve doubles as
the oracle for the expert rules.  Only Phase II pivots and Phase II wall time
enter the comparison.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .lp_model import BoundedStandardLP, GeneralLP, reformulate
from .oracle import OracleUnavailable, oracle_from_outcome
from .rules import make_rule
from .simplex import SolveOutcome, SolverConfig, SolveStatus, phase1, phase2

__all__ = [
    "Cell",
    "RuleAggregate",
    "BenchResult",
    "run_instance",
    "run_benchmark",
    "geometric_mean",
    "wins",
    "aggregate",
    "cells_to_csv",
    "cells_from_csv",
    "aggregates_to_csv",
    "to_markdown",
    "emit_tables",
]

CAPPED = {SolveStatus.ITERATION_LIMIT.value, SolveStatus.TIME_LIMIT.value}


@dataclass(frozen=True)
class Cell:
    instance: str
    rule: str
    status: str
    phase1_pivots: int
    phase2_pivots: int
    objective: float
    time_s: float
    flag: str = ""  # empty when the cell solved to optimality

    @property
    def flagged(self) -> bool:
        return bool(self.flag)


@dataclass(frozen=True)
class RuleAggregate:
    rule: str
    geomean_pivots: float
    wins: int
    mean_time_s: float
    cells: int
    flagged: int


@dataclass
class BenchResult:
    cells: list[Cell] = field(default_factory=list)
    rules: list[str] = field(default_factory=list)
    max_iters: int = SolverConfig().max_iters

    @property
    def any_flagged(self) -> bool:
        return any(c.flagged for c in self.cells)

    def aggregates(self) -> list[RuleAggregate]:
        return aggregate(self.cells, self.rules, self.max_iters)


def geometric_mean(counts: Iterable[float]) -> float:
    """``exp(mean(log k))`` with zero counts raised to 1; NaN for no data."""
    logs = [math.log(max(float(k), 1.0)) for k in counts]
    if not logs:
        return math.nan
    return math.exp(math.fsum(logs) / len(logs))


def wins(per_instance: dict[str, dict[str, int | None]]) -> dict[str, int]:
    """A rule wins an instance when it attains the minimum count; ties share the win.

    ``None`` marks a flagged cell, which can never win.
    """
    rules = sorted({r for row in per_instance.values() for r in row})
    out = {r: 0 for r in rules}
    for row in per_instance.values():
        vals = [v for v in row.values() if v is not None]
        if not vals:
            continue
        best = min(vals)
        for r, v in row.items():
            if v is not None and v == best:
                out[r] += 1
    return out


def _count(cell: Cell, max_iters: int) -> float | None:
    if not cell.flagged:
        return cell.phase2_pivots
    if cell.status in CAPPED:
        return max_iters
    return None


def aggregate(cells: Sequence[Cell], rules: Sequence[str], max_iters: int) -> list[RuleAggregate]:
    """Per-rule geometric mean, wins and mean time.

    Cells that hit the iteration or time limit enter the geometric mean at
    ``max_iters`` (a lower bound on their true count); other flagged cells
    are left out of it.  Flagged cells never win.
    """
    per_instance: dict[str, dict[str, int | None]] = {}
    for c in cells:
        per_instance.setdefault(c.instance, {})[c.rule] = None if c.flagged else c.phase2_pivots
    w = wins(per_instance)
    out = []
    for r in rules:
        mine = [c for c in cells if c.rule == r]
        counts = [k for k in (_count(c, max_iters) for c in mine) if k is not None]
        times = [c.time_s for c in mine if c.status not in ("PhaseIFailed", "OracleUnavailable")]
        out.append(RuleAggregate(
            r, geometric_mean(counts), w.get(r, 0),
            float(np.mean(times)) if times else math.nan,
            len(mine), sum(c.flagged for c in mine),
        ))
    return out


def _cell(inst: str, rule: str, p1_pivots: int, out: SolveOutcome) -> Cell:
    flag = "" if out.status is SolveStatus.OPTIMAL else out.status.value
    return Cell(inst, rule, out.status.value, p1_pivots, out.phase2_pivots, float(out.objective),
                out.phase2_time, flag)


def run_instance(
    inst_id: str, lp: GeneralLP | BoundedStandardLP, rules: Sequence[str], config: SolverConfig
) -> list[Cell]:
    """All cells of one instance; never raises for solver failures."""
    if isinstance(lp, GeneralLP):
        lp = reformulate(lp)
    p1 = phase1(lp, config)
    if p1.status is not SolveStatus.OPTIMAL:
        return [Cell(inst_id, r, "PhaseIFailed", p1.pivots, 0, math.nan, 0.0, f"PhaseI:{p1.status.value}")
                for r in rules]
    se_out = phase2(p1.lp, p1.basis, "se", config)
    try:
        oracle = oracle_from_outcome(se_out).sta_star
    except OracleUnavailable:
        oracle = None
    cells = []
    for r in rules:
        rule = make_rule(r)
        if r == "se":
            cells.append(_cell(inst_id, r, p1.pivots, se_out))
        elif rule.needs_oracle and oracle is None:
            cells.append(Cell(inst_id, r, "OracleUnavailable", p1.pivots, 0, math.nan, 0.0, "OracleUnavailable"))
        else:
            out = phase2(p1.lp, p1.basis, rule, config, oracle=oracle if rule.needs_oracle else None)
            cells.append(_cell(inst_id, r, p1.pivots, out))
    return cells


def _job(args: tuple) -> list[Cell]:
    return run_instance(*args)


def run_benchmark(
    instances: Sequence[tuple[str, GeneralLP | BoundedStandardLP]],
    rules: Sequence[str],
    config: SolverConfig | None = None,
    workers: int = 1,
) -> BenchResult:
    """Run the grid; instances are processed in parallel when ``workers > 1``."""
    config = config or SolverConfig()
    rules = list(rules)
    for r in rules:
        make_rule(r)  # fail fast on unknown names
    jobs = [(iid, lp, rules, config) for iid, lp in instances]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_job, jobs))
    else:
        parts = [_job(j) for j in jobs]
    return BenchResult([c for part in parts for c in part], rules, config.max_iters)


# --- tables ----------------------------------------------------------------

CELL_COLUMNS = [f.name for f in fields(Cell)]
AGG_COLUMNS = [f.name for f in fields(RuleAggregate)]


def cells_to_csv(cells: Sequence[Cell], include_time: bool = True) -> str:
    cols = [c for c in CELL_COLUMNS if include_time or c != "time_s"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for c in cells:
        row = asdict(c)
        row["objective"] = repr(c.objective)
        row["time_s"] = f"{c.time_s:.6f}"
        w.writerow(row)
    return buf.getvalue()


def cells_from_csv(text: str) -> list[Cell]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(Cell(
            row["instance"], row["rule"], row["status"], int(row["phase1_pivots"]),
            int(row["phase2_pivots"]), float(row["objective"]), float(row.get("time_s") or 0.0),
            row["flag"],
        ))
    return out


def aggregates_to_csv(aggs: Sequence[RuleAggregate], include_time: bool = True) -> str:
    cols = [c for c in AGG_COLUMNS if include_time or c != "mean_time_s"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for a in aggs:
        row = asdict(a)
        row["geomean_pivots"] = repr(a.geomean_pivots)
        row["mean_time_s"] = f"{a.mean_time_s:.6f}"
        w.writerow(row)
    return buf.getvalue()


def to_markdown(result: BenchResult) -> str:
    """Aggregate table followed by one row per instance (Phase II pivots per rule).

    Flagged cells show their count followed by ``t`` (limit hit) or a dash
    when no count exists.
    """
    lines = ["| rule | geomean pivots | wins | mean time (s, Phase II) | cells | flagged |",
             "|---|---|---|---|---|---|"]
    for a in result.aggregates():
        lines.append(f"| {a.rule} | {a.geomean_pivots:.2f} | {a.wins} | {a.mean_time_s:.4f} | {a.cells} | {a.flagged} |")
    lines += ["", "| instance | phase I | " + " | ".join(result.rules) + " |",
              "|---|---|" + "---|" * len(result.rules)]
    by_inst: dict[str, dict[str, Cell]] = {}
    for c in result.cells:
        by_inst.setdefault(c.instance, {})[c.rule] = c
    for inst, row in by_inst.items():
        p1 = next(iter(row.values())).phase1_pivots
        vals = []
        for r in result.rules:
            c = row.get(r)
            if c is None:
                vals.append("")
            elif not c.flagged:
                vals.append(str(c.phase2_pivots))
            elif c.status in CAPPED:
                vals.append(f"{c.phase2_pivots}t")
            else:
                vals.append("-")
        lines.append(f"| {inst} | {p1} | " + " | ".join(vals) + " |")
    return "\n".join(lines) + "\n"


def emit_tables(result: BenchResult, fmt: str = "csv", include_time: bool = True) -> dict[str, str]:
    """File name -> contents.  ``csv`` gives ``cells.csv`` and ``summary.csv``; ``md`` gives ``results.md``."""
    if fmt == "csv":
        return {
            "cells.csv": cells_to_csv(result.cells, include_time),
            "summary.csv": aggregates_to_csv(result.aggregates(), include_time),
        }
    if fmt == "md":
        return {"results.md": to_markdown(result)}
    raise ValueError(f"unknown table format {fmt!r}")

