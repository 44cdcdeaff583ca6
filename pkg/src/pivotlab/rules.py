"""Pivot rules.

Every rule exposes ``name``, ``needs_oracle`` and ``choose(ctx) -> PivotChoice``.
Scores are sign-adjusted by the entering direction so that "most improving"
means the same thing for columns at lower and at upper bound.  Entering ties
always go to the smallest column index.
"""

from __future__ import annotations

import numpy as np

from .simplex import (
    BASIC,
    LeavePolicy,
    PivotChoice,
    PivotContext,
    RatioOutcome,
    entering_direction,
)

__all__ = [
    "PivotRule",
    "Dantzig",
    "Bland",
    "SteepestEdge",
    "GreatestImprovement",
    "LargestDistance",
    "ExpertI",
    "ExpertII",
    "NoLocal",
    "RULES",
    "ORACLE_RULES",
    "make_rule",
    "directions",
    "se_score",
    "se_scores",
    "ld_scores",
]


def directions(ctx: PivotContext, cols: np.ndarray) -> np.ndarray:
    return np.array([entering_direction(ctx.state, ctx.lp, int(j)) for j in cols], dtype=float)


def se_score(state, lp, j: int) -> float:
    """``rc_j / sqrt(||B^-1 A_j||^2 + 1)``, not sign-adjusted."""
    alpha = state.B_inv @ lp.A[:, j]
    return float(state.rc[j] / np.sqrt(alpha @ alpha + 1.0))


def se_scores(ctx: PivotContext, cols: np.ndarray) -> np.ndarray:
    """Sign-adjusted steepest-edge scores; more negative is better."""
    cols = np.asarray(cols, dtype=int)
    if cols.size == 0:
        return np.zeros(0)
    al = ctx.alphas(cols)
    norms = np.sqrt(np.einsum("ij,ij->j", al, al) + 1.0)
    return directions(ctx, cols) * ctx.state.rc[cols] / norms


def ld_scores(ctx: PivotContext, cols: np.ndarray) -> np.ndarray:
    """Sign-adjusted ``rc_j / ||A_j||`` (raw ``rc_j`` for a zero column)."""
    cols = np.asarray(cols, dtype=int)
    norms = ctx.lp.column_norms[cols]
    rc = directions(ctx, cols) * ctx.state.rc[cols]
    return rc / np.where(norms > 0, norms, 1.0)


def _argmin_first(cols: np.ndarray, scores: np.ndarray) -> int:
    # np.argmin returns the first minimiser and cols are sorted ascending
    return int(cols[int(np.argmin(scores))])


class PivotRule:
    name = "rule"
    needs_oracle = False

    def reset(self) -> None:
        """Clear per-solve state."""

    def choose(self, ctx: PivotContext) -> PivotChoice:  # pragma: no cover
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class Dantzig(PivotRule):
    name = "dantzig"

    def choose(self, ctx):
        cand = ctx.candidates
        mag = np.abs(ctx.state.rc[cand])
        return PivotChoice(int(cand[int(np.argmax(mag))]))


class Bland(PivotRule):
    name = "bland"

    def choose(self, ctx):
        return PivotChoice(int(ctx.candidates.min()))


class SteepestEdge(PivotRule):
    name = "se"

    def choose(self, ctx):
        cand = ctx.candidates
        return PivotChoice(_argmin_first(cand, se_scores(ctx, cand)))


class GreatestImprovement(PivotRule):
    """Largest objective decrease ``|rc_j| * step``; an unbounded edge wins at once."""

    name = "gi"

    def choose(self, ctx):
        best_j, best_gain, best_out = -1, -1.0, None
        for j in ctx.candidates:
            out = ctx.ratio(int(j))
            if out.unbounded:
                return PivotChoice(int(j), ratio=out)
            gain = abs(ctx.state.rc[j]) * out.step
            if gain > best_gain:
                best_j, best_gain, best_out = int(j), gain, out
        return PivotChoice(best_j, ratio=best_out)


class LargestDistance(PivotRule):
    name = "ld"

    def choose(self, ctx):
        cand = ctx.candidates
        return PivotChoice(_argmin_first(cand, ld_scores(ctx, cand)))


def _oracle_basic(ctx: PivotContext) -> np.ndarray:
    if ctx.oracle is None:
        raise ValueError("expert rules need an oracle status vector")
    cand = ctx.candidates
    return cand[ctx.oracle[cand] == BASIC]


class ExpertI(PivotRule):
    """Enter the best steepest-edge candidate that is basic in the oracle basis,
    then prefer to drop a variable that is nonbasic there."""

    name = "exp"
    needs_oracle = True

    def choose(self, ctx):
        pool = _oracle_basic(ctx)
        if pool.size == 0:
            return SteepestEdge().choose(ctx)
        return PivotChoice(_argmin_first(pool, se_scores(ctx, pool)), LeavePolicy.PREFER_OPT_NONBASIC)


class ExpertII(PivotRule):
    """Like :class:`ExpertI`, but first keeps only oracle-basic candidates whose
    ratio test is blocked by an oracle-nonbasic variable."""

    name = "exp2"
    needs_oracle = True

    def choose(self, ctx):
        pool = _oracle_basic(ctx)
        if pool.size == 0:
            return SteepestEdge().choose(ctx)
        outcomes: dict[int, RatioOutcome] = {}
        removing = []
        for j in pool:
            out = ctx.ratio(int(j))
            if out.unbounded:
                return PivotChoice(int(j), LeavePolicy.PREFER_OPT_NONBASIC, ratio=out)
            outcomes[int(j)] = out
            if any(ctx.oracle[ctx.state.basic[i]] != BASIC for i in out.blockers):
                removing.append(int(j))
        if removing:
            pool = np.array(removing, dtype=int)
        j = _argmin_first(pool, se_scores(ctx, pool))
        return PivotChoice(j, LeavePolicy.PREFER_OPT_NONBASIC, ratio=outcomes[j])


class NoLocal(PivotRule):
    """Uniformly random oracle-basic candidate (all candidates if there is none)."""

    name = "nolocal"
    needs_oracle = True

    def choose(self, ctx):
        if ctx.rng is None:
            raise ValueError("nolocal needs a random generator in the pivot context")
        pool = _oracle_basic(ctx)
        if pool.size == 0:
            pool = ctx.candidates
        return PivotChoice(int(pool[ctx.rng.integers(pool.size)]), LeavePolicy.PREFER_OPT_NONBASIC)


RULES: dict[str, type[PivotRule]] = {
    "bland": Bland,
    "dantzig": Dantzig,
    "se": SteepestEdge,
    "gi": GreatestImprovement,
    "ld": LargestDistance,
    "exp": ExpertI,
    "exp2": ExpertII,
    "nolocal": NoLocal,
}
ORACLE_RULES = frozenset(k for k, v in RULES.items() if v.needs_oracle)


def make_rule(name: str) -> PivotRule:
    try:
        return RULES[name.lower()]()
    except KeyError:
        raise ValueError(f"unknown rule {name!r}; choose from {', '.join(RULES)}") from None
