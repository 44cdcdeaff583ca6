"""LP containers and the reformulation into bounded standard form.

Two representations live here:

* :class:`GeneralLP` -- ``min c'x`` subject to equality rows, two-sided
  inequality rows ``l_constr <= A_ineq x <= u_constr`` and variable bounds.
  This is what readers and generators produce.
* :class:`BoundedStandardLP` -- ``min c'x`` subject to ``Ax = b`` and
  ``l <= x <= u``.  This is what the simplex engine consumes.

:func:`reformulate` maps the first onto the second by adding one nonnegative
slack per finite side of every inequality row.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence

import numpy as np

__all__ = [
    "LPFormatError",
    "InfeasibleModelError",
    "Origin",
    "GeneralLP",
    "BoundedStandardLP",
    "reformulate",
    "objective_value",
    "read_instance_json",
    "write_instance_json",
    "instance_to_dict",
    "instance_from_dict",
]


class LPFormatError(ValueError):
    """Raised for malformed or dimensionally inconsistent LP data."""


class InfeasibleModelError(LPFormatError):
    """Raised when bounds are contradictory (lower > upper) at construction."""


class Origin(NamedTuple):
    """Provenance of a row or column of a :class:`BoundedStandardLP`.

    ``kind`` is one of ``"var"``, ``"slack_lo"``, ``"slack_up"``,
    ``"artificial"`` for columns and ``"eq"``, ``"lo"``, ``"up"`` for rows.
    ``index`` refers to the originating variable or row of the source model.
    """

    kind: str
    index: int


def _frozen(a: Any, ndim: int, name: str) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise LPFormatError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if np.isnan(arr).any():
        raise LPFormatError(f"{name} contains NaN")
    arr.setflags(write=False)
    return arr


def _check_bounds(lo: np.ndarray, hi: np.ndarray, what: str) -> None:
    if np.any(lo == np.inf) or np.any(hi == -np.inf):
        raise InfeasibleModelError(f"{what}: lower bound +inf or upper bound -inf")
    bad = np.flatnonzero(lo > hi)
    if bad.size:
        i = int(bad[0])
        raise InfeasibleModelError(f"{what}[{i}]: lower {lo[i]} > upper {hi[i]}")


@dataclass(frozen=True, eq=False)
class GeneralLP:
    """``min c'x + obj_offset`` s.t. ``A_eq x = b_eq``, ``l_constr <= A_ineq x <= u_constr``,
    ``l_x <= x <= u_x``.

    Arrays are copied and made read-only on construction.  Infinite entries are
    allowed in the row and variable bounds only.
    """

    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    A_ineq: np.ndarray
    l_constr: np.ndarray
    u_constr: np.ndarray
    l_x: np.ndarray
    u_x: np.ndarray
    name: str = ""
    row_names: tuple[str, ...] | None = None
    col_names: tuple[str, ...] | None = None
    obj_offset: float = 0.0

    def __post_init__(self) -> None:
        c = _frozen(self.c, 1, "c")
        n = c.shape[0]
        A_eq = _frozen(np.reshape(self.A_eq, (-1, n)) if np.size(self.A_eq) == 0 else self.A_eq, 2, "A_eq")
        A_ineq = _frozen(
            np.reshape(self.A_ineq, (-1, n)) if np.size(self.A_ineq) == 0 else self.A_ineq, 2, "A_ineq"
        )
        b_eq = _frozen(self.b_eq, 1, "b_eq")
        l_constr = _frozen(self.l_constr, 1, "l_constr")
        u_constr = _frozen(self.u_constr, 1, "u_constr")
        l_x = _frozen(self.l_x, 1, "l_x")
        u_x = _frozen(self.u_x, 1, "u_x")

        if not np.all(np.isfinite(c)):
            raise LPFormatError("objective coefficients must be finite")
        if A_eq.shape[1] != n or A_ineq.shape[1] != n:
            raise LPFormatError(f"constraint matrices must have {n} columns")
        if not (np.all(np.isfinite(A_eq)) and np.all(np.isfinite(A_ineq))):
            raise LPFormatError("constraint matrices must be finite")
        if b_eq.shape[0] != A_eq.shape[0] or not np.all(np.isfinite(b_eq)):
            raise LPFormatError("b_eq must be finite with one entry per equality row")
        m_ineq = A_ineq.shape[0]
        if l_constr.shape[0] != m_ineq or u_constr.shape[0] != m_ineq:
            raise LPFormatError("l_constr/u_constr must have one entry per inequality row")
        if l_x.shape[0] != n or u_x.shape[0] != n:
            raise LPFormatError("l_x/u_x must have one entry per variable")
        _check_bounds(l_constr, u_constr, "constraint bounds")
        _check_bounds(l_x, u_x, "variable bounds")
        if not math.isfinite(self.obj_offset):
            raise LPFormatError("obj_offset must be finite")

        row_names = None if self.row_names is None else tuple(str(s) for s in self.row_names)
        col_names = None if self.col_names is None else tuple(str(s) for s in self.col_names)
        if row_names is not None and len(row_names) != A_eq.shape[0] + m_ineq:
            raise LPFormatError("row_names must cover equality rows then inequality rows")
        if col_names is not None and len(col_names) != n:
            raise LPFormatError("col_names must have one entry per variable")

        for k, v in dict(
            c=c, A_eq=A_eq, b_eq=b_eq, A_ineq=A_ineq, l_constr=l_constr, u_constr=u_constr,
            l_x=l_x, u_x=u_x, row_names=row_names, col_names=col_names,
            obj_offset=float(self.obj_offset),
        ).items():
            object.__setattr__(self, k, v)

    @classmethod
    def build(
        cls,
        c: Sequence[float],
        A_eq: Any = None,
        b_eq: Any = None,
        A_ineq: Any = None,
        l_constr: Any = None,
        u_constr: Any = None,
        l_x: Any = None,
        u_x: Any = None,
        **kwargs: Any,
    ) -> GeneralLP:
        """Convenience constructor: missing blocks default to empty, bounds to ``[0, inf)``."""
        c = np.asarray(c, dtype=float)
        n = c.shape[0]
        A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float)
        b_eq = np.zeros(A_eq.shape[0]) if b_eq is None else b_eq
        A_ineq = np.zeros((0, n)) if A_ineq is None else np.asarray(A_ineq, dtype=float)
        m = A_ineq.shape[0]
        l_constr = np.full(m, -np.inf) if l_constr is None else l_constr
        u_constr = np.full(m, np.inf) if u_constr is None else u_constr
        l_x = np.zeros(n) if l_x is None else l_x
        u_x = np.full(n, np.inf) if u_x is None else u_x
        return cls(c, A_eq, b_eq, A_ineq, l_constr, u_constr, l_x, u_x, **kwargs)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def m_eq(self) -> int:
        return self.A_eq.shape[0]

    @property
    def m_ineq(self) -> int:
        return self.A_ineq.shape[0]

    def is_feasible(self, x: np.ndarray, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if np.any(x < self.l_x - tol) or np.any(x > self.u_x + tol):
            return False
        if self.m_eq and np.max(np.abs(self.A_eq @ x - self.b_eq)) > tol:
            return False
        if self.m_ineq:
            r = self.A_ineq @ x
            if np.any(r < self.l_constr - tol) or np.any(r > self.u_constr + tol):
                return False
        return True

    def equals(self, other: GeneralLP) -> bool:
        """Field-by-field numeric equality (infinities compare equal)."""
        arrays = ("c", "A_eq", "b_eq", "A_ineq", "l_constr", "u_constr", "l_x", "u_x")
        return (
            all(
                getattr(self, a).shape == getattr(other, a).shape
                and np.array_equal(getattr(self, a), getattr(other, a))
                for a in arrays
            )
            and self.obj_offset == other.obj_offset
            and self.name == other.name
            and self.row_names == other.row_names
            and self.col_names == other.col_names
        )


@dataclass(frozen=True, eq=False)
class BoundedStandardLP:
    """``min c'x`` s.t. ``Ax = b``, ``l <= x <= u`` with dense storage."""

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    l: np.ndarray
    u: np.ndarray
    col_origin: tuple[Origin, ...] = ()
    row_origin: tuple[Origin, ...] = ()
    obj_offset: float = 0.0
    name: str = ""
    _norms: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        c = _frozen(self.c, 1, "c")
        A = _frozen(self.A, 2, "A")
        b = _frozen(self.b, 1, "b")
        lo = _frozen(self.l, 1, "l")
        hi = _frozen(self.u, 1, "u")
        m, n = A.shape
        if c.shape[0] != n or lo.shape[0] != n or hi.shape[0] != n or b.shape[0] != m:
            raise LPFormatError(f"inconsistent dimensions for A of shape {A.shape}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise LPFormatError("c, A and b must be finite")
        _check_bounds(lo, hi, "bounds")
        col_origin = tuple(self.col_origin) or tuple(Origin("var", j) for j in range(n))
        row_origin = tuple(self.row_origin) or tuple(Origin("eq", i) for i in range(m))
        if len(col_origin) != n or len(row_origin) != m:
            raise LPFormatError("origin maps must cover every row and column")
        for k, v in dict(c=c, A=A, b=b, l=lo, u=hi, col_origin=col_origin, row_origin=row_origin).items():
            object.__setattr__(self, k, v)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def column_norms(self) -> np.ndarray:
        """Euclidean norms of the columns of ``A``, computed once."""
        if "col" not in self._norms:
            norms = np.linalg.norm(self.A, axis=0)
            norms.setflags(write=False)
            self._norms["col"] = norms
        return self._norms["col"]

    def objective(self, x: np.ndarray) -> float:
        return objective_value(self, x)

    def drop_rows(self, rows: Sequence[int]) -> BoundedStandardLP:
        """Return a copy with the given rows removed (columns untouched)."""
        keep = np.setdiff1d(np.arange(self.m), np.asarray(rows, dtype=int))
        return BoundedStandardLP(
            self.c, self.A[keep], self.b[keep], self.l, self.u,
            self.col_origin, tuple(self.row_origin[i] for i in keep),
            self.obj_offset, self.name,
        )

    def original_x(self, x: np.ndarray) -> np.ndarray:
        """Project a point onto the columns that came from original variables."""
        idx = [j for j, o in enumerate(self.col_origin) if o.kind == "var"]
        order = np.argsort([self.col_origin[j].index for j in idx], kind="stable")
        return np.asarray(x, dtype=float)[np.asarray(idx, dtype=int)[order]]


def objective_value(lp: BoundedStandardLP, x: Any) -> float:
    """``c'x`` for a point of the standard-form LP (offset excluded)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (lp.n,):
        raise LPFormatError(f"point must have length {lp.n}, got shape {x.shape}")
    return float(lp.c @ x)


def reformulate(glp: GeneralLP) -> BoundedStandardLP:
    """Convert a :class:`GeneralLP` into bounded standard form.

    Row order is equality rows, then one ``-a'x + s = -l`` row for every finite
    lower row bound, then one ``a'x + s = u`` row for every finite upper row
    bound.  Slack columns follow the original variables in the same order.
    """
    n = glp.n
    lo_rows = np.flatnonzero(np.isfinite(glp.l_constr))
    up_rows = np.flatnonzero(np.isfinite(glp.u_constr))
    k_lo, k_up = lo_rows.size, up_rows.size
    m = glp.m_eq + k_lo + k_up

    A = np.zeros((m, n + k_lo + k_up))
    b = np.empty(m)
    A[: glp.m_eq, :n] = glp.A_eq
    b[: glp.m_eq] = glp.b_eq
    r0 = glp.m_eq
    A[r0 : r0 + k_lo, :n] = -glp.A_ineq[lo_rows]
    A[r0 : r0 + k_lo, n : n + k_lo] = np.eye(k_lo)
    b[r0 : r0 + k_lo] = -glp.l_constr[lo_rows]
    r1 = r0 + k_lo
    A[r1:, :n] = glp.A_ineq[up_rows]
    A[r1:, n + k_lo :] = np.eye(k_up)
    b[r1:] = glp.u_constr[up_rows]

    c = np.concatenate([glp.c, np.zeros(k_lo + k_up)])
    lo = np.concatenate([glp.l_x, np.zeros(k_lo + k_up)])
    hi = np.concatenate([glp.u_x, np.full(k_lo + k_up, np.inf)])
    col_origin = (
        [Origin("var", j) for j in range(n)]
        + [Origin("slack_lo", int(i)) for i in lo_rows]
        + [Origin("slack_up", int(i)) for i in up_rows]
    )
    row_origin = (
        [Origin("eq", i) for i in range(glp.m_eq)]
        + [Origin("lo", int(i)) for i in lo_rows]
        + [Origin("up", int(i)) for i in up_rows]
    )
    return BoundedStandardLP(c, A, b, lo, hi, tuple(col_origin), tuple(row_origin), glp.obj_offset, glp.name)


# --- native JSON format ----------------------------------------------------

FORMAT_TAG = "pivotlab-lp"
FORMAT_VERSION = 1


def _enc(v: float) -> float | str:
    if math.isnan(v):
        raise LPFormatError("NaN cannot be serialized")
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return float(v)


def _dec(v: Any) -> float:
    if isinstance(v, str):
        if v in ("inf", "+inf"):
            return math.inf
        if v == "-inf":
            return -math.inf
        raise LPFormatError(f"unknown numeric sentinel {v!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise LPFormatError(f"expected a number, got {v!r}")
    if math.isnan(v):
        raise LPFormatError("NaN is not allowed")
    return float(v)


def _vec(seq: Any, key: str) -> list[float]:
    if not isinstance(seq, list):
        raise LPFormatError(f"{key} must be a list")
    return [_dec(v) for v in seq]


def _mat(rows: Any, key: str, n: int) -> np.ndarray:
    if not isinstance(rows, list):
        raise LPFormatError(f"{key} must be a list of rows")
    out = np.array([_vec(r, key) for r in rows], dtype=float).reshape(len(rows), n) if rows else np.zeros((0, n))
    return out


def instance_to_dict(glp: GeneralLP) -> dict[str, Any]:
    return {
        "format": FORMAT_TAG,
        "version": FORMAT_VERSION,
        "name": glp.name,
        "n": glp.n,
        "c": [_enc(v) for v in glp.c],
        "obj_offset": _enc(glp.obj_offset),
        "A_eq": [[_enc(v) for v in row] for row in glp.A_eq],
        "b_eq": [_enc(v) for v in glp.b_eq],
        "A_ineq": [[_enc(v) for v in row] for row in glp.A_ineq],
        "l_constr": [_enc(v) for v in glp.l_constr],
        "u_constr": [_enc(v) for v in glp.u_constr],
        "l_x": [_enc(v) for v in glp.l_x],
        "u_x": [_enc(v) for v in glp.u_x],
        "row_names": None if glp.row_names is None else list(glp.row_names),
        "col_names": None if glp.col_names is None else list(glp.col_names),
    }


def instance_from_dict(doc: Any) -> GeneralLP:
    if not isinstance(doc, dict):
        raise LPFormatError("instance document must be a JSON object")
    if doc.get("format") != FORMAT_TAG:
        raise LPFormatError(f"not a {FORMAT_TAG} document")
    try:
        n = int(doc["n"])
        c = _vec(doc["c"], "c")
        return GeneralLP(
            c=c,
            A_eq=_mat(doc["A_eq"], "A_eq", n),
            b_eq=_vec(doc["b_eq"], "b_eq"),
            A_ineq=_mat(doc["A_ineq"], "A_ineq", n),
            l_constr=_vec(doc["l_constr"], "l_constr"),
            u_constr=_vec(doc["u_constr"], "u_constr"),
            l_x=_vec(doc["l_x"], "l_x"),
            u_x=_vec(doc["u_x"], "u_x"),
            name=str(doc.get("name", "")),
            row_names=doc.get("row_names"),
            col_names=doc.get("col_names"),
            obj_offset=_dec(doc.get("obj_offset", 0.0)),
        )
    except KeyError as e:
        raise LPFormatError(f"missing field {e.args[0]!r}") from None
    except (TypeError, ValueError) as e:
        if isinstance(e, LPFormatError):
            raise
        raise LPFormatError(f"malformed instance document: {e}") from None


def write_instance_json(glp: GeneralLP, path: Any = None) -> str:
    """Serialize to JSON text; also write it to ``path`` when given."""
    text = json.dumps(instance_to_dict(glp), allow_nan=False)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def read_instance_json(source: Any) -> GeneralLP:
    """Parse a native instance document from JSON text or a file path."""
    text = source
    if not (isinstance(source, str) and source.lstrip().startswith("{")):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise LPFormatError(f"invalid JSON: {e}") from None
    return instance_from_dict(doc)
