"""Reader for fixed- and free-format MPS files (NETLIB conventions).

Supported sections: NAME, OBJSENSE, ROWS, COLUMNS, RHS, RANGES, BOUNDS,
ENDATA.  Integer MARKER lines are skipped; the model is read as an LP.

RANGES follow the usual NETLIB rule for a row with right-hand side ``b`` and
range ``r``::

    G row:          [b, b + |r|]
    L row:          [b - |r|, b]
    E row, r > 0:   [b, b + |r|]
    E row, r < 0:   [b + r, b]

An RHS entry on the objective row sets the objective constant to ``-value``.
"""

from __future__ import annotations

import io
import logging
import math
from typing import IO, Any

import numpy as np

from .lp_model import GeneralLP, LPFormatError

__all__ = ["MPSParseError", "read_mps", "read_mps_file"]

log = logging.getLogger(__name__)

_UNSUPPORTED = {"SOS", "QUADOBJ", "QMATRIX", "QSECTION", "CSECTION", "INDICATORS"}
# fixed-format field columns (1-based): 2-3, 5-12, 15-22, 25-36, 40-47, 50-61
_FIXED = ((1, 3), (4, 12), (14, 22), (24, 36), (39, 47), (49, 61))


class MPSParseError(LPFormatError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


def _fixed_fields(line: str) -> list[str]:
    return [line[a:b].strip() for a, b in _FIXED]


def _number(tok: str, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise MPSParseError(f"expected a number, got {tok!r}", lineno) from None
    if math.isnan(v):
        raise MPSParseError("NaN value", lineno)
    return v


def _pairs(tokens: list[str], lineno: int) -> list[tuple[str, float]]:
    if len(tokens) not in (2, 4):
        raise MPSParseError(f"expected 1 or 2 name/value pairs, got {tokens}", lineno)
    return [(tokens[k], _number(tokens[k + 1], lineno)) for k in range(0, len(tokens), 2)]


def read_mps(source: str | IO[str], fmt: str = "auto") -> GeneralLP:
    """Parse MPS text into a :class:`GeneralLP`.

    ``fmt`` is ``"free"`` (whitespace separated), ``"fixed"`` (column
    positions, names may contain spaces) or ``"auto"``, which splits on
    whitespace and falls back to column positions when the token count does
    not fit the section.
    """
    if fmt not in ("auto", "free", "fixed"):
        raise ValueError(f"unknown MPS format {fmt!r}")
    stream = io.StringIO(source) if isinstance(source, str) else source

    name = ""
    maximize = False
    section: str | None = None
    obj_row: str | None = None
    row_type: dict[str, str] = {}
    row_order: list[str] = []
    free_rows: set[str] = set()
    col_index: dict[str, int] = {}
    entries: dict[tuple[str, int], float] = {}
    obj: dict[int, float] = {}
    rhs: dict[str, float] = {}
    ranges: dict[str, float] = {}
    lo: dict[int, float] = {}
    hi: dict[int, float] = {}
    obj_offset = 0.0
    rhs_set: str | None = None
    range_set: str | None = None
    bound_set: str | None = None
    seen_end = False

    def fields(line: str, lineno: int, counts: tuple[int, ...]) -> list[str]:
        toks = line.split()
        if fmt == "free" or (fmt == "auto" and len(toks) in counts):
            return toks
        fx = [f for f in _fixed_fields(line.ljust(61)) if f]
        if len(fx) in counts:
            return fx
        raise MPSParseError(f"cannot parse line {line.strip()!r}", lineno)

    def column(nm: str, lineno: int) -> int:
        if nm not in col_index:
            raise MPSParseError(f"undeclared column {nm!r}", lineno)
        return col_index[nm]

    def known_row(nm: str, lineno: int) -> None:
        if nm not in row_type:
            raise MPSParseError(f"undeclared row {nm!r}", lineno)

    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("*"):
            continue
        if not line[0].isspace():
            head = line.split()
            key = head[0].upper()
            if key == "NAME":
                name = head[1] if len(head) > 1 else ""
                section = "NAME"
                continue
            if key == "OBJSENSE":
                section = "OBJSENSE"
                if len(head) > 1:
                    maximize = head[1].upper().startswith("MAX")
                continue
            if key in _UNSUPPORTED:
                raise MPSParseError(f"section {key} is not supported", lineno)
            if key in ("ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS"):
                section = key
                continue
            if key == "ENDATA":
                seen_end = True
                break
            raise MPSParseError(f"unknown section {head[0]!r}", lineno)

        if section is None or section == "NAME":
            raise MPSParseError("data line outside of a section", lineno)

        if section == "OBJSENSE":
            maximize = line.split()[0].upper().startswith("MAX")
        elif section == "ROWS":
            t, nm = fields(line, lineno, (2,))
            t = t.upper()
            if t not in ("N", "E", "L", "G"):
                raise MPSParseError(f"unknown row type {t!r}", lineno)
            if nm in row_type:
                raise MPSParseError(f"duplicate row {nm!r}", lineno)
            row_type[nm] = t
            if t == "N":
                if obj_row is None:
                    obj_row = nm
                else:
                    free_rows.add(nm)
            else:
                row_order.append(nm)
        elif section == "COLUMNS":
            if "'MARKER'" in line:  # integrality markers: read as an LP
                continue
            toks = fields(line, lineno, (3, 5))
            nm = toks[0]
            if nm not in col_index:
                col_index[nm] = len(col_index)
            j = col_index[nm]
            for rn, v in _pairs(toks[1:], lineno):
                known_row(rn, lineno)
                if rn == obj_row:
                    obj[j] = obj.get(j, 0.0) + v
                elif rn not in free_rows:
                    entries[(rn, j)] = entries.get((rn, j), 0.0) + v
        elif section == "RHS":
            toks = fields(line, lineno, (2, 3, 4, 5))
            if len(toks) in (3, 5):
                set_name, toks = toks[0], toks[1:]
            else:
                set_name = ""
            if rhs_set is None:
                rhs_set = set_name
            if set_name != rhs_set:
                continue
            for rn, v in _pairs(toks, lineno):
                known_row(rn, lineno)
                if rn == obj_row:
                    obj_offset = -v
                elif rn not in free_rows:
                    rhs[rn] = v
        elif section == "RANGES":
            toks = fields(line, lineno, (2, 3, 4, 5))
            if len(toks) in (3, 5):
                set_name, toks = toks[0], toks[1:]
            else:
                set_name = ""
            if range_set is None:
                range_set = set_name
            if set_name != range_set:
                continue
            for rn, v in _pairs(toks, lineno):
                known_row(rn, lineno)
                if row_type[rn] == "N":
                    raise MPSParseError(f"range on objective/free row {rn!r}", lineno)
                ranges[rn] = v
        elif section == "BOUNDS":
            toks = fields(line, lineno, (2, 3, 4))
            bt = toks[0].upper()
            nullary = bt in ("FR", "MI", "PL", "BV")
            if nullary:
                if len(toks) == 3:
                    set_name, cn = toks[1], toks[2]
                elif len(toks) == 2:
                    set_name, cn = "", toks[1]
                else:
                    # FR/MI/PL may carry an ignored value field
                    set_name, cn = toks[1], toks[2]
                val = 0.0
            else:
                if len(toks) == 4:
                    set_name, cn, val = toks[1], toks[2], _number(toks[3], lineno)
                elif len(toks) == 3:
                    set_name, cn, val = "", toks[1], _number(toks[2], lineno)
                else:
                    raise MPSParseError(f"bound {bt} needs a value", lineno)
            if bound_set is None:
                bound_set = set_name
            if set_name != bound_set:
                continue
            j = column(cn, lineno)
            if bt == "UP":
                hi[j] = val
                if val < 0 and j not in lo:
                    log.warning("line %d: negative UP bound on %s with default lower bound; lower set to -inf",
                                lineno, cn)
                    lo[j] = -math.inf
            elif bt == "LO":
                lo[j] = val
            elif bt == "FX":
                lo[j] = hi[j] = val
            elif bt == "FR":
                lo[j], hi[j] = -math.inf, math.inf
            elif bt == "MI":
                lo[j] = -math.inf
            elif bt == "PL":
                hi[j] = math.inf
            elif bt == "BV":
                lo[j], hi[j] = 0.0, 1.0
            elif bt == "LI":
                lo[j] = val
            elif bt == "UI":
                hi[j] = val
            else:
                raise MPSParseError(f"unknown bound type {bt!r}", lineno)

    if not seen_end:
        raise MPSParseError("missing ENDATA")
    if obj_row is None:
        raise MPSParseError("no objective (N) row")

    n = len(col_index)
    c = np.zeros(n)
    for j, v in obj.items():
        c[j] = v
    if maximize:
        c = -c
        obj_offset = -obj_offset

    eq_rows: list[str] = []
    ineq_rows: list[str] = []
    l_constr: list[float] = []
    u_constr: list[float] = []
    for rn in row_order:
        t = row_type[rn]
        b = rhs.get(rn, 0.0)
        r = ranges.get(rn)
        if t == "E" and r is None:
            eq_rows.append(rn)
            continue
        ineq_rows.append(rn)
        if r is None:
            l_constr.append(b if t == "G" else -math.inf)
            u_constr.append(b if t == "L" else math.inf)
        elif t == "G":
            l_constr.append(b)
            u_constr.append(b + abs(r))
        elif t == "L":
            l_constr.append(b - abs(r))
            u_constr.append(b)
        elif r >= 0:
            l_constr.append(b)
            u_constr.append(b + r)
        else:
            l_constr.append(b + r)
            u_constr.append(b)

    pos_eq = {rn: i for i, rn in enumerate(eq_rows)}
    pos_ineq = {rn: i for i, rn in enumerate(ineq_rows)}
    A_eq = np.zeros((len(eq_rows), n))
    A_ineq = np.zeros((len(ineq_rows), n))
    for (rn, j), v in entries.items():
        if rn in pos_eq:
            A_eq[pos_eq[rn], j] += v
        else:
            A_ineq[pos_ineq[rn], j] += v

    l_x = np.zeros(n)
    u_x = np.full(n, math.inf)
    for j, v in lo.items():
        l_x[j] = v
    for j, v in hi.items():
        u_x[j] = v

    return GeneralLP(
        c=c,
        A_eq=A_eq,
        b_eq=np.array([rhs.get(rn, 0.0) for rn in eq_rows]),
        A_ineq=A_ineq,
        l_constr=np.array(l_constr),
        u_constr=np.array(u_constr),
        l_x=l_x,
        u_x=u_x,
        name=name,
        row_names=tuple(eq_rows + ineq_rows),
        col_names=tuple(col_index),
        obj_offset=obj_offset,
    )


def read_mps_file(path: Any, fmt: str = "auto") -> GeneralLP:
    with open(path, encoding="utf-8", errors="replace") as fh:
        return read_mps(fh, fmt)
