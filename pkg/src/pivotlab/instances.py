"""Deterministic instance generators.

Worst-case families (Klee-Minty, Avis-Chvatal, the unit cube) come with the
prescribed all-slack start basis.  The combinatorial families are emitted as
LP relaxations.  Every generator is a pure function of its arguments.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import networkx as nx
import numpy as np

from .lp_model import GeneralLP

__all__ = [
    "GenSpec",
    "FAMILIES",
    "generate",
    "gen_km_dantzig",
    "gen_avis_chvatal",
    "gen_cube",
    "gen_set_cover",
    "gen_comb_auction",
    "gen_cap_facility",
    "gen_indep_set",
    "gen_random_lp",
    "cap_facility_dims",
    "manifest_entry",
]

KM_MAX_N = 14


def _slack_start(n: int) -> list[int]:
    return list(range(n, 2 * n))


def gen_km_dantzig(n: int) -> tuple[GeneralLP, list[int]]:
    """Klee-Minty cube on which Dantzig's rule visits all 2^n vertices.

    Maximise ``sum_j 10^(n-j) x_j`` (stored as minimisation of the negated
    costs) subject to ``2 sum_{j<i} 10^(i-j) x_j + x_i + s_i = 100^(i-1)``.
    Columns ``n..2n-1`` are the slacks ``s``; they form the start basis.
    """
    if not 1 <= n <= KM_MAX_N:
        raise ValueError(f"n must be in [1, {KM_MAX_N}]")
    A = np.zeros((n, 2 * n))
    for i in range(n):
        for j in range(i):
            A[i, j] = 2.0 * 10.0 ** (i - j)
        A[i, i] = 1.0
        A[i, n + i] = 1.0
    b = 100.0 ** np.arange(n)
    c = np.concatenate([-(10.0 ** np.arange(n - 1, -1, -1)), np.zeros(n)])
    names = tuple(f"x{j + 1}" for j in range(n)) + tuple(f"s{i + 1}" for i in range(n))
    glp = GeneralLP.build(c, A_eq=A, b_eq=b, name=f"km_{n}", col_names=names)
    return glp, _slack_start(n)


def gen_avis_chvatal(n: int, eps: float = 0.3) -> tuple[GeneralLP, list[int]]:
    """Avis-Chvatal polytope: maximise ``sum_j eps^(n-j) x_j`` subject to
    ``2 sum_{j<i} eps^(i-j) x_j + x_i + s_i = 1``, slack start basis."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 0.5)")
    A = np.zeros((n, 2 * n))
    for i in range(n):
        for j in range(i):
            A[i, j] = 2.0 * eps ** (i - j)
        A[i, i] = 1.0
        A[i, n + i] = 1.0
    c = np.concatenate([-(eps ** np.arange(n - 1, -1, -1)), np.zeros(n)])
    names = tuple(f"x{j + 1}" for j in range(n)) + tuple(f"s{i + 1}" for i in range(n))
    glp = GeneralLP.build(c, A_eq=A, b_eq=np.ones(n), name=f"ac_{n}", col_names=names)
    return glp, _slack_start(n)


def gen_cube(n: int, c: np.ndarray | None = None, seed: int = 0) -> GeneralLP:
    """``x + y = 1, x, y >= 0`` in 2n columns; default cost is random +-1 on x."""
    if n < 1:
        raise ValueError("n must be positive")
    if c is None:
        rng = np.random.default_rng(seed)
        c = np.concatenate([rng.choice([-1.0, 1.0], size=n), np.zeros(n)])
    c = np.asarray(c, dtype=float)
    if c.shape == (n,):
        c = np.concatenate([c, np.zeros(n)])
    A = np.hstack([np.eye(n), np.eye(n)])
    return GeneralLP.build(c, A_eq=A, b_eq=np.ones(n), name=f"cube_{n}")


def gen_set_cover(rows: int = 200, cols: int = 400, density: float = 0.05, seed: int = 0) -> GeneralLP:
    """Set-cover relaxation: ``min c'x, A x >= 1, 0 <= x <= 1``.

    Entries are Bernoulli(density); rows with fewer than two entries and
    empty columns are repaired by adding entries at random positions.
    Costs are integers uniform in [1, 100].
    """
    if rows < 1 or cols < 2 or not 0 < density <= 1:
        raise ValueError("need rows >= 1, cols >= 2 and density in (0, 1]")
    rng = np.random.default_rng(seed)
    A = (rng.random((rows, cols)) < density).astype(float)
    for i in range(rows):
        while A[i].sum() < 2:
            A[i, rng.integers(cols)] = 1.0
    for j in np.flatnonzero(A.sum(axis=0) == 0):
        A[rng.integers(rows), j] = 1.0
    c = rng.integers(1, 101, size=cols).astype(float)
    return GeneralLP.build(
        c, A_ineq=A, l_constr=np.ones(rows), u_constr=np.full(rows, np.inf),
        l_x=np.zeros(cols), u_x=np.ones(cols), name=f"sc_{seed}",
    )


def gen_comb_auction(items: int = 100, bids: int = 500, seed: int = 0,
                     add_prob: float = 0.65, synergy: float = 0.2) -> GeneralLP:
    """Winner-determination relaxation: ``max p'x, sum_{b owns item} x_b <= 1``.

    Each bundle starts from one item drawn by popularity and keeps adding an
    item (drawn by popularity among those left) with probability
    ``add_prob``.  The price is the sum of private item values times
    ``1 + synergy * (size - 1)``.
    """
    if items < 1 or bids < 1:
        raise ValueError("items and bids must be positive")
    rng = np.random.default_rng(seed)
    popularity = rng.random(items) + 0.1
    common = rng.uniform(1.0, 100.0, size=items)
    A = np.zeros((items, bids))
    price = np.zeros(bids)
    for b in range(bids):
        w = popularity.copy()
        bundle = [int(rng.choice(items, p=w / w.sum()))]
        w[bundle[0]] = 0.0
        while rng.random() < add_prob and w.sum() > 0:
            k = int(rng.choice(items, p=w / w.sum()))
            bundle.append(k)
            w[k] = 0.0
        A[bundle, b] = 1.0
        private = common[bundle] * rng.uniform(0.8, 1.2, size=len(bundle))
        price[b] = private.sum() * (1.0 + synergy * (len(bundle) - 1))
    return GeneralLP.build(
        -price, A_ineq=A, l_constr=np.full(items, -np.inf), u_constr=np.ones(items),
        l_x=np.zeros(bids), u_x=np.ones(bids), name=f"ca_{seed}",
    )


def cap_facility_dims(n_fac: int, n_cust: int) -> tuple[int, int, int]:
    """(equality rows, inequality rows, columns) of :func:`gen_cap_facility`."""
    return n_cust, n_fac + 1 + n_cust * n_fac, n_cust * n_fac + n_fac


def gen_cap_facility(n_fac: int = 20, n_cust: int = 15, ratio: float = 5.0, seed: int = 0) -> GeneralLP:
    """Capacitated facility location relaxation.

    Columns: assignment fractions ``x[i, j]`` (customer-major), then openings
    ``y[j]`` in [0, 1].  Rows: ``sum_j x[i, j] = 1`` per customer;
    ``sum_i d_i x[i, j] - s_j y_j <= 0`` per facility;
    ``sum_j s_j y_j >= sum_i d_i``; ``x[i, j] - y_j <= 0``.
    Capacities are rescaled so that ``sum_j s_j = ratio * sum_i d_i``.
    """
    if n_fac < 1 or n_cust < 1 or ratio < 1:
        raise ValueError("need n_fac, n_cust >= 1 and ratio >= 1")
    rng = np.random.default_rng(seed)
    cx, cy = rng.random(n_cust), rng.random(n_cust)
    fx, fy = rng.random(n_fac), rng.random(n_fac)
    demand = rng.integers(5, 36, size=n_cust).astype(float)
    cap = rng.integers(10, 161, size=n_fac).astype(float)
    fixed = rng.integers(100, 111, size=n_fac) * np.sqrt(cap) + rng.integers(0, 91, size=n_fac)
    cap = cap * ratio * demand.sum() / cap.sum()
    dist = np.sqrt((cx[:, None] - fx[None, :]) ** 2 + (cy[:, None] - fy[None, :]) ** 2)
    trans = 10.0 * dist * demand[:, None]

    nx_ = n_cust * n_fac
    n = nx_ + n_fac
    xi = lambda i, j: i * n_fac + j  # noqa: E731
    A_eq = np.zeros((n_cust, n))
    for i in range(n_cust):
        A_eq[i, xi(i, 0):xi(i, 0) + n_fac] = 1.0
    rows, lo, up = [], [], []
    for j in range(n_fac):
        r = np.zeros(n)
        r[[xi(i, j) for i in range(n_cust)]] = demand
        r[nx_ + j] = -cap[j]
        rows.append(r), lo.append(-np.inf), up.append(0.0)
    r = np.zeros(n)
    r[nx_:] = cap
    rows.append(r), lo.append(demand.sum()), up.append(np.inf)
    for i in range(n_cust):
        for j in range(n_fac):
            r = np.zeros(n)
            r[xi(i, j)], r[nx_ + j] = 1.0, -1.0
            rows.append(r), lo.append(-np.inf), up.append(0.0)
    c = np.concatenate([trans.ravel(), fixed.astype(float)])
    return GeneralLP.build(
        c, A_eq=A_eq, b_eq=np.ones(n_cust), A_ineq=np.array(rows),
        l_constr=np.array(lo), u_constr=np.array(up),
        l_x=np.zeros(n), u_x=np.ones(n), name=f"fl_{seed}",
    )


def gen_indep_set(nodes: int = 150, affinity: int = 2, seed: int = 0) -> GeneralLP:
    """Independent-set relaxation on a Barabasi-Albert graph (edge formulation)."""
    if not 1 <= affinity < nodes:
        raise ValueError("need 1 <= affinity < nodes")
    g = nx.barabasi_albert_graph(nodes, affinity, seed=int(np.random.default_rng(seed).integers(2**31)))
    edges = sorted(tuple(sorted(e)) for e in g.edges())
    A = np.zeros((len(edges), nodes))
    for k, (u, v) in enumerate(edges):
        A[k, u] = A[k, v] = 1.0
    return GeneralLP.build(
        -np.ones(nodes), A_ineq=A, l_constr=np.full(len(edges), -np.inf), u_constr=np.ones(len(edges)),
        l_x=np.zeros(nodes), u_x=np.ones(nodes), name=f"is_{seed}",
    )


def gen_random_lp(m: int = 3, n: int = 6, seed: int = 0, m_ineq: int = 0) -> GeneralLP:
    """Small random LP, feasible by construction.

    Equality rows ``A x = A x_hat`` with ``A`` uniform in [-1, 1] and
    ``x_hat`` strictly inside random finite boxes; optional two-sided
    inequality rows bracket ``A_ineq x_hat``.
    """
    if not (1 <= m <= 5 and 1 <= n <= 8 and m <= n and 0 <= m_ineq <= 3):
        raise ValueError("need 1 <= m <= min(n, 5), n <= 8, m_ineq <= 3")
    rng = np.random.default_rng(seed)
    lo = rng.uniform(-2.0, 0.0, size=n)
    up = lo + rng.uniform(0.5, 3.0, size=n)
    x_hat = lo + (up - lo) * rng.uniform(0.2, 0.8, size=n)
    A = rng.uniform(-1.0, 1.0, size=(m, n))
    G = rng.uniform(-1.0, 1.0, size=(m_ineq, n))
    gx = G @ x_hat
    return GeneralLP.build(
        rng.uniform(-1.0, 1.0, size=n), A_eq=A, b_eq=A @ x_hat,
        A_ineq=G, l_constr=gx - rng.uniform(0.1, 1.0, size=m_ineq),
        u_constr=gx + rng.uniform(0.1, 1.0, size=m_ineq),
        l_x=lo, u_x=up, name=f"rand_{m}x{n}_{seed}",
    )


@dataclass(frozen=True)
class GenSpec:
    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")


FAMILIES = {
    "km_dantzig": lambda seed, **p: gen_km_dantzig(**p)[0],
    "avis_chvatal": lambda seed, **p: gen_avis_chvatal(**p)[0],
    "cube": lambda seed, **p: gen_cube(seed=seed, **p),
    "set_cover": lambda seed, **p: gen_set_cover(seed=seed, **p),
    "comb_auction": lambda seed, **p: gen_comb_auction(seed=seed, **p),
    "cap_facility": lambda seed, **p: gen_cap_facility(seed=seed, **p),
    "indep_set": lambda seed, **p: gen_indep_set(seed=seed, **p),
    "random_lp": lambda seed, **p: gen_random_lp(seed=seed, **p),
}


def generate(spec: GenSpec) -> GeneralLP:
    return FAMILIES[spec.family](spec.seed, **spec.params)


def manifest_entry(spec: GenSpec, path: str) -> dict[str, Any]:
    entry = asdict(spec)
    entry["path"] = path
    json.dumps(entry)  # params must be JSON-serialisable
    return entry
