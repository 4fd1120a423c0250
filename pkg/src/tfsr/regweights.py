"""Regular weightings of a graph skeleton and the exact LP maximizing a(G, mu).

A skeleton admits at most one regular density: if ``A eta = 1`` is solvable
then ``rho_G = 1 / sum(eta)`` regardless of which solution is taken.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactmath import format_fraction
from .graphcore import WeightedGraph
from .graphcore.graph import CompleteGraph, GraphError


class NoRegularWeights(GraphError):
    """The all-ones vector is not in the column space of the adjacency matrix."""


class DegenerateRho(GraphError):
    pass


class Infeasible(GraphError):
    pass


OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
NO_REGULAR_WEIGHTS = "NoRegularWeights"


def _adjacency(G) -> np.ndarray:
    if isinstance(G, WeightedGraph):
        return G.adj
    return np.asarray(G, dtype=bool)


def bareiss_solve(M: Sequence[Sequence[int]], b: Sequence[int], order: Sequence[int] | None = None) -> list[Fraction] | None:
    """One rational solution of ``M x = b`` (free variables set to 0), or None.

    Fraction-free elimination on integer data; ``order`` permutes the columns
    tried as pivots, which changes the particular solution but not solvability.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    order = list(range(cols)) if order is None else list(order)
    T = [[int(M[i][j]) for j in order] + [int(b[i])] for i in range(rows)]
    prev = 1
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if T[i][c]), None)
        if p is None:
            continue
        T[r], T[p] = T[p], T[r]
        piv, Tr = T[r][c], T[r]
        for i in range(r + 1, rows):
            f, Ti = T[i][c], T[i]
            T[i] = [(piv * Ti[j] - f * Tr[j]) // prev for j in range(cols + 1)]
        pivots.append((r, c))
        prev = piv
        r += 1
        if r == rows:
            break
    if any(T[i][cols] for i in range(r, rows)):
        return None
    y = [Fraction(0)] * cols
    for i, c in reversed(pivots):
        acc = Fraction(T[i][cols]) - sum((T[i][j] * y[j] for j in range(c + 1, cols) if T[i][j]), Fraction(0))
        y[c] = acc / T[i][c]
    x = [Fraction(0)] * cols
    for c in range(cols):
        x[order[c]] = y[c]
    return x


def rho_of_skeleton(G, order: Sequence[int] | None = None) -> Fraction:
    """The unique density a regular weighting of the skeleton can have."""
    A = _adjacency(G).astype(int).tolist()
    n = len(A)
    eta = bareiss_solve(A, [1] * n, order)
    if eta is None:
        raise NoRegularWeights("1 is not in the column space of A")
    s = sum(eta, Fraction(0))
    if s == 0:
        raise DegenerateRho("solution of A eta = 1 sums to zero")
    return 1 / s


# ---------------------------------------------------------------- simplex


@dataclass
class SimplexResult:
    status: str
    value: Fraction | None = None
    x: list[Fraction] = field(default_factory=list)
    y: list[Fraction] = field(default_factory=list)


def simplex_max(c: Sequence, A: Sequence[Sequence], b: Sequence) -> SimplexResult:
    """max c.x subject to A x = b, x >= 0, exactly, with Bland's rule.

    Returns primal ``x`` and dual ``y`` (A^T y >= c, b.y = value at optimum).
    Unbounded problems report status "Unbounded".
    """
    m, nv = len(A), len(c)
    sign = [(-1 if Fraction(bi) < 0 else 1) for bi in b]
    # tableau rows: [coefficients (nv) | artificials (m) | rhs]
    T = []
    for i in range(m):
        row = [Fraction(sign[i] * A[i][j]) for j in range(nv)]
        row += [Fraction(int(k == i)) for k in range(m)]
        row.append(Fraction(sign[i] * b[i]))
        T.append(row)
    basis = [nv + i for i in range(m)]
    width = nv + m

    def pivot(r: int, col: int) -> None:
        pr = T[r]
        pv = pr[col]
        if pv != 1:
            T[r] = pr = [v / pv for v in pr]
        nz = [j for j in range(width + 1) if pr[j]]
        for i in range(m):
            if i != r:
                f = T[i][col]
                if f:
                    Ti = T[i]
                    for j in nz:
                        Ti[j] -= f * pr[j]
        basis[r] = col

    def run(cost: list[Fraction], allowed: int) -> bool:
        """Optimize ``cost`` over columns < allowed; False when unbounded."""
        while True:
            cb = [cost[basis[i]] for i in range(m)]
            in_basis = set(basis)
            enter = None
            for j in range(allowed):
                if j in in_basis:
                    continue
                red = cost[j] - sum((cb[i] * T[i][j] for i in range(m) if T[i][j] and cb[i]), Fraction(0))
                if red > 0:
                    enter = j
                    break
            if enter is None:
                return True
            best = None
            for i in range(m):
                if T[i][enter] > 0:
                    ratio = T[i][width] / T[i][enter]
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            pivot(best[1], enter)

    # phase 1: maximize -sum(artificials)
    cost1 = [Fraction(0)] * nv + [Fraction(-1)] * m
    run(cost1, width)
    if any(T[i][width] for i in range(m) if basis[i] >= nv):
        return SimplexResult("Infeasible")
    # drive zero artificials out where a real column can replace them
    for i in range(m):
        if basis[i] >= nv:
            col = next((j for j in range(nv) if T[i][j] and j not in basis), None)
            if col is not None:
                pivot(i, col)
    cost2 = [Fraction(x) for x in c] + [Fraction(0)] * m
    if not run(cost2, nv):
        return SimplexResult("Unbounded")
    x = [Fraction(0)] * nv
    for i in range(m):
        if basis[i] < nv:
            x[basis[i]] = T[i][width]
    cb = [cost2[basis[i]] for i in range(m)]
    y = [sign[k] * sum((cb[i] * T[i][nv + k] for i in range(m)), Fraction(0)) for k in range(m)]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return SimplexResult("Optimal", value, x, y)


# ---------------------------------------------------------------- LPs


@dataclass
class LPResult:
    status: str
    rho_G: Fraction | None = None
    optimum_a: Fraction | None = None
    weights: list[Fraction] = field(default_factory=list)
    certificate: dict = field(default_factory=dict)
    pairs: list[tuple[int, int]] = field(default_factory=list)

    def text(self) -> str:
        parts = [f"status={self.status}"]
        if self.rho_G is not None:
            parts.append(f"rho_G={format_fraction(self.rho_G)}")
        if self.optimum_a is not None:
            parts.append(f"a*={format_fraction(self.optimum_a)}")
        if self.weights:
            if len(set(self.weights)) == 1:
                parts.append("weights=uniform")
            else:
                parts.append("weights=" + ",".join(format_fraction(w) for w in self.weights))
        return " ".join(parts)


def _pair_groups(adj: np.ndarray) -> list[tuple[tuple[int, int], list[int]]]:
    """One representative non-adjacent pair per distinct common neighbourhood."""
    n = adj.shape[0]
    seen: dict[tuple[int, ...], tuple[int, int]] = {}
    for u in range(n):
        for v in range(u + 1, n):
            if not adj[u, v]:
                key = tuple(int(w) for w in np.flatnonzero(adj[u] & adj[v]))
                seen.setdefault(key, (u, v))
    return [(pair, list(key)) for key, pair in seen.items()]


def _regular_rows(adj: np.ndarray, rho: Fraction, n_extra: int):
    """Rows of sum(eta) = 1 and A eta - rho*sum(eta)... written as A eta = rho."""
    n = adj.shape[0]
    rows, rhs = [], []
    rows.append([Fraction(1)] * n + [Fraction(0)] * n_extra)
    rhs.append(Fraction(1))
    for v in range(n):
        rows.append([Fraction(int(x)) for x in adj[v]] + [Fraction(0)] * n_extra)
        rhs.append(rho)
    return rows, rhs


def optimize_a(G) -> LPResult:
    """Maximize a over regular weightings of the skeleton (exact simplex)."""
    adj = _adjacency(G)
    n = adj.shape[0]
    try:
        rho = rho_of_skeleton(adj)
    except NoRegularWeights:
        return LPResult(NO_REGULAR_WEIGHTS)
    groups = _pair_groups(adj)
    if not groups:
        raise CompleteGraph("no distinct non-adjacent pair: a is unbounded")
    k = len(groups)
    # variables: eta (n), a, slack per pair group (k)
    extra = 1 + k
    rows, rhs = _regular_rows(adj, rho, extra)
    for g, (_, common) in enumerate(groups):
        row = [Fraction(0)] * (n + extra)
        for w in common:
            row[w] = Fraction(1)
        row[n] = Fraction(-1)
        row[n + 1 + g] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    cost = [Fraction(0)] * n + [Fraction(1)] + [Fraction(0)] * k
    res = simplex_max(cost, rows, rhs)
    if res.status != "Optimal":
        return LPResult(INFEASIBLE, rho_G=rho)
    y = res.y
    cert = {"sum": y[0], "regular": y[1 : 1 + n], "pairs": y[1 + n :]}
    return LPResult(OPTIMAL, rho, res.value, res.x[:n], cert, [p for p, _ in groups])


def verify_certificate(G, result: LPResult) -> bool:
    """Check dual feasibility and zero duality gap from scratch."""
    if result.status != OPTIMAL:
        return False
    adj = _adjacency(G)
    n = adj.shape[0]
    y0, yr, yp = result.certificate["sum"], result.certificate["regular"], result.certificate["pairs"]
    pairs = result.pairs
    rho = result.rho_G
    # primal feasibility
    w = result.weights
    if any(x < 0 for x in w) or sum(w) != 1:
        return False
    for v in range(n):
        if sum((w[u] for u in range(n) if adj[v, u]), Fraction(0)) != rho:
            return False
    for u, v in pairs:
        if sum((w[x] for x in range(n) if adj[u, x] and adj[v, x]), Fraction(0)) < result.optimum_a:
            return False
    # dual feasibility: column of eta_u, of a, of each slack
    common = [[x for x in range(n) if adj[u, x] and adj[v, x]] for u, v in pairs]
    for u in range(n):
        col = y0 + sum((yr[v] for v in range(n) if adj[v, u]), Fraction(0))
        col += sum((yp[g] for g, cm in enumerate(common) if u in cm), Fraction(0))
        if col < 0:
            return False
    if -sum(yp, Fraction(0)) < 1:
        return False
    if any(-x < 0 for x in yp):
        return False
    dual_value = y0 + rho * sum(yr, Fraction(0))
    return dual_value == result.optimum_a


def positive_feasibility(G) -> list[Fraction] | None:
    """Regular weights maximizing the smallest weight, when that is strictly positive."""
    adj = _adjacency(G)
    n = adj.shape[0]
    rho = rho_of_skeleton(adj)
    # variables: eta (n), t, s (n) with eta_v - t - s_v = 0
    extra = 1 + n
    rows, rhs = _regular_rows(adj, rho, extra)
    for v in range(n):
        row = [Fraction(0)] * (n + extra)
        row[v] = Fraction(1)
        row[n] = Fraction(-1)
        row[n + 1 + v] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    cost = [Fraction(0)] * n + [Fraction(1)] + [Fraction(0)] * n
    res = simplex_max(cost, rows, rhs)
    if res.status != "Optimal":
        raise Infeasible(f"no non-negative regular weights (rho_G = {rho})")
    if res.value <= 0:
        return None
    return res.x[:n]
