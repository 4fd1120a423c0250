"""Local structure around a non-adjacent pair and the claims proved from it.

For a non-adjacent pair (v1, v2): ``P`` is their common neighbourhood, ``I``
the set of vertices adjacent to neither (it contains v1 and v2), and ``c = |P|``
ignoring weights. Up to four vertices ``w_1..w_4`` of ``P`` are fixed and
``F_S`` is the measure of vertices whose neighbourhood meets ``{w_i}`` in
exactly ``{w_i : i in S}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from ..exactmath import format_fraction
from ..graphcore import (
    WeightedGraph,
    a_value,
    degree_measure,
    is_twin_free,
    mask_members,
    p3n,
    regular_density,
)
from ..graphcore.graph import GraphError
from .density import density
from .flags import TYPE_I, TYPE_I4, TYPE_N, I3_N, S4_I, Flag, F_I
from .identities import CheckResult


class NotRegular(GraphError):
    pass


class AdjacentPair(GraphError):
    pass


_REL = {
    "<=": lambda x, y: x <= y,
    "<": lambda x, y: x < y,
    ">=": lambda x, y: x >= y,
    ">": lambda x, y: x > y,
    "==": lambda x, y: x == y,
}


def _slack(rel: str, x, y) -> Fraction:
    if rel in ("<=", "<"):
        return y - x
    if rel in (">=", ">"):
        return x - y
    return -abs(x - y)


def _check(claim: str, applicable: bool, rel: str, instances) -> CheckResult:
    """Record the worst (smallest slack) of ``(lhs, rhs)`` instances under ``rel``."""
    res = CheckResult(claim, "identity" if rel == "==" else "inequality", applicable, None)
    worst = None
    for lhs, rhs in instances:
        res.anchors_checked += 1
        s = _slack(rel, lhs, rhs)
        if worst is None or s < worst:
            worst, res.lhs, res.rhs = s, lhs, rhs
        if not _REL[rel](lhs, rhs):
            res.holds = False
    if res.anchors_checked and res.holds is None:
        res.holds = True
    return res


def _label(S) -> str:
    return "".join(str(i) for i in sorted(S)) or "0"


def F_I4(S) -> Flag:
    """Four labelled independent vertices plus one adjacent to exactly S."""
    S = sorted(set(S))
    return Flag(TYPE_I4, 5, [(i, 5) for i in S], "F^I4_{" + _label(S) + "}")


@dataclass
class CaseAnalysisReport:
    v1: int
    v2: int
    a: Fraction
    rho: Fraction
    P: list[int]
    I: list[int]
    c: int
    W: list[int]
    a_i: dict[int, Fraction] = field(default_factory=dict)
    F: dict[frozenset, Fraction] = field(default_factory=dict)
    f: list[Fraction] = field(default_factory=list)
    F_hat: dict[frozenset, Fraction] = field(default_factory=dict)
    eps: dict[int, Fraction] = field(default_factory=dict)
    mu_P: Fraction = Fraction(0)
    minimizing: bool = False
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """Every applicable check holds."""
        return all(c.holds is not False for c in self.checks if c.applicable)

    def __getitem__(self, claim: str) -> CheckResult:
        for c in self.checks:
            if c.claim == claim:
                return c
        raise KeyError(claim)

    def text(self) -> str:
        head = [
            f"pair\t{self.v1} {self.v2}",
            f"a\t{format_fraction(self.a)}",
            f"rho\t{format_fraction(self.rho)}",
            f"c\t{self.c}",
            f"mu(P)\t{format_fraction(self.mu_P)}",
        ]
        for S, val in sorted(self.F.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
            head.append(f"F_{_label(S)}\t{format_fraction(val)}")
        for nu, val in enumerate(self.f):
            head.append(f"f_{nu}\t{format_fraction(val)}")
        return "\n".join(head + [c.line() for c in self.checks])


def _F_table(G: WeightedGraph, W: list[int]) -> dict[frozenset, Fraction]:
    """F_S for every non-empty S (1-based indices into W)."""
    m = G.masks
    out = {frozenset(S): Fraction(0) for r in range(1, len(W) + 1) for S in combinations(range(1, len(W) + 1), r)}
    for v in range(G.n):
        if not G.weights[v]:
            continue
        S = frozenset(i + 1 for i, w in enumerate(W) if (m[v] >> w) & 1)
        if S:
            out[S] += G.weights[v]
    return out


def _members(G: WeightedGraph, W: list[int], S) -> list[int]:
    m = G.masks
    S = set(S)
    return [
        v for v in range(G.n)
        if G.weights[v] and {i + 1 for i, w in enumerate(W) if (m[v] >> w) & 1} == S
    ]


def _hat(F: dict[frozenset, Fraction], S) -> Fraction:
    S = set(S)
    return sum((val for T, val in F.items() if T & S), Fraction(0))


def case_analysis(G: WeightedGraph, v1: int, v2: int, all_subsets: bool | None = None) -> CaseAnalysisReport:
    """Compute the local quantities at (v1, v2) and evaluate every claim.

    With ``c > 4`` the first four vertices of ``P`` are used as ``w_1..w_4``;
    ``all_subsets`` additionally re-checks the hypothesis-free bounds over all
    3- and 4-subsets of ``P`` (default: when ``c <= 8``).
    """
    rho = regular_density(G)
    if rho is None:
        raise NotRegular("case analysis needs a regular weighted graph")
    if v1 == v2 or G.adj[v1, v2]:
        raise AdjacentPair(f"({v1}, {v2}) is not a pair of distinct non-adjacent vertices")
    m = G.masks
    a = a_value(G)
    e = degree_measure
    P = mask_members(m[v1] & m[v2])
    I = [v for v in range(G.n) if not (m[v1] | m[v2]) >> v & 1]
    Isup = [v for v in I if G.weights[v]]
    c = len(P)
    W = P[:4]
    rep = CaseAnalysisReport(v1, v2, a, rho, P, I, c, W)
    rep.minimizing = p3n(G, v1, v2) == a
    rep.mu_P = G.measure(P)
    rep.a_i = {i + 1: G.weights[w] for i, w in enumerate(W)}
    rep.F = _F_table(G, W)
    muI = G.measure(I)
    k = len(W)
    rep.f = [Fraction(0)] * (k + 1)
    for S, val in rep.F.items():
        rep.f[len(S)] += val
    rep.f[0] = muI - sum(rep.f[1:], Fraction(0))
    rep.F_hat = {frozenset(S): _hat(rep.F, S) for r in range(1, k + 1) for S in combinations(range(1, k + 1), r)}
    F = lambda *S: rep.F[frozenset(S)]  # noqa: E731
    if k == 3:
        for i, j, l in ((1, 2, 3), (2, 1, 3), (3, 1, 2)):
            rep.eps[i] = rep.a_i[i] + F(j, l) - 4 * a + rho

    add = rep.checks.append
    tf = is_twin_free(G)
    mini = rep.minimizing
    first = a > rho / 3
    low = rho <= Fraction(1, 3) and a > 0
    if all_subsets is None:
        all_subsets = c <= 8

    # hypothesis-free facts
    add(_check("mu_P", True, "==", [(G.measure(P), p3n(G, v1, v2))]))
    add(_check("i3N", True, "==", [(muI, 1 - e(G, v1) - e(G, v2) + p3n(G, v1, v2)),
                                   (density(G, I3_N, (v1, v2)), 1 - 2 * rho + p3n(G, v1, v2))]))
    add(_check("pair_gap", tf, "<=", [(p3n(G, v1, v2), rho - a)]))
    add(_check("S_bound", True, ">=", [
        (rho, p3n(G, v3, v1) + p3n(G, v3, v2) + p3n(G, v3, w) - density(G, S4_I, (v1, v2, v3)))
        for v3 in Isup for w in P if not (m[w] >> v3) & 1
    ] + [
        (p3n(G, v3, v1) + p3n(G, v3, v2) + p3n(G, v3, w), 3 * a)
        for v3 in Isup for w in P if not (m[w] >> v3) & 1 and v3 not in (v1, v2)
    ]))
    add(_check("F_hat_total", True, "==", [(rep.F_hat.get(frozenset(range(1, k + 1)), Fraction(0)) + rep.f[0], muI)]))

    # claims valid at a minimizing pair with rho <= 1/3
    add(_check("v3_bound", mini and low, ">", [(muI - G.measure(m[w] & sum(1 << v for v in I)), 0) for w in P]))
    add(_check("w_bound", mini and first, ">", [(density(G, S4_I, (v1, v2, v3)), 0) for v3 in Isup]))
    add(_check("c_at_least_2", mini and low and first, ">=", [(c, 2)]))

    # c = 2
    c2 = mini and c == 2
    if c == 2:
        w, w2 = sorted(P, key=lambda x: (-G.weights[x], x))
        add(_check("twofifth", c2 and low, "<=", [(a, Fraction(2, 5) * rho)]))
        add(_check("c2_cover", c2 and first, "==", [(density(G, I3_N, (v1, v2)) + density(G, I3_N, (w, w2)), 1)]))
        add(_check("c2_two_rho", c2 and first, "<=", [(a, 2 * rho - Fraction(1, 2))]))
    else:
        for name in ("twofifth", "c2_cover", "c2_two_rho"):
            add(CheckResult(name, "inequality", False, None))

    # any three vertices of P
    triples = list(combinations(P, 3)) if all_subsets else [tuple(P[:3])] if c >= 3 else []
    inst_ivsij, inst_opp, inst_ijvsk, inst_dens = [], [], [], []
    for T in triples:
        FT = _F_table(G, list(T))
        G3 = lambda *S: FT[frozenset(S)]  # noqa: E731
        for i, j, l in permutations((1, 2, 3)):
            inst_ivsij.append((G3(i) + G3(i, j), a))
            inst_opp.append((G3(i, j) + G3(1, 2, 3), a))
            if G3(i, j) > 0:
                inst_ijvsk.append((G3(l), a))
        f1 = G3(1) + G3(2) + G3(3)
        f2 = G3(1, 2) + G3(1, 3) + G3(2, 3)
        inst_dens.append((f1 + 2 * f2 + 3 * G3(1, 2, 3), 3 * rho))
    add(_check("ivsij", tf and c >= 3, ">=", inst_ivsij))
    add(_check("opposite", c >= 3, ">=", inst_opp))
    add(_check("ijvsk", c >= 3, ">=", inst_ijvsk))
    add(_check("density", c >= 3, "==", inst_dens))
    if k == 3:
        add(_check("flag_F_S", True, "==", [
            (rep.F[frozenset(S)], density(G, F_I(S), tuple(W))) for S in rep.F
        ]))
    elif k == 4:
        add(_check("flag_F_S", True, "==", [
            (rep.F[frozenset(S)], density(G, F_I4(S), tuple(W))) for S in rep.F
        ]))

    # c = 3, needs a > rho/3
    c3 = mini and c == 3 and first and tf
    names3 = ("non_zero", "p4", "almost_last", "fij", "Fi", "sophisticated",
              "volume", "f1", "f2", "resolving", "three_fourteenths")
    if k == 3 and c == 3:
        f1, f2, f3 = rep.f[1], rep.f[2], rep.f[3]
        add(_check("non_zero", c3, ">", [(F(i), 0) for i in (1, 2, 3)]))
        edge_inst = []
        for i, j in permutations((1, 2, 3), 2):
            A, B = _members(G, W, {i}), _members(G, W, {j})
            edge_inst.append((int(any(m[x] >> y & 1 for x in A for y in B)), 1))
        add(_check("p4", c3, ">=", edge_inst))
        add(_check("almost_last", c3, ">=", [(F(i) + F(*sorted((i, j))) + F(*sorted((i, l))), 2 * a)
                                             for i, j, l in ((1, 2, 3), (2, 1, 3), (3, 1, 2))]))
        add(_check("fij", c3, ">", [(F(i, j), 0) for i, j in combinations((1, 2, 3), 2)]))
        add(_check("Fi", c3, ">=", [(F(i), a) for i in (1, 2, 3)]))
        add(_check("sophisticated", c3, ">=", [(rep.eps[i], 0) for i in (1, 2, 3)]))
        add(_check("volume", c3, "==", [(f1 + f2 + f3, 1 - 2 * rho + a)]))
        add(_check("f1", c3, ">=", [(f1, 3 * a)]))
        add(_check("f2", c3, ">=", [(f2, 11 * a - 3 * rho)]))
        add(_check("resolving", c3, "==", [(2 * f1 + f2, 3 - 9 * rho + 3 * a)]))
        add(_check("three_fourteenths", c3, "<=", [(a, Fraction(3, 14) * (1 - 2 * rho))]))
    else:
        for name in names3:
            add(CheckResult(name, "inequality", False, None))

    # c >= 4
    quads = list(combinations(P, 4)) if all_subsets else [tuple(W)] if c >= 4 else []
    hat_i, hat_ij, hat_ijk, hat_all, lem = [], [], [], [], []
    for Q in quads:
        FQ = _F_table(G, list(Q))
        for S in combinations(range(1, 5), 1):
            hat_i.append((_hat(FQ, S), rho))
        for S in combinations(range(1, 5), 2):
            hat_ij.append((_hat(FQ, S), rho + a))
        for S in combinations(range(1, 5), 3):
            hat_ijk.append((_hat(FQ, S), rho + 2 * a))
        hat_all.append((_hat(FQ, range(1, 5)), muI))
        lem.append((_hat(FQ, range(1, 5)), rho + 3 * a))
    c4 = mini and c >= 4 and first and tf
    add(_check("F_hat_i", c >= 4, "==", hat_i))
    add(_check("F_hat_ij", c >= 4 and tf, ">=", hat_ij))
    add(_check("F_hat_ijk", c >= 4 and tf, ">=", hat_ijk))
    add(_check("F_hat_1234_volume", c >= 4, "<=", hat_all))
    add(_check("four_cover", c4, ">=", lem))
    add(_check("one_minus_three_rho", c4, "<=", [(a, (1 - 3 * rho) / 2)]))
    return rep
