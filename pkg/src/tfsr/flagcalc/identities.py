"""Flag identities and inequalities checked at every valid anchor tuple.

Each identity compares two independently summed sides: usually a flag
expression against either a second flag expression or a direct set-measure
computation from ``graphcore``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..exactmath import format_fraction
from ..graphcore import (
    WeightedGraph,
    a_value,
    degree_measure,
    is_twin_free,
    minimizing_pairs,
    p3n,
    regular_density,
)
from ..graphcore.graph import CompleteGraph
from .density import anchor_tuples, evaluate
from .flags import (
    EDGE,
    I3_N,
    K32_N,
    K32_P,
    P3,
    P3_1B,
    P3_1C,
    P3_EB,
    P3_N,
    P3BAR_NB,
    P3BAR_NC,
    P4_N,
    RHO,
    S4_I,
    S4_N,
    T4_I,
    T4_N,
    TYPE_0,
    TYPE_1,
    TYPE_D,
    TYPE_D2,
    TYPE_E,
    TYPE_I,
    TYPE_N,
    TYPE_P,
    TYPE_Q1,
    TYPE_Q2,
    U5_P,
    V4_N1,
    V4_N2,
    V5_D1,
    V5_D2,
    V5_P1,
    V5_P2,
    Const,
    Expr,
    FlagType,
    lift,
    type_flag,
    unlabel,
)

Side = Expr | Callable[[WeightedGraph, tuple[int, ...]], Fraction]


@dataclass
class CheckResult:
    claim: str
    kind: str  # "identity" or "inequality"
    applicable: bool
    holds: bool | None
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    anchors_checked: int = 0
    max_discrepancy: Fraction | None = None
    anchor: tuple[int, ...] | None = None

    def line(self) -> str:
        def fmt(x):
            return "-" if x is None else format_fraction(x)

        holds = "n/a" if self.holds is None else str(self.holds).lower()
        return (
            f"{self.claim}\tapplicable={str(self.applicable).lower()}\tholds={holds}"
            f"\tlhs={fmt(self.lhs)}\trhs={fmt(self.rhs)}\tanchors={self.anchors_checked}"
        )


@dataclass
class SuiteReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.holds is not False for c in self.checks)

    def __getitem__(self, claim: str) -> CheckResult:
        for c in self.checks:
            if c.claim == claim:
                return c
        raise KeyError(claim)

    def text(self) -> str:
        return "\n".join(c.line() for c in self.checks)


def _side(G, s: Side, anchors) -> Fraction:
    if isinstance(s, Expr):
        return evaluate(G, s, anchors)
    return Fraction(s(G, anchors))


def check_identity(G, claim: str, lhs: Side, rhs: Side, anchors_iter) -> CheckResult:
    res = CheckResult(claim, "identity", True, True, max_discrepancy=Fraction(0))
    for anc in anchors_iter:
        left, right = _side(G, lhs, anc), _side(G, rhs, anc)
        res.anchors_checked += 1
        diff = abs(left - right)
        if res.lhs is None or diff > res.max_discrepancy:
            res.lhs, res.rhs, res.anchor, res.max_discrepancy = left, right, anc, diff
    res.holds = res.max_discrepancy == 0
    return res


def check_inequality(G, claim: str, lhs: Side, rhs: Side, anchors_iter, applicable: bool = True) -> CheckResult:
    """lhs <= rhs everywhere; records the tightest (or most violated) anchor."""
    res = CheckResult(claim, "inequality", applicable, None)
    if not applicable:
        return res
    worst = None
    for anc in anchors_iter:
        left, right = _side(G, lhs, anc), _side(G, rhs, anc)
        res.anchors_checked += 1
        if worst is None or right - left < worst:
            worst = right - left
            res.lhs, res.rhs, res.anchor = left, right, anc
    res.holds = worst is None or worst >= 0
    return res


def _tuples(G, sigma: FlagType):
    return list(anchor_tuples(G, sigma))


def identity_suite(G: WeightedGraph) -> SuiteReport:
    """Evaluate every identity and inequality whose hypotheses ``G`` meets."""
    rep = SuiteReport()
    add = rep.checks.append
    e = degree_measure
    N = _tuples(G, TYPE_N)
    P = _tuples(G, TYPE_P)
    I = _tuples(G, TYPE_I)
    E = _tuples(G, TYPE_E)
    V = [(v,) for v in range(G.n) if G.weights[v] > 0]
    D1 = _tuples(G, TYPE_D)
    D2 = _tuples(G, TYPE_D2)
    Q1 = _tuples(G, TYPE_Q1)
    Q2 = _tuples(G, TYPE_Q2)
    rho = regular_density(G)
    regular = rho is not None

    # identities valid on every triangle-free graph
    add(check_identity(G, "i3N", I3_N, lambda G, t: 1 - e(G, t[0]) - e(G, t[1]) + p3n(G, t[0], t[1]), N))
    add(check_identity(G, "p3n_split", P3_N + P3BAR_NC, lambda G, t: e(G, t[1]), N))
    add(check_identity(G, "p3n_measure", P3_N, lambda G, t: p3n(G, t[0], t[1]), N))
    add(check_identity(G, "rho_expansion", lift(RHO, TYPE_N, ()), T4_N + S4_N + V4_N1 + V4_N2 + P4_N, N))
    add(check_identity(G, "kuvw", lift(P3_1B, TYPE_P, 3), K32_P + U5_P + V5_P1 + V5_P2, P))
    add(check_identity(G, "sst", unlabel(S4_I * (S4_I + T4_I), (1, 2)), Fraction(1, 2) * unlabel(K32_P + U5_P, (1, 2)), N))
    add(check_identity(G, "s4_square", unlabel(S4_I * S4_I, (1, 2)), Fraction(1, 3) * K32_N, N))
    add(check_identity(G, "k32_split", Fraction(1, 3) * K32_N, Fraction(1, 2) * unlabel(K32_P, (1, 2)), N))
    add(check_identity(G, "s4t4", unlabel(S4_I * T4_I, (1, 2)), Fraction(1, 2) * unlabel(U5_P, (1, 2)), N))
    add(check_identity(G, "s4n", S4_N, 2 * unlabel(lift(EDGE, TYPE_P, 3), (1, 2)), N))
    add(check_identity(G, "t4n_average", T4_N, unlabel(T4_I, (1, 2)), N))
    add(check_identity(G, "qv1", unlabel(lift(EDGE, TYPE_Q1, 3), (1, 2)), Fraction(1, 2) * (V4_N1 + P4_N), N))
    add(check_identity(G, "qv2", unlabel(lift(EDGE, TYPE_Q2, 3), (1, 2)), Fraction(1, 2) * (V4_N2 + P4_N), N))
    add(check_identity(G, "p4n", unlabel(lift(P3_N, TYPE_Q1, (2, 3)), (1, 2)), Fraction(1, 2) * P4_N, N))
    add(check_identity(G, "v1v2specific", type_flag(TYPE_D, (1, 2, 3)), lift(P3BAR_NB, TYPE_P, (1, 2)), P))
    add(check_identity(G, "v5p1", V5_P1, 2 * unlabel(V5_D1, (1, 2, 3)), P))
    add(check_identity(G, "v5p2", V5_P2, 2 * unlabel(V5_D2, (1, 2, 3)), P))
    add(check_identity(G, "v5d1", V5_D1, lift(P3_N, TYPE_D, (3, 4)), D1))
    add(check_identity(G, "v5d2", V5_D2, lift(P3_N, TYPE_D2, (3, 4)), D2))
    add(check_identity(G, "e_v3", lift(EDGE, TYPE_I, 3),
                       T4_I + lift(P3_N, TYPE_I, (1, 3)) + lift(P3_N, TYPE_I, (2, 3)) - S4_I, I))
    add(check_identity(G, "p3eb", P3_EB, lift(EDGE, TYPE_E, 2), E))
    add(check_identity(G, "p3eb_average", unlabel(P3_EB, 1), Fraction(1, 2) * P3_1B, V))
    add(check_identity(G, "p3_counts", 3 * unlabel(P3_N), P3, [()]))
    add(check_identity(G, "p3_center", unlabel(P3_1C), unlabel(P3_N), [()]))

    # identities that need regularity
    if regular:
        const = lambda sigma, x: Const(sigma, x)  # noqa: E731
        add(check_identity(G, "i3N_regular", I3_N, lambda G, t: 1 - 2 * rho + p3n(G, t[0], t[1]), N))
        add(check_identity(G, "kuvw_regular", lift(P3_1B, TYPE_P, 3), const(TYPE_P, 2 * rho**2), P))
        add(check_identity(G, "p3eb_regular", P3_EB, const(TYPE_E, rho), E))
        add(check_identity(G, "s4n_regular", S4_N, lambda G, t: 2 * rho * p3n(G, t[0], t[1]), N))
        add(check_identity(G, "qv1_regular", unlabel(lift(EDGE, TYPE_Q1, 3), (1, 2)),
                           lambda G, t: rho * (rho - p3n(G, t[0], t[1])), N))
        add(check_identity(G, "p3_regular", unlabel(P3_N), Const(TYPE_0, rho**2), [()]))
    else:
        for name in ("i3N_regular", "kuvw_regular", "p3eb_regular", "s4n_regular", "qv1_regular", "p3_regular"):
            add(CheckResult(name, "identity", False, None))

    # inequalities at extremal configurations
    try:
        a = a_value(G)
    except CompleteGraph:
        a = None
    tf = is_twin_free(G)
    extremal = regular and tf and a is not None
    pairs = [pr for uv in minimizing_pairs(G) for pr in (uv, uv[::-1])] if a is not None else []
    add(check_inequality(G, "trivial_bound", lambda G, t: a, lambda G, t: rho**2 / (1 - rho), [()], regular and a is not None))
    add(check_inequality(G, "trivial_bound_flags", Const(TYPE_0, a or 0) * type_flag(TYPE_N, ()), unlabel(P3_N), [()], a is not None))
    add(check_inequality(G, "pair_gap", lambda G, t: p3n(G, t[0], t[1]), lambda G, t: rho - a,
                         [t for t in N if t[0] != t[1]], extremal))
    add(check_inequality(G, "t4I", T4_I, lambda G, t: evaluate(G, S4_I, t) + rho - 2 * a, I, regular and a is not None))
    add(check_inequality(G, "t4n", lambda G, t: rho - 2 * (rho**2 + (rho - a) ** 2), T4_N, pairs, extremal))
    add(check_inequality(G, "s4t4_bound", unlabel(S4_I * (S4_I + T4_I), (1, 2)),
                         lambda G, t: a * (rho**2 - 2 * a * (rho - a)), pairs, extremal))
    w_triples = [(u, v, w) for u, v in pairs for (x, y, w) in P if (x, y) == (u, v)]
    add(check_inequality(G, "kplusu", K32_P + U5_P, lambda G, t: 2 * ((rho - a) ** 2 + a**2), w_triples, extremal))
    add(check_inequality(G, "v5p1_lower", lambda G, t: 2 * a * (rho - a), V5_P1, w_triples, extremal))
    add(check_inequality(G, "v5p2_lower", lambda G, t: 2 * a * (rho - a), V5_P2, w_triples, extremal))
    add(check_inequality(G, "p4n_lower", lambda G, t: a * (rho - a), Fraction(1, 2) * P4_N, pairs, extremal))
    add(check_identity(G, "v1v2_minimizing", type_flag(TYPE_D, (1, 2, 3)), lambda G, t: rho - a, w_triples)
        if extremal else CheckResult("v1v2_minimizing", "identity", False, None))
    return rep
