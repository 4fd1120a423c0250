"""Types, flags and formal combinations of them.

Vertex labels in the string constructors and in every ``eta`` argument are
1-based, matching the usual flag notation; storage is 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from typing import Iterable


def _parse_edges(edges: str | Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    if isinstance(edges, str):
        pairs = [(int(tok[0]), int(tok[1])) for tok in edges.split()]
    else:
        pairs = list(edges)
    out = set()
    for i, j in pairs:
        if i == j:
            raise ValueError("loops are not allowed in flags")
        out.add((min(i, j) - 1, max(i, j) - 1))
    return frozenset(out)


def _has_triangle(size: int, edges: frozenset[tuple[int, int]]) -> bool:
    adj = [set() for _ in range(size)]
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    return any(adj[i] & adj[j] for i, j in edges)


@dataclass(frozen=True)
class FlagType:
    """A fully labelled graph on ``k`` vertices."""

    k: int
    edges: frozenset
    name: str = ""

    @classmethod
    def of(cls, k: int, edges: str | Iterable[tuple[int, int]] = "", name: str = "") -> "FlagType":
        es = _parse_edges(edges)
        if any(j >= k for _, j in es):
            raise ValueError("edge label exceeds type size")
        return cls(k, es, name)

    def __eq__(self, other):
        return isinstance(other, FlagType) and (self.k, self.edges) == (other.k, other.edges)

    def __hash__(self):
        return hash((self.k, self.edges))

    def __repr__(self):
        return self.name or f"FlagType({self.k}, {sorted(self.edges)})"

    def restrict(self, eta: tuple[int, ...]) -> "FlagType":
        """The type sigma|eta on len(eta) vertices."""
        idx = [e - 1 for e in eta]
        es = {
            (a, b)
            for a in range(len(idx))
            for b in range(a + 1, len(idx))
            if (min(idx[a], idx[b]), max(idx[a], idx[b])) in self.edges
        }
        return FlagType(len(idx), frozenset(es))

    def induced_by(self, masks, anchors) -> bool:
        """Do the anchor vertices span this type (coinciding vertices are non-adjacent)?"""
        for i in range(self.k):
            mi = masks[anchors[i]]
            for j in range(i + 1, self.k):
                if bool((mi >> anchors[j]) & 1) != ((i, j) in self.edges):
                    return False
        return True


class Expr:
    """Formal R-linear combination of sigma-flags, closed under pointwise products."""

    type: FlagType

    def __add__(self, other):
        return FlagSum.build(self.type, [(self, 1), (_lift_const(other, self.type), 1)])

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return FlagSum.build(self.type, [(self, 1), (_lift_const(other, self.type), -1)])

    def __rsub__(self, other):
        return FlagSum.build(self.type, [(_lift_const(other, self.type), 1), (self, -1)])

    def __neg__(self):
        return FlagSum.build(self.type, [(self, -1)])

    def __mul__(self, other):
        if isinstance(other, Expr):
            if other.type != self.type:
                raise TypeError(f"cannot multiply {self.type!r}-flag by {other.type!r}-flag")
            return Product(self.type, (self, other))
        return FlagSum.build(self.type, [(self, Fraction(other))])

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        return self * (1 / Fraction(other))


def _lift_const(x, sigma: FlagType) -> Expr:
    if isinstance(x, Expr):
        if x.type != sigma:
            raise TypeError(f"type mismatch: {x.type!r} vs {sigma!r}")
        return x
    return Const(sigma, Fraction(x))


class Flag(Expr):
    """Partially labelled graph: the first ``type.k`` vertices carry labels."""

    def __init__(self, sigma: FlagType, size: int, edges: str | Iterable[tuple[int, int]] = "", name: str = ""):
        es = _parse_edges(edges)
        if size < sigma.k:
            raise ValueError("flag smaller than its type")
        if any(j >= size for _, j in es):
            raise ValueError("edge label exceeds flag size")
        if {e for e in es if e[1] < sigma.k} != set(sigma.edges):
            raise ValueError(f"flag {name or sorted(es)} does not restrict to its type {sigma!r}")
        if _has_triangle(size, es):
            raise ValueError("flags must be triangle-free")
        self.type = sigma
        self.size = size
        self.edges = es
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Flag) and (self.type, self.size, self.patterns) == (other.type, other.size, other.patterns)

    def __hash__(self):
        return hash((self.type, self.size, self.patterns))

    def __repr__(self):
        return self.name or f"Flag({self.type!r}, {self.size}, {sorted(self.edges)})"

    @property
    def free(self) -> int:
        return self.size - self.type.k

    @cached_property
    def patterns(self) -> frozenset[frozenset[tuple[int, int]]]:
        """All edge sets obtained by permuting the unlabelled vertices."""
        k, size = self.type.k, self.size
        out = set()
        for perm in permutations(range(k, size)):
            relabel = list(range(k)) + list(perm)
            out.add(frozenset((min(relabel[i], relabel[j]), max(relabel[i], relabel[j])) for i, j in self.edges))
        return frozenset(out)


class Const(Expr):
    """Constant ``value`` viewed as a sigma-flag (value times the type indicator)."""

    def __init__(self, sigma: FlagType, value):
        self.type = sigma
        self.value = Fraction(value)

    def __eq__(self, other):
        return isinstance(other, Const) and (self.type, self.value) == (other.type, other.value)

    def __hash__(self):
        return hash(("const", self.type, self.value))

    def __repr__(self):
        return f"{self.value}"


class FlagSum(Expr):
    def __init__(self, sigma: FlagType, terms: tuple[tuple[Expr, Fraction], ...]):
        self.type = sigma
        self.terms = terms

    @classmethod
    def build(cls, sigma: FlagType, items) -> "FlagSum":
        acc: dict[Expr, Fraction] = {}
        order: list[Expr] = []
        for expr, c in items:
            c = Fraction(c)
            if isinstance(expr, FlagSum):
                for sub, sc in expr.terms:
                    if sub not in acc:
                        order.append(sub)
                    acc[sub] = acc.get(sub, Fraction(0)) + c * sc
            else:
                if expr not in acc:
                    order.append(expr)
                acc[expr] = acc.get(expr, Fraction(0)) + c
        return cls(sigma, tuple((e, acc[e]) for e in order if acc[e]))

    def __repr__(self):
        return " + ".join(f"{c}*{e!r}" for e, c in self.terms) or "0"


class Product(Expr):
    def __init__(self, sigma: FlagType, factors: tuple[Expr, ...]):
        self.type = sigma
        self.factors = factors

    def __repr__(self):
        return "*".join(f"({f!r})" for f in self.factors)


class Lifted(Expr):
    """pi^{sigma,eta}(F): evaluate ``F`` on the anchors selected by ``eta``."""

    def __init__(self, inner: Expr, sigma: FlagType, eta: tuple[int, ...]):
        eta = tuple(eta)
        if len(set(eta)) != len(eta) or any(not 1 <= e <= sigma.k for e in eta):
            raise ValueError(f"eta={eta} is not an injection into [{sigma.k}]")
        if inner.type != sigma.restrict(eta):
            raise TypeError(f"{inner!r} is not a flag of type sigma|eta")
        self.type = sigma
        self.inner = inner
        self.eta = eta

    def __repr__(self):
        return f"pi^{{{self.type!r},{list(self.eta)}}}({self.inner!r})"


class Averaged(Expr):
    """The unlabelling operator [[f]]_{sigma,eta}, a sigma|eta-flag combination."""

    def __init__(self, inner: Expr, eta: tuple[int, ...]):
        sigma = inner.type
        eta = tuple(eta)
        if len(set(eta)) != len(eta) or any(not 1 <= e <= sigma.k for e in eta):
            raise ValueError(f"eta={eta} is not an injection into [{sigma.k}]")
        self.type = sigma.restrict(eta)
        self.sigma = sigma
        self.inner = inner
        self.eta = eta

    def __repr__(self):
        return f"[[{self.inner!r}]]_{{{self.sigma!r},{list(self.eta)}}}"


def lift(F: Expr, sigma: FlagType, eta) -> Lifted:
    if isinstance(eta, int):
        eta = (eta,)
    return Lifted(F, sigma, tuple(eta))


def unlabel(f: Expr, eta=()) -> Averaged:
    if isinstance(eta, int):
        eta = (eta,)
    return Averaged(f, tuple(eta))


def type_flag(sigma: FlagType, eta) -> Averaged:
    """<sigma, eta>: the averaged constant 1."""
    return unlabel(Const(sigma, 1), eta)


# Types. Labels: N, I = independent pairs/triples; E = edge; P = path 1-3-2;
# D = P plus a vertex 4 hanging off 1; Q_i = vertex 3 adjacent to i only.
TYPE_0 = FlagType.of(0, "", "0")
TYPE_1 = FlagType.of(1, "", "1")
TYPE_N = FlagType.of(2, "", "N")
TYPE_E = FlagType.of(2, "12", "E")
TYPE_P = FlagType.of(3, "13 23", "P")
TYPE_I = FlagType.of(3, "", "I")
TYPE_D = FlagType.of(4, "13 23 14", "D")
TYPE_D2 = FlagType.of(4, "13 23 24", "D2")
TYPE_Q1 = FlagType.of(3, "13", "Q1")
TYPE_Q2 = FlagType.of(3, "23", "Q2")
TYPE_I4 = FlagType.of(4, "", "I4")

RHO = Flag(TYPE_0, 2, "12", "rho")
P3 = Flag(TYPE_0, 3, "12 23", "P3")
EDGE = Flag(TYPE_1, 2, "12", "e")
P3_1B = Flag(TYPE_1, 3, "12 23", "P3^{1,b}")
P3_1C = Flag(TYPE_1, 3, "12 13", "P3^1")
P3_EB = Flag(TYPE_E, 3, "12 23", "P3^{E,b}")
P3_N = Flag(TYPE_N, 3, "13 23", "P3^N")
I3_N = Flag(TYPE_N, 3, "", "I3^N")
P3BAR_NC = Flag(TYPE_N, 3, "23", "P3bar^{N,c}")
P3BAR_NB = Flag(TYPE_N, 3, "13", "P3bar^{N,b}")
T4_N = Flag(TYPE_N, 4, "34", "T4^N")
S4_N = Flag(TYPE_N, 4, "13 23 34", "S4^N")
V4_N1 = Flag(TYPE_N, 4, "13 34", "V4^{N,1}")
V4_N2 = Flag(TYPE_N, 4, "23 34", "V4^{N,2}")
P4_N = Flag(TYPE_N, 4, "13 34 24", "P4^N")
K32_N = Flag(TYPE_N, 5, "14 15 24 25 34 35", "K32^N")
K32_P = Flag(TYPE_P, 5, "13 23 34 15 25 45", "K32^P")
U5_P = Flag(TYPE_P, 5, "13 23 34 45", "U5^P")
V5_P1 = Flag(TYPE_P, 5, "13 23 14 45 35", "V5^{P,1}")
V5_P2 = Flag(TYPE_P, 5, "13 23 24 45 35", "V5^{P,2}")
V5_D1 = Flag(TYPE_D, 5, "13 23 14 35 45", "V5^{D,1}")
V5_D2 = Flag(TYPE_D2, 5, "13 23 24 35 45", "V5^{D2,1}")


def F_I(S: Iterable[int]) -> Flag:
    """Three labelled independent vertices plus one vertex adjacent to exactly S."""
    S = sorted(set(S))
    return Flag(TYPE_I, 4, [(i, 4) for i in S], "F^I_{" + "".join(map(str, S)) + "}")


S4_I = F_I((1, 2, 3))
T4_I = F_I((3,))
