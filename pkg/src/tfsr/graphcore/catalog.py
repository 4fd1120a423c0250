"""Named triangle-free constructions.

``CATALOG`` maps names to zero-argument constructors; ``kneser(k)`` and
``g_h(h)`` take a parameter.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import combinations, product
from math import comb

from .graph import GraphError, WeightedGraph


class ParameterOutOfRange(GraphError):
    pass


def srg_parameters(G: WeightedGraph) -> tuple[int, int, int, int] | None:
    """(n, k, lambda, mu) when ``G`` is strongly regular, else None."""
    m = G.masks
    degs = {bin(x).count("1") for x in m}
    if len(degs) != 1:
        return None
    lam, mu = set(), set()
    for u in range(G.n):
        for v in range(u + 1, G.n):
            common = bin(m[u] & m[v]).count("1")
            (lam if (m[u] >> v) & 1 else mu).add(common)
    if len(lam) > 1 or len(mu) > 1:
        return None
    return G.n, degs.pop(), lam.pop() if lam else 0, mu.pop() if mu else 0


def _check(G: WeightedGraph, expected: tuple[int, int, int, int], name: str) -> WeightedGraph:
    got = srg_parameters(G)
    if got != expected:
        raise GraphError(f"{name}: expected parameters {expected}, got {got}")
    return G


def cycle(n: int) -> WeightedGraph:
    if n < 3:
        raise ParameterOutOfRange("cycle needs n >= 3")
    return WeightedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def cycle5() -> WeightedGraph:
    return cycle(5)


def kneser(k: int) -> WeightedGraph:
    """KG(3k-1, k): k-subsets of [3k-1], adjacent when disjoint."""
    if k < 2:
        raise ParameterOutOfRange("kneser needs k >= 2")
    subsets = [frozenset(s) for s in combinations(range(3 * k - 1), k)]
    edges = [(i, j) for (i, s), (j, t) in combinations(enumerate(subsets), 2) if not s & t]
    return WeightedGraph.from_edges(len(subsets), edges)


def kneser_parameters(k: int) -> tuple[Fraction, Fraction]:
    """(rho, a) of the uniform Kneser graph KG(3k-1, k)."""
    total = comb(3 * k - 1, k)
    return Fraction(comb(2 * k - 1, k), total), Fraction(1, total)


def petersen() -> WeightedGraph:
    return _check(kneser(2), (10, 3, 0, 1), "petersen")


def clebsch() -> WeightedGraph:
    """Folded 5-cube: {0,1}^4, adjacent at Hamming distance 1 or 4."""
    verts = list(range(16))
    edges = [(u, v) for u, v in combinations(verts, 2) if bin(u ^ v).count("1") in (1, 4)]
    return _check(WeightedGraph.from_edges(16, edges), (16, 5, 0, 2), "clebsch")


@lru_cache(maxsize=1)
def _higman_sims_edges() -> tuple[tuple[int, int], ...]:
    text = resources.files(__package__).joinpath("data/higman_sims.edges").read_text()
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            u, v = line.split()
            edges.append((int(u), int(v)))
    return tuple(edges)


def higman_sims() -> WeightedGraph:
    G = WeightedGraph.from_edges(100, _higman_sims_edges())
    return _check(G, (100, 22, 0, 6), "higman_sims")


def m22() -> WeightedGraph:
    """Hexads of S(3,6,22), adjacent when disjoint (second subconstituent of HS)."""
    G = higman_sims()
    return _check(G.induced(range(23, 100)), (77, 16, 0, 4), "m22")


def gewirtz() -> WeightedGraph:
    """Hexads avoiding one point of S(3,6,22)."""
    G = higman_sims()
    keep = [v for v in range(23, 100) if not G.adj[1, v]]
    return _check(G.induced(keep), (56, 10, 0, 2), "gewirtz")


def hoffman_singleton() -> WeightedGraph:
    """Five pentagons and five pentagrams (Robertson's construction)."""
    def P(h, j):
        return 5 * h + j

    def Q(i, j):
        return 25 + 5 * i + j

    edges = []
    for h, j in product(range(5), repeat=2):
        edges.append((P(h, j), P(h, (j + 1) % 5)))
        edges.append((Q(h, j), Q(h, (j + 2) % 5)))
    for h, i, j in product(range(5), repeat=3):
        edges.append((P(h, j), Q(i, (h * i + j) % 5)))
    G = WeightedGraph.from_edges(50, set(tuple(sorted(e)) for e in edges))
    return _check(G, (50, 7, 0, 1), "hoffman_singleton")


def g_h(h: int) -> WeightedGraph:
    """Weighted graph on 2h + 2^h vertices showing the vertex bound is nearly tight.

    Vertices ``u[i, eps]`` come first (index ``2*i + eps``), then ``v[a]`` for
    ``a`` in {0,1}^h (index ``2h + a`` with bit i of ``a`` = a(i)).
    """
    if h < 1:
        raise ParameterOutOfRange("g_h needs h >= 1")
    nu = 2 * h
    n = nu + 2**h
    full = 2**h - 1
    edges = [(2 * i, 2 * i + 1) for i in range(h)]
    edges += [(nu + a, nu + (full ^ a)) for a in range(2**h) if a < full ^ a]
    for i in range(h):
        for a in range(2**h):
            eps = (a >> i) & 1
            edges.append((2 * i + eps, nu + a))
    weights = [Fraction(1, 4 * h)] * nu + [Fraction(1, 2 ** (h + 1))] * 2**h
    return WeightedGraph.from_edges(n, edges, weights)


CATALOG = {
    "cycle5": cycle5,
    "petersen": petersen,
    "clebsch": clebsch,
    "higman_sims": higman_sims,
    "hoffman_singleton": hoffman_singleton,
    "gewirtz": gewirtz,
    "m22": m22,
}


def catalog(name: str) -> WeightedGraph:
    """Look up ``name``; ``kneser3`` / ``kneser(3)`` and ``g_h2`` / ``g_h(2)`` style names work too."""
    key = name.strip().lower().replace("-", "_")
    if key in CATALOG:
        return CATALOG[key]()
    for prefix, ctor in (("kneser", kneser), ("g_h", g_h)):
        if key.startswith(prefix):
            arg = key[len(prefix):].strip("()_")
            if arg.isdigit():
                return ctor(int(arg))
    raise ParameterOutOfRange(f"unknown catalog graph {name!r}")
