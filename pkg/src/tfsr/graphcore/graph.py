from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..exactmath import as_fraction


class GraphError(ValueError):
    pass


class CompleteGraph(GraphError):
    """Raised when a quantity needs a non-adjacent pair and there is none."""


class WeightedGraph:
    """Simple graph with a rational probability measure on its vertices.

    Parameters
    ----------
    adjacency : array-like of shape (n, n)
        Symmetric 0/1 matrix with an empty diagonal.
    weights : sequence of rationals, optional
        Vertex measure; uniform when omitted. Must be non-negative and sum to 1.
    """

    def __init__(self, adjacency, weights: Sequence | None = None):
        adj = np.array(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise GraphError("adjacency must be a square matrix")
        if adj.diagonal().any():
            raise GraphError("self-loops are not allowed")
        if not (adj == adj.T).all():
            raise GraphError("adjacency must be symmetric")
        n = adj.shape[0]
        if weights is None:
            w = tuple(Fraction(1, n) for _ in range(n)) if n else ()
        else:
            w = tuple(as_fraction(x) for x in weights)
            if len(w) != n:
                raise GraphError(f"expected {n} weights, got {len(w)}")
            if any(x < 0 for x in w):
                raise GraphError("weights must be non-negative")
            if n and sum(w) != 1:
                raise GraphError(f"weights sum to {sum(w)}, not 1")
        adj.setflags(write=False)
        self.adj = adj
        self.weights = w

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], weights=None) -> "WeightedGraph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise GraphError("self-loops are not allowed")
            adj[u, v] = adj[v, u] = True
        return cls(adj, weights)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={self.num_edges}, uniform={self.is_uniform})"

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and bool((self.adj == other.adj).all()) and self.weights == other.weights

    __hash__ = None

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood of every vertex as an int bitmask."""
        out = []
        for row in self.adj:
            m = 0
            for j in np.flatnonzero(row):
                m |= 1 << int(j)
            out.append(m)
        return tuple(out)

    @cached_property
    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2

    @property
    def is_uniform(self) -> bool:
        return len(set(self.weights)) <= 1

    def neighbors(self, v: int) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.adj[v])]

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adj))
        return [(int(i), int(j)) for i, j in zip(iu, ju)]

    def measure(self, vertices: Iterable[int] | int) -> Fraction:
        if isinstance(vertices, int):
            vertices = mask_members(vertices)
        w = self.weights
        return sum((w[v] for v in vertices), Fraction(0))

    @cached_property
    def integer_weights(self) -> tuple[np.ndarray, int]:
        """Weights as integers over a common denominator ``D``."""
        den = math.lcm(*(x.denominator for x in self.weights)) if self.weights else 1
        iw = [x.numerator * (den // x.denominator) for x in self.weights]
        return np.array(iw, dtype=object if den > 2**20 else np.int64), den

    def with_weights(self, weights) -> "WeightedGraph":
        return WeightedGraph(self.adj, weights)

    def induced(self, vertices: Sequence[int], renormalize: bool = True) -> "WeightedGraph":
        vs = list(vertices)
        sub = self.adj[np.ix_(vs, vs)]
        w = [self.weights[v] for v in vs]
        total = sum(w)
        if renormalize and total:
            w = [x / total for x in w]
        return WeightedGraph(sub, w)

    def support(self) -> "WeightedGraph":
        """Drop zero-weight vertices."""
        keep = [v for v, x in enumerate(self.weights) if x > 0]
        if len(keep) == self.n:
            return self
        return self.induced(keep, renormalize=False)


def mask_members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def is_triangle_free(G: WeightedGraph) -> bool:
    m = G.masks
    for u in range(G.n):
        nu = m[u]
        for v in mask_members(nu >> (u + 1) << (u + 1)):
            if nu & m[v]:
                return False
    return True


def degree_measure(G: WeightedGraph, v: int) -> Fraction:
    """Relative degree e(v): measure of the neighbourhood of ``v``."""
    return G.measure(G.masks[v])


e = degree_measure


def p3n(G: WeightedGraph, u: int, v: int) -> Fraction:
    """Measure of the common neighbourhood of ``u`` and ``v``."""
    return G.measure(G.masks[u] & G.masks[v])


def rho(G: WeightedGraph) -> Fraction:
    """Weighted edge density: sum over ordered adjacent pairs of mu(u) mu(v)."""
    return sum((G.weights[v] * degree_measure(G, v) for v in range(G.n)), Fraction(0))


def non_adjacent_pairs(G: WeightedGraph):
    m = G.masks
    for u in range(G.n):
        for v in range(u + 1, G.n):
            if not (m[u] >> v) & 1:
                yield u, v


def a_value(G: WeightedGraph) -> Fraction:
    """Minimum common-neighbourhood measure over distinct non-adjacent pairs."""
    best = None
    m = G.masks
    cache: dict[int, Fraction] = {}
    for u, v in non_adjacent_pairs(G):
        key = m[u] & m[v]
        val = cache.get(key)
        if val is None:
            val = cache[key] = G.measure(key)
        if best is None or val < best:
            best = val
    if best is None:
        raise CompleteGraph("no pair of distinct non-adjacent vertices")
    return best


def minimizing_pairs(G: WeightedGraph) -> list[tuple[int, int]]:
    a = a_value(G)
    return [(u, v) for u, v in non_adjacent_pairs(G) if p3n(G, u, v) == a]


def regular_density(G: WeightedGraph) -> Fraction | None:
    """Common relative degree over the support, or None when not regular."""
    degs = {degree_measure(G, v) for v in range(G.n) if G.weights[v] > 0}
    if len(degs) != 1:
        return None
    return degs.pop()


def is_regular(G: WeightedGraph) -> bool:
    return regular_density(G) is not None


def twin_classes(G: WeightedGraph) -> list[list[int]]:
    classes: dict[int, list[int]] = {}
    for v, nb in enumerate(G.masks):
        classes.setdefault(nb, []).append(v)
    return list(classes.values())


def is_twin_free(G: WeightedGraph) -> bool:
    return len(set(G.masks)) == G.n


def twin_reduce(G: WeightedGraph) -> WeightedGraph:
    """Merge vertices with identical neighbourhoods, summing their weights."""
    classes = twin_classes(G)
    if len(classes) == G.n:
        return G
    reps = [c[0] for c in classes]
    adj = G.adj[np.ix_(reps, reps)]
    w = [sum((G.weights[v] for v in c), Fraction(0)) for c in classes]
    return WeightedGraph(adj, w)


def blow_up(G: WeightedGraph) -> WeightedGraph:
    """Replace each vertex by N*mu(v) independent twin copies (uniform result)."""
    iw, den = G.integer_weights
    copies = [int(x) for x in iw]
    owner = [v for v, k in enumerate(copies) for _ in range(k)]
    idx = np.array(owner, dtype=int)
    adj = G.adj[np.ix_(idx, idx)]
    return WeightedGraph(adj)


def is_diameter_two(G: WeightedGraph) -> bool:
    """Every distinct non-adjacent pair has a common neighbour."""
    m = G.masks
    return all(m[u] & m[v] for u, v in non_adjacent_pairs(G))


def is_complete(G: WeightedGraph) -> bool:
    return next(non_adjacent_pairs(G), None) is None
