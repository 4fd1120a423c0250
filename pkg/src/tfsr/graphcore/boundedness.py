"""Vertex-count bound for twin-free triangle-free weighted graphs and its witness chain."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..exactmath import as_fraction
from .graph import GraphError, WeightedGraph, a_value, mask_members


class ZeroA(GraphError):
    pass


class WitnessError(GraphError):
    """The constructive step failed; the preconditions cannot have held."""


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0."""
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def boundedness_bound(a) -> Fraction:
    """(2/a)^(1 + 1/a) + 2/a.

    Exact whenever 1/a is an integer; otherwise the floor of the real bound,
    which is all that matters when comparing against vertex counts.
    """
    a = as_fraction(a)
    if a <= 0:
        raise ZeroA("bound needs a > 0")
    x = 2 / a
    expo = 1 + 1 / a
    if expo.denominator == 1:
        return x ** expo.numerator + x
    p, q = expo.numerator, expo.denominator
    xp = x**p
    root = _iroot(xp.numerator // xp.denominator, q)
    return Fraction(math.floor(root + x))


def boundedness_check(G: WeightedGraph, a=None) -> bool:
    a = a_value(G) if a is None else as_fraction(a)
    return G.n <= boundedness_bound(a)


@dataclass
class WitnessChain:
    """Nested vertex sets W_0 ⊃ W_1 ⊃ ... and the measures they certify."""

    a: Fraction
    sets: list[frozenset[int]] = field(default_factory=list)
    pivots: list[int] = field(default_factory=list)
    covered_measure: list[Fraction] = field(default_factory=list)

    def violations(self) -> list[str]:
        out = []
        for r in range(len(self.sets) - 1):
            if not self.sets[r + 1] < self.sets[r]:
                out.append(f"W_{r + 1} is not a proper subset of W_{r}")
            if len(self.sets[r + 1]) < self.a / 2 * len(self.sets[r]):
                out.append(f"|W_{r + 1}| < (a/2)|W_{r}|")
        for r, cov in enumerate(self.covered_measure):
            if cov < self.a * r:
                out.append(f"covered measure {cov} < a*{r}")
        if self.sets and len(self.sets[-1]) > 1:
            out.append("chain stopped with |W_r| >= 2")
        if len(self.sets) - 1 > 1 / self.a:
            out.append("chain longer than 1/a")
        return out

    @property
    def valid(self) -> bool:
        return not self.violations()


def _common_neighbourhood(G: WeightedGraph, W: frozenset[int]) -> int:
    k = (1 << G.n) - 1
    for w in W:
        k &= G.masks[w]
    return k


def _covered(G: WeightedGraph, K: int) -> Fraction:
    union = 0
    for v in mask_members(K):
        union |= G.masks[v]
    return G.measure(union)


def initial_tail(G: WeightedGraph, a: Fraction) -> frozenset[int]:
    """Lightest vertices whose total measure stays below a/2."""
    order = sorted(range(G.n), key=lambda v: (-G.weights[v], v))
    tail = Fraction(0)
    k = G.n  # 1-based position of the maximal k with mu(v_k..v_n) >= a/2
    for pos in range(G.n, 0, -1):
        tail += G.weights[order[pos - 1]]
        if tail >= a / 2:
            k = pos
            break
    else:
        k = 0
    return frozenset(order[k:])


def boundedness_witness(G: WeightedGraph, a=None) -> WitnessChain:
    """Build the chain W_0 ⊃ W_1 ⊃ ... from the proof of the vertex bound.

    Each step picks ``v*`` outside ``W ∪ K(W)`` adjacent to at least ``(a/2)|W|``
    vertices of ``W`` (largest such intersection, lowest index on ties) and
    replaces ``W`` by ``W ∩ N(v*)``.
    """
    a = a_value(G) if a is None else as_fraction(a)
    if a <= 0:
        raise ZeroA("witness needs a > 0")
    W = initial_tail(G, a)
    chain = WitnessChain(a=a, sets=[W], covered_measure=[_covered(G, _common_neighbourhood(G, W)) if W else Fraction(0)])
    while len(W) >= 2:
        K = _common_neighbourhood(G, W)
        wmask = sum(1 << w for w in W)
        best, best_hits = None, -1
        for v in range(G.n):
            if (wmask >> v) & 1 or (K >> v) & 1:
                continue
            hits = bin(G.masks[v] & wmask).count("1")
            if hits > best_hits:
                best, best_hits = v, hits
        if best is None or best_hits < a / 2 * len(W) or best_hits == 0:
            raise WitnessError(f"no admissible v* for |W| = {len(W)}")
        W = frozenset(mask_members(G.masks[best] & wmask))
        chain.sets.append(W)
        chain.pivots.append(best)
        chain.covered_measure.append(_covered(G, _common_neighbourhood(G, W)))
        if len(chain.sets) - 1 > 1 / a + 1:
            raise WitnessError("chain exceeded 1/a steps")
    return chain
