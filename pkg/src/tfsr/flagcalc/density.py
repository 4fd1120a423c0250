"""Exact flag densities, averaging and lifting on weighted graphs.

Sample slots are independent draws from the vertex measure. Two slots holding
the same vertex are non-adjacent (the adjacency matrix has a zero diagonal), so
collisions behave like non-adjacent twins without any special casing.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np

from ..graphcore import WeightedGraph
from .flags import Averaged, Const, Expr, Flag, FlagSum, FlagType, Lifted, Product


class AnchorArityMismatch(ValueError):
    pass


class _Ctx:
    """Integer matrices shared by every density evaluation on one graph."""

    def __init__(self, G: WeightedGraph):
        iw, den = G.integer_weights
        dtype = iw.dtype
        self.iw = iw
        self.den = den
        self.A = G.adj.astype(dtype)
        self.NA = (1 - G.adj.astype(np.int64)).astype(dtype)
        self.masks = G.masks
        self.support = [v for v, w in enumerate(G.weights) if w > 0]
        self.weights = G.weights


def _ctx(G: WeightedGraph) -> _Ctx:
    ctx = G.__dict__.get("_flag_ctx")
    if ctx is None:
        ctx = G.__dict__["_flag_ctx"] = _Ctx(G)
    return ctx


def _count(ctx: _Ctx, k: int, size: int, pattern, anchors) -> int:
    """Weighted number (over den**m) of slot fillings matching one edge pattern."""
    m = size - k
    A, NA = ctx.A, ctx.NA
    cols = []
    for j in range(k, size):
        c = ctx.iw
        for i in range(k):
            row = A if (i, j) in pattern else NA
            c = c * row[anchors[i]]
        cols.append(c)
    if m == 1:
        return int(cols[0].sum())

    def M(i, j):
        return A if (i + k, j + k) in pattern else NA

    if m == 2:
        return int(cols[0] @ M(0, 1) @ cols[1])
    if m == 3:
        X = (M(0, 2) * cols[2][None, :]) @ M(1, 2).T
        return int(cols[0] @ (M(0, 1) * X) @ cols[1])
    total = 0
    sup = ctx.support
    for combo in product(sup, repeat=m):
        w = 1
        for j, v in enumerate(combo):
            w *= int(cols[j][v])
            if not w:
                break
        if not w:
            continue
        for x in range(m):
            for y in range(x + 1, m):
                if bool(A[combo[x], combo[y]]) != ((x + k, y + k) in pattern):
                    w = 0
                    break
            if not w:
                break
        total += w
    return total


def _check_arity(k: int, anchors) -> None:
    if len(anchors) != k:
        raise AnchorArityMismatch(f"expected {k} anchors, got {len(anchors)}")


def density(G: WeightedGraph, F: Flag, anchors) -> Fraction:
    """Probability that random completions of ``anchors`` induce ``F``."""
    anchors = tuple(int(a) for a in anchors)
    _check_arity(F.type.k, anchors)
    ctx = _ctx(G)
    if not F.type.induced_by(ctx.masks, anchors):
        return Fraction(0)
    m = F.free
    if m == 0:
        return Fraction(1)
    total = sum(_count(ctx, F.type.k, F.size, pat, anchors) for pat in F.patterns)
    return Fraction(total, ctx.den**m)


def evaluate(G: WeightedGraph, f: Expr, anchors) -> Fraction:
    """Value of a sigma-flag expression at an anchor tuple."""
    anchors = tuple(int(a) for a in anchors)
    _check_arity(f.type.k, anchors)
    return _eval(G, f, anchors)


def _eval(G: WeightedGraph, f: Expr, anchors: tuple[int, ...]) -> Fraction:
    if isinstance(f, Flag):
        return density(G, f, anchors)
    if isinstance(f, Const):
        return f.value if f.value and f.type.induced_by(G.masks, anchors) else Fraction(0)
    if isinstance(f, FlagSum):
        return sum((c * _eval(G, t, anchors) for t, c in f.terms), Fraction(0))
    if isinstance(f, Product):
        out = Fraction(1)
        for g in f.factors:
            out *= _eval(G, g, anchors)
            if not out:
                break
        return out
    if isinstance(f, Lifted):
        if not f.type.induced_by(G.masks, anchors):
            return Fraction(0)
        return _eval(G, f.inner, tuple(anchors[e - 1] for e in f.eta))
    if isinstance(f, Averaged):
        return _average(G, f.inner, f.sigma, f.eta, anchors)
    raise TypeError(f"cannot evaluate {f!r}")


def _as_expr(f, sigma: FlagType) -> Expr:
    if isinstance(f, Expr):
        if f.type != sigma:
            raise TypeError(f"{f!r} is not a {sigma!r}-flag combination")
        return f
    return Const(sigma, f)


def _average(G: WeightedGraph, f: Expr, sigma: FlagType, eta, anchors) -> Fraction:
    ctx = _ctx(G)
    if not sigma.restrict(eta).induced_by(ctx.masks, anchors):
        return Fraction(0)
    full: list[int | None] = [None] * sigma.k
    for pos, v in zip(eta, anchors):
        full[pos - 1] = v
    free = [i for i in range(sigma.k) if full[i] is None]
    if not free:
        return _eval(G, f, tuple(full))  # type: ignore[arg-type]
    total = Fraction(0)
    w = ctx.weights
    for combo in product(ctx.support, repeat=len(free)):
        for i, v in zip(free, combo):
            full[i] = v
        tup = tuple(full)
        if not sigma.induced_by(ctx.masks, tup):
            continue
        weight = Fraction(1)
        for v in combo:
            weight *= w[v]
        total += weight * _eval(G, f, tup)  # type: ignore[arg-type]
    return total


def average(G: WeightedGraph, f, sigma: FlagType, eta, anchors) -> Fraction:
    """[[f]]_{sigma,eta} at ``anchors``: unanchored labels are averaged, non-sigma fillings count 0.

    ``eta`` lists 1-based labels of ``sigma``; ``anchors[i]`` is placed at label ``eta[i]``.
    """
    eta = tuple(eta)
    anchors = tuple(int(a) for a in anchors)
    _check_arity(len(eta), anchors)
    return _average(G, _as_expr(f, sigma), sigma, eta, anchors)


def average_of_product(G: WeightedGraph, f, g, sigma: FlagType, eta, anchors) -> Fraction:
    return average(G, Product(sigma, (_as_expr(f, sigma), _as_expr(g, sigma))), sigma, eta, anchors)


def anchor_tuples(G: WeightedGraph, sigma: FlagType, include_collisions: bool = True):
    """All vertex tuples (support vertices only) inducing ``sigma``."""
    ctx = _ctx(G)
    for tup in product(ctx.support, repeat=sigma.k):
        if not include_collisions and len(set(tup)) < len(tup):
            continue
        if sigma.induced_by(ctx.masks, tup):
            yield tup
