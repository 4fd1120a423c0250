"""Isomorph-free generation of triangle-free graphs and the regular-weight search.

Graphs are tuples of neighbourhood bitmasks. Children add one vertex whose
neighbourhood is an independent set (so no triangle appears); a child is kept
only when the new vertex lies in the automorphism orbit of the child's
canonical deletion vertex, and sibling neighbourhoods are taken up to the
parent's automorphism group.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .exactmath import format_fraction, parse_fraction
from .graphcore import WeightedGraph
from .graphcore.graph6 import Graph6Error, graph6_to_masks, masks_to_graph6
from .regweights import (
    NoRegularWeights,
    DegenerateRho,
    Infeasible,
    optimize_a,
    positive_feasibility,
    rho_of_skeleton,
)

Masks = tuple[int, ...]


class CheckpointCorrupt(ValueError):
    pass


def _pc(x: int) -> int:
    return bin(x).count("1")


def _members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------- canonical labeling


def _refine(masks: Masks, cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement, splitting each cell by neighbour counts."""
    while True:
        cms = [sum(1 << v for v in c) for c in cells]
        new: list[list[int]] = []
        for c in cells:
            if len(c) == 1:
                new.append(c)
                continue
            sig: dict[tuple[int, ...], list[int]] = {}
            for v in c:
                sig.setdefault(tuple(_pc(masks[v] & cm) for cm in cms), []).append(v)
            for key in sorted(sig):
                new.append(sig[key])
        if len(new) == len(cells):
            return new
        cells = new


def _code(masks: Masks, order: Sequence[int]) -> tuple[int, ...]:
    pos = [0] * len(order)
    for i, v in enumerate(order):
        pos[v] = i
    return tuple(sum(1 << pos[u] for u in _members(masks[v])) for v in order)


class _Union:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


@dataclass
class Canon:
    """Canonical labeling: ``order[i]`` is the vertex placed at position ``i``."""

    code: tuple[int, ...]
    order: list[int]
    generators: list[tuple[int, ...]]

    @property
    def canonical_masks(self) -> Masks:
        return self.code

    def orbits(self) -> list[int]:
        n = len(self.order)
        uf = _Union(n)
        for g in self.generators:
            for v in range(n):
                uf.union(v, g[v])
        return [uf.find(v) for v in range(n)]


def canonical_form(masks: Masks) -> Canon:
    n = len(masks)
    if n == 0:
        return Canon((), [], [])
    gens: list[tuple[int, ...]] = []
    # twins are interchangeable: seed their transpositions as known automorphisms
    by_nb: dict[int, list[int]] = {}
    for v, m in enumerate(masks):
        by_nb.setdefault(m, []).append(v)
    for cls in by_nb.values():
        for a, b in zip(cls, cls[1:]):
            g = list(range(n))
            g[a], g[b] = b, a
            gens.append(tuple(g))
    state: dict = {"first": None, "best": None}

    def leaf(order: list[int]) -> None:
        code = _code(masks, order)
        first, best = state["first"], state["best"]
        if first is None:
            state["first"] = state["best"] = (code, order)
            return
        for ref in (first, best):
            if code == ref[0]:
                g = [0] * n
                for i in range(n):
                    g[ref[1][i]] = order[i]
                g = tuple(g)
                if any(g[i] != i for i in range(n)):
                    gens.append(g)
                return
        if code > best[0]:
            state["best"] = (code, order)

    def search(cells: list[list[int]], prefix: list[int]) -> None:
        cells = _refine(masks, cells)
        if len(cells) == n:
            leaf([c[0] for c in cells])
            return
        idx = min((i for i, c in enumerate(cells) if len(c) > 1), key=lambda i: (len(cells[i]), i))
        target = cells[idx]
        explored: list[int] = []
        for v in sorted(target):
            if explored:
                uf = _Union(n)
                for g in gens:
                    if all(g[p] == p for p in prefix):
                        for x in target:
                            uf.union(x, g[x])
                if any(uf.find(v) == uf.find(u) for u in explored):
                    continue
            explored.append(v)
            rest = [x for x in target if x != v]
            search(cells[:idx] + [[v], rest] + cells[idx + 1:], prefix + [v])

    search([list(range(n))], [])
    code, order = state["best"]
    return Canon(code, order, gens)


def canonical_graph6(masks: Masks) -> str:
    return masks_to_graph6(canonical_form(masks).code)


def brute_canonical_code(masks: Masks) -> tuple[int, ...]:
    """Maximum code over all n! orderings (slow; for cross-checks only)."""
    n = len(masks)
    return max(_code(masks, list(p)) for p in permutations(range(n)))


# ---------------------------------------------------------------- augmentation


def _independent_sets(masks: Masks, allowed: int, base: int = 0) -> Iterator[int]:
    """Independent sets S with base ⊆ S ⊆ base ∪ allowed (``allowed`` avoids base's neighbours)."""
    if not allowed:
        yield base
        return
    v = allowed.bit_length() - 1
    rest = allowed & ~(1 << v)
    yield from _independent_sets(masks, rest, base)
    yield from _independent_sets(masks, rest & ~masks[v], base | (1 << v))


def _apply(g: tuple[int, ...], mask: int) -> int:
    out = 0
    for v in _members(mask):
        out |= 1 << g[v]
    return out


def _orbit_reps(masks: Masks, candidates: Iterator[int], gens: list[tuple[int, ...]]) -> Iterator[int]:
    seen: set[int] = set()
    for S in candidates:
        if S in seen:
            continue
        stack = [S]
        seen.add(S)
        while stack:
            x = stack.pop()
            for g in gens:
                y = _apply(g, x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        yield S


def _child(masks: Masks, S: int) -> Masks:
    n = len(masks)
    return tuple(m | (1 << n) if (S >> v) & 1 else m for v, m in enumerate(masks)) + (S,)


def _invariant(masks: Masks, v: int) -> tuple:
    return (_pc(masks[v]), tuple(sorted(_pc(masks[u]) for u in _members(masks[v]))))


def _is_canonical_child(H: Masks) -> tuple[bool, Canon | None]:
    """Is the last vertex of H equivalent to H's canonical deletion vertex?"""
    n = len(H)
    v = n - 1
    inv = [_invariant(H, x) for x in range(n)]
    top = max(inv)
    if inv[v] != top:
        return False, None
    M = [x for x in range(n) if inv[x] == top]
    if len(M) == 1:
        return True, None
    canon = canonical_form(H)
    pos = {x: i for i, x in enumerate(canon.order)}
    m = max(M, key=lambda x: pos[x])
    orb = canon.orbits()
    return orb[m] == orb[v], canon


def _generators(G: Masks, canon: Canon | None) -> list[tuple[int, ...]]:
    return (canon or canonical_form(G)).generators


def is_twin_free_masks(masks: Masks) -> bool:
    return len(set(masks)) == len(masks)


def is_diameter_two_masks(masks: Masks) -> bool:
    """At least one non-adjacent pair, and every such pair has a common neighbour."""
    n = len(masks)
    found = False
    for u in range(n):
        for v in range(u + 1, n):
            if not (masks[u] >> v) & 1:
                found = True
                if not masks[u] & masks[v]:
                    return False
    return found


def _bad_pairs_mask(masks: Masks) -> int | None:
    """Vertices of non-adjacent pairs lacking a common neighbour; None if they are adjacent to each other."""
    n = len(masks)
    R = 0
    for u in range(n):
        for v in range(u + 1, n):
            if not (masks[u] >> v) & 1 and not masks[u] & masks[v]:
                R |= (1 << u) | (1 << v)
    for u in _members(R):
        if masks[u] & R:
            return None
    return R


def _final_candidates(G: Masks) -> Iterator[int]:
    """Neighbourhoods making G + v triangle-free of diameter 2: maximal independent sets covering every bad pair."""
    n = len(G)
    full = (1 << n) - 1
    R = _bad_pairs_mask(G)
    if R is None:
        return
    blocked = R
    for u in _members(R):
        blocked |= G[u]
    for S in _independent_sets(G, full & ~blocked, R):
        covered = S
        for u in _members(S):
            covered |= G[u]
        if covered == full:
            yield S


def _children(G: Masks, canon: Canon | None, last: bool) -> Iterator[tuple[Masks, Canon | None]]:
    n = len(G)
    gens = _generators(G, canon)
    cands = _final_candidates(G) if last else _independent_sets(G, (1 << n) - 1)
    for S in _orbit_reps(G, cands, gens):
        H = _child(G, S)
        if last and not is_twin_free_masks(H):
            continue
        ok, hc = _is_canonical_child(H)
        if ok:
            yield H, hc


def _walk(G: Masks, canon: Canon | None, n_max: int, filtered_last: bool) -> Iterator[Masks]:
    """Yield G and its canonical descendants up to n_max vertices (depth first)."""
    yield G
    if len(G) >= n_max:
        return
    last = filtered_last and len(G) + 1 == n_max
    for H, hc in _children(G, canon, last):
        yield from _walk(H, hc, n_max, filtered_last)


def enumerate_triangle_free(n: int) -> list[Masks]:
    """One representative (canonical form) per isomorphism class of n-vertex triangle-free graphs."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out = [canonical_form(G).code for G in _walk((0,), None, n, False) if len(G) == n]
    return sorted(out)


def count_triangle_free(n_max: int) -> list[int]:
    counts = [0] * (n_max + 1)
    for G in _walk((0,), None, n_max, False):
        counts[len(G)] += 1
    return counts[1:]


# ---------------------------------------------------------------- brute-force oracle


def brute_force_classes(n: int) -> set[tuple[int, ...]]:
    """Isomorphism classes of triangle-free graphs by exhaustive relabeling (n <= 7)."""
    if n == 1:
        return {(0,)}
    pairs = [(i, j) for j in range(n) for i in range(j)]
    m = len(pairs)
    idx = {p: k for k, p in enumerate(pairs)}
    codes = np.arange(1 << m, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(m)) & 1).astype(bool)
    tri = np.zeros(len(codes), dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                tri |= bits[:, idx[(a, b)]] & bits[:, idx[(a, c)]] & bits[:, idx[(b, c)]]
    bits = bits[~tri]
    best = None
    for perm in permutations(range(n)):
        w = np.zeros(m, dtype=np.int64)
        for k, (i, j) in enumerate(pairs):
            a, b = sorted((perm[i], perm[j]))
            w[k] = 1 << idx[(a, b)]
        c = bits.astype(np.int64) @ w
        best = c if best is None else np.minimum(best, c)
    out = set()
    for c in np.unique(best):
        masks = [0] * n
        for k, (i, j) in enumerate(pairs):
            if (int(c) >> k) & 1:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
        out.add(tuple(masks))
    return out


# ---------------------------------------------------------------- search driver


@dataclass
class SearchConfig:
    n_max: int
    rho_min: Fraction = Fraction(0)
    rho_max: Fraction = Fraction(1, 2)
    workers: int = 1
    checkpoint: str | None = None
    split_depth: int = 7
    results: str | None = None

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")

    @classmethod
    def from_file(cls, path: str | Path) -> "SearchConfig":
        kv: dict[str, str] = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            k, v = (s.strip() for s in line.split("=", 1))
            kv[k] = v
        known = {"n_max", "rho_min", "rho_max", "workers", "checkpoint", "split_depth", "results"}
        unknown = set(kv) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "n_max" not in kv:
            raise ValueError("config needs n_max")
        cfg = cls(
            n_max=int(kv["n_max"]),
            rho_min=parse_fraction(kv.get("rho_min", "0")),
            rho_max=parse_fraction(kv.get("rho_max", "1/2")),
            workers=int(kv.get("workers", "1")),
            checkpoint=kv.get("checkpoint") or None,
            split_depth=int(kv.get("split_depth", "7")),
            results=kv.get("results") or None,
        )
        return cfg.with_env()

    def with_env(self) -> "SearchConfig":
        """TFSR_WORKERS and TFSR_CHECKPOINT_DIR override the file."""
        if os.environ.get("TFSR_WORKERS"):
            self.workers = int(os.environ["TFSR_WORKERS"])
        d = os.environ.get("TFSR_CHECKPOINT_DIR")
        if d:
            name = Path(self.checkpoint).name if self.checkpoint else f"search_n{self.n_max}.ckpt"
            self.checkpoint = str(Path(d) / name)
        return self


@dataclass
class SearchResult:
    n: int
    skeleton: str  # graph6 of the canonical form
    rho_G: Fraction
    optimum_a: Fraction
    weights: list[Fraction] = field(default_factory=list)

    def line(self) -> str:
        return "\t".join([
            self.skeleton,
            format_fraction(self.rho_G),
            format_fraction(self.optimum_a),
            ",".join(format_fraction(w) for w in self.weights),
        ])

    @classmethod
    def from_line(cls, line: str) -> "SearchResult":
        g6, rho, a, w = line.rstrip("\n").split("\t")
        masks = graph6_to_masks(g6)
        return cls(len(masks), g6, parse_fraction(rho), parse_fraction(a), [parse_fraction(x) for x in w.split(",") if x])

    def graph(self) -> WeightedGraph:
        masks = graph6_to_masks(self.skeleton)
        n = len(masks)
        adj = [[bool((masks[i] >> j) & 1) for j in range(n)] for i in range(n)]
        return WeightedGraph(adj, self.weights)


def evaluate_candidate(masks: Masks, rho_min: Fraction, rho_max: Fraction) -> SearchResult | None:
    """Apply the filters in order of cost: twins, diameter, density, then the LPs."""
    if not is_twin_free_masks(masks) or not is_diameter_two_masks(masks):
        return None
    n = len(masks)
    canon = canonical_form(masks).code
    adj = np.array([[(canon[i] >> j) & 1 for j in range(n)] for i in range(n)], dtype=bool)
    try:
        rho = rho_of_skeleton(adj)
    except (NoRegularWeights, DegenerateRho):
        return None
    if not rho_min <= rho <= rho_max:
        return None
    try:
        w = positive_feasibility(adj)
    except Infeasible:
        return None
    if w is None:
        return None
    lp = optimize_a(adj)
    return SearchResult(n, masks_to_graph6(canon), rho, lp.optimum_a, w)


def _subtree(args) -> tuple[str, list[str]]:
    """Worker entry: every survivor below one subtree root (the root itself excluded)."""
    g6, n_max, rho_min, rho_max = args
    root = tuple(graph6_to_masks(g6))
    out = []
    it = _walk(root, None, n_max, True)
    next(it)
    for G in it:
        r = evaluate_candidate(G, rho_min, rho_max)
        if r is not None:
            out.append(r.line())
    return g6, out


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _save_checkpoint(path: Path, pending: list[str], lines: list[str], cfg: SearchConfig) -> None:
    head = [f"# n_max={cfg.n_max} rho_min={format_fraction(cfg.rho_min)} rho_max={format_fraction(cfg.rho_max)} split_depth={cfg.split_depth}"]
    head += [f"# result\t{line}" for line in lines]
    _write_atomic(path, "\n".join(head + pending) + "\n")


def _load_checkpoint(path: Path, cfg: SearchConfig) -> tuple[list[str], list[str]] | None:
    if not path.exists():
        return None
    pending, lines = [], []
    text = path.read_text().splitlines()
    if not text or not text[0].startswith("# n_max="):
        raise CheckpointCorrupt(f"{path}: missing header")
    expect = f"# n_max={cfg.n_max} rho_min={format_fraction(cfg.rho_min)} rho_max={format_fraction(cfg.rho_max)} split_depth={cfg.split_depth}"
    if text[0] != expect:
        raise CheckpointCorrupt(f"{path}: written for a different configuration")
    for line in text[1:]:
        if line.startswith("# result\t"):
            rec = line[len("# result\t"):]
            try:
                SearchResult.from_line(rec)
            except (ValueError, Graph6Error) as exc:
                raise CheckpointCorrupt(f"{path}: bad result line {rec!r}") from exc
            lines.append(rec)
        elif line.strip():
            try:
                graph6_to_masks(line.strip())
            except Graph6Error as exc:
                raise CheckpointCorrupt(f"{path}: bad prefix {line!r}") from exc
            pending.append(line.strip())
    return pending, lines


def run_search(config: SearchConfig) -> list[SearchResult]:
    """All twin-free diameter-2 triangle-free skeletons on <= n_max vertices with
    strictly positive regular weights and rho_G in [rho_min, rho_max]."""
    cfg = config
    depth = max(1, min(cfg.split_depth, cfg.n_max))
    ckpt = Path(cfg.checkpoint) if cfg.checkpoint else None
    state = _load_checkpoint(ckpt, cfg) if ckpt else None
    if state is None:
        lines: list[str] = []
        roots: list[str] = []
        # the shallow part of the tree is explored here; the rest is split into subtrees
        for G in _walk((0,), None, depth, depth == cfg.n_max):
            r = evaluate_candidate(G, cfg.rho_min, cfg.rho_max)
            if r is not None:
                lines.append(r.line())
            if len(G) == depth and depth < cfg.n_max:
                roots.append(masks_to_graph6(G))
        pending = roots
        if ckpt:
            _save_checkpoint(ckpt, pending, lines, cfg)
    else:
        pending, lines = state
    todo = [(g6, cfg.n_max, cfg.rho_min, cfg.rho_max) for g6 in pending]
    remaining = list(pending)
    if cfg.workers > 1 and len(todo) > 1:
        from multiprocessing import Pool

        with Pool(cfg.workers) as pool:
            for g6, found in pool.imap_unordered(_subtree, todo, chunksize=1):
                lines.extend(found)
                remaining.remove(g6)
                if ckpt:
                    _save_checkpoint(ckpt, remaining, lines, cfg)
    else:
        for item in todo:
            g6, found = _subtree(item)
            lines.extend(found)
            remaining.remove(g6)
            if ckpt:
                _save_checkpoint(ckpt, remaining, lines, cfg)
    results = sorted({SearchResult.from_line(x).line() for x in lines}, key=lambda s: (len(graph6_to_masks(s.split("\t")[0])), s))
    out = [SearchResult.from_line(x) for x in results]
    if cfg.results:
        write_results(out, cfg.results)
    return out


def write_results(results: Sequence[SearchResult], path: str | Path) -> None:
    text = "".join(r.line() + "\n" for r in results)
    if str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)


def read_results(path: str | Path) -> list[SearchResult]:
    return [SearchResult.from_line(line) for line in Path(path).read_text().splitlines() if line.strip()]


def lower_bound_table(results: Sequence[SearchResult]) -> list[tuple[Fraction, Fraction, bool]]:
    """(rho, best a, a <= a0(rho)) per distinct density; a0 is only defined up to rho = 1/3,
    beyond that the large-density bound is used."""
    from .bounds import a0, large_rho_bound

    best: dict[Fraction, Fraction] = {}
    for r in results:
        if r.rho_G not in best or r.optimum_a > best[r.rho_G]:
            best[r.rho_G] = r.optimum_a
    rows = []
    for rho in sorted(best):
        a = best[rho]
        if rho <= Fraction(1, 3):
            ok = a0(rho).compare(a) >= 0
        elif rho < Fraction(1, 2):
            ok = a <= large_rho_bound(rho)
        else:
            ok = True
        rows.append((rho, a, ok))
    return rows
