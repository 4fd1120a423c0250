"""graph6 encoding plus the rational weight sidecar format.

Sidecar: one line per vertex, ``index numerator/denominator`` (0-based index).
A missing sidecar means uniform weights.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from ..exactmath import format_fraction, parse_fraction
from .graph import WeightedGraph


class Graph6Error(ValueError):
    pass


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def _decode_n(data: str) -> tuple[int, str]:
    if not data:
        raise Graph6Error("empty graph6 string")
    if data[0] != "~":
        return ord(data[0]) - 63, data[1:]
    if len(data) > 1 and data[1] == "~":
        chunk, rest = data[2:8], data[8:]
    else:
        chunk, rest = data[1:4], data[4:]
    n = 0
    for ch in chunk:
        n = (n << 6) | (ord(ch) - 63)
    return n, rest


def bits_to_graph6(n: int, bits: Iterable[int]) -> str:
    """Encode upper-triangle bits in column order (0,1),(0,2),(1,2),(0,3)..."""
    out = [_encode_n(n)]
    acc = 0
    k = 0
    for b in bits:
        acc = (acc << 1) | b
        k += 1
        if k == 6:
            out.append(chr(acc + 63))
            acc = k = 0
    if k:
        out.append(chr((acc << (6 - k)) + 63))
    return "".join(out)


def masks_to_graph6(masks) -> str:
    n = len(masks)
    return bits_to_graph6(n, ((masks[j] >> i) & 1 for j in range(1, n) for i in range(j)))


def to_graph6(G: WeightedGraph | np.ndarray) -> str:
    adj = G.adj if isinstance(G, WeightedGraph) else np.asarray(G, dtype=bool)
    n = adj.shape[0]
    return bits_to_graph6(n, (int(adj[i, j]) for j in range(1, n) for i in range(j)))


def parse_graph6(line: str) -> np.ndarray:
    data = line.strip()
    if data.startswith(">>graph6<<"):
        data = data[10:]
    if any(not (63 <= ord(c) <= 126) for c in data):
        raise Graph6Error(f"invalid graph6 character in {line!r}")
    n, rest = _decode_n(data)
    need = n * (n - 1) // 2
    if len(rest) * 6 < need or len(rest) > (need + 5) // 6:
        raise Graph6Error(f"graph6 body has wrong length for n={n}")
    adj = np.zeros((n, n), dtype=bool)
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(rest[k // 6]) - 63
            if (byte >> (5 - k % 6)) & 1:
                adj[i, j] = adj[j, i] = True
            k += 1
    return adj


def graph6_to_masks(line: str) -> list[int]:
    adj = parse_graph6(line)
    return [sum(1 << int(j) for j in np.flatnonzero(row)) for row in adj]


def iter_graph6(path: str | Path) -> Iterator[np.ndarray]:
    with open(path) as fh:
        for line in fh:
            if line.strip():
                yield parse_graph6(line)


def parse_weights(text: str, n: int) -> list[Fraction]:
    weights: list[Fraction | None] = [None] * n
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise Graph6Error(f"weights line {lineno}: expected 'index p/q'")
        idx = int(parts[0])
        if not 0 <= idx < n:
            raise Graph6Error(f"weights line {lineno}: vertex {idx} out of range")
        weights[idx] = parse_fraction(parts[1])
    missing = [i for i, w in enumerate(weights) if w is None]
    if missing:
        raise Graph6Error(f"no weight given for vertices {missing}")
    return weights  # type: ignore[return-value]


def format_weights(weights) -> str:
    return "".join(f"{i} {format_fraction(w)}\n" for i, w in enumerate(weights))


def read_graph(path: str | Path, weights_path: str | Path | None = None) -> WeightedGraph:
    """Read the first graph of a graph6 file plus an optional weight sidecar."""
    graphs = list(iter_graph6(path))
    if not graphs:
        raise Graph6Error(f"{path}: no graph found")
    adj = graphs[0]
    weights = None
    if weights_path is not None:
        weights = parse_weights(Path(weights_path).read_text(), adj.shape[0])
    return WeightedGraph(adj, weights)


def write_graph(G: WeightedGraph, path: str | Path, weights_path: str | Path | None = None) -> None:
    Path(path).write_text(to_graph6(G) + "\n")
    if weights_path is not None:
        Path(weights_path).write_text(format_weights(G.weights))
