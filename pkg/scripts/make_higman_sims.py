"""Regenerate src/tfsr/graphcore/data/higman_sims.edges.

Builds the extended binary Golay code from the cyclic [23,12] code, takes the
octads through the two points 22 and 23 to get the 77 hexads of S(3,6,22), and
assembles the Higman-Sims graph on {inf} + 22 points + 77 hexads.
"""
from itertools import combinations
from pathlib import Path

GEN = 0b110001110101  # x^11+x^10+x^6+x^5+x^4+x^2+1, bit i = coeff of x^i


def golay24():
    basis = []
    for s in range(12):
        word = 0
        for i in range(12):
            if (GEN >> i) & 1:
                word ^= 1 << ((i + s) % 23)
        basis.append(word)
    words = {0}
    for b in basis:
        words |= {w ^ b for w in words}
    out = []
    for w in words:
        parity = bin(w).count("1") & 1
        out.append(w | (parity << 23))
    return out


def main():
    code = golay24()
    assert len(code) == 4096
    octads = [w for w in code if bin(w).count("1") == 8]
    assert len(octads) == 759
    both = (1 << 22) | (1 << 23)
    hexads = [w & ~both for w in octads if w & both == both]
    assert len(hexads) == 77
    n = 1 + 22 + 77
    edges = set()
    for p in range(22):
        edges.add((0, 1 + p))
    for h, word in enumerate(hexads):
        for p in range(22):
            if (word >> p) & 1:
                edges.add((1 + p, 23 + h))
    for (h1, w1), (h2, w2) in combinations(enumerate(hexads), 2):
        if w1 & w2 == 0:
            edges.add((23 + h1, 23 + h2))
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    assert set(deg) == {22}, set(deg)
    out = Path(__file__).resolve().parents[1] / "src/tfsr/graphcore/data/higman_sims.edges"
    lines = ["# Higman-Sims graph: vertex 0 = inf, 1..22 points, 23..99 hexads of S(3,6,22)"]
    lines += [f"{u} {v}" for u, v in sorted(edges)]
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(edges)} edges to {out}")


if __name__ == "__main__":
    main()
