from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfsr.graphcore import (
    CATALOG,
    CompleteGraph,
    Graph6Error,
    GraphError,
    WeightedGraph,
    ZeroA,
    a_value,
    blow_up,
    boundedness_bound,
    boundedness_check,
    boundedness_witness,
    catalog,
    cycle,
    degree_measure,
    g_h,
    is_diameter_two,
    is_triangle_free,
    is_twin_free,
    kneser,
    kneser_parameters,
    minimizing_pairs,
    p3n,
    parse_graph6,
    read_graph,
    regular_density,
    srg_parameters,
    to_graph6,
    twin_reduce,
    write_graph,
)

from conftest import random_triangle_free

SRG = {
    "cycle5": (5, 2, 0, 1),
    "petersen": (10, 3, 0, 1),
    "clebsch": (16, 5, 0, 2),
    "hoffman_singleton": (50, 7, 0, 1),
    "gewirtz": (56, 10, 0, 2),
    "m22": (77, 16, 0, 4),
    "higman_sims": (100, 22, 0, 6),
}


@pytest.mark.parametrize("name", sorted(SRG))
def test_catalog_parameters(name):
    G = catalog(name)
    n, k, lam, mu = SRG[name]
    assert srg_parameters(G) == SRG[name]
    assert is_triangle_free(G) and is_twin_free(G) and is_diameter_two(G)
    assert regular_density(G) == Fraction(k, n)
    assert a_value(G) == Fraction(mu, n)


def test_catalog_names():
    assert set(CATALOG) == set(SRG)
    assert srg_parameters(catalog("kneser(2)")) == SRG["petersen"]
    with pytest.raises(GraphError):
        catalog("dodecahedron")


@pytest.mark.parametrize("k", [2, 3])
def test_kneser_parameters(k):
    G = kneser(k)
    rho, a = kneser_parameters(k)
    assert regular_density(G) == rho and a_value(G) == a


def test_weights_validated():
    adj = [[0, 1], [1, 0]]
    with pytest.raises(GraphError):
        WeightedGraph(adj, [Fraction(1, 3), Fraction(1, 3)])
    with pytest.raises(GraphError):
        WeightedGraph(adj, [Fraction(3, 2), Fraction(-1, 2)])
    with pytest.raises(GraphError):
        WeightedGraph([[1, 0], [0, 0]])
    with pytest.raises(GraphError):
        WeightedGraph([[0, 1], [0, 0]])


def test_complete_graph_has_no_a():
    K2 = WeightedGraph([[0, 1], [1, 0]])
    with pytest.raises(CompleteGraph):
        a_value(K2)


def test_c6_and_c5():
    C6 = cycle(6)
    assert regular_density(C6) == Fraction(1, 3)
    assert a_value(C6) == 0 and not is_diameter_two(C6)
    C5 = catalog("cycle5")
    assert len(minimizing_pairs(C5)) == 5


def test_triangle_detected():
    K3 = WeightedGraph([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert not is_triangle_free(K3)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_graph6_roundtrip(n, seed):
    G = random_triangle_free(np.random.default_rng(seed), n, weighted=False)
    assert (parse_graph6(to_graph6(G)) == G.adj).all()


def test_graph6_known_string():
    assert to_graph6(catalog("petersen")).startswith("I")
    with pytest.raises(Graph6Error):
        parse_graph6("I???")


def test_file_roundtrip(tmp_path):
    G = g_h(2)
    write_graph(G, tmp_path / "g.g6", tmp_path / "g.w")
    H = read_graph(tmp_path / "g.g6", tmp_path / "g.w")
    assert (H.adj == G.adj).all() and H.weights == G.weights


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 9), st.integers(0, 2**32 - 1))
def test_blow_up_preserves_invariants(n, seed):
    G = random_triangle_free(np.random.default_rng(seed), n)
    B = blow_up(G)
    assert is_triangle_free(B)
    assert regular_density(B) == regular_density(G)
    R = twin_reduce(B)
    assert sorted(R.weights) == sorted(twin_reduce(G).weights)
    # a(blow-up) = min of a(G) and the degree of every vertex that was copied
    iw, _ = G.integer_weights
    cands = [p3n(G, u, v) for u in range(G.n) for v in range(u + 1, G.n) if not G.adj[u, v]]
    cands += [degree_measure(G, v) for v in range(G.n) if int(iw[v]) >= 2]
    if cands:
        assert a_value(B) == min(cands)
    try:
        assert a_value(twin_reduce(G)) >= a_value(G)
    except CompleteGraph:
        pass


def test_twin_reduce_merges():
    # K_{2,2}: both sides are twin classes
    G = cycle(4)
    R = twin_reduce(G)
    assert R.n == 2 and R.weights == (Fraction(1, 2), Fraction(1, 2))


def test_boundedness_bound_values():
    assert boundedness_bound(Fraction(1, 2)) == 4**3 + 4
    assert boundedness_bound(Fraction(1, 1)) == 2**2 + 2
    with pytest.raises(ZeroA):
        boundedness_bound(0)
    # non-integral 1/a: floor of the real bound
    a = Fraction(2, 5)
    assert boundedness_bound(a) == int(5 ** 3.5 + 5)


@pytest.mark.parametrize("h", [1, 2, 3, 4])
def test_g_h(h):
    G = g_h(h)
    assert G.n == 2 * h + 2**h
    assert is_triangle_free(G)
    assert a_value(G) >= Fraction(1, 4 * h)
    chain = boundedness_witness(G)
    assert chain.valid, chain.violations()
    assert is_twin_free(G) == (h >= 2)


@pytest.mark.parametrize("name", sorted(SRG))
def test_witness_on_catalog(name):
    G = catalog(name)
    assert boundedness_check(G)
    chain = boundedness_witness(G)
    assert chain.valid, chain.violations()
    assert len(chain.sets) - 1 <= 1 / chain.a
