from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfsr.graphcore import CompleteGraph, WeightedGraph, a_value, catalog, cycle, g_h, regular_density
from tfsr.regweights import (
    INFEASIBLE,
    NO_REGULAR_WEIGHTS,
    OPTIMAL,
    DegenerateRho,
    NoRegularWeights,
    bareiss_solve,
    optimize_a,
    positive_feasibility,
    rho_of_skeleton,
    simplex_max,
    verify_certificate,
)

from conftest import random_triangle_free

Q = Fraction


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_bareiss_solves(rows, cols, seed):
    rng = np.random.default_rng(seed)
    M = rng.integers(-3, 4, size=(rows, cols)).tolist()
    x0 = rng.integers(-3, 4, size=cols).tolist()
    b = [sum(M[i][j] * x0[j] for j in range(cols)) for i in range(rows)]
    x = bareiss_solve(M, b, list(rng.permutation(cols)))
    assert x is not None
    assert all(sum(M[i][j] * x[j] for j in range(cols)) == b[i] for i in range(rows))


def test_bareiss_inconsistent():
    assert bareiss_solve([[1, 1], [2, 2]], [1, 3]) is None


def test_simplex_small():
    # max x + y, x + 2y + s1 = 4, 3x + y + s2 = 6
    res = simplex_max([1, 1, 0, 0], [[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6])
    assert res.status == "Optimal" and res.value == Q(14, 5)
    assert sum(bi * yi for bi, yi in zip([4, 6], res.y)) == res.value
    assert simplex_max([1, 0], [[1, -1]], [1]).status == "Unbounded"
    assert simplex_max([1], [[1], [1]], [1, 2]).status == "Infeasible"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_simplex_against_scipy(m, nv, seed):
    scipy_opt = pytest.importorskip("scipy.optimize")
    rng = np.random.default_rng(seed)
    A = rng.integers(0, 4, size=(m, nv)).tolist()
    b = rng.integers(1, 6, size=m).tolist()
    c = rng.integers(-3, 4, size=nv).tolist()
    # add a bounding row sum(x) + slack = 10 so the LP is never unbounded
    A = [row + [0] for row in A] + [[1] * nv + [1]]
    b = b + [10]
    c = c + [0]
    ours = simplex_max(c, A, b)
    ref = scipy_opt.linprog([-x for x in c], A_eq=A, b_eq=b, bounds=[(0, None)] * (nv + 1), method="highs")
    if ref.status == 2:
        assert ours.status == "Infeasible"
        return
    assert ours.status == "Optimal"
    assert abs(float(ours.value) + ref.fun) < 1e-7
    assert all(x >= 0 for x in ours.x)
    assert all(sum(Q(A[i][j]) * ours.x[j] for j in range(nv + 1)) == b[i] for i in range(m + 1))


@pytest.mark.parametrize("name,rho,a", [
    ("petersen", Q(3, 10), Q(1, 10)),
    ("clebsch", Q(5, 16), Q(1, 8)),
    ("cycle5", Q(2, 5), Q(1, 5)),
])
def test_optimize_catalog(name, rho, a):
    G = catalog(name)
    res = optimize_a(G)
    assert res.status == OPTIMAL and (res.rho_G, res.optimum_a) == (rho, a)
    assert verify_certificate(G, res)
    assert res.text().startswith(f"status=Optimal rho_G={rho.numerator}/{rho.denominator}")


def test_text_uniform():
    assert optimize_a(catalog("petersen")).text() == "status=Optimal rho_G=3/10 a*=1/10 weights=uniform"


def test_g_h3_skeleton():
    res = optimize_a(g_h(3))
    assert (res.rho_G, res.optimum_a) == (Q(11, 34), Q(3, 34))
    assert verify_certificate(g_h(3), res)


def test_c6_and_path():
    res = optimize_a(cycle(6))
    assert res.rho_G == Q(1, 3) and res.optimum_a == 0
    P3 = WeightedGraph.from_edges(3, [(0, 1), (1, 2)])
    assert rho_of_skeleton(P3) == Q(1, 2)


def test_star_positive_weights():
    K13 = WeightedGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    w = positive_feasibility(K13)
    assert w[0] == Q(1, 2) and all(x > 0 for x in w) and sum(w) == 1


def test_no_regular_weights():
    # an isolated vertex has degree 0 under every weighting
    G = WeightedGraph.from_edges(4, [(0, 1), (1, 2)])
    with pytest.raises(NoRegularWeights):
        rho_of_skeleton(G)
    assert optimize_a(G).status == NO_REGULAR_WEIGHTS


def test_complete_graph():
    with pytest.raises(CompleteGraph):
        optimize_a(WeightedGraph([[0, 1], [1, 0]]))


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 9), st.integers(0, 2**32 - 1))
def test_lp_on_random_skeletons(n, seed):
    rng = np.random.default_rng(seed)
    G = random_triangle_free(rng, n, p=0.8, weighted=False)
    try:
        rho = rho_of_skeleton(G)
    except (NoRegularWeights, DegenerateRho):
        return
    for _ in range(3):
        assert rho_of_skeleton(G, list(rng.permutation(n))) == rho
    try:
        res = optimize_a(G)
    except CompleteGraph:
        return
    if res.status != OPTIMAL:
        assert res.status == INFEASIBLE
        return
    assert verify_certificate(G, res)
    H = WeightedGraph(G.adj, res.weights)
    assert regular_density(H) == rho
    assert a_value(H) >= res.optimum_a
    # uniform weights, when regular, can never beat the optimum
    if regular_density(G) is not None and a_value(G) is not None:
        assert a_value(G) <= res.optimum_a
