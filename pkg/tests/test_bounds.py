from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfsr.bounds import (
    BREAKPOINTS,
    F_K,
    NegativeDiscriminant,
    Q_IMPROVED,
    RhoOutOfRange,
    a0,
    curve_csv,
    curve_samples,
    f_K,
    g_K,
    grid,
    hat_krein,
    improved,
    krein,
    krein_report,
    large_rho_bound,
    trivial_bound,
)
from tfsr.exactmath import QuadElem, quad_sign
from tfsr.graphcore import CATALOG, a_value, catalog, regular_density

Q = Fraction
rhos = st.fractions(min_value=Q(1, 1000), max_value=Q(1, 3), max_denominator=2000)


def test_known_values():
    assert f_K(Q(11, 50), Q(3, 50)) == 0
    assert f_K(Q(1, 5), Q(1, 25)) == Q(41, 15625)
    assert f_K(Q(3, 10), Q(1, 10)) == Q(1, 500)
    assert g_K(Q(1, 4), Q(1, 12)) == Q(-1, 10368)
    assert krein(Q(11, 50)).exact() == Q(3, 50)
    assert a0(Q(3, 10)).exact() == Q(1, 10)
    assert a0(Q(5, 16)).exact() == Q(1, 8)
    assert a0(Q(11, 50)).exact() == Q(3, 50)
    assert large_rho_bound(Q(2, 5)) == Q(1, 5)
    assert improved(Q(9, 32)).exact() == Q(3, 32)


@pytest.mark.parametrize("rho,piece", [
    (Q(1, 5), "krein"),
    (Q(27, 100), "hat_krein"),
    (Q(2715, 10000), "(1-3rho)/2"),
    (Q(7, 25), "improved"),
    (Q(9, 32), "improved|rho/3"),
    (Q(29, 100), "rho/3"),
    (Q(3, 10), "rho/3|2rho-1/2"),
    (Q(31, 100), "2rho-1/2"),
    (Q(5, 16), "2rho-1/2|2rho/5"),
    (Q(1, 3), "2rho/5"),
])
def test_dispatch(rho, piece):
    assert a0(rho).piece == piece


def test_breakpoints():
    assert BREAKPOINTS.ordered()
    lo, hi = BREAKPOINTS.rho0_enclosure(Q(1, 1000))
    assert Q(262, 1000) <= lo and hi <= Q(264, 1000)
    assert BREAKPOINTS.rho0 == QuadElem(Q(3, 98) * 10, Q(-3, 98), 2)
    assert all(BREAKPOINTS.exact_identities().values())


def test_rho0_is_root_of_krein_equals_third():
    # f_K(rho, rho/3) = -rho (98 rho^2 - 60 rho + 9) / 27 and rho0 is the smaller root
    r0 = BREAKPOINTS.rho0
    assert 98 * r0 * r0 - 60 * r0 + 9 == 0


def test_first_derivatives_agree_at_rho0():
    lo, hi = BREAKPOINTS.rho0_enclosure(Q(1, 10**30))
    r0 = (lo + hi) / 2
    w = Q(1, 10**25)
    diffs = []
    for k in (4, 5, 6):
        h = Q(1, 10**k)
        dk = (krein(r0 + h, w).midpoint() - krein(r0 - h, w).midpoint()) / (2 * h)
        dh = (hat_krein(r0 + h, w).midpoint() - hat_krein(r0 - h, w).midpoint()) / (2 * h)
        diffs.append(abs(float(dk - dh)))
    assert diffs[-1] < 1e-6
    assert diffs[-1] <= diffs[0]


@settings(max_examples=60, deadline=None)
@given(rhos)
def test_a0_within_trivial_window(rho):
    b = a0(rho, Q(1, 10**9))
    assert b.lo >= 0
    assert b.hi <= trivial_bound(rho) + Q(1, 10**9)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Q(1, 100), max_value=Q(1, 3), max_denominator=500))
def test_krein_root_properties(rho):
    k = krein(rho, Q(1, 10**15))
    assert quad_sign(F_K(rho, k.lo)) * quad_sign(F_K(rho, k.hi)) <= 0
    assert rho * rho <= k.lo and k.hi <= trivial_bound(rho)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Q(2722, 10000), max_value=Q(9, 32), max_denominator=5000))
def test_improved_matches_closed_form(rho):
    v = improved(rho, Q(1, 10**14))
    D = 242 * rho - 27 - 508 * rho * rho
    closed = (15 - 22 * float(rho) - 2 * math.sqrt(float(D))) / 74
    assert abs(float(v.midpoint()) - closed) < 1e-12
    # the independent quadratic vanishes inside the enclosure
    assert quad_sign(Q_IMPROVED(rho, v.lo)) * quad_sign(Q_IMPROVED(rho, v.hi)) <= 0


def test_improved_domain():
    with pytest.raises(NegativeDiscriminant):
        improved(Q(1, 10))


@pytest.mark.parametrize("bad", [Q(-1, 10), Q(2, 5)])
def test_a0_domain(bad):
    with pytest.raises(RhoOutOfRange):
        a0(bad)


def test_large_rho_domain():
    assert large_rho_bound(Q(1, 3)) == Q(1, 9)
    assert large_rho_bound(Q(9, 20)) == 0
    with pytest.raises(RhoOutOfRange):
        large_rho_bound(Q(1, 2))


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_graphs_respect_bound(name):
    G = catalog(name)
    rho, a = regular_density(G), a_value(G)
    if rho <= Q(1, 3):
        assert a0(rho).compare(a) >= 0
    else:
        assert a <= large_rho_bound(rho)
    if rho <= BREAKPOINTS.rho0_enclosure(Q(1, 10**6))[0]:
        assert f_K(rho, a) >= 0


def test_krein_report():
    rep = krein_report(22, 6)  # Higman-Sims
    assert rep["n"] == 100 and rep["f_K"] == 0
    rep = krein_report(3, 1)
    assert rep["rho"] == Q(3, 10) and rep["a"] == Q(1, 10)


def test_grid_and_csv():
    pts = grid(Q(1, 100))
    assert len(pts) == 34 and pts[0] == 0 and pts[-1] == Q(33, 100)
    rows = curve_samples(pts)
    text = curve_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0] == "rho,a0_lo,a0_hi,piece" and len(lines) == 35
    by_rho = {l.split(",")[0]: l.split(",") for l in lines[1:]}
    assert by_rho["3/10"][1:] == ["1/10", "1/10", "rho/3|2rho-1/2"]
    lo, hi = by_rho["1/4"][1:3]
    assert Q(lo) <= Q(hi) and Q(hi) - Q(lo) <= Q(2, 10**12)
    assert "e" not in text.lower().replace("krein", "").replace("piece", "").replace("improved", "")


def test_curve_workers_deterministic():
    pts = grid(Q(1, 50))
    assert curve_csv(curve_samples(pts, workers=2)) == curve_csv(curve_samples(pts))
