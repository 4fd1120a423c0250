"""End-to-end acceptance checks, one test per criterion.

A per-criterion PASS/FAIL summary is printed at the end of the pytest run
(see ``conftest.py``); running this file directly does the same.
"""
from __future__ import annotations

import time
from fractions import Fraction

import numpy as np
import pytest

from tfsr import bounds
from tfsr.bounds import BREAKPOINTS, F_K, G_K, a0, f_K, hat_krein, improved, krein, large_rho_bound, piece_value
from tfsr.exactmath import QuadElem, UniPoly
from tfsr.flagcalc import case_analysis, identity_suite
from tfsr.graphcore import (
    CATALOG,
    a_value,
    boundedness_check,
    boundedness_witness,
    catalog,
    g_h,
    minimizing_pairs,
)
from tfsr.regweights import optimize_a, rho_of_skeleton, verify_certificate
from tfsr.search import SearchConfig, brute_force_classes, enumerate_triangle_free, run_search

from conftest import random_triangle_free

Q = Fraction
TIGHT = [("cycle5", Q(2, 5), Q(1, 5)), ("clebsch", Q(5, 16), Q(1, 8)), ("petersen", Q(3, 10), Q(1, 10)), ("higman_sims", Q(11, 50), Q(3, 50))]


def _upper(rho: Fraction):
    return a0(rho) if rho <= Q(1, 3) else bounds.BoundValue(large_rho_bound(rho), "large")


def test_criterion_01_tightness():
    t0 = time.perf_counter()
    for name, rho, a in TIGHT:
        G = catalog(name)
        assert a_value(G) == a, name
        bv = _upper(rho)
        assert bv.is_exact and bv.exact() == a, name
    elapsed = time.perf_counter() - t0
    print(f"tightness quadruple exact in {elapsed:.2f}s")
    assert elapsed < 10


def test_criterion_02_krein_exactness():
    assert f_K(Q(11, 50), Q(3, 50)) == 0
    k = krein(Q(11, 50))
    assert isinstance(k.value, Fraction) or k.is_exact
    assert k.exact() == Q(3, 50)


def test_criterion_03_breakpoints():
    w = Q(1, 10**12)
    lo0, hi0 = BREAKPOINTS.rho0_enclosure(w)
    lo1, hi1 = BREAKPOINTS.rho1_enclosure(w)
    lo2, hi2 = BREAKPOINTS.rho2_enclosure(w)
    r0 = BREAKPOINTS.rho0
    third = r0 * Q(1, 3)
    ids = BREAKPOINTS.exact_identities()
    imp = improved(Q(9, 32))
    checks = {
        "rho0 in [0.2629, 0.2631]": Q(2629, 10000) <= lo0 and hi0 <= Q(2631, 10000),
        "rho1 in [0.2705, 0.2715]": Q(2705, 10000) <= lo1 and hi1 <= Q(2715, 10000),
        "rho2 in [0.2715, 0.2725]": Q(2715, 10000) <= lo2 and hi2 <= Q(2725, 10000),
        # Krein and HatKrein both select rho0/3: both vanish there and it lies in the root window
        "f_K(rho0, rho0/3) = 0 in Q(sqrt 2)": F_K(r0, third) == 0,
        "g_K(rho0, rho0/3) = 0 in Q(sqrt 2)": G_K(r0, third) == 0,
        "rho0/3 in the root window": ids["rho0/3 inside [rho0^2, rho0^2/(1-rho0)]"],
        "krein(rho0) = hat_krein(rho0) = rho0/3": all(ids.values()),
        "improved(9/32) = 3/32": imp.is_exact and imp.exact() == Q(3, 32),
    }
    for k, v in checks.items():
        print(f"{'ok  ' if v else 'FAIL'} {k}")
    print(f"rho0 = [{float(lo0):.10f}, {float(hi0):.10f}]")
    failed = [k for k, v in checks.items() if not v]
    assert not failed, f"failing: {failed}; rho0 ~ {float(lo0):.7f}"


def test_criterion_04_two_bound_proximity():
    t0 = time.perf_counter()
    lo = BREAKPOINTS.rho0_enclosure(Q(1, 10**15))[1]
    hi = BREAKPOINTS.rho1_enclosure(Q(1, 10**15))[0]
    pts = [lo + (hi - lo) * Q(i, 60) for i in range(61)]
    tol = Q(3, 10**6)
    width = Q(1, 10**9)
    worst = Q(0)
    for r in pts:
        k, h = krein(r, width), hat_krein(r, width)
        assert k.width <= width and h.width <= width
        assert h.hi - k.lo <= tol, r
        # the sign is decided exactly: refine until the enclosures separate or coincide
        w = width
        while h.lo < k.hi and not (h.is_exact and k.is_exact and h.exact() == k.exact()):
            w /= 1000
            k, h = k.refine(w), h.refine(w)
            assert w > Q(1, 10**60), r
        worst = max(worst, h.hi - k.lo)
    elapsed = time.perf_counter() - t0
    print(f"{len(pts)} points, max HatKrein - Krein <= {float(worst):.3e}, {elapsed:.1f}s")
    assert elapsed < 60


def test_criterion_05_continuity():
    for rho, left, right in ((Q(3, 10), "rho/3", "2rho-1/2"), (Q(5, 16), "2rho-1/2", "2rho/5"), (Q(9, 32), "improved", "rho/3")):
        a, b = piece_value(left, rho), piece_value(right, rho)
        assert a.is_exact and b.is_exact and a.exact() == b.exact()
    assert piece_value("rho/3", Q(3, 10)).exact() == Q(1, 10)
    assert piece_value("2rho/5", Q(5, 16)).exact() == Q(1, 8)
    # value enclosures at the breakpoint itself: hull of the piece over a rho-enclosure
    w = Q(1, 10**9)
    rw = w / 10
    encl = {
        "rho0": (BREAKPOINTS.rho0_enclosure(rw), "krein", "hat_krein"),
        "rho1": (BREAKPOINTS.rho1_enclosure(rw), "hat_krein", "(1-3rho)/2"),
        "rho2": (BREAKPOINTS.rho2_enclosure(rw), "(1-3rho)/2", "improved"),
    }

    def hull(piece, lo, hi):
        vl, vh = piece_value(piece, lo, rw), piece_value(piece, hi, rw)
        return min(vl.lo, vh.lo), max(vl.hi, vh.hi)

    ids = BREAKPOINTS.exact_identities()
    for name, ((lo, hi), left, right) in encl.items():
        A, B = hull(left, lo, hi), hull(right, lo, hi)
        assert A[1] - A[0] <= w and B[1] - B[0] <= w, name
        assert A[0] <= B[1] and B[0] <= A[1], name
        print(f"{name}: {left} in [{float(A[0]):.12f},{float(A[1]):.12f}], {right} in [{float(B[0]):.12f},{float(B[1]):.12f}]")
    # exact meeting points
    assert ids["f_K(rho0, rho0/3) = 0"] and ids["g_K(rho0, rho0/3) = 0"]
    assert ids["improved(rho2) = (1-3rho2)/2"]
    lo1, hi1 = encl["rho1"][0]
    d_lo = piece_value("hat_krein", lo1, rw).midpoint() - (1 - 3 * lo1) / 2
    d_hi = piece_value("hat_krein", hi1, rw).midpoint() - (1 - 3 * hi1) / 2
    assert ids["g_K(rho1, (1-3rho1)/2) = 0"] and d_lo * d_hi <= 0


def test_criterion_06_polynomial_identities():
    x = UniPoly.x()
    one = UniPoly.const(1)
    # f_K(rho, rho^2) = rho^3 (rho^3 + 3rho^2 - 4rho + 1)
    assert F_K.along(x**2) - x**3 * (x**3 + 3 * x**2 - 4 * x + 1) == UniPoly([])
    # boundary values at a = rho^2/(1-rho), cleared of denominators
    def cleared(P, deg):
        out = UniPoly([])
        for (i, j), c in P.terms.items():
            out = out + UniPoly([c]) * x**i * x ** (2 * j) * (one - x) ** (deg - j)
        return out

    assert cleared(F_K, 3) + x**5 * (one - 2 * x) == UniPoly([])
    assert cleared(G_K, 4) + x**7 * (one - 2 * x) == UniPoly([])
    # g_K(rho, rho^2) > 0 on (0, 1/2): no roots there and positive at 1/4
    from tfsr.exactmath import quad_sign, sturm_count

    gk_low = G_K.along(x**2)
    assert sturm_count(gk_low.squarefree(), Q(1, 10**6), Q(1, 2) - Q(1, 10**6)) == 0
    assert quad_sign(gk_low(Q(1, 4))) > 0


def _weighted_instances(n_instances=100):
    rng = np.random.default_rng(7)
    out = []
    while len(out) < n_instances:
        n = int(rng.integers(3, 13))
        G = random_triangle_free(rng, n, p=float(rng.uniform(0.3, 0.9)))
        out.append(G)
    return out


CORE_IDENTITIES = ("i3N", "kuvw", "rho_expansion", "sst")
CORE_INEQUALITIES = ("t4I", "t4n", "s4t4_bound", "pair_gap", "trivial_bound")


def test_criterion_07_flag_identities():
    t0 = time.perf_counter()
    named = [catalog("petersen"), catalog("clebsch"), catalog("cycle5"), catalog("kneser3")]
    applicable = {c: 0 for c in CORE_INEQUALITIES}
    for G in named + _weighted_instances():
        rep = identity_suite(G)
        for c in CORE_IDENTITIES:
            assert rep[c].holds is True, (c, rep[c].line())
        for c in CORE_INEQUALITIES:
            assert rep[c].holds is not False, (c, rep[c].line())
            applicable[c] += rep[c].applicable
    elapsed = time.perf_counter() - t0
    print(f"flag suite on 104 graphs in {elapsed:.1f}s; inequality applicability {applicable}")
    assert all(applicable[c] >= 3 for c in CORE_INEQUALITIES)
    assert elapsed < 300


def test_criterion_08_case_analysis():
    G = catalog("clebsch")
    v1, v2 = minimizing_pairs(G)[0]
    rep = case_analysis(G, v1, v2)
    assert rep.ok
    assert rep["twofifth"].applicable and rep["twofifth"].lhs == rep["twofifth"].rhs
    assert rep["c2_cover"].applicable and rep["c2_cover"].holds and rep["c2_cover"].lhs == 1

    H = catalog("higman_sims")
    v1, v2 = minimizing_pairs(H)[0]
    rep = case_analysis(H, v1, v2)
    for c in ("F_hat_ij", "F_hat_ijk"):
        assert rep[c].applicable and rep[c].holds is True, rep[c].line()

    P = catalog("petersen")
    v1, v2 = minimizing_pairs(P)[0]
    rep = case_analysis(P, v1, v2)
    assert rep.a == rep.rho / 3
    for c in ("w_bound", "non_zero", "p4", "sophisticated", "three_fourteenths", "four_cover"):
        assert rep[c].applicable is False, c


def test_criterion_09_lp():
    for name, rho, a in (("petersen", Q(3, 10), Q(1, 10)), ("clebsch", Q(5, 16), Q(1, 8)), ("cycle5", Q(2, 5), Q(1, 5))):
        G = catalog(name)
        res = optimize_a(G)
        assert (res.rho_G, res.optimum_a) == (rho, a)
        assert verify_certificate(G, res)
    rng = np.random.default_rng(99)
    done = 0
    while done < 100:
        n = int(rng.integers(4, 13))
        G = random_triangle_free(rng, n, p=0.7, weighted=False)
        try:
            base = rho_of_skeleton(G)
        except Exception:
            base = None
        for _ in range(3):
            order = [int(x) for x in rng.permutation(n)]
            try:
                other = rho_of_skeleton(G, order)
            except Exception:
                other = None
            assert other == base
        done += 1


def test_criterion_10_boundedness():
    graphs = {name: catalog(name) for name in CATALOG}
    graphs.update({f"g_h({h})": g_h(h) for h in range(1, 5)})
    for name, G in graphs.items():
        a = a_value(G)
        assert boundedness_check(G, a), name
        chain = boundedness_witness(G, a)
        assert chain.valid, (name, chain.violations())
    for h in range(1, 5):
        assert a_value(g_h(h)) >= Q(1, 4 * h)


def test_criterion_11_search():
    for n in range(1, 7):
        got = enumerate_triangle_free(n)
        assert len(got) == len(set(got))
        assert len(got) == len(brute_force_classes(n)), n
    t0 = time.perf_counter()
    cfg = SearchConfig(n_max=11, rho_min=Q(0), rho_max=Q(1, 3))
    first = run_search(cfg)
    second = run_search(cfg)
    elapsed = time.perf_counter() - t0
    assert [r.line() for r in first] == [r.line() for r in second]
    assert len(first) == 1
    r = first[0]
    assert (r.n, r.rho_G, r.optimum_a) == (10, Q(3, 10), Q(1, 10))
    assert r.skeleton == "I@OZCMgs?"
    print(f"search to n=11 twice in {elapsed:.1f}s")


def test_criterion_12_moore_report():
    bv = a0(Q(57, 3250))
    print(f"a0(57/3250) = {bv} via {bv.piece}")
    assert bv.lo <= bv.hi


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
