"""Upper bounds on a(rho) and the piecewise envelope a0.

Irrational values are carried as ``AlgebraicValue`` enclosures; the three
irrational breakpoints are exact elements of Q(sqrt 2), Q(sqrt 13) or (for
rho1) an isolated root of an explicit quartic.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exactmath import (
    AlgebraicValue,
    QuadElem,
    UniPoly,
    as_fraction,
    format_fraction,
    fraction_to_decimal,
    isolate_unique_root,
    quad_sign,
    refine,
    sqrt_enclosure,
)

DEFAULT_PRECISION = Fraction(1, 10**12)
SQRT2 = QuadElem.sqrt(2)


class RhoOutOfRange(ValueError):
    pass


class NegativeDiscriminant(ValueError):
    pass


class BiPoly:
    """Polynomial in (rho, a); ``terms[(i, j)]`` is the coefficient of rho^i a^j."""

    def __init__(self, terms: dict[tuple[int, int], object]):
        self.terms = {k: QuadElem.coerce(v) for k, v in terms.items() if QuadElem.coerce(v) != 0}

    def __call__(self, rho, a) -> QuadElem:
        total = QuadElem(0)
        for (i, j), c in self.terms.items():
            total = total + c * _pow(rho, i) * _pow(a, j)
        return total

    def in_a(self, rho) -> UniPoly:
        """Univariate polynomial in a at fixed rho."""
        deg = max(j for _, j in self.terms)
        coeffs = [QuadElem(0)] * (deg + 1)
        for (i, j), c in self.terms.items():
            coeffs[j] = coeffs[j] + c * _pow(rho, i)
        return UniPoly(coeffs)

    def along(self, a_of_rho: UniPoly) -> UniPoly:
        """Univariate polynomial in rho after substituting a = a_of_rho(rho)."""
        x = UniPoly.x()
        out = UniPoly([])
        for (i, j), c in self.terms.items():
            out = out + UniPoly([c]) * x**i * a_of_rho**j
        return out


def _pow(x, k: int):
    out = QuadElem(1)
    for _ in range(k):
        out = out * x
    return out


F_K = BiPoly({(0, 3): 1, (1, 2): 3, (0, 2): -4, (1, 1): 5, (0, 1): -1, (3, 0): -4, (2, 0): 1})
G_K = BiPoly({
    (0, 4): 1,
    (1, 3): 4 * SQRT2 - 8,
    (0, 3): 7 - 4 * SQRT2,
    (2, 2): 6 - 4 * SQRT2,
    (1, 2): 8 * SQRT2 - 13,
    (3, 1): 1,
    (2, 1): 15 - 10 * SQRT2,
    (1, 1): 2 * SQRT2 - 3,
    (4, 0): 8 * SQRT2 - 12,
    (3, 0): 3 - 2 * SQRT2,
})
# the quadratic whose smaller root is Improved(rho)
Q_IMPROVED = BiPoly({
    (0, 2): Fraction(37, 2),
    (1, 1): 11,
    (0, 1): Fraction(-15, 2),
    (2, 0): Fraction(17, 2),
    (1, 0): Fraction(-11, 2),
    (0, 0): Fraction(9, 8),
})


def _maybe_rational(x: QuadElem):
    return x.base if x.is_rational else x


def f_K(rho, a):
    """a^3 + (3rho-4)a^2 + (5rho-1)a - 4rho^3 + rho^2 (rational in, rational out)."""
    return _maybe_rational(F_K(rho, a))


def g_K(rho, a) -> QuadElem:
    return G_K(rho, a)


@dataclass(frozen=True)
class BoundValue:
    """An exact rational or an enclosure, tagged with the formula that produced it."""

    value: Fraction | AlgebraicValue
    piece: str

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, Fraction) or self.value.is_exact

    def exact(self) -> Fraction:
        if isinstance(self.value, Fraction):
            return self.value
        return self.value.exact()

    @property
    def lo(self) -> Fraction:
        return self.value if isinstance(self.value, Fraction) else self.value.lo

    @property
    def hi(self) -> Fraction:
        return self.value if isinstance(self.value, Fraction) else self.value.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self, width) -> "BoundValue":
        if isinstance(self.value, Fraction):
            return self
        v = refine(self.value, width)
        return BoundValue(v.lo if v.is_exact else v, self.piece)

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def compare(self, r) -> int:
        """Sign of value - r."""
        r = as_fraction(r)
        if isinstance(self.value, Fraction):
            return (self.value > r) - (self.value < r)
        return self.value.compare(r)

    def __str__(self):
        if self.is_exact:
            return format_fraction(self.exact())
        return f"[{fraction_to_decimal(self.lo, 15, 'floor')},{fraction_to_decimal(self.hi, 15, 'ceil')}]"


def _rho(rho) -> Fraction:
    try:
        return as_fraction(rho)
    except TypeError as exc:
        raise RhoOutOfRange(str(exc)) from exc


def _check_low(rho: Fraction) -> None:
    if not 0 <= rho <= Fraction(1, 3):
        raise RhoOutOfRange(f"rho = {rho} outside [0, 1/3]")


def _root_in_trivial_window(poly: UniPoly, rho: Fraction, piece: str, precision) -> BoundValue:
    if rho == 0:
        return BoundValue(Fraction(0), piece)
    v = isolate_unique_root(poly, rho * rho, rho * rho / (1 - rho))
    v = refine(v, precision) if not v.is_exact else v
    return BoundValue(v.lo if v.is_exact else v, piece)


def krein(rho, precision=DEFAULT_PRECISION) -> BoundValue:
    """Root of f_K(rho, .) in [rho^2, rho^2/(1-rho)]."""
    rho = _rho(rho)
    _check_low(rho)
    return _root_in_trivial_window(F_K.in_a(rho), rho, "krein", precision)


def hat_krein(rho, precision=DEFAULT_PRECISION) -> BoundValue:
    """Root of g_K(rho, .) in [rho^2, rho^2/(1-rho)]."""
    rho = _rho(rho)
    _check_low(rho)
    return _root_in_trivial_window(G_K.in_a(rho), rho, "hat_krein", precision)


def improved_discriminant(rho) -> Fraction:
    rho = as_fraction(rho)
    return 242 * rho - 27 - 508 * rho * rho


def improved(rho, precision=DEFAULT_PRECISION) -> BoundValue:
    """(15 - 22rho - 2 sqrt(242rho - 27 - 508rho^2)) / 74."""
    rho = _rho(rho)
    D = improved_discriminant(rho)
    if D < 0:
        raise NegativeDiscriminant(f"242rho - 27 - 508rho^2 = {D} < 0 at rho = {rho}")
    # 2*sqrt(D)/74 must be enclosed to width <= precision
    sl, sh = sqrt_enclosure(D, as_fraction(precision) * 37)
    base = 15 - 22 * rho
    if sl == sh:
        return BoundValue((base - 2 * sl) / 74, "improved")
    poly = Q_IMPROVED.in_a(rho)
    v = isolate_unique_root(poly, (base - 2 * sh) / 74, (base - 2 * sl) / 74)
    return BoundValue(v.lo if v.is_exact else v, "improved")


class Breakpoints:
    """rho0 < rho1 < rho2, where the envelope switches formula."""

    rho0 = QuadElem(Fraction(30, 98), Fraction(-3, 98), 2)
    rho2 = QuadElem(Fraction(66, 269), Fraction(2, 269), 13)

    @cached_property
    def rho1_poly(self) -> UniPoly:
        """g_K(rho, (1 - 3rho)/2) as a polynomial in rho."""
        return G_K.along(UniPoly([Fraction(1, 2), Fraction(-3, 2)]))

    @cached_property
    def rho1(self) -> AlgebraicValue:
        return isolate_unique_root(self.rho1_poly, Fraction(27, 100), Fraction(272, 1000))

    def rho0_enclosure(self, width) -> tuple[Fraction, Fraction]:
        return _quad_enclosure(self.rho0, width)

    def rho2_enclosure(self, width) -> tuple[Fraction, Fraction]:
        return _quad_enclosure(self.rho2, width)

    def rho1_enclosure(self, width) -> tuple[Fraction, Fraction]:
        v = refine(self.rho1, as_fraction(width))
        return v.lo, v.hi

    def ordered(self) -> bool:
        """rho0 < rho1 < rho2 < 9/32 < 3/10 < 5/16 < 1/3, decided exactly."""
        r1 = self.rho1
        lo0, hi0 = self.rho0_enclosure(Fraction(1, 10**6))
        lo2, hi2 = self.rho2_enclosure(Fraction(1, 10**6))
        while not (hi0 < r1.lo and r1.hi < lo2):
            r1 = refine(r1, r1.width / 2)
            if r1.width < Fraction(1, 10**30):
                return False
        return quad_sign(self.rho2 - Fraction(9, 32)) < 0 and Fraction(9, 32) < Fraction(3, 10) < Fraction(5, 16) < Fraction(1, 3)

    def exact_identities(self) -> dict[str, bool]:
        """Exact checks that hold at the breakpoints."""
        r0 = self.rho0
        r2 = self.rho2
        t = r0 * Fraction(1, 3)
        lo, hi = r0 * r0, r0 * r0 * (1 - r0).inverse()
        D2 = 242 * r2 - 27 - 508 * r2 * r2
        lhs = 89 * r2 - 22
        return {
            "f_K(rho0, rho0/3) = 0": F_K(r0, t) == 0,
            "g_K(rho0, rho0/3) = 0": G_K(r0, t) == 0,
            "rho0/3 inside [rho0^2, rho0^2/(1-rho0)]": quad_sign(t - lo) >= 0 and quad_sign(hi - t) >= 0,
            "f_K(rho0, .) changes sign on the window": quad_sign(F_K(r0, lo)) > 0 and quad_sign(F_K(r0, hi)) < 0,
            "g_K(rho0, .) changes sign on the window": quad_sign(G_K(r0, lo)) > 0 and quad_sign(G_K(r0, hi)) < 0,
            "improved(rho2) = (1-3rho2)/2": lhs * lhs == 4 * D2 and quad_sign(lhs) >= 0 and quad_sign(D2) >= 0,
            "improved(9/32) = 3/32": improved(Fraction(9, 32)).is_exact and improved(Fraction(9, 32)).exact() == Fraction(3, 32),
            "g_K(rho1, (1-3rho1)/2) = 0": self.rho1_poly(self.rho1.lo) * self.rho1_poly(self.rho1.hi) <= 0,
        }


def _quad_enclosure(x: QuadElem, width) -> tuple[Fraction, Fraction]:
    """Rational enclosure of base + coeff*sqrt(d)."""
    width = as_fraction(width)
    if x.is_rational:
        return x.base, x.base
    c = abs(x.coeff)
    sl, sh = sqrt_enclosure(x.radicand, width / c)
    if x.coeff > 0:
        return x.base + c * sl, x.base + c * sh
    return x.base - c * sh, x.base - c * sl


BREAKPOINTS = Breakpoints()

PIECES = ("krein", "hat_krein", "(1-3rho)/2", "improved", "rho/3", "2rho-1/2", "2rho/5")


def a0(rho, precision=DEFAULT_PRECISION) -> BoundValue:
    """The piecewise upper bound on a(rho) for 0 <= rho <= 1/3."""
    rho = _rho(rho)
    _check_low(rho)
    bp = BREAKPOINTS
    if quad_sign(rho - bp.rho0) <= 0:
        return krein(rho, precision)
    c1 = bp.rho1.compare(rho)  # sign of rho1 - rho
    if c1 > 0:
        return hat_krein(rho, precision)
    if c1 == 0:
        return BoundValue((1 - 3 * rho) / 2, "hat_krein|(1-3rho)/2")
    if quad_sign(rho - bp.rho2) <= 0:
        return BoundValue((1 - 3 * rho) / 2, "(1-3rho)/2")
    if rho < Fraction(9, 32):
        return improved(rho, precision)
    if rho == Fraction(9, 32):
        return BoundValue(rho / 3, "improved|rho/3")
    if rho < Fraction(3, 10):
        return BoundValue(rho / 3, "rho/3")
    if rho == Fraction(3, 10):
        return BoundValue(rho / 3, "rho/3|2rho-1/2")
    if rho < Fraction(5, 16):
        return BoundValue(2 * rho - Fraction(1, 2), "2rho-1/2")
    if rho == Fraction(5, 16):
        return BoundValue(2 * rho - Fraction(1, 2), "2rho-1/2|2rho/5")
    return BoundValue(Fraction(2, 5) * rho, "2rho/5")


def piece_value(piece: str, rho, precision=DEFAULT_PRECISION) -> BoundValue:
    """Evaluate one named formula of the envelope outside its own interval."""
    rho = _rho(rho)
    if piece == "krein":
        return krein(rho, precision)
    if piece == "hat_krein":
        return hat_krein(rho, precision)
    if piece == "improved":
        return improved(rho, precision)
    linear = {
        "(1-3rho)/2": (1 - 3 * rho) / 2,
        "rho/3": rho / 3,
        "2rho-1/2": 2 * rho - Fraction(1, 2),
        "2rho/5": Fraction(2, 5) * rho,
    }
    if piece not in linear:
        raise KeyError(piece)
    return BoundValue(linear[piece], piece)


def large_rho_bound(rho) -> Fraction:
    """Bound for 1/3 <= rho < 1/2: rho/3, then 3rho - 1, then 0 beyond 2/5."""
    rho = _rho(rho)
    if not Fraction(1, 3) <= rho < Fraction(1, 2):
        raise RhoOutOfRange(f"rho = {rho} outside [1/3, 1/2)")
    if rho <= Fraction(3, 8):
        return rho / 3
    if rho <= Fraction(2, 5):
        return 3 * rho - 1
    return Fraction(0)


def trivial_bound(rho) -> Fraction:
    rho = _rho(rho)
    if rho >= 1:
        raise RhoOutOfRange("trivial bound needs rho < 1")
    return rho * rho / (1 - rho)


def krein_product_factor(k: int, c: int) -> tuple[int, int, int]:
    if k < 1 or not 1 <= c <= k:
        raise ValueError(f"need k >= 1 and 1 <= c <= k, got ({k}, {c})")
    return k - 1, k - c, k * k - k * (3 * c + 1) - c**3 + 4 * c * c - c


def tfsr_densities(k: int, c: int) -> tuple[Fraction, Fraction, Fraction]:
    """(n, rho, a) of a hypothetical triangle-free strongly regular graph with degree k, mu = c."""
    n = 1 + Fraction(k * (k - 1 + c), c)
    return n, k / n, c / n


def krein_report(k: int, c: int) -> dict:
    """Product factors next to the (rho, a)-form, so sign disagreements are visible."""
    f1, f2, f3 = krein_product_factor(k, c)
    n, rho, a = tfsr_densities(k, c)
    fk = f_K(rho, a)
    prod = f1 * f2 * f3
    return {
        "k": k, "c": c, "n": n, "factors": (f1, f2, f3), "product": prod,
        "rho": rho, "a": a, "f_K": fk,
        "sign_discrepancy": (prod < 0) != (fk < 0),
    }


# ---------------------------------------------------------------- curve


def grid(step, lo=Fraction(0), hi=Fraction(1, 3)) -> list[Fraction]:
    step = as_fraction(step)
    if step <= 0:
        raise ValueError("grid step must be positive")
    out = []
    k = math.ceil(lo / step)
    while k * step <= hi:
        out.append(k * step)
        k += 1
    return out


@dataclass(frozen=True)
class CurveRow:
    rho: Fraction
    bound: BoundValue

    @property
    def piece(self) -> str:
        return self.bound.piece


def _row(args) -> CurveRow:
    rho, precision = args
    return CurveRow(rho, a0(rho, precision).refine(precision))


def curve_samples(grid_points: Iterable, precision=DEFAULT_PRECISION, workers: int = 1) -> list[CurveRow]:
    pts = [(as_fraction(r), as_fraction(precision)) for r in grid_points]
    if workers > 1 and len(pts) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_row, pts))
    return [_row(p) for p in pts]


def _digits(precision: Fraction) -> int:
    d = 0
    while Fraction(1, 10**d) > precision:
        d += 1
    return d


def curve_csv(rows: Sequence[CurveRow], precision=DEFAULT_PRECISION) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rho", "a0_lo", "a0_hi", "piece"])
    digits = _digits(as_fraction(precision))
    for row in rows:
        b = row.bound
        if b.is_exact:
            lo = hi = format_fraction(b.exact())
        else:
            lo = fraction_to_decimal(b.lo, digits, "floor")
            hi = fraction_to_decimal(b.hi, digits, "ceil")
        w.writerow([format_fraction(row.rho), lo, hi, row.piece])
    return buf.getvalue()
