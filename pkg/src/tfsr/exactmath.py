"""Exact arithmetic over Q and the quadratic fields Q(sqrt 2), Q(sqrt 13).

Real algebraic numbers are carried as a defining polynomial plus an isolating
rational interval; every comparison is decided exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

RADICANDS = (2, 13)


class MixedFieldError(ValueError):
    """Arithmetic between elements of different quadratic fields."""


class NoSignChange(ValueError):
    pass


class DegenerateInterval(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


def sign(x) -> int:
    return (x > 0) - (x < 0)


class QuadElem:
    """``base + coeff * sqrt(radicand)`` with rational ``base`` and ``coeff``.

    A purely rational element (``coeff == 0``) is compatible with every field.
    """

    __slots__ = ("base", "coeff", "radicand")

    def __init__(self, base=0, coeff=0, radicand: int | None = None):
        self.base = as_fraction(base)
        self.coeff = as_fraction(coeff)
        if self.coeff == 0:
            radicand = None
        elif radicand not in RADICANDS:
            raise ValueError(f"unsupported radicand {radicand!r}")
        self.radicand = radicand

    @classmethod
    def coerce(cls, x) -> "QuadElem":
        if isinstance(x, QuadElem):
            return x
        return cls(as_fraction(x))

    @classmethod
    def sqrt(cls, d: int) -> "QuadElem":
        return cls(0, 1, d)

    @property
    def is_rational(self) -> bool:
        return self.coeff == 0

    def to_fraction(self) -> Fraction:
        if self.coeff:
            raise ValueError(f"{self} is irrational")
        return self.base

    def _field(self, other: "QuadElem") -> int | None:
        if self.radicand is None:
            return other.radicand
        if other.radicand is None or other.radicand == self.radicand:
            return self.radicand
        raise MixedFieldError(f"cannot combine sqrt({self.radicand}) with sqrt({other.radicand})")

    def __add__(self, other):
        other = QuadElem.coerce(other)
        d = self._field(other)
        return QuadElem(self.base + other.base, self.coeff + other.coeff, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.base, -self.coeff, self.radicand)

    def __sub__(self, other):
        return self + (-QuadElem.coerce(other))

    def __rsub__(self, other):
        return QuadElem.coerce(other) - self

    def __mul__(self, other):
        other = QuadElem.coerce(other)
        d = self._field(other)
        if d is None:
            return QuadElem(self.base * other.base)
        return QuadElem(
            self.base * other.base + d * self.coeff * other.coeff,
            self.base * other.coeff + self.coeff * other.base,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.base, -self.coeff, self.radicand)

    def norm(self) -> Fraction:
        d = self.radicand or 0
        return self.base * self.base - d * self.coeff * self.coeff

    def inverse(self) -> "QuadElem":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return QuadElem(c.base / nrm, c.coeff / nrm, c.radicand)

    def __truediv__(self, other):
        return self * QuadElem.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QuadElem.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadElem(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadElem(other)
        if not isinstance(other, QuadElem):
            return NotImplemented
        if self.coeff == 0 and other.coeff == 0:
            return self.base == other.base
        return (self.base, self.coeff, self.radicand) == (other.base, other.coeff, other.radicand)

    def __hash__(self):
        if self.coeff == 0:
            return hash(self.base)
        return hash((self.base, self.coeff, self.radicand))

    def __lt__(self, other):
        return quad_sign(self - other) < 0

    def __le__(self, other):
        return quad_sign(self - other) <= 0

    def __gt__(self, other):
        return quad_sign(self - other) > 0

    def __ge__(self, other):
        return quad_sign(self - other) >= 0

    def __bool__(self):
        return bool(self.base) or bool(self.coeff)

    def __repr__(self):
        if self.coeff == 0:
            return f"QuadElem({self.base})"
        return f"QuadElem({self.base}, {self.coeff}, {self.radicand})"

    def __str__(self):
        if self.coeff == 0:
            return str(self.base)
        return f"{self.base}{'+' if self.coeff > 0 else '-'}{abs(self.coeff)}*sqrt({self.radicand})"

    def enclosure(self, width) -> tuple[Fraction, Fraction]:
        """Rational interval of width <= ``width`` containing the element."""
        if self.coeff == 0:
            return self.base, self.base
        width = as_fraction(width)
        lo, hi = sqrt_enclosure(self.radicand, width / abs(self.coeff))
        a, b = self.base + self.coeff * lo, self.base + self.coeff * hi
        return min(a, b), max(a, b)


Scalar = Union[int, Fraction, QuadElem]


def quad_sign(x: Scalar) -> int:
    """Exact sign of ``base + coeff*sqrt(d)``."""
    if not isinstance(x, QuadElem):
        return sign(x)
    sb, sc = sign(x.base), sign(x.coeff)
    if sc == 0:
        return sb
    if sb == 0 or sb == sc:
        return sc
    lhs = x.base * x.base
    rhs = x.coeff * x.coeff * x.radicand
    if lhs > rhs:
        return sb
    if lhs < rhs:
        return sc
    return 0


def isqrt_floor(q: Fraction) -> int:
    return math.isqrt(q.numerator // q.denominator)


def sqrt_enclosure(d, width) -> tuple[Fraction, Fraction]:
    """Rational [lo, hi] with lo <= sqrt(d) <= hi and hi - lo <= width."""
    d = as_fraction(d)
    width = as_fraction(width)
    if d < 0:
        raise ValueError("negative radicand")
    # scale so that 1/scale <= width
    scale = 1
    while Fraction(1, scale) > width:
        scale *= 2
    # floor(sqrt(d) * scale) = isqrt(floor(d * scale^2))
    s2 = d * scale * scale
    r = math.isqrt(s2.numerator // s2.denominator)
    lo = Fraction(r, scale)
    hi = Fraction(r + 1, scale)
    if lo * lo == d:
        return lo, lo
    return lo, hi


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the closed interval [lo, hi]."""
    if lo > hi:
        raise DegenerateInterval(f"{lo} > {hi}")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


class UniPoly:
    """Univariate polynomial with coefficients in Q or one Q(sqrt d).

    Coefficients are stored lowest degree first.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [QuadElem.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        radicands = {c.radicand for c in cs if c.radicand is not None}
        if len(radicands) > 1:
            raise MixedFieldError(f"mixed radicands {sorted(radicands)}")
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c: Scalar) -> "UniPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else 0

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def radicand(self) -> int | None:
        for c in self.coeffs:
            if c.radicand is not None:
                return c.radicand
        return None

    @property
    def is_rational(self) -> bool:
        return all(c.is_rational for c in self.coeffs)

    def lead(self) -> QuadElem:
        return self.coeffs[-1] if self.coeffs else QuadElem(0)

    def __call__(self, x: Scalar) -> QuadElem:
        acc = QuadElem(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (QuadElem(0),) * (n - len(self.coeffs))
        b = other.coeffs + (QuadElem(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return UniPoly()
        out = [QuadElem(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            try:
                other = _as_poly(other)
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly([c])
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(c * i for i, c in enumerate(self.coeffs) if i)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = other.lead().inverse()
        quot = [QuadElem(0)] * max(len(rem) - dq, 1)
        while len(rem) - 1 >= dq and rem:
            shift = len(rem) - 1 - dq
            q = rem[-1] * inv_lead
            quot[shift] = q
            for i, c in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - q * c
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return UniPoly(quot), UniPoly(rem)

    def monic(self) -> "UniPoly":
        inv = self.lead().inverse()
        return UniPoly(c * inv for c in self.coeffs)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero else a

    def squarefree(self) -> "UniPoly":
        g = self.gcd(self.derivative())
        if g.degree == 0:
            return self
        return self.divmod(g)[0]


def _as_poly(x) -> UniPoly:
    if isinstance(x, UniPoly):
        return x
    if isinstance(x, (int, Fraction, QuadElem)):
        return UniPoly([x])
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


def poly_sign_at(p: UniPoly, x) -> int:
    return quad_sign(p(x))


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero:
        rem = seq[-2].divmod(seq[-1])[1]
        if rem.is_zero:
            break
        seq.append(-rem)
    return seq


def _sign_variations(seq: Sequence[UniPoly], x) -> int:
    signs = [s for s in (poly_sign_at(q, x) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: UniPoly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    seq = sturm_sequence(p.squarefree())
    return _sign_variations(seq, lo) - _sign_variations(seq, hi)


@dataclass(frozen=True)
class AlgebraicValue:
    """The unique real root of ``poly`` inside ``[lo, hi]``."""

    poly: UniPoly
    lo: Fraction
    hi: Fraction

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def exact(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("value not pinned to a rational")
        return self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refine(self, width) -> "AlgebraicValue":
        return refine(self, width)

    def compare(self, r) -> int:
        """Sign of ``self - r`` for a rational ``r``."""
        r = as_fraction(r)
        v = self
        while True:
            if v.is_exact:
                return sign(v.lo - r)
            if r < v.lo:
                return 1
            if r > v.hi:
                return -1
            if poly_sign_at(v.poly, r) == 0:
                return 0
            v = _bisect(v)

    def decimal_interval(self, digits: int) -> tuple[str, str]:
        return (fraction_to_decimal(self.lo, digits, "floor"),
                fraction_to_decimal(self.hi, digits, "ceil"))

    def __str__(self):
        if self.is_exact:
            return str(self.lo)
        lo, hi = self.decimal_interval(12)
        return f"[{lo}, {hi}]"


def _bisect(v: AlgebraicValue) -> AlgebraicValue:
    p, lo, hi = v.poly, v.lo, v.hi
    mid = (lo + hi) / 2
    s_mid = poly_sign_at(p, mid)
    if s_mid == 0:
        return AlgebraicValue(p, mid, mid)
    if poly_sign_at(p, lo) * s_mid < 0:
        lo, hi = lo, mid
    else:
        lo, hi = mid, hi
    # pin small-denominator rational roots that bisection would never hit
    q = simplest_between(lo, hi)
    if poly_sign_at(p, q) == 0:
        return AlgebraicValue(p, q, q)
    return AlgebraicValue(p, lo, hi)


def isolate_unique_root(p: UniPoly, lo, hi) -> AlgebraicValue:
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        raise DegenerateInterval(f"{lo} > {hi}")
    if p.is_zero:
        raise NoSignChange("zero polynomial has no isolated root")
    s_lo, s_hi = poly_sign_at(p, lo), poly_sign_at(p, hi)
    if s_lo == 0:
        return AlgebraicValue(p, lo, lo)
    if s_hi == 0:
        return AlgebraicValue(p, hi, hi)
    if s_lo * s_hi < 0:
        return AlgebraicValue(p, lo, hi)
    if lo < hi and sturm_count(p, lo, hi) == 1:
        # even-multiplicity root: the squarefree part changes sign across it
        return isolate_unique_root(p.squarefree(), lo, hi)
    raise NoSignChange(f"no sign change of p on [{lo}, {hi}]")


def refine(v: AlgebraicValue, width) -> AlgebraicValue:
    width = as_fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    while v.hi - v.lo > width:
        v = _bisect(v)
    return v


def fraction_to_decimal(x: Fraction, digits: int, rounding: str = "nearest") -> str:
    """Decimal string of ``x`` with ``digits`` fractional digits."""
    scaled = x * 10**digits
    if rounding == "floor":
        q = math.floor(scaled)
    elif rounding == "ceil":
        q = math.ceil(scaled)
    else:
        q = round(scaled)
    neg = q < 0
    s = str(abs(q)).rjust(digits + 1, "0")
    out = s[:-digits] + "." + s[-digits:] if digits else s
    return ("-" if neg else "") + out


def format_fraction(x: Fraction) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Parse ``p/q``, an integer, or a finite decimal literal exactly."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
