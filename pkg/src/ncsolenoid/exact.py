"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`.  On top of them this module provides
the ring Z[1/p] (:class:`PRational`), rational angles in Q/Z (:class:`Angle`),
p-adic fractional parts and digit expansions, and split scalars in R x Q_p
restricted to the dense rational subgroup (:class:`SplitScalar`).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import (
    LiteralError,
    NonInvertible,
    NotInZ1p,
    WindowAboveValuation,
    WindowBelowValuation,
)

Rat = Fraction
RatLike = Union[int, Fraction, "PRational"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, PRational):
        return x.value
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact rational")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % f for f in range(3, math.isqrt(p) + 1, 2))


def split_power(n: int, p: int) -> tuple[int, int]:
    """Return ``(k, u)`` with ``n = p**k * u`` and ``p`` not dividing ``u`` (n != 0)."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def valuation(x, p: int) -> float | int:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    x = as_fraction(x)
    if x == 0:
        return math.inf
    kn, _ = split_power(x.numerator, p)
    kd, _ = split_power(x.denominator, p)
    return kn - kd


def frac_part(r, p: int) -> Fraction:
    """p-adic fractional part {r}_p: the negative-index digits of r.

    The result lies in [0, 1) and has a p-power denominator; ``r - {r}_p`` is
    p-integral.  For ``r = a / (p**k * u)`` this is ``x / p**k`` with
    ``x = a * u^{-1} mod p**k``.
    """
    r = as_fraction(r)
    k, u = split_power(r.denominator, p)
    if k == 0:
        return Fraction(0)
    pk = p**k
    return Fraction(r.numerator * pow(u, -1, pk) % pk, pk)


def padic_digits(r, p: int, start: int, stop: int, allow_below_valuation: bool = True) -> tuple[int, ...]:
    """Digits ``d_j`` of the p-adic expansion of ``r`` for ``start <= j < stop``.

    ``sum(d_j p^j)`` agrees with ``r`` modulo ``p^stop`` times a p-integral
    number.  Asking for a window that starts above ``v_p(r)`` would drop nonzero
    digits and raises :class:`WindowAboveValuation`; a window starting below the
    valuation yields leading zeros unless ``allow_below_valuation`` is false.
    """
    r = as_fraction(r)
    if stop <= start:
        return ()
    v = valuation(r, p)
    if start > v:
        raise WindowAboveValuation(f"window start {start} exceeds v_p(r) = {v}")
    if start < v and not allow_below_valuation:
        raise WindowBelowValuation(f"window start {start} is below v_p(r) = {v}")
    if r == 0:
        return (0,) * (stop - start)
    # s = r * p^-start is p-integral; its residue mod p^(stop-start) carries the digits
    s = r / Fraction(p) ** start
    width = stop - start
    mod = p**width
    x = s.numerator * pow(s.denominator, -1, mod) % mod
    digits = []
    for _ in range(width):
        x, d = divmod(x, p)
        digits.append(d)
    return tuple(digits)


@dataclass(frozen=True, slots=True)
class PRational:
    """Element ``mantissa * p**exponent`` of Z[1/p] in canonical form."""

    mantissa: int
    exponent: int
    p: int

    def __post_init__(self):
        if self.mantissa == 0:
            if self.exponent != 0:
                raise ValueError("zero must have exponent 0")
        elif self.mantissa % self.p == 0:
            raise ValueError("mantissa divisible by p; use PRational.of")

    @classmethod
    def of(cls, x, p: int) -> PRational:
        if isinstance(x, PRational):
            if x.p != p:
                raise NotInZ1p(f"{x} belongs to Z[1/{x.p}], not Z[1/{p}]")
            return x
        if isinstance(x, str):
            return parse_prational(x, p)
        x = as_fraction(x)
        if x == 0:
            return cls(0, 0, p)
        kd, u = split_power(x.denominator, p)
        if u != 1:
            raise NotInZ1p(f"{x} is not in Z[1/{p}]")
        kn, m = split_power(x.numerator, p)
        return cls(m, kn - kd, p)

    @classmethod
    def unit(cls, sign: int, k: int, p: int) -> PRational:
        return cls(1 if sign > 0 else -1, k, p)

    @property
    def value(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa * self.p**self.exponent)
        return Fraction(self.mantissa, self.p**-self.exponent)

    def is_unit(self) -> bool:
        return abs(self.mantissa) == 1

    def _coerce(self, other) -> PRational:
        return PRational.of(other, self.p)

    def __add__(self, other):
        if isinstance(other, (PRational, int, Fraction)):
            return PRational.of(self.value + as_fraction(other), self.p)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (PRational, int, Fraction)):
            return PRational.of(self.value - as_fraction(other), self.p)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (PRational, int, Fraction)):
            return PRational.of(as_fraction(other) - self.value, self.p)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (PRational, int, Fraction)):
            return PRational.of(self.value * as_fraction(other), self.p)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if not other.is_unit():
            raise NonInvertible(f"{other} is not a unit of Z[1/{self.p}]")
        return PRational(self.mantissa * other.mantissa, self.exponent - other.exponent, self.p) \
            if self.mantissa else self

    def __neg__(self):
        return PRational(-self.mantissa, self.exponent, self.p)

    def __eq__(self, other):
        if isinstance(other, PRational):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        return self.value < as_fraction(other)

    def __bool__(self):
        return self.mantissa != 0

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"PRational({self.literal()}, p={self.p})"

    def __str__(self):
        return self.literal()

    def literal(self) -> str:
        if self.exponent >= 0:
            return str(self.mantissa * self.p**self.exponent)
        return f"{self.mantissa}/{self.p}^{-self.exponent}"


class Angle(Fraction):
    """A point e^{2 i pi value} of the circle, stored as a rational in [0, 1)."""

    __slots__ = ()

    def __new__(cls, numerator=0, denominator=None):
        f = Fraction(numerator, denominator) if denominator is not None else as_fraction(numerator)
        f = f - (f.numerator // f.denominator)
        return super().__new__(cls, f.numerator, f.denominator)

    def __add__(self, other):
        return Angle(Fraction.__add__(self, as_fraction(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Angle(Fraction.__sub__(self, as_fraction(other)))

    def __rsub__(self, other):
        return Angle(as_fraction(other) - Fraction(self))

    def __neg__(self):
        return Angle(-Fraction(self))

    def __mul__(self, other):
        return Angle(Fraction.__mul__(self, as_fraction(other)))

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is Angle:
            return self._numerator == other._numerator and self._denominator == other._denominator
        return Fraction.__eq__(self, other)

    __hash__ = Fraction.__hash__

    def __repr__(self):
        return f"Angle({self.numerator}/{self.denominator})"

    def __str__(self):
        return f"{self.numerator}/{self.denominator}" if self.denominator != 1 else str(self.numerator)

    def __reduce__(self):
        return (Angle, (self.numerator, self.denominator))


def angle_from_ints(num: int, den: int) -> Angle:
    """Fast Angle from an integer pair (den > 0), reduced mod 1."""
    num %= den
    g = math.gcd(num, den)
    a = object.__new__(Angle)
    a._numerator = num // g
    a._denominator = den // g
    return a


@dataclass(frozen=True, slots=True)
class SplitScalar:
    """Element (t, r) of R x Q_p with both components exact rationals."""

    t: Fraction
    r: Fraction

    def __post_init__(self):
        if not isinstance(self.t, Fraction):
            object.__setattr__(self, "t", as_fraction(self.t))
        if not isinstance(self.r, Fraction):
            object.__setattr__(self, "r", as_fraction(self.r))

    @classmethod
    def delta(cls, n) -> SplitScalar:
        """Diagonal embedding n -> (n, n)."""
        n = as_fraction(n)
        return cls(n, n)

    @classmethod
    def zero(cls) -> SplitScalar:
        return cls(Fraction(0), Fraction(0))

    def __add__(self, other):
        if isinstance(other, SplitScalar):
            return SplitScalar(self.t + other.t, self.r + other.r)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SplitScalar):
            return SplitScalar(self.t - other.t, self.r - other.r)
        return NotImplemented

    def __neg__(self):
        return SplitScalar(-self.t, -self.r)

    def __mul__(self, other):
        if isinstance(other, SplitScalar):
            return SplitScalar(self.t * other.t, self.r * other.r)
        if isinstance(other, (int, Fraction, PRational)):
            k = as_fraction(other)
            return SplitScalar(self.t * k, self.r * k)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SplitScalar):
            return self * other.inv()
        if isinstance(other, (int, Fraction, PRational)):
            k = as_fraction(other)
            if k == 0:
                raise NonInvertible("division by zero scalar")
            return SplitScalar(self.t / k, self.r / k)
        return NotImplemented

    def inv(self) -> SplitScalar:
        if self.t == 0 or self.r == 0:
            which = "real" if self.t == 0 else "p-adic"
            raise NonInvertible(f"{self} has a zero {which} component")
        return SplitScalar(1 / self.t, 1 / self.r)

    def is_invertible(self) -> bool:
        return self.t != 0 and self.r != 0

    def __str__(self):
        return f"({self.t}, {self.r})"


def delta_embed(n) -> SplitScalar:
    return SplitScalar.delta(n)


def split_ops(x: SplitScalar, y: SplitScalar | None = None) -> dict:
    """The split-scalar operation family applied to one pair, keyed by name."""
    out = {"neg": -x}
    if y is not None:
        out.update(add=x + y, sub=x - y, mul=x * y)
    if x.is_invertible():
        out["inv"] = x.inv()
    return out


# ---------------------------------------------------------------- literals

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_PRAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(p|\d+)\s*(?:\^\s*(\d+))?)?\s*$")


def parse_rat(s: str) -> Fraction:
    m = _RAT_RE.match(s)
    if not m:
        raise LiteralError(f"bad rational literal {s!r} (expected n or n/d)")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise LiteralError(f"zero denominator in {s!r}")
    return Fraction(num, den)


def parse_prational(s: str, p: int) -> PRational:
    """Parse ``m``, ``m/p^k``, ``m/b^k`` or ``m/d`` and check it lies in Z[1/p]."""
    m = _PRAT_RE.match(s)
    if not m:
        raise LiteralError(f"bad Z[1/p] literal {s!r} (expected m or m/p^k)")
    num = int(m.group(1))
    base = m.group(2)
    if base is None:
        return PRational.of(num, p)
    b = p if base == "p" else int(base)
    k = int(m.group(3) or 1)
    if b == 0:
        raise LiteralError(f"zero denominator in {s!r}")
    try:
        return PRational.of(Fraction(num, b**k), p)
    except NotInZ1p as exc:
        raise NotInZ1p(f"literal {s!r} is not in Z[1/{p}]") from exc


def parse_digits(s: str, p: int) -> Fraction:
    """Parse a p-adic digit string ``d0.d1d2...@v`` (digits from index v upward).

    Digits are single characters in base p (0-9 then a-z); the dot after the
    first digit is optional and purely cosmetic.
    """
    body, sep, v = s.strip().partition("@")
    if not sep:
        raise LiteralError(f"digit literal {s!r} lacks '@v'")
    try:
        v = int(v)
    except ValueError:
        raise LiteralError(f"bad valuation in {s!r}") from None
    body = body.replace(".", "")
    total = Fraction(0)
    for i, ch in enumerate(body):
        try:
            d = int(ch, 36)
        except ValueError:
            raise LiteralError(f"bad digit {ch!r} in {s!r}") from None
        if d >= p:
            raise LiteralError(f"digit {ch!r} out of range for p={p}")
        total += d * Fraction(p) ** (v + i)
    return total


def format_digits(r, p: int, start: int, stop: int) -> str:
    digits = padic_digits(r, p, start, stop)
    chars = "".join("0123456789abcdefghijklmnopqrstuvwxyz"[d] for d in digits)
    if len(chars) > 1:
        chars = chars[0] + "." + chars[1:]
    return f"{chars}@{start}"


def fmt(x) -> str:
    """Stable text form for rationals and scalars used in reports."""
    if isinstance(x, SplitScalar):
        return f"({fmt(x.t)}, {fmt(x.r)})"
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)
