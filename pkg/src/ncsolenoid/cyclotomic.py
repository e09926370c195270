"""Exact complex numbers that are rational combinations of roots of unity.

A :class:`CycloComplex` is ``sum c_j exp(2 i pi phi_j)`` with rational ``c_j``
and rational phases ``phi_j``.  Zero-testing reduces the sum in Q(zeta_N) modulo
the N-th cyclotomic polynomial, where N is the lcm of the phase denominators.

The reduction uses ``Phi_N(x) = Phi_R(x^(N/R))`` with R the radical of N, so
only ``Phi_R`` (degree phi(R), small in practice) is ever materialised and every
monomial reduces through a cached table of ``y^j mod Phi_R(y)``.
"""
from __future__ import annotations

import cmath
import contextlib
import contextvars
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

from .errors import LiteralError, ModulusOverflow
from .exact import Angle, as_fraction, fmt

DEFAULT_CAP = 2**16


@dataclass(frozen=True)
class NumericSettings:
    mode: str = "exact"  # "exact" or "float"
    tolerance: float = 1e-9
    cap: int = DEFAULT_CAP


_settings: contextvars.ContextVar[NumericSettings] = contextvars.ContextVar(
    "ncsolenoid_numeric", default=NumericSettings()
)


def current_settings() -> NumericSettings:
    return _settings.get()


@contextlib.contextmanager
def numeric_mode(mode: str = "exact", tolerance: float = 1e-9, cap: int = DEFAULT_CAP):
    """Temporarily switch between exact cyclotomic and float comparison."""
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown numeric mode {mode!r}")
    token = _settings.set(NumericSettings(mode, float(tolerance), int(cap)))
    try:
        yield
    finally:
        _settings.reset(token)


# ---------------------------------------------------------------- polynomials

def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den monic
    num = list(num)
    dq = len(den) - 1
    quot = [0] * (len(num) - dq)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + dq]
        quot[i] = c
        if c:
            for j, dc in enumerate(den):
                num[i + j] -= c * dc
    if any(num[:dq]):
        raise ArithmeticError("non-exact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Divisor recurrence: Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
    """
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def euler_phi(n: int) -> int:
    out = n
    for q in _prime_factors(n):
        out -= out // q
    return out


@lru_cache(maxsize=None)
def _power_table(rad: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """For j < rad, the sparse reduction of y^j modulo Phi_rad(y)."""
    phi = cyclotomic_poly(rad)
    deg = len(phi) - 1
    cur = [0] * deg
    cur[0] = 1
    table = []
    for _ in range(rad):
        table.append(tuple((e, c) for e, c in enumerate(cur) if c))
        # multiply by y, then eliminate y^deg using the monic Phi_rad
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for e in range(deg):
                cur[e] -= top * phi[e]
    return tuple(table)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# ---------------------------------------------------------------- CycloComplex

class CycloComplex:
    """Exact element of a cyclotomic field, kept in canonical reduced form.

    ``terms`` maps phases (:class:`Angle`) to nonzero rational coefficients.
    Equality is decided by reducing the difference; two equal values computed
    along different routes may carry different (but equivalent) term maps.
    """

    __slots__ = ("terms", "modulus")
    __hash__ = None

    def __init__(self, terms=None, *, _canonical=False):
        if _canonical:
            self.terms = terms
        else:
            self.terms = _canonicalize(terms or {})
        self.modulus = reduce(_lcm, (ph.denominator for ph in self.terms), 1)

    # constructors
    @classmethod
    def rational(cls, c) -> CycloComplex:
        c = as_fraction(c)
        return cls({Angle(0): c} if c else {}, _canonical=True)

    @classmethod
    def root(cls, phase, coeff=1) -> CycloComplex:
        return cls({Angle(phase): as_fraction(coeff)})

    @classmethod
    def zero(cls) -> CycloComplex:
        return cls({}, _canonical=True)

    @classmethod
    def one(cls) -> CycloComplex:
        return cls.rational(1)

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        merged = dict(self.terms)
        for ph, c in other.terms.items():
            merged[ph] = merged.get(ph, 0) + c
        return CycloComplex(merged)

    __radd__ = __add__

    def __neg__(self):
        return CycloComplex({ph: -c for ph, c in self.terms.items()}, _canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return CycloComplex.zero()
        out: dict = {}
        for ph1, c1 in self.terms.items():
            for ph2, c2 in other.terms.items():
                ph = ph1 + ph2
                out[ph] = out.get(ph, 0) + c1 * c2
        return CycloComplex(out)

    __rmul__ = __mul__

    def conj(self) -> CycloComplex:
        return CycloComplex({-ph: c for ph, c in self.terms.items()})

    def rotate(self, phase) -> CycloComplex:
        """Multiply by exp(2 i pi phase)."""
        phase = Angle(phase)
        if phase == 0:
            return self
        return CycloComplex({ph + phase: c for ph, c in self.terms.items()})

    def scale(self, k) -> CycloComplex:
        k = as_fraction(k)
        if k == 0:
            return CycloComplex.zero()
        return CycloComplex({ph: c * k for ph, c in self.terms.items()}, _canonical=True)

    # predicates
    def is_zero(self) -> bool:
        s = _settings.get()
        if s.mode == "float":
            return abs(self.to_complex()) <= s.tolerance
        return not self.terms

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    def __bool__(self):
        return not self.is_zero()

    def to_complex(self) -> complex:
        return sum((float(c) * cmath.exp(2j * math.pi * float(ph)) for ph, c in self.terms.items()), 0j)

    def as_rational(self):
        """The value as a Fraction if it is rational, else ``None``."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and Angle(0) in self.terms:
            return self.terms[Angle(0)]
        return None

    # text
    def literal(self) -> str:
        """Text form ``c@phase + ...`` (phase as a rational turn), ``0`` if empty."""
        if not self.terms:
            return "0"
        parts = []
        for ph in sorted(self.terms):
            c = self.terms[ph]
            parts.append(fmt(c) if ph == 0 else f"{fmt(c)}@{fmt(Fraction(ph))}")
        return " + ".join(parts)

    def __repr__(self):
        return f"CycloComplex({self.literal()})"

    __str__ = literal


def _coerce(x):
    if isinstance(x, CycloComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloComplex.rational(x)
    return None


def _canonicalize(terms: dict) -> dict:
    terms = {Angle(ph): as_fraction(c) for ph, c in terms.items() if c}
    if not terms:
        return {}
    settings = _settings.get()
    if settings.mode == "float":
        return terms
    n = reduce(_lcm, (ph.denominator for ph in terms), 1)
    if n % 4 == 2:
        # Q(zeta_2m) = Q(zeta_m) for odd m: zeta_2m = -zeta_m^((m+1)/2)
        m = n // 2
        half = (m + 1) // 2
        moved: dict = {}
        for ph, c in terms.items():
            k = ph.numerator * (n // ph.denominator)
            key = Fraction(k * half % m, m)
            moved[key] = moved.get(key, 0) + (-c if k % 2 else c)
        terms = {Angle(ph): c for ph, c in moved.items() if c}
        n = m
        if not terms:
            return {}
    if n > settings.cap:
        raise ModulusOverflow(f"cyclotomic modulus {n} exceeds cap {settings.cap}; retry in float mode")
    if n == 1:
        return terms
    rad = 1
    for q in _prime_factors(n):
        rad *= q
    stride = n // rad
    table = _power_table(rad)
    acc: dict[int, Fraction] = {}
    for ph, c in terms.items():
        k = ph.numerator * (n // ph.denominator)
        j, i = divmod(k, stride)
        for e, tc in table[j]:
            key = i + e * stride
            acc[key] = acc.get(key, 0) + c * tc
    return {Angle(k, n): c for k, c in sorted(acc.items()) if c}


def cyclo_canonicalize(x: CycloComplex | dict) -> CycloComplex:
    if isinstance(x, CycloComplex):
        return CycloComplex(x.terms)
    return CycloComplex(x)


def parse_cyclo(s: str) -> CycloComplex:
    """Parse ``c`` or ``c@phase`` terms joined by ``+`` (e.g. ``1 + -1/2@1/3``)."""
    from .exact import parse_rat

    total = CycloComplex.zero()
    for part in s.split("+"):
        part = part.strip()
        if not part:
            raise LiteralError(f"empty term in cyclotomic literal {s!r}")
        coeff, sep, phase = part.partition("@")
        c = parse_rat(coeff)
        total = total + (CycloComplex.root(parse_rat(phase), c) if sep else CycloComplex.rational(c))
    return total
