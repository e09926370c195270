"""Random generators for exact test data.

Every generator takes an explicit ``random.Random`` so suites stay deterministic.
Denominators are kept small on purpose: the cyclotomic moduli that appear in
the algebra and bimodule suites grow with them.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .exact import Angle, PRational, SplitScalar
from .solenoid import SolenoidPoint

SMALL_DENOMINATORS = (1, 1, 2, 3, 4, 5, 6, 7, 8, 9, 12)


def rand_rat(rng: random.Random, bound: int = 12, dens=SMALL_DENOMINATORS, nonzero=False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.choice(dens))
        if x or not nonzero:
            return x


def rand_prational(rng: random.Random, p: int, kmax: int = 4, bound: int = 12, nonzero=False) -> PRational:
    while True:
        x = Fraction(rng.randint(-bound, bound), p ** rng.randint(0, kmax))
        if x or not nonzero:
            return PRational.of(x, p)


def rand_split(rng: random.Random, bound: int = 12, nonzero=False) -> SplitScalar:
    while True:
        q = SplitScalar(rand_rat(rng, bound), rand_rat(rng, bound))
        if not nonzero or q.is_invertible():
            return q


def rand_point(rng: random.Random, p: int, level: int, max_den: int = 12) -> SolenoidPoint:
    """A coherent point built from a random top angle (not via pi_map)."""
    top = Angle(rng.randrange(1 << 20), rng.randint(1, max_den) * p ** rng.randint(0, level + 2))
    angles = [top]
    for _ in range(level):
        angles.append(angles[-1] * p)
    return SolenoidPoint(p, tuple(reversed(angles)))


def rand_unit(rng: random.Random, p: int, lo: int = -3, hi: int = 3) -> PRational:
    return PRational.unit(rng.choice((1, -1)), rng.randint(lo, hi), p)


def rand_sl2(rng: random.Random, p: int, c_lo: int = -3, c_hi: int = 3, kmax: int = 3):
    """Random SL2(Z[1/p]) matrix whose lower-left entry is a unit +-p^j."""
    from .moebius import Mat2

    c = rand_unit(rng, p, c_lo, c_hi)
    a = rand_prational(rng, p, kmax, bound=9)
    d = rand_prational(rng, p, kmax, bound=9)
    b = (a * d - 1) / c
    return Mat2(a, b, c, d)


def rand_gl2(rng: random.Random, p: int, kmax: int = 3):
    """Random GL2(Z[1/p]) matrix with determinant +-p^l, -3 <= l <= 3."""
    from .moebius import Mat2

    m = rand_sl2(rng, p, kmax=kmax)
    if rng.random() < 0.3:
        # lower-left entry zero: a d = 1 block
        u = rand_unit(rng, p)
        m = Mat2(u, rand_prational(rng, p, kmax), PRational.of(0, p), PRational.of(1, p) / u)
    eps = rand_unit(rng, p)
    return m @ Mat2.diag(eps, PRational.of(1, p))
