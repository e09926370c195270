"""Scalar models shared by the bibundle machinery.

A model bundles the scalar ring hosting bibundle points, the acting group, the
projection onto the circle/solenoid and the unit test used for strict mode.
:class:`SolenoidModel` is the R x Q_p picture over Z[1/p]; :class:`CircleModel`
is the classical torus picture (R over Z, level-0 points).
"""
from __future__ import annotations

from fractions import Fraction

from .errors import NonInvertible, NotInZ1p
from .exact import PRational, SplitScalar, fmt
from .groupoids import ActionGroupoid, kronecker_groupoid, solenoid_groupoid
from .sampling import rand_point, rand_prational, rand_rat, rand_split
from .solenoid import SolenoidPoint, orbit_solve, pi_map


class SolenoidModel:
    name = "solenoid"

    def __init__(self, p: int, level: int):
        self.p = p
        self.level = level

    # scalars
    def scalar(self, t, r=None) -> SplitScalar:
        return SplitScalar(t, t if r is None else r)

    def const(self, x) -> SplitScalar:
        x = Fraction(x.value if isinstance(x, PRational) else x)
        return SplitScalar(x, x)

    def components(self, x: SplitScalar):
        return (("real", x.t), ("p-adic", x.r))

    def inv(self, x: SplitScalar) -> SplitScalar:
        return x.inv()

    def zero(self) -> SplitScalar:
        return SplitScalar.zero()

    # group
    def group(self, x) -> PRational:
        return PRational.of(x.value if isinstance(x, PRational) else x, self.p)

    def group_zero(self) -> PRational:
        return PRational.of(0, self.p)

    def delta(self, n) -> SplitScalar:
        return SplitScalar.delta(n.value if isinstance(n, PRational) else n)

    def is_unit(self, c) -> bool:
        try:
            return self.group(c).is_unit()
        except NotInZ1p:
            return False

    def solve_group(self, diff: SplitScalar, shift: SplitScalar):
        """The group element n with n * shift == diff, or None."""
        if shift.t == 0 or shift.r == 0:
            return None
        n_t, n_r = diff.t / shift.t, diff.r / shift.r
        if n_t != n_r:
            return None
        try:
            return self.group(n_t)
        except NotInZ1p:
            return None

    # points
    def pi(self, q: SplitScalar) -> SolenoidPoint:
        return pi_map(q, self.level, self.p)

    def orbit_solve(self, z: SolenoidPoint) -> SplitScalar:
        return orbit_solve(z)

    def identity(self) -> SolenoidPoint:
        return SolenoidPoint.identity(self.p, self.level)

    def groupoid(self, alpha: SplitScalar) -> ActionGroupoid:
        return solenoid_groupoid(alpha, self.p, self.level)

    # sampling
    def sample_scalar(self, rng) -> SplitScalar:
        return rand_split(rng)

    def sample_group(self, rng) -> PRational:
        return rand_prational(rng, self.p)

    def sample_point(self, rng) -> SolenoidPoint:
        return rand_point(rng, self.p, self.level)

    def show(self, x) -> str:
        return fmt(x)


class CircleModel:
    """R with Z acting; points are level-0 solenoid points (plain angles)."""

    name = "circle"

    def __init__(self, p: int = 2):
        self.p = p  # only used to tag level-0 points
        self.level = 0

    def scalar(self, t, r=None) -> Fraction:
        return Fraction(t)

    def const(self, x) -> Fraction:
        return Fraction(x.value if isinstance(x, PRational) else x)

    def components(self, x: Fraction):
        return (("real", x),)

    def inv(self, x: Fraction) -> Fraction:
        if x == 0:
            raise NonInvertible("zero has no inverse")
        return 1 / x

    def zero(self) -> Fraction:
        return Fraction(0)

    def group(self, x) -> int:
        x = Fraction(x.value if isinstance(x, PRational) else x)
        if x.denominator != 1:
            raise NotInZ1p(f"{x} is not an integer")
        return int(x)

    def group_zero(self) -> int:
        return 0

    def delta(self, n) -> Fraction:
        return Fraction(n)

    def is_unit(self, c) -> bool:
        return Fraction(c.value if isinstance(c, PRational) else c) in (1, -1)

    def solve_group(self, diff: Fraction, shift: Fraction):
        if shift == 0:
            return None
        n = diff / shift
        return int(n) if n.denominator == 1 else None

    def pi(self, t: Fraction) -> SolenoidPoint:
        return pi_map(SplitScalar(t, 0), 0, self.p)

    def orbit_solve(self, z: SolenoidPoint) -> Fraction:
        return Fraction(z.angles[0])

    def identity(self) -> SolenoidPoint:
        return SolenoidPoint.identity(self.p, 0)

    def groupoid(self, theta) -> ActionGroupoid:
        return kronecker_groupoid(theta, self.p)

    def sample_scalar(self, rng) -> Fraction:
        return rand_rat(rng)

    def sample_group(self, rng) -> int:
        return rng.randint(-30, 30)

    def sample_point(self, rng) -> SolenoidPoint:
        return rand_point(rng, self.p, 0)

    def show(self, x) -> str:
        return fmt(x)
