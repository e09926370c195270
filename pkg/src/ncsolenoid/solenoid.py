"""The p-solenoid at finite truncation level and its homogeneous structure.

A point is a coherent tower of angles (theta_0, ..., theta_L) with
``p * theta_{n+1} = theta_n (mod 1)``.  The projection ``pi_map`` sends a split
scalar (t, r) to ``theta_n = t / p^n + {-r / p^n}_p``; its kernel contains the
diagonal copy of Z[1/p] and ``orbit_solve`` produces an explicit preimage.
"""
from __future__ import annotations

from functools import lru_cache
from fractions import Fraction

from .errors import IncoherentPoint, LevelMismatch
from .exact import Angle, PRational, SplitScalar, angle_from_ints, as_fraction, split_power, valuation


class SolenoidPoint:
    """A coherent tower of angles, stored by its top coordinate theta_L.

    Lower coordinates are determined by theta_n = p^(L-n) theta_L and are
    materialized lazily; equality and hashing use (p, level, theta_L).
    """

    __slots__ = ("p", "level", "top", "_angles")

    def __init__(self, p: int, angles):
        angles = tuple(a if isinstance(a, Angle) else Angle(a) for a in angles)
        if not angles:
            raise ValueError("a solenoid point needs at least theta_0")
        for n in range(len(angles) - 1):
            if angles[n + 1] * p != angles[n]:
                raise IncoherentPoint(
                    f"p*theta_{n + 1} = {angles[n + 1] * p} differs from theta_{n} = {angles[n]}"
                )
        _init(self, p, len(angles) - 1, angles[-1], angles)

    @classmethod
    def from_top(cls, p: int, level: int, top) -> SolenoidPoint:
        top = top if type(top) is Angle else Angle(top)
        return _init(object.__new__(cls), p, level, top, None)

    def __setattr__(self, name, value):
        raise AttributeError("SolenoidPoint is immutable")

    @property
    def angles(self) -> tuple:
        if self._angles is None:
            num, den = self.top.numerator, self.top.denominator
            out = [self.top]
            for _ in range(self.level):
                num *= self.p
                out.append(angle_from_ints(num, den))
            object.__setattr__(self, "_angles", tuple(reversed(out)))
        return self._angles

    def __eq__(self, other):
        if not isinstance(other, SolenoidPoint):
            return NotImplemented
        return self.p == other.p and self.level == other.level and self.top == other.top

    def __hash__(self):
        return hash((self.p, self.level, self.top))

    def __repr__(self):
        return f"SolenoidPoint(p={self.p}, angles=({self.literal()}))"

    @classmethod
    def identity(cls, p: int, level: int) -> SolenoidPoint:
        return cls.from_top(p, level, Angle(0))

    def is_identity(self) -> bool:
        return not self.top

    def restrict(self, level: int) -> SolenoidPoint:
        if level > self.level:
            raise LevelMismatch(f"cannot extend a level-{self.level} point to level {level}")
        return SolenoidPoint.from_top(self.p, level, self.angles[level])

    def __mul__(self, other: SolenoidPoint) -> SolenoidPoint:
        if not isinstance(other, SolenoidPoint):
            return NotImplemented
        if other.level != self.level:
            raise LevelMismatch(f"levels {self.level} and {other.level} differ")
        a, b = self.top, other.top
        top = angle_from_ints(a.numerator * b.denominator + b.numerator * a.denominator, a.denominator * b.denominator)
        return _init(object.__new__(SolenoidPoint), self.p, self.level, top, None)

    def inv(self) -> SolenoidPoint:
        top = angle_from_ints(-self.top.numerator, self.top.denominator)
        return _init(object.__new__(SolenoidPoint), self.p, self.level, top, None)

    def __truediv__(self, other: SolenoidPoint) -> SolenoidPoint:
        return self * other.inv()

    def literal(self) -> str:
        return ",".join(str(a) for a in self.angles)

    def __str__(self):
        return f"[{self.literal()}]"


def _init(pt, p, level, top, angles):
    object.__setattr__(pt, "p", p)
    object.__setattr__(pt, "level", level)
    object.__setattr__(pt, "top", top)
    object.__setattr__(pt, "_angles", angles)
    return pt


def theta(q: SplitScalar, n: int, p: int) -> Angle:
    """Coordinate n of pi(q): t / p^n + {-r / p^n}_p (mod 1)."""
    pn = p**n
    # real part t / p^n
    ta, tb = q.t.numerator, q.t.denominator * pn
    # p-adic part {-r / p^n}_p = x / p^k with the denominator split as p^k u
    k, u = split_power(q.r.denominator * pn, p)
    if k == 0:
        return angle_from_ints(ta, tb)
    pk = p**k
    x = -q.r.numerator * pow(u, -1, pk) % pk
    return angle_from_ints(ta * pk + x * tb, tb * pk)


@lru_cache(maxsize=1 << 16)
def pi_map(q: SplitScalar, level: int, p: int) -> SolenoidPoint:
    # only the top coordinate is evaluated; lower ones follow from theta_n = p theta_{n+1}
    return SolenoidPoint.from_top(p, level, theta(q, level, p))


def omega(t, level: int, p: int) -> SolenoidPoint:
    """Image of the real line: t -> (exp(2 i pi t / p^n))_n."""
    return pi_map(SplitScalar(as_fraction(t), Fraction(0)), level, p)


def zeta(r, level: int, p: int) -> SolenoidPoint:
    """r -> (exp(2 i pi {r / p^n}))_n, so that pi(t, r) = omega(t) zeta(-r)."""
    return pi_map(SplitScalar(Fraction(0), -as_fraction(r)), level, p)


def _align(x: SolenoidPoint, y: SolenoidPoint, auto_restrict: bool):
    if x.level == y.level:
        return x, y
    if not auto_restrict:
        raise LevelMismatch(f"levels {x.level} and {y.level} differ")
    level = min(x.level, y.level)
    return x.restrict(level), y.restrict(level)


def sol_mul(x: SolenoidPoint, y: SolenoidPoint, auto_restrict: bool = True) -> SolenoidPoint:
    x, y = _align(x, y, auto_restrict)
    return x * y


def sol_eq(x: SolenoidPoint, y: SolenoidPoint, auto_restrict: bool = True) -> bool:
    x, y = _align(x, y, auto_restrict)
    return x.angles == y.angles


def sol_ops(x: SolenoidPoint, y: SolenoidPoint, auto_restrict: bool = True) -> dict:
    return {
        "mul": sol_mul(x, y, auto_restrict),
        "inv": x.inv(),
        "eq": sol_eq(x, y, auto_restrict),
    }


def act_rho(q: SplitScalar, z: SolenoidPoint) -> SolenoidPoint:
    """Translation action of R x Q_p on the solenoid."""
    return pi_map(q, z.level, z.p) * z


def orbit_solve(z: SolenoidPoint) -> SplitScalar:
    """A split scalar q with pi_map(q, z.level) == z.

    Take t = theta_0.  The residual y = omega(-t) z has y_k = m / p^k for a
    single integer m read off at the top level, and r = -m reproduces it.
    """
    p, top = z.p, z.level
    t = Fraction(z.angles[0])
    pl = p**top
    m = Fraction(Angle(z.angles[top] - t / pl)) * pl
    if m.denominator != 1:
        raise IncoherentPoint("residual tower is not p-power torsion")
    return SplitScalar(t, -m)


def check_coherent(angles, p: int) -> SolenoidPoint:
    """Build a point from raw angles, raising IncoherentPoint if the tower breaks."""
    return SolenoidPoint(p, tuple(Angle(as_fraction(a)) for a in angles))


def kernel_witness(q: SplitScalar, level: int, p: int) -> PRational:
    """For q with pi_map(q, level) trivial, an n in Z[1/p] with q - delta(n) = (0, s), v_p(s) >= level.

    Raises ValueError if q is not in the level-truncated kernel.
    """
    if not pi_map(q, level, p).is_identity():
        raise ValueError("q is not in the kernel at this level")
    n = PRational.of(q.t, p)
    s = q.r - q.t
    if valuation(s, p) < level:
        raise ValueError("p-adic residual is not divisible by p^level")
    return n


def parse_point(s: str, p: int) -> SolenoidPoint:
    """Parse comma-separated angles ``theta_0,theta_1,...`` into a coherent point."""
    from .exact import parse_rat

    parts = [x for x in s.replace(" ", "").split(",") if x]
    if not parts:
        raise IncoherentPoint("empty point literal")
    return check_coherent([parse_rat(x) for x in parts], p)


def solenoid_suite(p: int, level: int, n_samples: int, seed: int) -> "SuiteReport":
    """Homomorphism of pi_map, triviality on delta(Z[1/p]) and the orbit_solve round trip."""
    from .report import SuiteReport, batch_rng, batches
    from .sampling import rand_point, rand_prational, rand_split

    rep = SuiteReport("solenoid")
    hom = rep.check("pi_homomorphism")
    dlt = rep.check("pi_delta_trivial")
    rt = rep.check("orbit_round_trip")
    for b_idx, count in batches(n_samples):
        rng = batch_rng(seed, "solenoid", b_idx)
        for _ in range(count):
            q1, q2 = rand_split(rng), rand_split(rng)
            hom.record(pi_map(q1 + q2, level, p) == pi_map(q1, level, p) * pi_map(q2, level, p),
                       lambda: {"q1": str(q1), "q2": str(q2)})
            n = rand_prational(rng, p, kmax=level + 2, bound=10**6)
            dlt.record(pi_map(SplitScalar.delta(n.value), level, p).is_identity(), lambda: {"n": str(n)})
            z = rand_point(rng, p, level)
            rt.record(pi_map(orbit_solve(z), level, p) == z, lambda: {"z": z.literal()})
    return rep
