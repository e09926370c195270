"""Action groupoids, the three solenoidal/Kronecker instances and an axiom harness.

An arrow stores ``(g, x)`` with ``x`` its source; the range ``g . x`` is always
recomputed.  Composition ``(g', x') o (g, x) = (g' + g, x)`` requires
``x' == g . x`` exactly at the active truncation level.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .errors import NotComposable
from .exact import PRational, SplitScalar, fmt
from .report import SuiteReport, batch_rng, batches
from .sampling import rand_point, rand_prational, rand_split
from .solenoid import SolenoidPoint, pi_map


@dataclass(frozen=True, slots=True)
class Arrow:
    g: Any
    x: Any

    def __str__(self):
        return f"({_show(self.g)}, {_show(self.x)})"


def _show(v) -> str:
    if isinstance(v, tuple):
        return "(" + ", ".join(_show(e) for e in v) + ")"
    if isinstance(v, Fraction):
        return fmt(v)
    return str(v)


class ActionGroupoid:
    """Transformation groupoid of a group acting on a space.

    ``act(g, x)`` must be a left action for the additive group described by
    ``add``/``neg``/``zero``.  Samplers are optional and only used by the
    axiom harness.
    """

    def __init__(
        self,
        name: str,
        act: Callable,
        zero,
        add: Callable = operator.add,
        neg: Callable = operator.neg,
        sample_group: Callable | None = None,
        sample_space: Callable | None = None,
    ):
        self.name = name
        self.act = act
        self.zero = zero
        self.add = add
        self.neg = neg
        self.sample_group = sample_group
        self.sample_space = sample_space

    def source(self, a: Arrow):
        return a.x

    def range(self, a: Arrow):
        return self.act(a.g, a.x)

    def unit(self, x) -> Arrow:
        return Arrow(self.zero, x)

    def is_unit(self, a: Arrow) -> bool:
        return a.g == self.zero

    def composable(self, a: Arrow, b: Arrow) -> bool:
        return a.x == self.range(b)

    def compose(self, a: Arrow, b: Arrow) -> Arrow:
        """``a o b``: first b, then a."""
        if not self.composable(a, b):
            raise NotComposable(f"s({a}) != r({b}) in {self.name}")
        return Arrow(self.add(a.g, b.g), b.x)

    def invert(self, a: Arrow) -> Arrow:
        return Arrow(self.neg(a.g), self.range(a))

    def arrow(self, g, x) -> Arrow:
        return Arrow(g, x)

    def __repr__(self):
        return f"ActionGroupoid({self.name})"


# ---------------------------------------------------------------- instances

def solenoid_groupoid(alpha: SplitScalar, p: int, level: int) -> ActionGroupoid:
    """S_alpha: Z[1/p] acting on the solenoid by n . z = pi(n alpha) z."""

    def act(n, z):
        return pi_map(alpha * n, z.level, p) * z

    return ActionGroupoid(
        f"S_alpha(alpha={alpha}, p={p}, L={level})",
        act,
        PRational.of(0, p),
        sample_group=lambda rng: rand_prational(rng, p),
        sample_space=lambda rng: rand_point(rng, p, level),
    )


def full_solenoid_groupoid(alpha: SplitScalar, p: int, level: int) -> ActionGroupoid:
    """The full groupoid: R x Q_p acting on pairs by q . (x, y) = (pi(q) x, pi(q alpha) y)."""

    def act(q, xy):
        x, y = xy
        return (pi_map(q, x.level, p) * x, pi_map(q * alpha, y.level, p) * y)

    return ActionGroupoid(
        f"full S_alpha(alpha={alpha}, p={p}, L={level})",
        act,
        SplitScalar.zero(),
        sample_group=lambda rng: rand_split(rng),
        sample_space=lambda rng: (rand_point(rng, p, level), rand_point(rng, p, level)),
    )


def kronecker_groupoid(theta, p: int = 2) -> ActionGroupoid:
    """T_theta: Z acting on the circle (a level-0 point) by rotation by theta."""
    theta = Fraction(theta)

    def act(n, z):
        return pi_map(SplitScalar(theta * n, Fraction(0)), 0, p) * z

    return ActionGroupoid(
        f"T_theta(theta={fmt(theta)})",
        act,
        0,
        sample_group=lambda rng: rng.randint(-50, 50),
        sample_space=lambda rng: rand_point(rng, p, 0),
    )


def immersion(p: int, level: int) -> Callable[[Arrow], Arrow]:
    """i(n, z) = (delta(n), (1, z)) from S_alpha into the full groupoid."""
    one = SolenoidPoint.identity(p, level)

    def i(a: Arrow) -> Arrow:
        return Arrow(SplitScalar.delta(a.g), (one, a.x))

    return i


# ---------------------------------------------------------------- harness

def _composable_triple(G: ActionGroupoid, rng):
    x = G.sample_space(rng)
    c = Arrow(G.sample_group(rng), x)
    b = Arrow(G.sample_group(rng), G.range(c))
    a = Arrow(G.sample_group(rng), G.range(b))
    return a, b, c


def axiom_suite(G: ActionGroupoid, n_samples: int, seed: int, batch_size: int = 100) -> SuiteReport:
    """Check the groupoid laws on constructively sampled composable triples."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rep = SuiteReport(f"groupoid:{G.name}")
    act_law = rep.check("action")
    src_rng = rep.check("source_range")
    assoc = rep.check("associativity")
    unit = rep.check("unit")
    inverse = rep.check("inverse")
    invol = rep.check("involution")
    for b_idx, count in batches(n_samples, batch_size):
        rng = batch_rng(seed, G.name, b_idx)
        for _ in range(count):
            a, b, c = _composable_triple(G, rng)
            payload = lambda: {"a": str(a), "b": str(b), "c": str(c)}  # noqa: E731

            act_law.record(
                G.act(G.zero, c.x) == c.x and G.act(G.add(a.g, b.g), b.x) == G.act(a.g, G.act(b.g, b.x)),
                payload,
            )
            ab = G.compose(a, b)
            src_rng.record(G.range(ab) == G.range(a) and G.source(ab) == G.source(b), payload)
            assoc.record(G.compose(ab, c) == G.compose(a, G.compose(b, c)), payload)
            unit.record(
                G.compose(G.unit(G.range(a)), a) == a and G.compose(a, G.unit(G.source(a))) == a,
                payload,
            )
            ai = G.invert(a)
            inverse.record(
                G.compose(a, ai) == G.unit(G.range(a)) and G.compose(ai, a) == G.unit(G.source(a)),
                payload,
            )
            invol.record(G.invert(ai) == a, payload)
    return rep


def morphism_suite(
    name: str,
    F: Callable[[Arrow], Arrow],
    obj: Callable,
    G: ActionGroupoid,
    H: ActionGroupoid,
    n_samples: int,
    seed: int,
    inverse: Callable[[Arrow], Arrow] | None = None,
    sample_pair: Callable | None = None,
) -> SuiteReport:
    """Check that F: G -> H is a strict morphism (and bijective when ``inverse`` is given)."""
    rep = SuiteReport(f"morphism:{name}")
    sr = rep.check("source_range")
    comp = rep.check("composition")
    units = rep.check("units")
    invs = rep.check("inverses")
    bij = rep.check("bijective") if inverse is not None else None
    for b_idx, count in batches(n_samples):
        rng = batch_rng(seed, name, b_idx)
        for _ in range(count):
            if sample_pair is not None:
                a, b = sample_pair(rng)
            else:
                x = G.sample_space(rng)
                b = Arrow(G.sample_group(rng), x)
                a = Arrow(G.sample_group(rng), G.range(b))
            payload = lambda: {"a": str(a), "b": str(b)}  # noqa: E731
            Fa, Fb = F(a), F(b)
            sr.record(H.source(Fa) == obj(G.source(a)) and H.range(Fa) == obj(G.range(a)), payload)
            comp.record(H.composable(Fa, Fb) and F(G.compose(a, b)) == H.compose(Fa, Fb), payload)
            units.record(F(G.unit(b.x)) == H.unit(obj(b.x)), payload)
            invs.record(F(G.invert(a)) == H.invert(Fa), payload)
            if bij is not None:
                bij.record(inverse(Fa) == a, payload)
    return rep


def immersion_suite(alpha: SplitScalar, p: int, level: int, n_samples: int, seed: int) -> SuiteReport:
    """S_alpha sits inside the full groupoid over V = {(1, y)} via i(n, z) = (delta(n), (1, z))."""
    S = solenoid_groupoid(alpha, p, level)
    full = full_solenoid_groupoid(alpha, p, level)
    one = SolenoidPoint.identity(p, level)
    rep = morphism_suite(
        "immersion", immersion(p, level), lambda z: (one, z), S, full, n_samples, seed
    )
    closed = rep.check("reduced_closure")
    for b_idx, count in batches(n_samples):
        rng = batch_rng(seed, "immersion-closure", b_idx)
        for _ in range(count):
            # arrows of the full groupoid with g in delta(Z[1/p]) and source in V stay in V
            n1, n2 = rand_prational(rng, p), rand_prational(rng, p)
            y = rand_point(rng, p, level)
            b = Arrow(SplitScalar.delta(n2), (one, y))
            a = Arrow(SplitScalar.delta(n1), full.range(b))
            ab = full.compose(a, b)
            r = full.range(ab)
            closed.record(r[0] == one and ab.g == SplitScalar.delta(n1 + n2), lambda: str(ab))
    return rep
