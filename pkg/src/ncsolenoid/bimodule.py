"""Step functions on R x Q_p and the inner products / module actions that make
them a bimodule between the algebras of S_alpha and S_beta.

Conventions.  The bibundle formulas act "backwards" on moments (a left arrow g
with r(g) = mu(q) lands at a point with mu = s(g)).  The equivalence-bimodule formulas
below use the standard orientation, obtained by inverting arrows:

    gamma * q   = left_act(gamma^-1, q)       needs s(gamma) = mu(q)
    q * eta     = right_act(q, eta^-1)        needs r(eta)  = eps(q)

and then

    (f . phi)(q)      = sum_{r(gamma) = mu(q)}  f(gamma) phi(gamma^-1 * q)
    (phi . h)(q)      = sum_{r(eta) = eps(q)}   phi(q * eta) h(eta^-1)
    <phi, psi>_G(gam) = sum_{r(eta) = eps(w)}   phi(gam * w * eta) conj psi(w * eta),  mu(w) = s(gam)
    <phi, psi>_H(eta) = sum_{r(gam) = mu(z)}    conj phi(gam^-1 * z) psi(gam^-1 * z * eta),  eps(z) = r(eta)

Every sum runs over a group coordinate in Z[1/p] and is made finite by
:func:`enumerate_translates` against the cells of a step function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .bibundles import BibundleSpec
from .cyclotomic import CycloComplex
from .errors import InfiniteSupport, NonInvertible, NonStrictSpec
from .exact import PRational, SplitScalar, fmt, frac_part, valuation
from .groupoids import Arrow
from .models import SolenoidModel
from .report import SuiteReport, batch_rng, batches


# ---------------------------------------------------------------- cells

@dataclass(frozen=True)
class PBall:
    """{x in Q_p : v_p(x - center) >= order}."""

    center: Fraction
    order: int

    def contains(self, x: Fraction, p: int) -> bool:
        return valuation(x - self.center, p) >= self.order


@dataclass(frozen=True)
class Cell:
    coeff: CycloComplex
    u: Fraction
    v: Fraction
    ball: PBall

    def contains(self, q: SplitScalar, p: int) -> bool:
        return self.u <= q.t < self.v and self.ball.contains(q.r, p)

    def to_json(self) -> dict:
        return {
            "coeff": self.coeff.literal(),
            "interval": [fmt(self.u), fmt(self.v)],
            "ball": {"center": fmt(self.ball.center), "order": self.ball.order},
        }


class StepFn:
    """Finite sum of coefficient * indicator([u, v) x ball) on R x Q_p."""

    def __init__(self, cells: Iterable[Cell], p: int):
        self.cells = tuple(c for c in cells if not c.coeff.is_zero() and c.u < c.v)
        self.p = p

    def __call__(self, q: SplitScalar) -> CycloComplex:
        total = CycloComplex.zero()
        for c in self.cells:
            if c.contains(q, self.p):
                total = total + c.coeff
        return total

    @property
    def point_support(self):
        return self.cells

    group_support = None

    def scale(self, k) -> StepFn:
        return StepFn([Cell(c.coeff * k, c.u, c.v, c.ball) for c in self.cells], self.p)

    def to_json(self) -> list:
        return [c.to_json() for c in self.cells]

    def __repr__(self):
        return f"StepFn({self.to_json()})"


@dataclass
class LazyFn:
    """Pointwise evaluator with optional finite support data.

    ``group_support`` lists the group coordinates of arrows where the function
    may be nonzero; ``point_support`` lists cells covering its support on P.
    """

    fn: Callable
    tag: str
    group_support: tuple | None = None
    point_support: tuple | None = None

    def __call__(self, x) -> CycloComplex:
        return self.fn(x)


def parse_stepfn(data: list, p: int) -> StepFn:
    """Build a StepFn from ``[{coeff, interval: [u, v], ball: {center, order}}, ...]``."""
    from .cyclotomic import parse_cyclo
    from .exact import parse_rat

    cells = []
    for item in data:
        u, v = item["interval"]
        ball = item["ball"]
        cells.append(Cell(
            parse_cyclo(str(item.get("coeff", "1"))),
            parse_rat(str(u)),
            parse_rat(str(v)),
            PBall(parse_rat(str(ball["center"])), int(ball["order"])),
        ))
    return StepFn(cells, p)


# ---------------------------------------------------------------- enumeration

def _interval(cell: Cell, base_t: Fraction, shift_t: Fraction) -> tuple[Fraction, Fraction, bool, bool]:
    """Bounds (lo, hi, lo_closed, hi_closed) for n with u <= base + n shift < v."""
    lo, hi = (cell.u - base_t) / shift_t, (cell.v - base_t) / shift_t
    if shift_t > 0:
        return lo, hi, True, False
    return hi, lo, False, True


def _cell_translates(cell: Cell, base: SplitScalar, shift: SplitScalar, p: int) -> list[Fraction]:
    lo, hi, lo_closed, hi_closed = _interval(cell, base.t, shift.t)
    c0 = (cell.ball.center - base.r) / shift.r
    k = cell.ball.order - valuation(shift.r, p)
    step = Fraction(p) ** k
    n0 = step * frac_part(c0 / step, p)  # the Z[1/p] representative of c0 mod p^k
    j_lo = math.ceil((lo - n0) / step)
    j_hi = math.floor((hi - n0) / step)
    out = []
    for j in range(j_lo, j_hi + 1):
        n = n0 + j * step
        if (n > lo or (lo_closed and n == lo)) and (n < hi or (hi_closed and n == hi)):
            out.append(n)
    return out


def enumerate_translates(cells, shift: SplitScalar, base: SplitScalar | None = None, p: int = 2) -> list[PRational]:
    """All n in Z[1/p] with base + n * shift inside one of the cells, sorted."""
    if shift.t == 0 or shift.r == 0:
        raise NonInvertible("translation shift needs both components nonzero")
    base = base if base is not None else SplitScalar.zero()
    found: set = set()
    for cell in cells:
        found.update(_cell_translates(cell, base, shift, p))
    return [PRational.of(n, p) for n in sorted(found)]


def brute_translates(cells, shift: SplitScalar, base: SplitScalar | None = None, p: int = 2) -> list[PRational]:
    """Reference scan of a lattice p^-K Z covering every candidate (oracle for tests)."""
    base = base if base is not None else SplitScalar.zero()
    found: set = set()
    for cell in cells:
        lo, hi, _, _ = _interval(cell, base.t, shift.t)
        c0 = (cell.ball.center - base.r) / shift.r
        k = cell.ball.order - valuation(shift.r, p)
        vc = valuation(c0, p)
        K = max(0, -k, -vc if vc != math.inf else 0)
        scale = p**K
        for i in range(math.floor(lo * scale) - 1, math.ceil(hi * scale) + 2):
            n = Fraction(i, scale)
            if cell.contains(base + shift * n, p):
                found.add(n)
    return [PRational.of(n, p) for n in sorted(found)]


# ---------------------------------------------------------------- bimodule

class Bimodule:
    """Inner products and actions for a strict solenoid bibundle spec."""

    def __init__(self, spec: BibundleSpec):
        if not isinstance(spec.model, SolenoidModel):
            raise NonStrictSpec("the bimodule needs the solenoid model")
        if not spec.strict:
            raise NonStrictSpec(f"matrix {spec.M.literal()} is not strict (c must be +-p^k)")
        self.spec = spec
        self.p = spec.model.p
        self.G, self.H = spec.left, spec.right

    # standard-orientation actions on P
    def g_star(self, gamma: Arrow, q: SplitScalar) -> SplitScalar:
        return self.spec.left_act(self.G.invert(gamma), q)

    def star_h(self, q: SplitScalar, eta: Arrow) -> SplitScalar:
        return self.spec.right_act(q, self.H.invert(eta))

    # arrows ending at a given unit
    def g_arrow_to(self, n: PRational, x) -> Arrow:
        """The S_alpha arrow (n, .) with range x."""
        return Arrow(n, self.G.act(-n, x))

    def h_arrow_to(self, m: PRational, x) -> Arrow:
        return Arrow(m, self.H.act(-m, x))

    # shifts: gamma_n^-1 * q = q + n * g_shift and q * eta_m = q + m * h_shift
    @property
    def g_shift(self) -> SplitScalar:
        return SplitScalar.delta(1)

    @property
    def h_shift(self) -> SplitScalar:
        return -self.spec.s_R

    def _support(self, fn, what: str):
        cells = getattr(fn, "point_support", None)
        if cells is None:
            raise InfiniteSupport(f"{what} has no declared finite support")
        return cells

    # base points
    def base_for_mu(self, x, shift=None) -> SplitScalar:
        """A point w with mu(w) = x (optionally moved along the mu-fiber)."""
        w = self.spec.model.orbit_solve(x)
        if shift is not None:
            w = w + SplitScalar.delta(shift)
        return w * self.spec.s_L.inv()

    def base_for_eps(self, x, shift=None) -> SplitScalar:
        w = self.spec.model.orbit_solve(x)
        if shift is not None:
            w = w + SplitScalar.delta(shift)
        return w * self.spec.c

    # module actions
    def act_G(self, f, phi) -> LazyFn:
        def ev(q):
            mu_q = self.spec.mu(q)
            cells = getattr(phi, "point_support", None)
            if cells is not None:
                ns = enumerate_translates(cells, self.g_shift, q, self.p)
            elif getattr(f, "group_support", None) is not None:
                ns = list(f.group_support)
            else:
                raise InfiniteSupport("neither f nor phi has a declared finite support")
            total = CycloComplex.zero()
            for n in ns:
                gamma = self.g_arrow_to(n, mu_q)
                val = f(gamma)
                if not val.is_zero():
                    total = total + val * phi(self.g_star(self.G.invert(gamma), q))
            return total

        return LazyFn(ev, "act_G")

    def act_H(self, phi, h) -> LazyFn:
        def ev(q):
            eps_q = self.spec.eps(q)
            cells = getattr(phi, "point_support", None)
            if cells is not None:
                ms = enumerate_translates(cells, self.h_shift, q, self.p)
            elif getattr(h, "group_support", None) is not None:
                ms = [-m for m in h.group_support]
            else:
                raise InfiniteSupport("neither phi nor h has a declared finite support")
            total = CycloComplex.zero()
            for m in ms:
                eta = self.h_arrow_to(m, eps_q)
                val = h(self.H.invert(eta))
                if not val.is_zero():
                    total = total + phi(self.star_h(q, eta)) * val
            return total

        return LazyFn(ev, "act_H")

    # inner products
    def inner_G(self, phi, psi, base_shift=None) -> LazyFn:
        cells = self._support(psi, "psi")

        def ev(gamma: Arrow):
            w = self.base_for_mu(self.G.source(gamma), base_shift)
            eps_w = self.spec.eps(w)
            total = CycloComplex.zero()
            for m in enumerate_translates(cells, self.h_shift, w, self.p):
                y = self.star_h(w, self.h_arrow_to(m, eps_w))
                right = psi(y)
                if not right.is_zero():
                    total = total + phi(self.g_star(gamma, y)) * right.conj()
            return total

        return LazyFn(ev, "inner_G")

    def inner_H(self, phi, psi, base_shift=None) -> LazyFn:
        cells = self._support(phi, "phi")

        def ev(eta: Arrow):
            z = self.base_for_eps(self.H.range(eta), base_shift)
            mu_z = self.spec.mu(z)
            total = CycloComplex.zero()
            for n in enumerate_translates(cells, self.g_shift, z, self.p):
                y = self.g_star(self.G.invert(self.g_arrow_to(n, mu_z)), z)
                left = phi(y)
                if not left.is_zero():
                    total = total + left.conj() * psi(self.star_h(y, eta))
            return total

        return LazyFn(ev, "inner_H")


# ---------------------------------------------------------------- helpers

def alg_fn(elem) -> LazyFn:
    """View a finitely supported algebra element as a function on arrows."""
    return LazyFn(lambda a: elem(a.g, a.x), "alg", group_support=tuple(elem.terms))


def convolve_at_G(bm: Bimodule, f: LazyFn, F: LazyFn, gamma: Arrow) -> CycloComplex:
    """(f * F)(gamma) = sum_{r(g1) = r(gamma)} f(g1) F(g1^-1 gamma), f finitely supported."""
    G = bm.G
    total = CycloComplex.zero()
    for n1 in f.group_support:
        g1 = bm.g_arrow_to(n1, G.range(gamma))
        total = total + f(g1) * F(G.compose(G.invert(g1), gamma))
    return total


def convolve_at_H(bm: Bimodule, F: LazyFn, h: LazyFn, eta: Arrow) -> CycloComplex:
    """(F * h)(eta) = sum_{s(e2) = s(eta)} F(eta e2^-1) h(e2), h finitely supported."""
    H = bm.H
    total = CycloComplex.zero()
    for m2 in h.group_support:
        e2 = Arrow(m2, H.source(eta))
        total = total + F(H.compose(eta, H.invert(e2))) * h(e2)
    return total


def rand_cell(rng, p: int) -> Cell:
    u = Fraction(rng.randint(-8, 6), rng.choice((1, 2, 3, 4)))
    width = Fraction(rng.randint(1, 8), rng.choice((1, 2, 4)))
    center = Fraction(rng.randint(-6, 6), rng.choice((1, 3, p, p * p)))
    coeff = CycloComplex.root(Fraction(rng.randint(0, 11), 12), rng.choice((1, 1, 2, -1)))
    return Cell(coeff, u, u + width, PBall(center, rng.randint(-2, 2)))


def rand_stepfn(rng, p: int, max_cells: int = 2) -> StepFn:
    return StepFn([rand_cell(rng, p) for _ in range(rng.randint(1, max_cells))], p)


def rand_point_in(rng, fns, p: int) -> SplitScalar:
    """A point of P, usually inside one of the given cells."""
    cells = [c for f in fns for c in f.cells]
    if not cells or rng.random() < 0.15:
        return SplitScalar(Fraction(rng.randint(-20, 20), 4), Fraction(rng.randint(-20, 20), rng.choice((1, 3, p))))
    c = rng.choice(cells)
    t = c.u + (c.v - c.u) * Fraction(rng.randint(0, 15), 16)
    r = c.ball.center + Fraction(p) ** c.ball.order * Fraction(rng.randint(-5, 5), rng.choice((1, 3, 5)))
    return SplitScalar(t, r)


def rand_window(rng, p: int) -> tuple[Cell, SplitScalar, SplitScalar]:
    cell = rand_cell(rng, p)
    base = SplitScalar(Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))), Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3, 5))))
    while True:
        shift = SplitScalar(Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3))),
                            Fraction(rng.randint(-4, 4), rng.choice((1, p, 3))))
        if shift.is_invertible():
            return cell, base, shift


# ---------------------------------------------------------------- suite

def imprimitivity_check(spec: BibundleSpec, n_triples: int, n_points: int, seed: int,
                        n_arrows: int = 50, n_windows: int = 100) -> SuiteReport:
    """Imprimitivity relation, base-point independence, module laws and enumeration oracle."""
    bm = Bimodule(spec)
    p, m = bm.p, spec.model
    tag = f"bimodule[{spec.M.literal()}]"
    rep = SuiteReport(tag)
    impr = rep.check("imprimitivity")
    bp_G = rep.check("base_point_G")
    bp_H = rep.check("base_point_H")
    sym_G = rep.check("conj_symmetry_G")
    sym_H = rep.check("conj_symmetry_H")
    pos = rep.check("inner_G_unit_nonnegative")
    mod_G = rep.check("module_G")
    mod_H = rep.check("module_H")
    unit = rep.check("unit_actions")
    assoc = rep.check("actions_commute")
    enum = rep.check("enumerate_vs_bruteforce")

    from .algebra import SolenoidAlgebra, rand_elem

    alg_G = SolenoidAlgebra(spec.alpha, p, m.level)
    alg_H = SolenoidAlgebra(spec.beta, p, m.level)
    unit_G, unit_H = alg_fn(alg_G.unit()), alg_fn(alg_H.unit())

    per_triple = max(1, n_points // max(1, n_triples))
    for t_idx in range(n_triples):
        rng = batch_rng(seed, tag, t_idx)
        phi, psi, chi = rand_stepfn(rng, p), rand_stepfn(rng, p), rand_stepfn(rng, p)
        fns = (phi, psi, chi)
        desc = lambda: {"phi": phi.to_json(), "psi": psi.to_json(), "chi": chi.to_json()}  # noqa: E731
        lhs = bm.act_G(bm.inner_G(phi, psi), chi)
        rhs = bm.act_H(phi, bm.inner_H(psi, chi))
        for _ in range(per_triple):
            q = rand_point_in(rng, fns, p)
            impr.record(lhs(q) == rhs(q), lambda: {**desc(), "q": fmt(q)})

        # arrows landing near the supports, so inner products are mostly nonzero
        f_el, h_el = alg_fn(rand_elem(rng, alg_G, 2, 2)), alg_fn(rand_elem(rng, alg_H, 2, 2))
        ipG, ipG2 = bm.inner_G(phi, psi), bm.inner_G(phi, psi, base_shift=m.sample_group(rng))
        ipH, ipH2 = bm.inner_H(psi, chi), bm.inner_H(psi, chi, base_shift=m.sample_group(rng))
        ipH_rev = bm.inner_H(chi, psi)
        ipG_rev = bm.inner_G(psi, phi)
        left_mod = bm.inner_G(bm.act_G(f_el, phi), psi)
        right_mod = bm.inner_H(psi, bm.act_H(chi, h_el))
        for _ in range(max(1, n_arrows // max(1, n_triples))):
            q0 = rand_point_in(rng, fns, p)
            gamma = Arrow(m.sample_group(rng), spec.mu(q0))
            eta = Arrow(m.sample_group(rng), spec.eps(q0))
            pl = lambda: {**desc(), "gamma": str(gamma), "eta": str(eta)}  # noqa: E731
            v = ipG(gamma)
            bp_G.record(v == ipG2(gamma), pl)
            bp_H.record(ipH(eta) == ipH2(eta), pl)
            sym_G.record(v == ipG_rev(bm.G.invert(gamma)).conj(), pl)
            sym_H.record(ipH(eta) == ipH_rev(bm.H.invert(eta)).conj(), pl)
            z0 = bm.inner_G(phi, phi)(bm.G.unit(spec.mu(q0))).to_complex()
            pos.record(abs(z0.imag) < 1e-9 and z0.real > -1e-9, pl)
            mod_G.record(left_mod(gamma) == convolve_at_G(bm, f_el, ipG, gamma), pl)
            mod_H.record(right_mod(eta) == convolve_at_H(bm, ipH, h_el, eta), pl)
            q = rand_point_in(rng, fns, p)
            unit.record(bm.act_G(unit_G, phi)(q) == phi(q) and bm.act_H(phi, unit_H)(q) == phi(q), pl)
            assoc.record(
                bm.act_H(bm.act_G(f_el, phi), h_el)(q) == bm.act_G(f_el, bm.act_H(phi, h_el))(q), pl
            )

    for b_idx, count in batches(n_windows):
        rng = batch_rng(seed, tag + "-windows", b_idx)
        for _ in range(count):
            cell, base, shift = rand_window(rng, p)
            got = enumerate_translates([cell], shift, base, p)
            enum.record(got == brute_translates([cell], shift, base, p),
                        lambda: {"cell": cell.to_json(), "base": fmt(base), "shift": fmt(shift)})
    return rep
