"""The bibundle P_M between S_alpha and S_beta, its axiom verifier and the
reduction maps v, h, p0 through the full groupoid.

For ``M = [[a, b], [c, d]]`` with ``c != 0`` the total space is the scalar
ring itself, with moments ``mu(q) = pi(q s_L)``, ``eps(q) = pi(q / c)`` where
``s_L = (a - c alpha) / c``.  The left action is ``q -> q + delta(n)`` and the
right action ``q -> q + n s_R`` with ``s_R = det(M) / (a - c alpha)``.

Strict mode means ``c`` is a unit of the acting ring.  Outside it the moment
relations pick up phases pi(n a / c), pi(n d / c) and pi(n / c); the verifier
records them as defects instead of failing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import NotAdmissible, NotInReducedSet, NotStrict, SingularMoment, ZeroC
from .exact import PRational, SplitScalar, fmt
from .groupoids import ActionGroupoid, Arrow, full_solenoid_groupoid, morphism_suite
from .models import CircleModel, SolenoidModel
from .moebius import Mat2, factor_eps, mobius_pullback, mu_eps_suite
from .report import SuiteReport, batch_rng, batches
from .solenoid import SolenoidPoint


@dataclass
class BibundleSpec:
    model: Any
    alpha: Any
    M: Mat2
    beta: Any
    s_L: Any
    s_R: Any
    strict: bool
    left: ActionGroupoid = field(repr=False)
    right: ActionGroupoid = field(repr=False)

    @property
    def c(self) -> Fraction:
        return self.M.c.value

    # moments
    def mu(self, q):
        return self.model.pi(q * self.s_L)

    def eps(self, q):
        return self.model.pi(q * (1 / self.c))

    # admissible arrows
    def left_arrow(self, n, q) -> Arrow:
        """The arrow (n, z) of S_alpha that may act on q."""
        return Arrow(n, self.mu(q + self.model.delta(n)))

    def right_arrow(self, q, n) -> Arrow:
        """The arrow (n, z) of S_beta that may act on q."""
        return Arrow(n, self.eps(q))

    def left_act(self, g: Arrow, q):
        target = q + self.model.delta(g.g)
        if g.x != self.mu(target):
            raise NotAdmissible(f"left arrow {g} is not admissible at q = {fmt(q)}")
        return target

    def right_act(self, q, h: Arrow):
        if h.x != self.eps(q):
            raise NotAdmissible(f"right arrow {h} is not admissible at q = {fmt(q)}")
        return q + self.s_R * self.model.const(h.g)

    def describe(self) -> dict:
        show = self.model.show
        return {
            "alpha": show(self.alpha),
            "beta": show(self.beta),
            "matrix": self.M.literal(),
            "det": str(self.M.det),
            "s_L": show(self.s_L),
            "s_R": show(self.s_R),
            "mode": "strict" if self.strict else "report",
        }


def build_PM(alpha, M: Mat2, model=None, level: int = 8) -> BibundleSpec:
    """Assemble P_M; ``model`` defaults to the p-solenoid model at ``level``."""
    if model is None:
        model = SolenoidModel(M.p, level)
    if not M.c:
        raise ZeroC("c = 0: use the translation route (factor_eps / mu_eps) instead")
    a, c = M.a.value, M.c.value
    den = model.const(a) - alpha * c
    for comp, v in model.components(den):
        if v == 0:
            raise SingularMoment(f"a - c*alpha vanishes in the {comp} component")
    det = M.det.value
    if isinstance(model, CircleModel):
        beta = mobius_pullback(M, SplitScalar(alpha, alpha)).t
    else:
        beta = mobius_pullback(M, alpha)
    strict = model.is_unit(M.c) and model.is_unit(M.det)
    return BibundleSpec(
        model=model,
        alpha=alpha,
        M=M,
        beta=beta,
        s_L=den * (1 / c),
        s_R=model.inv(den) * det,
        strict=strict,
        left=model.groupoid(alpha),
        right=model.groupoid(beta),
    )


def torus_bibundle(theta, M: Mat2, p: int = 2) -> BibundleSpec:
    """Kronecker case: integer M with det +-1 and c != 0, level-0 points."""
    for e in (M.a, M.b, M.c, M.d):
        if e.value.denominator != 1:
            raise ValueError(f"torus matrices need integer entries, got {M.literal()}")
    if M.det not in (1, -1):
        raise ValueError(f"torus matrices need det +-1, got {M.det}")
    return build_PM(Fraction(theta), M, CircleModel(p))


def inverse_bibundle_formulas(alpha: SplitScalar, model) -> dict:
    """Direct formulas for the alpha vs alpha^-1 bundle, for cross-checking the antidiagonal case."""
    ainv = model.inv(alpha)
    return {
        "mu": lambda q: model.pi(q * alpha).inv(),
        "eps": lambda q: model.pi(q),
        "left": lambda n, q: q + model.delta(n),
        "right": lambda q, n: q + ainv * model.const(n),
    }


# ---------------------------------------------------------------- defects

def _ratio(x: SolenoidPoint, y: SolenoidPoint) -> list[str]:
    return [str(a) for a in (x / y).angles]


def predicted_defects(spec: BibundleSpec, n) -> dict:
    """Phases pi(delta(n a / c)), pi(delta(n d / c)), pi(delta(n det / c)) for a group element n."""
    m = spec.model
    nv = m.const(n)
    c = spec.c
    return {
        "left_range": m.pi(nv * (spec.M.a.value / c)),
        "right_range": m.pi(nv * (spec.M.d.value / c)),
        "mu_invariance": m.pi(nv * (spec.M.det.value / c)),
        "eps_invariance": m.pi(nv * (1 / c)),
    }


# ---------------------------------------------------------------- verifier

def verify_equivalence(spec: BibundleSpec, n_samples: int, seed: int, name: str | None = None) -> SuiteReport:
    """Run E1-E5 on sampled points; outside strict mode moment failures are defects."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    m = spec.model
    G, H = spec.left, spec.right
    report = not spec.strict
    tag = name or f"bibundle[{spec.M.literal()}]"
    rep = SuiteReport(tag)
    e1_anchor_l = rep.check("E1.left_anchor")
    e1_anchor_r = rep.check("E1.right_anchor")
    e1_range_l = rep.check("E1.left_range")
    e1_range_r = rep.check("E1.right_range")
    e2_mu = rep.check("E2.mu_invariance")
    e2_eps = rep.check("E2.eps_invariance")
    e3 = rep.check("E3.commuting")
    e4_l = rep.check("E4.left_free")
    e4_r = rep.check("E4.right_free")
    e5_l = rep.check("E5.eps_fiber")
    e5_r = rep.check("E5.mu_fiber")
    one = m.group(1)
    for b_idx, count in batches(n_samples):
        rng = batch_rng(seed, tag, b_idx)
        for i in range(count):
            if b_idx == 0 and i == 0:
                q, n, k = m.zero(), one, one  # anchor: the n = 1 witness
            else:
                q, n, k = m.sample_scalar(rng), m.sample_group(rng), m.sample_group(rng)
                if rng.random() < 0.1:
                    n = m.group_zero()
                if rng.random() < 0.1:
                    k = m.group_zero()
            payload = lambda q=q, n=n, k=k: {"q": m.show(q), "n": str(n), "m": str(k)}  # noqa: E731

            g = spec.left_arrow(n, q)
            gq = spec.left_act(g, q)
            h = spec.right_arrow(q, k)
            qh = spec.right_act(q, h)

            # E1: anchoring holds by construction; range relations are the substantive part
            e1_anchor_l.record(spec.mu(gq) == G.source(g), payload)
            e1_anchor_r.record(spec.eps(q) == H.source(h), payload)
            r_g, mu_q = G.range(g), spec.mu(q)
            e1_range_l.record(r_g == mu_q, payload, lambda: _ratio(r_g, mu_q), report)
            r_h, eps_qh = H.range(h), spec.eps(qh)
            e1_range_r.record(eps_qh == r_h, payload, lambda: _ratio(eps_qh, r_h), report)

            # E2: each moment is invariant under the other action
            mu_qh = spec.mu(qh)
            e2_mu.record(mu_qh == mu_q, payload, lambda: _ratio(mu_qh, mu_q), report)
            eps_gq, eps_q = spec.eps(gq), spec.eps(q)
            e2_eps.record(eps_gq == eps_q, payload, lambda: _ratio(eps_gq, eps_q), report)

            # E3: both orders, arrows rebuilt for the point they act on
            one_way = spec.right_act(gq, spec.right_arrow(gq, k))
            other = spec.left_act(spec.left_arrow(n, qh), qh)
            e3.record(one_way == other, payload)

            # E4: a fixed point forces a unit arrow
            e4_l.record((gq == q) == G.is_unit(g), payload)
            e4_r.record((qh == q) == H.is_unit(h), payload)

            # E5: construct the arrow joining two points of one fiber, then re-apply it
            c_m = m.group(m.sample_group(rng) * spec.M.c)
            q2 = q + m.delta(c_m)
            ok5 = spec.eps(q2) == spec.eps(q)
            if ok5:
                nn = m.solve_group(q2 - q, m.delta(1))
                ok5 = nn is not None and spec.left_act(spec.left_arrow(nn, q), q) == q2
            e5_l.record(ok5, payload)
            j = m.sample_group(rng)
            shift = spec.s_R * m.const(j * spec.M.c) * (1 / spec.M.det.value)
            q3 = q + shift
            ok5 = spec.mu(q3) == spec.mu(q)
            if ok5:
                kk = m.solve_group(q3 - q, spec.s_R)
                ok5 = kk is not None and spec.right_act(q, spec.right_arrow(q, kk)) == q3
            e5_r.record(ok5, payload)
    return rep


def antidiagonal_check(alpha, model, n_samples: int, seed: int) -> SuiteReport:
    """build_PM with [[0,1],[1,0]] agrees pointwise with the direct alpha^-1 formulas."""
    M = Mat2(0, 1, 1, 0, model.p)
    spec = build_PM(alpha, M, model)
    direct = inverse_bibundle_formulas(alpha, model)
    rep = SuiteReport("antidiagonal")
    chk = rep.check("formulas_agree")
    beta = rep.check("beta_is_inverse")
    beta.record(spec.beta == model.inv(alpha), {"beta": model.show(spec.beta)})
    for b_idx, count in batches(n_samples):
        rng = batch_rng(seed, "antidiagonal", b_idx)
        for _ in range(count):
            q, n, k = model.sample_scalar(rng), model.sample_group(rng), model.sample_group(rng)
            ok = (
                spec.mu(q) == direct["mu"](q)
                and spec.eps(q) == direct["eps"](q)
                and spec.left_act(spec.left_arrow(n, q), q) == direct["left"](n, q)
                and spec.right_act(q, spec.right_arrow(q, k)) == direct["right"](q, k)
            )
            chk.record(ok, lambda: {"q": model.show(q), "n": str(n), "m": str(k)})
    return rep


# ---------------------------------------------------------------- reduction maps

class ReductionIsos:
    """v, h, p0 relating reductions of the full groupoid to S_alpha, S_beta and P_M."""

    def __init__(self, spec: BibundleSpec):
        if not isinstance(spec.model, SolenoidModel):
            raise TypeError("reduction maps are defined for the solenoid model")
        if not spec.strict:
            raise NotStrict("reduction maps need c and det(M) to be units")
        self.spec = spec
        m = spec.model
        self.full = full_solenoid_groupoid(spec.alpha, m.p, m.level)
        self.one = m.identity()

    def _group_of(self, g: SplitScalar) -> PRational:
        if g.t != g.r:
            raise NotInReducedSet(f"{g} is not on the diagonal")
        return self.spec.model.group(g.t)

    # v: arrows over V = {(1, y)} <-> S_alpha
    def v(self, a: Arrow) -> Arrow:
        x, y = a.x
        if x != self.one:
            raise NotInReducedSet("source is not in V")
        return Arrow(self._group_of(a.g), y)

    def v_inv(self, g: Arrow) -> Arrow:
        return Arrow(self.spec.model.delta(g.g), (self.one, g.x))

    # h: arrows over H_M = {(pi(c w), pi(a w))} <-> S_beta, with explicit witness w
    def h_point(self, w: SplitScalar):
        M, m = self.spec.M, self.spec.model
        return (m.pi(w * M.c.value), m.pi(w * M.a.value))

    def h(self, a: Arrow, w: SplitScalar) -> Arrow:
        if a.x != self.h_point(w):
            raise NotInReducedSet("source does not match the witness")
        n = self._group_of(a.g * self.spec.model.inv(self.spec.s_R))
        return Arrow(n, self.spec.model.pi(w))

    def h_inv(self, eta: Arrow, w: SplitScalar | None = None) -> Arrow:
        m = self.spec.model
        if w is None:
            w = m.orbit_solve(eta.x)
        elif m.pi(w) != eta.x:
            raise NotInReducedSet("witness does not project to the source")
        return Arrow(self.spec.s_R * m.const(eta.g), self.h_point(w))

    def range_witness(self, eta: Arrow, w: SplitScalar) -> SplitScalar:
        """Witness for r(eta): w + n beta."""
        return w + self.spec.beta * self.spec.model.const(eta.g)

    # p0: arrows V -> H_M <-> points of P_M
    def p0(self, a: Arrow):
        x, y = a.x
        if x != self.one or y != self.spec.mu(a.g):
            raise NotInReducedSet("arrow is not of the form (q, (1, mu(q)))")
        return a.g

    def p0_inv(self, q) -> Arrow:
        return Arrow(q, (self.one, self.spec.mu(q)))

    # transported actions
    def transported_left(self, g: Arrow, q):
        return self.p0(self.full.compose(self.p0_inv(q), self.v_inv(g)))

    def transported_right(self, q, eta: Arrow):
        w = q * (1 / self.spec.c)
        return self.p0(self.full.compose(self.h_inv(eta, w), self.p0_inv(q)))


def reduction_suite(spec: BibundleSpec, n_samples: int, seed: int) -> SuiteReport:
    iso = ReductionIsos(spec)
    m, full = spec.model, iso.full
    S_a, S_b = spec.left, spec.right
    tag = f"reduction[{spec.M.literal()}]"

    def v_pair(rng):
        y = m.sample_point(rng)
        b = iso.v_inv(Arrow(m.sample_group(rng), y))
        a = iso.v_inv(Arrow(m.sample_group(rng), full.range(b)[1]))
        return a, b

    rep = morphism_suite(
        "v", iso.v, lambda xy: xy[1], full, S_a, n_samples, seed, inverse=iso.v_inv, sample_pair=v_pair
    )
    rep.name = tag
    for c in rep.checks:
        c.id = "v." + c.id

    h_src = rep.check("h.source_range")
    h_comp = rep.check("h.composition")
    h_unit = rep.check("h.units")
    h_invs = rep.check("h.inverses")
    h_bij = rep.check("h.bijective")
    p0_rt = rep.check("p0.round_trip")
    t_left = rep.check("transport.left")
    t_right = rep.check("transport.right")
    for b_idx, count in batches(n_samples):
        rng = batch_rng(seed, tag, b_idx)
        for _ in range(count):
            w = m.sample_scalar(rng)
            n1, n2 = m.sample_group(rng), m.sample_group(rng)
            eb = Arrow(n2, m.pi(w))
            wa = iso.range_witness(eb, w)
            ea = Arrow(n1, S_b.range(eb))
            A, B = iso.h_inv(ea, wa), iso.h_inv(eb, w)
            payload = lambda: {"w": fmt(w), "n1": str(n1), "n2": str(n2)}  # noqa: E731
            w_top = iso.range_witness(ea, wa)
            h_src.record(full.source(A) == iso.h_point(wa) and full.range(A) == iso.h_point(w_top), payload)
            h_comp.record(
                full.composable(A, B) and iso.h(full.compose(A, B), w) == S_b.compose(ea, eb), payload
            )
            h_unit.record(iso.h(full.unit(iso.h_point(w)), w) == S_b.unit(m.pi(w)), payload)
            h_invs.record(iso.h(full.invert(A), w_top) == S_b.invert(ea), payload)
            h_bij.record(iso.h(A, wa) == ea, payload)

            q = m.sample_scalar(rng)
            p0_rt.record(iso.p0(iso.p0_inv(q)) == q, {"q": fmt(q)})
            g = spec.left_arrow(n1, q)
            t_left.record(iso.transported_left(g, q) == spec.left_act(g, q), payload)
            eta = spec.right_arrow(q, n2)
            t_right.record(iso.transported_right(q, eta) == spec.right_act(q, eta), payload)
    return rep


def gl2_route_suite(alpha: SplitScalar, Mt: Mat2, level: int, n_samples: int, seed: int) -> SuiteReport:
    """Verify Mt = M diag(eps, 1) via the SL2 bibundle for M plus mu_eps onto S_beta."""
    M, Me = factor_eps(Mt)
    eps = Me.a
    rep = SuiteReport(f"gl2_route[{Mt.literal()}]")
    spec = build_PM(alpha, M, level=level)
    beta0 = spec.beta
    rep.check("beta_matches").record(
        mobius_pullback(Mt, alpha) == beta0 * (1 / eps.value), {"matrix": Mt.literal()}
    )
    rep.merge(verify_equivalence(spec, n_samples, seed), "sl2.")
    inv = PRational.of(1, Mt.p) / eps
    rep.merge(mu_eps_suite(beta0, inv, level, n_samples, seed), "mu_eps.")
    return rep
