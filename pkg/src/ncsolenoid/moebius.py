"""2x2 matrices over Z[1/p], the linear-fractional action on R x Q_p and the
scaling isomorphism between S_alpha and S_{eps alpha}.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import LiteralError, NonInvertible, NotAUnit, NotInGL, SingularAt
from .exact import PRational, SplitScalar, fmt, parse_prational
from .groupoids import Arrow, morphism_suite, solenoid_groupoid
from .report import SuiteReport, batch_rng, batches
from .sampling import rand_gl2, rand_point, rand_prational, rand_split, rand_unit


@dataclass(frozen=True, slots=True)
class Mat2:
    """``[[a, b], [c, d]]`` with entries in Z[1/p]."""

    a: PRational
    b: PRational
    c: PRational
    d: PRational
    p: int | None = None

    def __post_init__(self):
        p = self.p
        if p is None:
            ps = {e.p for e in (self.a, self.b, self.c, self.d) if isinstance(e, PRational)}
            if len(ps) != 1:
                raise ValueError("cannot infer p: pass PRational entries or p=")
            p = ps.pop()
            object.__setattr__(self, "p", p)
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, PRational.of(getattr(self, name), p))
        if not self.det:
            raise NonInvertible(f"singular matrix {self.literal()}")

    @classmethod
    def of(cls, a, b, c, d, p: int) -> Mat2:
        return cls(a, b, c, d, p)

    @classmethod
    def diag(cls, x, y, p: int | None = None) -> Mat2:
        return cls(x, 0, 0, y, p if p is not None else _infer_p(x, y))

    @classmethod
    def identity(cls, p: int) -> Mat2:
        return cls(1, 0, 0, 1, p)

    @property
    def det(self) -> PRational:
        return self.a * self.d - self.b * self.c

    def classify(self) -> str:
        """``SL2`` if det = 1, ``GL2`` if det is a unit +-p^k, else ``other``."""
        det = self.det
        if det == 1:
            return "SL2"
        return "GL2" if det.is_unit() else "other"

    def __matmul__(self, o: Mat2) -> Mat2:
        if not isinstance(o, Mat2):
            return NotImplemented
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            self.p,
        )

    def inverse(self) -> Mat2:
        det = self.det
        if not det.is_unit():
            raise NotInGL(f"det {det} of {self.literal()} is not a unit of Z[1/{self.p}]")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det, self.p)

    def literal(self) -> str:
        return f"{self.a.literal()},{self.b.literal()};{self.c.literal()},{self.d.literal()}"

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def _infer_p(*xs) -> int:
    for x in xs:
        if isinstance(x, PRational):
            return x.p
    raise ValueError("cannot infer p: pass PRational entries or p=")


def parse_matrix(s: str, p: int) -> Mat2:
    """Parse ``"a,b;c,d"`` with Z[1/p] entries such as ``1/p^2``."""
    rows = [r for r in s.replace(" ", "").split(";")]
    if len(rows) != 2 or any(len(r.split(",")) != 2 for r in rows):
        raise LiteralError(f"bad matrix literal {s!r} (expected 'a,b;c,d')")
    (a, b), (c, d) = (r.split(",") for r in rows)
    return Mat2(*(parse_prational(e, p) for e in (a, b, c, d)), p)


# ---------------------------------------------------------------- actions

def denominator(M: Mat2, alpha: SplitScalar) -> SplitScalar:
    """a - c alpha, componentwise."""
    a, c = M.a.value, M.c.value
    return SplitScalar(a - c * alpha.t, a - c * alpha.r)


def mobius_pullback(M: Mat2, alpha: SplitScalar) -> SplitScalar:
    """beta = -(b - d alpha) / (a - c alpha), the image of alpha under M^-1."""
    den = denominator(M, alpha)
    if den.t == 0:
        raise SingularAt("real", f"a - c*alpha vanishes in the real component for {M.literal()}")
    if den.r == 0:
        raise SingularAt("p-adic", f"a - c*alpha vanishes in the p-adic component for {M.literal()}")
    b, d = M.b.value, M.d.value
    num = SplitScalar(b - d * alpha.t, b - d * alpha.r)
    return -(num / den)


def mobius_forward(M: Mat2, alpha: SplitScalar) -> SplitScalar:
    """M . alpha, defined as the pullback along M^-1."""
    return mobius_pullback(M.inverse(), alpha)


def factor_eps(Mt: Mat2) -> tuple[Mat2, Mat2]:
    """Split Mt = M @ diag(eps, 1) with eps = det(Mt) and M in SL2."""
    eps = Mt.det
    if not eps.is_unit():
        raise NotInGL(f"det {eps} of {Mt.literal()} is not +-{Mt.p}^k")
    M = Mat2(Mt.a / eps, Mt.b, Mt.c / eps, Mt.d, Mt.p)
    return M, Mat2.diag(eps, 1, Mt.p)


def mu_eps(eps: PRational, arrow: Arrow) -> Arrow:
    """(n, z) -> (n / eps, z), an isomorphism S_alpha -> S_{eps alpha}."""
    if not isinstance(eps, PRational) or not eps.is_unit():
        raise NotAUnit(f"{eps} is not a unit +-p^k")
    return Arrow(arrow.g / eps, arrow.x)


def translation_reduction(M: Mat2, alpha: SplitScalar) -> tuple[SplitScalar, PRational]:
    """For c = 0: beta = (d/a) alpha - b/a and the unit eps = d/a with S_beta = S_{eps alpha}."""
    if M.c:
        raise ValueError("translation_reduction needs c = 0")
    beta = mobius_pullback(M, alpha)
    return beta, M.d / M.a


# ---------------------------------------------------------------- suite

def _defined_pair(rng, p: int, alpha: SplitScalar):
    while True:
        m1, m2 = rand_gl2(rng, p), rand_gl2(rng, p)
        try:
            lhs = mobius_pullback(m2, mobius_pullback(m1, alpha))
        except SingularAt:
            continue
        return m1, m2, lhs


def mu_eps_suite(alpha: SplitScalar, eps: PRational, level: int, n_samples: int, seed: int,
                 name: str | None = None) -> SuiteReport:
    p = eps.p
    S = solenoid_groupoid(alpha, p, level)
    T = solenoid_groupoid(alpha * eps, p, level)
    inv = PRational.of(1, p) / eps
    return morphism_suite(
        name or f"mu_eps[{eps}]",
        lambda a: mu_eps(eps, a),
        lambda z: z,
        S,
        T,
        n_samples,
        seed,
        inverse=lambda a: mu_eps(inv, a),
    )


def moebius_suite(p: int, alpha: SplitScalar, level: int, n_samples: int, seed: int) -> SuiteReport:
    rep = SuiteReport("moebius")
    group_law = rep.check("group_law")
    fwd_law = rep.check("forward_group_law")
    reassembly = rep.check("factor_eps_reassembly")
    for b_idx, count in batches(n_samples):
        rng = batch_rng(seed, "moebius", b_idx)
        for _ in range(count):
            a = alpha if rng.random() < 0.5 else rand_split(rng, nonzero=True)
            m1, m2, lhs = _defined_pair(rng, p, a)
            group_law.record(lhs == mobius_pullback(m1 @ m2, a),
                             lambda: {"M1": m1.literal(), "M2": m2.literal(), "alpha": fmt(a)})
            try:
                f_lhs = mobius_forward(m1, mobius_forward(m2, a))
                f_rhs = mobius_forward(m1 @ m2, a)
            except SingularAt:
                f_lhs = f_rhs = None
            fwd_law.record(f_lhs == f_rhs, lambda: {"M1": m1.literal(), "M2": m2.literal()})
            M, Me = factor_eps(m1)
            reassembly.record(M @ Me == m1 and M.det == 1 and Me.b == 0 and Me.c == 0 and Me.d == 1,
                              lambda: {"M": m1.literal()})

    one = PRational.of(1, p)
    rng = batch_rng(seed, "moebius-eps", 0)
    for _ in range(3):
        eps = rand_unit(rng, p)
        rep.merge(mu_eps_suite(alpha, eps, level, max(1, n_samples // 5), seed), f"mu_eps[{eps}].")

    # -alpha ~ alpha and p^l alpha ~ alpha through factor_eps of a diagonal matrix
    for tag, diag in (("neg_alpha", -one), ("p2_alpha", PRational.unit(1, 2, p))):
        M, Me = factor_eps(Mat2.diag(diag, 1, p))
        eps = Me.a
        ok_shape = M == Mat2.identity(p) and eps == diag
        sub = mu_eps_suite(alpha, eps, level, max(1, n_samples // 5), seed, name=tag)
        rep.check(f"{tag}.factor").record(ok_shape, {"matrix": Mat2.diag(diag, 1, p).literal()})
        rep.merge(sub, f"{tag}.")

    # c = 0: S_beta and S_{(d/a) alpha} have identical actions
    c0 = rep.check("c0_translation")
    for b_idx, count in batches(n_samples):
        rng = batch_rng(seed, "moebius-c0", b_idx)
        for _ in range(count):
            u = rand_unit(rng, p)
            m = Mat2(u, rand_prational(rng, p), 0, rand_unit(rng, p), p)
            beta, eps = translation_reduction(m, alpha)
            Sb = solenoid_groupoid(beta, p, level)
            Se = solenoid_groupoid(alpha * eps, p, level)
            n, z = rand_prational(rng, p), rand_point(rng, p, level)
            c0.record(Sb.act(n, z) == Se.act(n, z), lambda: {"M": m.literal(), "n": str(n), "z": str(z)})
    return rep


def direct_equivalence(Mt: Mat2, alpha: SplitScalar) -> dict:
    """Summary used by the CLI: beta, det, eps, and the strictness classification."""
    beta = mobius_pullback(Mt, alpha)
    det = Mt.det
    strict = bool(Mt.c) and Mt.c.is_unit() and det.is_unit()
    return {
        "beta": beta,
        "det": det,
        "eps": det if det.is_unit() else None,
        "class": Mt.classify(),
        "mode": "strict" if strict else ("translation" if not Mt.c and det.is_unit() else "report"),
    }


__all__ = [
    "Mat2",
    "direct_equivalence",
    "factor_eps",
    "mobius_forward",
    "mobius_pullback",
    "moebius_suite",
    "mu_eps",
    "mu_eps_suite",
    "parse_matrix",
    "translation_reduction",
]
