from fractions import Fraction as F

import pytest

from ncsolenoid.errors import LiteralError, NonInvertible, NotAUnit, NotInGL, SingularAt
from ncsolenoid.exact import PRational, SplitScalar
from ncsolenoid.groupoids import Arrow
from ncsolenoid.moebius import (
    Mat2,
    direct_equivalence,
    factor_eps,
    mobius_forward,
    mobius_pullback,
    moebius_suite,
    mu_eps,
    parse_matrix,
    translation_reduction,
)
from ncsolenoid.solenoid import SolenoidPoint, pi_map


def test_pullback_examples(alpha):
    assert mobius_pullback(parse_matrix("0,1;1,0", 2), alpha) == SplitScalar(3, F(2, 5))
    assert mobius_pullback(Mat2.identity(2), alpha) == alpha
    assert mobius_pullback(parse_matrix("1,1;1,2", 2), alpha) == SplitScalar(F(-1, 2), F(-8, 3))


def test_pullback_oracle(alpha):
    # -(b - d x)/(a - c x) per component, written out independently
    a, b, c, d = 1, 1, 1, 2
    for x, got in zip((alpha.t, alpha.r), (lambda m: (m.t, m.r))(mobius_pullback(Mat2(a, b, c, d, 2), alpha))):
        assert got == -(b - d * x) / (a - c * x)


def test_forward_inverts_pullback(alpha):
    M = parse_matrix("1,1;1,2", 2)
    assert mobius_forward(M, mobius_pullback(M, alpha)) == alpha


def test_singular_components():
    with pytest.raises(SingularAt) as ei:
        mobius_pullback(parse_matrix("1,1;3,4", 2), SplitScalar(F(1, 3), F(5, 2)))
    assert ei.value.component == "real"
    with pytest.raises(SingularAt) as ei:
        mobius_pullback(parse_matrix("1,1;2,3", 2), SplitScalar(F(1, 3), F(1, 2)))
    assert ei.value.component == "p-adic"


def test_matrix_literals():
    M = parse_matrix("1/2^2,1;-1,0", 2)
    assert M.a == PRational.of(F(1, 4), 2)
    assert M.det == 1 and M.classify() == "SL2"
    with pytest.raises(LiteralError):
        parse_matrix("1,2,3", 2)
    with pytest.raises(NonInvertible):
        parse_matrix("1,2;2,4", 2)
    with pytest.raises(NotInGL):
        parse_matrix("1,0;0,3", 2).inverse()


def test_factor_eps_examples():
    M, Me = factor_eps(Mat2.diag(-1, 1, 2))
    assert M == Mat2.identity(2) and Me.a == -1
    M, Me = factor_eps(Mat2.diag(4, 1, 2))
    assert Me.a == 4
    S = parse_matrix("1,1;1,2", 2)
    assert factor_eps(S) == (S, Mat2.identity(2))


def test_mu_eps_example(alpha):
    from ncsolenoid.groupoids import solenoid_groupoid

    eps = PRational.of(2, 2)
    z = pi_map(SplitScalar(F(1, 7), F(3, 5)), 6, 2)
    a = Arrow(PRational.of(F(1, 2), 2), z)
    b = mu_eps(eps, a)
    assert b.g == PRational.of(F(1, 4), 2)
    S, T = solenoid_groupoid(alpha, 2, 6), solenoid_groupoid(alpha * 2, 2, 6)
    assert S.range(a) == T.range(b)
    assert mu_eps(PRational.of(1, 2), a) == a
    with pytest.raises(NotAUnit):
        mu_eps(PRational.of(3, 2), a)


def test_translation_reduction(alpha):
    beta, eps = translation_reduction(parse_matrix("2,1;0,1/2", 2), alpha)
    assert eps == PRational.of(F(1, 4), 2)
    diff = beta - alpha * F(1, 4)
    assert diff.t == diff.r


def test_direct_equivalence_modes(alpha):
    assert direct_equivalence(parse_matrix("0,1;1,0", 2), alpha)["mode"] == "strict"
    assert direct_equivalence(Mat2.identity(2), alpha)["mode"] == "translation"
    info = direct_equivalence(parse_matrix("1,1;3,4", 2), SplitScalar(F(1, 5), F(5, 2)))
    assert info["mode"] == "report"


def test_moebius_suite(alpha):
    rep = moebius_suite(2, alpha, 8, 100, 42)
    assert rep.all_pass, rep.lines()


def test_moebius_suite_p3():
    rep = moebius_suite(3, SplitScalar(F(2, 5), F(-7, 3)), 5, 50, 1)
    assert rep.all_pass, rep.lines()
