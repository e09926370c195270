import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncsolenoid.algebra import (
    SolenoidAlgebra,
    TrigPoly,
    algebra_suite,
    brute_convolve_at,
    char_phase,
    psi_multiplier,
    rand_elem,
    twisted_convolve,
    twisted_equal,
    twisted_generator,
)
from ncsolenoid.cyclotomic import CycloComplex
from ncsolenoid.errors import AlphaMismatch, LevelTooShallow
from ncsolenoid.exact import PRational, SplitScalar
from ncsolenoid.sampling import rand_point
from ncsolenoid.solenoid import pi_map

ALPHA = SplitScalar(F(1, 3), F(5, 2))
ALG = SolenoidAlgebra(ALPHA, 2, 12)
A0 = F(5, 6)  # 1/3 + {-5/2}_2 = 1/3 + 1/2


def _pr(x):
    return PRational.of(x, 2)


def test_a_sequence_start():
    assert ALG.a_phase(0) == A0
    with pytest.raises(LevelTooShallow):
        ALG.a_phase(13)


def test_unit_and_star_of_unit():
    f = rand_elem(random.Random(3), ALG)
    assert ALG.unit() * f == f
    assert ALG.star(ALG.unit()) == ALG.unit()


def test_commutation_ratio_example():
    UV, VU = ALG.U(0) * ALG.V(0), ALG.V(0) * ALG.U(0)
    n, chi = _pr(1), _pr(1)
    ratio_vu_uv = VU.terms[n].coeffs[chi] * UV.terms[n].coeffs[chi].conj()
    assert ratio_vu_uv == CycloComplex.root(A0)


@pytest.mark.parametrize("k,l", [(0, 0), (1, 2), (3, 1), (2, 4)])
def test_generator_products_pointwise(k, l):
    # U_k * V_l (1/p^k, z) = p_l(z) and V_l * U_k (1/p^k, z) = p_l(pi(alpha/p^k) z)
    rng = random.Random(k * 10 + l)
    z = rand_point(rng, 2, 12)
    n = _pr(F(1, 2**k))
    shift = pi_map(ALPHA * F(1, 2**k), 12, 2)
    chi = _pr(F(1, 2**l))
    assert (ALG.U(k) * ALG.V(l))(n, z) == CycloComplex.root(char_phase(chi, z))
    assert (ALG.V(l) * ALG.U(k))(n, z) == CycloComplex.root(char_phase(chi, shift * z))
    assert (ALG.U(k) * ALG.V(l))(_pr(0), z).is_zero()


@pytest.mark.parametrize("k", range(7))
def test_power_relations(k):
    assert ALG.U(k + 1) ** 2 == ALG.U(k)
    assert ALG.V(k + 1) ** 2 == ALG.V(k)


def test_star_of_U_is_inverse():
    for k in range(4):
        assert ALG.star(ALG.U(k)) == ALG.U(k) ** -1
        assert ALG.star(ALG.U(k)) * ALG.U(k) == ALG.unit()


def test_i_embed_times_U_power():
    Fn = TrigPoly({_pr(F(1, 4)): CycloComplex.one(), _pr(-1): CycloComplex.root(F(1, 3))}, 2)
    for k, m in [(0, 1), (2, 3), (3, -2)]:
        x = _pr(F(m, 2**k))
        lhs = ALG.i_embed(Fn) * ALG.U(k) ** m
        assert lhs == ALG.elem({x: Fn.translate(pi_map(ALPHA * x.value, 12, 2))})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_convolution_laws(seed):
    rng = random.Random(seed)
    f, g, h = (rand_elem(rng, ALG) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert ALG.star(ALG.star(f)) == f
    assert ALG.star(f * g) == ALG.star(g) * ALG.star(f)
    z = rand_point(rng, 2, 12)
    n = next(iter((f * g).terms), _pr(0))
    assert (f * g)(n, z) == brute_convolve_at(f, g, n, z)


def test_alpha_mismatch():
    other = SolenoidAlgebra(SplitScalar(F(1, 5), F(1, 3)), 2, 12)
    with pytest.raises(AlphaMismatch):
        ALG.U(0) * other.U(0)


def test_psi_examples():
    a = pi_map(ALPHA, 12, 2)
    x, y = _pr(F(3, 4)), _pr(F(5, 2))
    assert psi_multiplier(a, (_pr(0), x), (y, x)) == 0
    assert psi_multiplier(a, (x, y), (y, _pr(0))) == 0
    assert psi_multiplier(a, (_pr(1), _pr(0)), (_pr(0), _pr(1))) == A0
    with pytest.raises(LevelTooShallow):
        psi_multiplier(pi_map(ALPHA, 2, 2), (_pr(F(1, 4)), 0), (0, _pr(F(1, 2))))


def test_twisted_unit_and_phase():
    a = pi_map(ALPHA, 12, 2)
    f = {(_pr(1), _pr(F(1, 2))): CycloComplex.root(F(1, 4), 2)}
    assert twisted_equal(twisted_convolve(f, twisted_generator(0, 0, 2), a), f)
    eU, eV = twisted_generator(1, 0, 2), twisted_generator(0, 1, 2)
    key = (_pr(1), _pr(1))
    uv, vu = twisted_convolve(eU, eV, a)[key], twisted_convolve(eV, eU, a)[key]
    assert uv == vu.rotate(A0)


def test_algebra_suite_derived_relations():
    rep = algebra_suite(ALPHA, 2, 12, 100, 42)
    assert rep.ok, rep.lines()
    for cid in ("U_power", "V_power", "relation_derived", "cross_model_conjugate", "unitary_generators",
                "i_embed_translation", "associativity", "star_involution", "star_antimultiplicative",
                "pointwise_oracle", "normalized", "cocycle_identity", "twisted_associativity"):
        assert rep[cid].status == "pass", cid
    # the exp(+2 i pi a) form of the relation is off by the conjugate phase
    assert rep["relation_literal"].status == "defect"
    assert rep["relation_literal"].defect_phase == ["1/6"]


@pytest.mark.xfail(strict=True, reason=(
    "convolution gives U_k V_l = exp(-2i pi a_{k+l}) V_l U_k: the pointwise products "
    "U_k*V_l(n,z) = p_l(z) and V_l*U_k(n,z) = p_l(pi(alpha/p^k) z) force the minus sign"
))
def test_relation_with_plus_sign():
    for k in range(7):
        for l in range(7):
            ph = ALG.a_phase(k + l)
            assert ALG.U(k) * ALG.V(l) == (ALG.V(l) * ALG.U(k)).scale(CycloComplex.root(ph))
