from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncsolenoid.errors import IncoherentPoint, LevelMismatch
from ncsolenoid.exact import SplitScalar, frac_part
from ncsolenoid.solenoid import (
    SolenoidPoint,
    act_rho,
    kernel_witness,
    omega,
    orbit_solve,
    parse_point,
    pi_map,
    sol_mul,
    solenoid_suite,
)

rats = st.fractions(max_denominator=1000)
splits = st.builds(SplitScalar, rats, rats)
dyadics = st.builds(lambda m, k: F(m, 2**k), st.integers(-10**6, 10**6), st.integers(0, 12))


def _theta_oracle(q, n, p):
    return (q.t / p**n + frac_part(-q.r / p**n, p)) % 1


def test_pi_examples(alpha):
    assert pi_map(SplitScalar(0, 0), 3, 2).angles == (0, 0, 0, 0)
    assert pi_map(alpha, 0, 2).angles == (F(5, 6),)
    assert act_rho(alpha, SolenoidPoint.identity(2, 0)).angles == (F(5, 6),)


@given(splits, st.sampled_from([2, 3, 5]), st.integers(0, 8))
def test_pi_matches_fractional_part_oracle(q, p, L):
    z = pi_map(q, L, p)
    assert [F(a) for a in z.angles] == [_theta_oracle(q, n, p) for n in range(L + 1)]


@given(splits, splits)
def test_pi_is_homomorphism(q1, q2):
    assert pi_map(q1 + q2, 8, 2) == pi_map(q1, 8, 2) * pi_map(q2, 8, 2)


@given(dyadics)
def test_pi_kills_delta(n):
    assert pi_map(SplitScalar.delta(n), 8, 2).is_identity()


def test_kernel_witness():
    q = SplitScalar.delta(F(3, 4)) + SplitScalar(0, 2**9)
    assert pi_map(q, 8, 2).is_identity()
    assert kernel_witness(q, 8, 2) == F(3, 4)


@given(splits)
def test_mul_inverse(q):
    z = pi_map(q, 5, 3)
    assert (z * z.inv()).is_identity()


@given(splits)
def test_orbit_round_trip(q):
    z = pi_map(q, 6, 2)
    assert pi_map(orbit_solve(z), 6, 2) == z


def test_orbit_examples(alpha):
    ident = SolenoidPoint.identity(2, 4)
    assert pi_map(orbit_solve(ident), 4, 2) == ident
    z = pi_map(alpha, 6, 2)
    assert pi_map(orbit_solve(z), 6, 2) == z
    w = parse_point("1/2,1/4,1/8", 2)
    assert w == omega(F(1, 2), 2, 2)
    assert pi_map(SplitScalar(F(1, 2), 0), 2, 2) == w


def test_incoherent_point():
    with pytest.raises(IncoherentPoint):
        parse_point("1/3,1/2", 2)


def test_level_mismatch():
    a, b = SolenoidPoint.identity(2, 2), SolenoidPoint.identity(2, 3)
    with pytest.raises(LevelMismatch):
        sol_mul(a, b, auto_restrict=False)
    assert sol_mul(a, b).level == 2


def test_solenoid_suite_passes():
    assert solenoid_suite(2, 8, 200, 42).all_pass
