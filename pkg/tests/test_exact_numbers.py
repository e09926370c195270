from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncsolenoid.cyclotomic import CycloComplex, ModulusOverflow, numeric_mode, parse_cyclo
from ncsolenoid.errors import LiteralError, NonInvertible, NotInZ1p, WindowBelowValuation
from ncsolenoid.exact import (
    PRational,
    SplitScalar,
    delta_embed,
    format_digits,
    frac_part,
    padic_digits,
    parse_digits,
    parse_prational,
    parse_rat,
    valuation,
)

primes = st.sampled_from([2, 3, 5, 7])
rats = st.fractions(max_denominator=10**6)
nonzero_rats = rats.filter(lambda x: x != 0)


@pytest.mark.parametrize("r,expected", [(F(5, 2), F(1, 2)), (F(3), F(0)), (F(-1, 4), F(3, 4))])
def test_frac_part_examples(r, expected):
    assert frac_part(r, 2) == expected


def _digit_oracle_frac(r, p):
    # independent oracle: expand r = u/p^k with p not dividing the denominator of u
    # and read the negative-index digits of u from its residue mod p^k
    k = max(0, -valuation(r, p)) if r else 0
    u = r * p**k
    m = u.numerator * pow(u.denominator, -1, p**k) % p**k if k else 0
    return F(m, p**k)


@given(rats, primes)
def test_frac_part_properties(r, p):
    f = frac_part(r, p)
    assert 0 <= f < 1
    assert valuation(f, p) < 0 or f == 0
    assert r == f or valuation(r - f, p) >= 0
    assert (f == 0) == (r == 0 or valuation(r, p) >= 0)
    assert f == _digit_oracle_frac(r, p)


def test_padic_digit_examples():
    assert padic_digits(F(1, 3), 2, 0, 4) == (1, 1, 0, 1)
    assert padic_digits(F(0), 2, -3, 5) == (0,) * 8
    assert padic_digits(F(5, 2), 2, -1, 2) == (1, 0, 1)


def test_padic_digits_below_valuation_flag():
    assert padic_digits(F(5, 2), 2, -3, 2) == (0, 0, 1, 0, 1)
    with pytest.raises(WindowBelowValuation):
        padic_digits(F(5, 2), 2, -3, 2, allow_below_valuation=False)


@given(rats, rats, primes)
def test_padic_digits_reconstruct_sum(r1, r2, p):
    s = r1 + r2
    v = min(0, valuation(s, p)) if s else 0
    N = 6
    digits = padic_digits(s, p, v, N)
    approx = sum(F(d) * F(p) ** (v + i) for i, d in enumerate(digits))
    diff = s - approx
    assert diff == 0 or valuation(diff, p) >= N


def test_digit_literals_round_trip():
    lit = format_digits(F(5, 2), 2, -1, 2)
    assert lit == "1.01@-1"
    assert parse_digits(lit, 2) == F(5, 2)


def test_split_examples():
    a = SplitScalar(F(1, 3), F(5, 2))
    assert a.inv() == SplitScalar(3, F(2, 5))
    assert delta_embed(0) == SplitScalar(0, 0)
    assert a * delta_embed(F(1, 2)) == SplitScalar(F(1, 6), F(5, 4))


def test_split_inverse_of_zero_component():
    with pytest.raises(NonInvertible):
        SplitScalar(1, 0).inv()


@given(rats, rats, rats, rats, rats, rats)
def test_split_ring_laws(a, b, c, d, e, f):
    x, y, z = SplitScalar(a, b), SplitScalar(c, d), SplitScalar(e, f)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if x.is_invertible():
        assert x.inv().inv() == x


@given(st.integers(-50, 50), st.integers(0, 5), st.integers(-50, 50), st.integers(0, 5))
def test_delta_is_ring_embedding(m1, k1, m2, k2):
    n1, n2 = F(m1, 2**k1), F(m2, 2**k2)
    assert delta_embed(n1) + delta_embed(n2) == delta_embed(n1 + n2)
    assert delta_embed(n1) * delta_embed(n2) == delta_embed(n1 * n2)


def test_prational_literals():
    assert parse_prational("3/2^2", 2) == PRational.of(F(3, 4), 2)
    with pytest.raises(NotInZ1p):
        parse_prational("1/3", 2)
    with pytest.raises(LiteralError):
        parse_rat("1/x")
    assert PRational.unit(-1, 2, 2).is_unit()
    assert not PRational.of(3, 2).is_unit()


def test_cyclo_examples():
    one = CycloComplex.one()
    s = one + CycloComplex.root(F(1, 3)) + CycloComplex.root(F(2, 3))
    assert s.is_zero()
    assert one == CycloComplex.root(0)
    assert CycloComplex.root(F(1, 2)) == CycloComplex.rational(-1)
    assert parse_cyclo("1 + -1/2@1/3") == one + CycloComplex.root(F(1, 3), F(-1, 2))


def test_cyclo_modulus_cap():
    with numeric_mode("exact", cap=16):
        with pytest.raises(ModulusOverflow):
            CycloComplex.root(F(1, 17)) + CycloComplex.one()


phases = st.integers(0, 23).map(lambda k: F(k, 24))
coeffs = st.fractions(max_denominator=5, min_value=-5, max_value=5)
cyclos = st.lists(st.tuples(coeffs, phases), max_size=4).map(
    lambda ts: sum((CycloComplex.root(ph, c) for c, ph in ts), CycloComplex.zero())
)


@given(cyclos, cyclos, cyclos)
def test_cyclo_field_laws(x, y, z):
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    n = x * x.conj()
    assert n == n.conj()
    assert x.is_zero() == (abs(x.to_complex()) < 1e-12)
