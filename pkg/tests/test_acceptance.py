"""End-to-end acceptance criteria, each with its time limit.

Every criterion prints one ``PASS``/``FAIL`` line (also collected in the
terminal summary).  Criterion 6 contains a sign discrepancy: the stated
relation U_k V_l = exp(+2 i pi a_{k+l}) V_l U_k and the stated pointwise
products U_k*V_l(n,z) = p_l(z), V_l*U_k(n,z) = p_l(pi(alpha/p^k) z) cannot
both hold, since the products give exp(-2 i pi a_{k+l}).  The twisted model
gives exp(+2 i pi a_{k+l}), so generator phases agree only up to conjugation.
Those literal sub-checks are strict xfails and are reported as FAIL.
"""
import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from conftest import ACCEPTANCE_LINES
from ncsolenoid.algebra import (
    SolenoidAlgebra,
    algebra_law_suite,
    cocycle_suite,
    twisted_convolve,
    twisted_generator,
)
from ncsolenoid.bibundles import build_PM, reduction_suite, torus_bibundle, verify_equivalence
from ncsolenoid.bimodule import imprimitivity_check
from ncsolenoid.cli import main
from ncsolenoid.cyclotomic import CycloComplex
from ncsolenoid.errors import SingularMoment
from ncsolenoid.exact import PRational, SplitScalar, frac_part
from ncsolenoid.groupoids import axiom_suite, full_solenoid_groupoid, kronecker_groupoid, solenoid_groupoid
from ncsolenoid.moebius import Mat2, factor_eps, moebius_suite, mu_eps_suite, parse_matrix
from ncsolenoid.report import batch_rng
from ncsolenoid.sampling import rand_point, rand_prational, rand_sl2, rand_split
from ncsolenoid.solenoid import orbit_solve, pi_map

pytestmark = pytest.mark.acceptance

P = 2
ALPHA = SplitScalar(F(1, 3), F(5, 2))
L = 8


def _emit(line):
    ACCEPTANCE_LINES.append(line)
    print(line)


@contextmanager
def criterion(label, limit_s):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        _emit(f"FAIL  {label}  ({time.perf_counter() - t0:.2f} s, limit {limit_s} s)")
        raise
    dt = time.perf_counter() - t0
    ok = dt < limit_s
    _emit(f"{'PASS' if ok else 'FAIL'}  {label}  ({dt:.2f} s, limit {limit_s} s)")
    assert ok, f"{label} took {dt:.2f} s (limit {limit_s} s)"


def _assert_pass(rep):
    bad = [c.id for c in rep.checks if c.status != "pass"]
    assert not bad, "\n".join(rep.lines())


def test_c1_groupoid_axioms():
    with criterion("C1 groupoid axioms: S_alpha, full groupoid, T_theta, 1000 triples each", 10):
        for G in (solenoid_groupoid(ALPHA, P, L), full_solenoid_groupoid(ALPHA, P, L), kronecker_groupoid(F(1, 3), P)):
            rep = axiom_suite(G, 1000, 42)
            _assert_pass(rep)
            assert all(c.samples == 1000 for c in rep.checks)


def test_c2_solenoid_structure():
    with criterion("C2 solenoid: pi homomorphism, pi o delta trivial, orbit_solve round trip", 5):
        rng = random.Random(42)
        for _ in range(200):
            q1, q2 = rand_split(rng), rand_split(rng)
            assert pi_map(q1 + q2, L, P) == pi_map(q1, L, P) * pi_map(q2, L, P)
        for _ in range(200):
            n = rand_prational(rng, P, kmax=12, bound=10**6)
            assert pi_map(SplitScalar.delta(n.value), L, P).is_identity()
        for _ in range(100):
            z = rand_point(rng, P, L)
            assert pi_map(orbit_solve(z), L, P) == z


def test_c3_moebius_layer():
    with criterion("C3 Moebius: group law, factor_eps, mu_eps functoriality, -alpha and p^l alpha", 5):
        rep = moebius_suite(P, ALPHA, L, 100, 42)
        _assert_pass(rep)
        for cid in ("group_law", "factor_eps_reassembly"):
            assert rep[cid].samples == 100
        eps = PRational.unit(1, 2, P)
        fun = mu_eps_suite(ALPHA, eps, L, 100, 42)
        _assert_pass(fun)
        assert fun["composition"].samples == 100
        M, Me = factor_eps(Mat2.diag(-1, 1, P))
        assert M == Mat2.identity(P) and Me.a == -1
        M, Me = factor_eps(Mat2.diag(4, 1, P))
        assert M == Mat2.identity(P) and Me.a == 4
        for tag in ("neg_alpha", "p2_alpha"):
            assert rep[f"{tag}.factor"].passed and rep[f"{tag}.composition"].passed


def test_c4_bibundle_strict_suite():
    with criterion("C4 bibundle E1-E5 + transported actions: antidiagonal and 20 random SL2, 500 samples", 30):
        rng = batch_rng(42, "acceptance-sl2", 0)
        mats = [parse_matrix("0,1;1,0", P)]
        while len(mats) < 21:
            M = rand_sl2(rng, P, -3, 3)
            try:
                build_PM(ALPHA, M)
            except SingularMoment:
                continue
            mats.append(M)
        for M in mats:
            spec = build_PM(ALPHA, M)
            assert spec.strict
            rep = verify_equivalence(spec, 500, 42)
            _assert_pass(rep)
            assert all(c.samples == 500 for c in rep.checks)
            _assert_pass(reduction_suite(spec, 500, 42))


def test_c5_defect_instrumentation():
    with criterion("C5 defect phase for [[1,1],[3,4]] (alpha=(1/5,5/2)): level-0 E2 defect = pi(delta(1/3))", 5):
        # at alpha = (1/3, 5/2) the real part of a - c alpha vanishes, so alpha_t = 1/5 is used
        with pytest.raises(SingularMoment):
            build_PM(ALPHA, parse_matrix("1,1;3,4", P))
        spec = build_PM(SplitScalar(F(1, 5), F(5, 2)), parse_matrix("1,1;3,4", P))
        assert not spec.strict
        rep = verify_equivalence(spec, 500, 42)
        chk = rep["E2.eps_invariance"]
        assert chk.status == "defect" and chk.counterexample["n"] == "1"
        oracle = (F(1, 3) + frac_part(F(-1, 3), P)) % 1
        assert oracle != 0
        assert F(chk.defect_phase[0]) == oracle
        assert F(rep["E2.mu_invariance"].defect_phase[0]) == oracle


ALG = SolenoidAlgebra(ALPHA, P, 12)


def test_c6_algebra_relations():
    with criterion("C6 algebra: power relations, cocycle (1000), associativity (100), conjugate phases", 30):
        for k in range(7):
            assert ALG.U(k + 1) ** P == ALG.U(k)
            assert ALG.V(k + 1) ** P == ALG.V(k)
        for k in range(7):
            for l in range(7):
                ph = ALG.a_phase(k + l)
                assert ph == pi_map(ALPHA, 12, P).angles[k + l]
                UV, VU = ALG.U(k) * ALG.V(l), ALG.V(l) * ALG.U(k)
                assert UV == VU.scale(CycloComplex.root(-ph))
                assert _twisted_ratio(k, l) == CycloComplex.root(ph)
        coc = cocycle_suite(ALG.a, P, 1000, 42)
        _assert_pass(coc)
        assert coc["cocycle_identity"].samples == 1000
        laws = algebra_law_suite(ALG, 100, 42)
        _assert_pass(laws)
        assert laws["associativity"].samples == 100


def _twisted_ratio(k, l):
    x, y = PRational.unit(1, -k, P), PRational.unit(1, -l, P)
    eU, eV = twisted_generator(x, 0, P), twisted_generator(0, y, P)
    key = (x, y)
    return twisted_convolve(eU, eV, ALG.a)[key] * twisted_convolve(eV, eU, ALG.a)[key].conj()


def _group_ratio(k, l):
    UV, VU = ALG.U(k) * ALG.V(l), ALG.V(l) * ALG.U(k)
    n, chi = PRational.unit(1, -k, P), PRational.unit(1, -l, P)
    return UV.terms[n].coeffs[chi] * VU.terms[n].coeffs[chi].conj()


def _literal_failures(test):
    return [(k, l) for k in range(7) for l in range(7) if not test(k, l)]


@pytest.mark.xfail(strict=True, reason="sign slip: convolution gives exp(-2 i pi a_{k+l}), see module docstring")
def test_c6_relation_literal_sign():
    bad = _literal_failures(
        lambda k, l: ALG.U(k) * ALG.V(l) == (ALG.V(l) * ALG.U(k)).scale(CycloComplex.root(ALG.a_phase(k + l)))
    )
    _emit(f"FAIL  C6 literal relation U_k V_l = exp(+2 i pi a_(k+l)) V_l U_k: {len(bad)}/49 (k,l) pairs off by "
          "the conjugate phase (known sign discrepancy, strict xfail)")
    assert not bad


@pytest.mark.xfail(strict=True, reason="twisted and groupoid generator phases are complex conjugates")
def test_c6_cross_model_literal():
    bad = _literal_failures(lambda k, l: _group_ratio(k, l) == _twisted_ratio(k, l))
    _emit(f"FAIL  C6 literal twisted-vs-groupoid phase agreement: {len(bad)}/49 (k,l) pairs conjugate rather than "
          "equal (same sign discrepancy, strict xfail)")
    assert not bad


def test_c7_bimodule():
    with criterion("C7 bimodule: imprimitivity (10 triples x 100 points), base points (50), enumeration (100)", 60):
        for lit in ("0,1;1,0", "1,0;2,1"):
            spec = build_PM(ALPHA, parse_matrix(lit, P))
            rep = imprimitivity_check(spec, 10, 100, 42, n_arrows=50, n_windows=100)
            _assert_pass(rep)
            assert rep["imprimitivity"].samples == 100
            assert rep["base_point_G"].samples == 50 and rep["base_point_H"].samples == 50
            assert rep["enumerate_vs_bruteforce"].samples == 100


def test_c8_torus():
    with criterion("C8 torus theta=1/3: [[0,1],[1,0]] and [[1,0],[1,1]] at level 0", 5):
        for lit, beta in (("0,1;1,0", F(3)), ("1,0;1,1", F(1, 2))):
            spec = torus_bibundle(F(1, 3), parse_matrix(lit, P))
            assert spec.strict and spec.beta == beta and spec.model.level == 0
            _assert_pass(verify_equivalence(spec, 500, 42))


def test_c9_determinism(tmp_path, capsys):
    with criterion("C9 determinism: two seed-42 runs give byte-identical JSON", 120):
        outs = []
        for name in ("a.json", "b.json"):
            path = tmp_path / name
            assert main(["verify", "all", "--seed", "42", "--out", str(path)]) == 0
            outs.append(path.read_bytes())
        capsys.readouterr()
        assert outs[0] == outs[1]
        assert json.loads(outs[0])["config"]["seed"] == 42
