"""Command-line driver: compute Moebius images, solve orbits, run verification suites.

Every flag can also be set through an environment variable named
``NCSOLENOID_<FLAG>`` (upper case, dashes as underscores), e.g.
``NCSOLENOID_SAMPLES=200``.  Command-line flags win over the environment.

Exit codes: 0 when every selected check passes (report-mode defects allowed),
1 when some check fails, 2 on input errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from .algebra import algebra_suite
from .bibundles import (
    antidiagonal_check,
    build_PM,
    reduction_suite,
    torus_bibundle,
    verify_equivalence,
)
from .bimodule import imprimitivity_check
from .cyclotomic import DEFAULT_CAP, numeric_mode
from .errors import NotInZ1p, NotStrict, SolenoidError
from .exact import PRational, SplitScalar, fmt, is_prime, parse_rat
from .groupoids import axiom_suite, full_solenoid_groupoid, immersion_suite, kronecker_groupoid, solenoid_groupoid
from .moebius import Mat2, direct_equivalence, mu_eps_suite, moebius_suite, parse_matrix, translation_reduction
from .report import Check, SuiteReport
from .solenoid import orbit_solve, parse_point, pi_map, solenoid_suite

ENV_PREFIX = "NCSOLENOID_"
SUITES = ("groupoid", "moebius", "bibundle", "algebra", "bimodule")

DEFAULTS = {
    "p": "2",
    "alpha_t": "1/3",
    "alpha_r": "5/2",
    "matrix": "0,1;1,0",
    "level": "8",
    "alg_level": "12",
    "samples": "500",
    "seed": "42",
    "mode": "exact",
    "tolerance": "1/1000000000",
    "cyclo_cap": str(DEFAULT_CAP),
}


@dataclass(frozen=True)
class RunConfig:
    p: int
    alpha_t: str
    alpha_r: str
    matrix: str
    level: int
    alg_level: int
    samples: int
    seed: int
    mode: str
    tolerance: str
    cyclo_cap: int

    @property
    def alpha(self) -> SplitScalar:
        return SplitScalar(parse_rat(self.alpha_t), parse_rat(self.alpha_r))

    @property
    def M(self) -> Mat2:
        return parse_matrix(self.matrix, self.p)

    def run_id(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


class InputError(Exception):
    pass


def make_config(ns: argparse.Namespace) -> RunConfig:
    def pick(key):
        v = getattr(ns, key, None)
        if v is None:
            v = os.environ.get(ENV_PREFIX + key.upper(), DEFAULTS[key])
        return v

    def as_int(key, lo=None):
        raw = pick(key)
        try:
            v = int(raw)
        except ValueError:
            raise InputError(f"--{key.replace('_', '-')} expects an integer, got {raw!r}") from None
        if lo is not None and v < lo:
            raise InputError(f"--{key.replace('_', '-')} must be >= {lo}, got {v}")
        return v

    p = as_int("p", 2)
    if not is_prime(p):
        raise InputError(f"--p must be prime, got {p}")
    mode = pick("mode")
    if mode not in ("exact", "float"):
        raise InputError(f"--mode must be exact or float, got {mode!r}")
    cfg = RunConfig(
        p=p,
        alpha_t=fmt(parse_rat(pick("alpha_t"))),
        alpha_r=fmt(parse_rat(pick("alpha_r"))),
        matrix=pick("matrix").replace(" ", ""),
        level=as_int("level", 0),
        alg_level=as_int("alg_level", 0),
        samples=as_int("samples", 1),
        seed=as_int("seed"),
        mode=mode,
        tolerance=fmt(parse_rat(pick("tolerance"))),
        cyclo_cap=as_int("cyclo_cap", 1),
    )
    cfg.M  # validate the literal early
    return cfg


# ---------------------------------------------------------------- suites

def _skipped(name: str, check_id: str, why: str) -> SuiteReport:
    rep = SuiteReport(name)
    rep.checks.append(Check(check_id, status="skipped", note=why))
    return rep


def run_groupoid(cfg: RunConfig) -> list[SuiteReport]:
    a, p, L, n, seed = cfg.alpha, cfg.p, cfg.level, cfg.samples, cfg.seed
    rep = SuiteReport("groupoid")
    rep.merge(axiom_suite(solenoid_groupoid(a, p, L), n, seed), "S_alpha.")
    rep.merge(axiom_suite(full_solenoid_groupoid(a, p, L), n, seed), "full.")
    rep.merge(axiom_suite(kronecker_groupoid(a.t, p), n, seed), "T_theta.")
    rep.merge(immersion_suite(a, p, L, n, seed), "immersion.")
    return [solenoid_suite(p, L, n, seed), rep]


def run_moebius(cfg: RunConfig) -> list[SuiteReport]:
    return [moebius_suite(cfg.p, cfg.alpha, cfg.level, min(cfg.samples, 100), cfg.seed)]


def _in_delta(x: SplitScalar, p: int) -> bool:
    """x = delta(n) for some n in Z[1/p]."""
    try:
        PRational.of(x.t, p)
    except NotInZ1p:
        return False
    return x.t == x.r


def _torus_suite(cfg: RunConfig) -> SuiteReport | None:
    M = cfg.M
    if any(e.value.denominator != 1 for e in (M.a, M.b, M.c, M.d)) or M.det not in (1, -1) or not M.c:
        return None
    spec = torus_bibundle(cfg.alpha.t, M, cfg.p)
    return verify_equivalence(spec, cfg.samples, cfg.seed, name=f"torus[{M.literal()}]")


def run_bibundle(cfg: RunConfig) -> list[SuiteReport]:
    M, a = cfg.M, cfg.alpha
    if not M.c:
        beta, eps = translation_reduction(M, a)
        if not eps.is_unit():
            return [_skipped("bibundle", "translation", f"d/a = {eps} is not a unit")]
        rep = SuiteReport(f"translation[{M.literal()}]")
        diff = beta - a * eps.value
        rep.check("beta_minus_eps_alpha_in_delta").record(_in_delta(diff, cfg.p), {"beta": fmt(beta), "eps": str(eps)})
        rep.merge(mu_eps_suite(a, eps, cfg.level, cfg.samples, cfg.seed), "mu_eps.")
        return [rep]
    spec = build_PM(a, M, level=cfg.level)
    out = [verify_equivalence(spec, cfg.samples, cfg.seed)]
    if spec.strict:
        out.append(reduction_suite(spec, cfg.samples, cfg.seed))
    if M == Mat2(0, 1, 1, 0, cfg.p):
        out.append(antidiagonal_check(a, spec.model, cfg.samples, cfg.seed))
    torus = _torus_suite(cfg)
    if torus is not None:
        out.append(torus)
    return out


def run_algebra(cfg: RunConfig) -> list[SuiteReport]:
    return [algebra_suite(cfg.alpha, cfg.p, cfg.alg_level, min(cfg.samples, 100), cfg.seed)]


def run_bimodule(cfg: RunConfig) -> list[SuiteReport]:
    M = cfg.M
    if not M.c:
        return [_skipped("bimodule", "imprimitivity", "c = 0 has no P_M bimodule")]
    spec = build_PM(cfg.alpha, M, level=cfg.level)
    if not spec.strict:
        return [_skipped("bimodule", "imprimitivity", "matrix is not strict (c or det not a unit)")]
    n = cfg.samples
    return [imprimitivity_check(spec, max(1, n // 50), max(1, n // 5), cfg.seed,
                                n_arrows=max(1, n // 10), n_windows=max(1, n // 5))]


RUNNERS = {
    "groupoid": run_groupoid,
    "moebius": run_moebius,
    "bibundle": run_bibundle,
    "algebra": run_algebra,
    "bimodule": run_bimodule,
}


def cmd_verify(cfg: RunConfig, suite: str = "all", strict_only: bool = False, timing: bool = False) -> tuple[dict, int]:
    """Run the selected suites; returns the JSON-ready report and the exit code."""
    M = cfg.M
    if strict_only:
        spec_strict = bool(M.c) and M.c.is_unit() and M.det.is_unit()
        if not spec_strict:
            raise NotStrict(
                f"matrix {M.literal()} is outside strict mode: c = {M.c} and det = {M.det} must both be units +-{cfg.p}^k"
            )
    names = SUITES if suite == "all" else (suite,)
    suites: list[SuiteReport] = []
    times = {}
    with numeric_mode(cfg.mode, float(Fraction(cfg.tolerance)), cfg.cyclo_cap):
        for name in names:
            t0 = time.perf_counter()
            suites.extend(RUNNERS[name](cfg))
            times[name] = round((time.perf_counter() - t0) * 1000, 3)
    report = {
        "run_id": cfg.run_id(),
        "config": asdict(cfg),
        "suites": [s.to_json() for s in suites],
        "timing_ms": times if timing else None,
    }
    code = 0 if all(s.ok for s in suites) else 1
    return report, code


def report_text(report: dict) -> list[str]:
    out = [f"run {report['run_id']}"]
    for s in report["suites"]:
        out.append(f"[{s['name']}]")
        for c in s["checks"]:
            out.append(f"  {c['status'].upper():7} {c['id']} ({c['samples']} samples)")
            if c.get("note"):
                out.append(f"          note: {c['note']}")
            if c["counterexample"] is not None:
                out.append(f"          first counterexample: {c['counterexample']}")
            if c["defect_phase"] is not None:
                out.append(f"          defect phase: {c['defect_phase']}")
    statuses = [c["status"] for s in report["suites"] for c in s["checks"]]
    out.append("summary: " + ", ".join(f"{k}={statuses.count(k)}" for k in ("pass", "fail", "defect", "skipped")))
    if report["timing_ms"] is not None:
        out.append(f"timing_ms: {report['timing_ms']}")
    return out


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def cmd_compute_beta(cfg: RunConfig) -> dict:
    info = direct_equivalence(cfg.M, cfg.alpha)
    return {
        "beta": fmt(info["beta"]),
        "det": str(info["det"]),
        "eps": None if info["eps"] is None else str(info["eps"]),
        "class": info["class"],
        "mode": info["mode"],
    }


def cmd_orbit(cfg: RunConfig, literal: str) -> SplitScalar:
    z = parse_point(literal, cfg.p)
    q = orbit_solve(z)
    if pi_map(q, z.level, z.p) != z:
        raise SolenoidError(f"round trip failed for {literal}")
    return q


# ---------------------------------------------------------------- argparse

def _add_common(ap: argparse.ArgumentParser):
    g = ap.add_argument_group("configuration (env override: NCSOLENOID_<FLAG>)")
    g.add_argument("--p", help="prime p (default 2)")
    g.add_argument("--alpha-t", help="real component of alpha (default 1/3)")
    g.add_argument("--alpha-r", help="p-adic component of alpha (default 5/2)")
    g.add_argument("--matrix", help="matrix literal 'a,b;c,d' over Z[1/p] (default 0,1;1,0)")
    g.add_argument("--level", help="solenoid truncation level L (default 8)")
    g.add_argument("--alg-level", help="level used to read algebra phases (default 12)")
    g.add_argument("--samples", help="samples per check (default 500)")
    g.add_argument("--seed", help="random seed (default 42)")
    g.add_argument("--mode", help="exact or float (default exact)")
    g.add_argument("--tolerance", help="float-mode tolerance as a rational (default 1/10^9)")
    g.add_argument("--cyclo-cap", help="largest cyclotomic order kept exact")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncsolenoid", description="Exact solenoid groupoid toolkit and verifier.")
    sub = ap.add_subparsers(dest="command", required=True)

    cb = sub.add_parser("compute-beta", help="print beta = M^-1 . alpha and the strictness class")
    _add_common(cb)

    vf = sub.add_parser("verify", help="run verification suites")
    vf.add_argument("suite", nargs="?", default="all", choices=SUITES + ("all",))
    _add_common(vf)
    vf.add_argument("--out", help="write the JSON report here")
    vf.add_argument("--strict-only", action="store_true", help="refuse matrices outside strict mode")
    vf.add_argument("--timing", action="store_true", help="record per-suite wall time (breaks byte-determinism)")

    ob = sub.add_parser("orbit", help="solve pi_map(q, L) = point for a point literal")
    ob.add_argument("point", help="comma-separated angles theta_0,...,theta_L")
    _add_common(ob)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        if args.command == "compute-beta":
            info = cmd_compute_beta(cfg)
            for k in ("beta", "det", "eps", "class", "mode"):
                print(f"{k}: {info[k]}")
            return 0
        if args.command == "orbit":
            print(f"q: {fmt(cmd_orbit(cfg, args.point))}")
            return 0
        report, code = cmd_verify(cfg, args.suite, args.strict_only, args.timing)
    except (SolenoidError, InputError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print("\n".join(report_text(report)))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps_report(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
