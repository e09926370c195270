"""Exact solenoidal groupoids, equivalence bibundles, convolution algebras and bimodules.

Everything is computed with exact rationals: points of the p-solenoid are
truncated towers of angles, scalars of R x Q_p are pairs of rationals, and
algebra coefficients live in cyclotomic fields.
"""
from .algebra import SolenoidAlgebra, TrigPoly, algebra_suite, psi_multiplier
from .bibundles import BibundleSpec, ReductionIsos, build_PM, torus_bibundle, verify_equivalence
from .bimodule import Bimodule, Cell, PBall, StepFn, enumerate_translates, imprimitivity_check
from .cyclotomic import CycloComplex, numeric_mode
from .errors import SolenoidError
from .exact import Angle, PRational, SplitScalar, frac_part, padic_digits, valuation
from .groupoids import ActionGroupoid, Arrow, axiom_suite, full_solenoid_groupoid, kronecker_groupoid, solenoid_groupoid
from .moebius import Mat2, factor_eps, mobius_pullback, mu_eps, parse_matrix
from .report import SuiteReport
from .solenoid import SolenoidPoint, orbit_solve, pi_map

__version__ = "0.1.0"

__all__ = [
    "ActionGroupoid",
    "Angle",
    "Arrow",
    "BibundleSpec",
    "Bimodule",
    "Cell",
    "CycloComplex",
    "Mat2",
    "PBall",
    "PRational",
    "ReductionIsos",
    "SolenoidAlgebra",
    "SolenoidError",
    "SolenoidPoint",
    "SplitScalar",
    "StepFn",
    "SuiteReport",
    "TrigPoly",
    "algebra_suite",
    "axiom_suite",
    "build_PM",
    "enumerate_translates",
    "factor_eps",
    "frac_part",
    "full_solenoid_groupoid",
    "imprimitivity_check",
    "kronecker_groupoid",
    "mobius_pullback",
    "mu_eps",
    "numeric_mode",
    "orbit_solve",
    "padic_digits",
    "parse_matrix",
    "pi_map",
    "psi_multiplier",
    "solenoid_groupoid",
    "torus_bibundle",
    "valuation",
    "verify_equivalence",
]
