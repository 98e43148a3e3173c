"""Little and big q-Jacobi polynomials, their duals, and numerical checks of their identities."""
from .exceptions import ConvergenceFailure, DenominatorPole, DomainError, NonConvergence, QJacobiError
from .families import (
    BigParams,
    LittleParams,
    alt_qcharlier,
    alt_qcharlier_dual,
    asc2,
    big_qjacobi,
    big_qjacobi_recur,
    big_qjacobi_stable,
    dual_big,
    dual_big_recur,
    dual_little,
    dual_little_recur,
    little_qjacobi,
    little_qjacobi_recur,
    little_qjacobi_stable,
)
from .qcore import PhiSpec, QBase, phi, qpinf, qpochhammer, rphis
from .registry import IDS, CheckOptions, run_check
from .reports import IdentityReport

__version__ = "0.1.0"

__all__ = [
    "BigParams", "CheckOptions", "ConvergenceFailure", "DenominatorPole", "DomainError", "IDS",
    "IdentityReport", "LittleParams", "NonConvergence", "PhiSpec", "QBase", "QJacobiError",
    "alt_qcharlier", "alt_qcharlier_dual", "asc2", "big_qjacobi", "big_qjacobi_recur",
    "big_qjacobi_stable", "dual_big", "dual_big_recur", "dual_little", "dual_little_recur",
    "little_qjacobi", "little_qjacobi_recur", "little_qjacobi_stable", "phi", "qpinf",
    "qpochhammer", "rphis", "run_check",
]
