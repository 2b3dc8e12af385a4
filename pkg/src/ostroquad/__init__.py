"""Weighted Ostrowski-type quadrature rules, a-priori error bounds and an
oracle-backed harness that checks every bound numerically."""

from .bounds import BoundReport, InequalityId, describe, evaluate_bound
from .errors import DomainError, OracleError, OstroquadError, ToleranceNotMet, UnknownIdError
from .funcspace import TestFunction, Weight, get_function, get_weight, list_registry
from .kernel import Interval, kernel_abs_integral, kernel_integral, moment, peano_kernel
from .means import MeansCase, MeanKind, case_report, special_mean
from .oracle import OracleResult, reference_integral, weighted_seminorm
from .quadrature import (
    Partition,
    QuadratureResult,
    adaptive_integrate,
    composite_bound,
    composite_estimate,
    convergence_table,
    one_point_estimate,
)
from .verify import ProofStepAudit, SuiteReport, audit_proof_steps, identity_residual, run_suite

__version__ = "0.1.0"
