"""Randomised inequality suites, identity residuals and proof-step audits."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from . import oracle
from .bounds import BoundReport, InequalityId, context, evaluate_bound
from .funcspace import TestFunction, Weight, get_function, get_weight
from .kernel import (
    as_interval,
    kernel_abs_integral,
    kernel_f_prime_integral,
    kernel_integral,
    moment,
    paper_coefficient,
)

IDENTITY_RTOL = 1e-8


def identity_residual(f: TestFunction, w: Weight, iv, x: float) -> float:
    """|m f(x) - int f w - int P(x, .) f'| with both integrals from the oracle.

    Integration by parts makes this zero up to quadrature error.
    """
    iv = as_interval(iv)
    x = iv.check_point(x)
    m = moment(w, iv.a, iv.b)
    fw = oracle.integrate(lambda t: f.eval(0, t) * w.eval(t), iv.a, iv.b)
    pf = kernel_f_prime_integral(f, w, iv, x)
    return abs(m * f.eval(0, x) - fw - pf)


def identity_scale(f: TestFunction, w: Weight, iv, x: float) -> float:
    iv = as_interval(iv)
    return max(1.0, moment(w, iv.a, iv.b) * abs(f.eval(0, x)))


@dataclass(frozen=True)
class ProofStepAudit:
    step: str
    lhs_value: float
    rhs_value: float

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs_value - self.rhs_value)

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "lhs": self.lhs_value,
            "rhs": self.rhs_value,
            "discrepancy": self.discrepancy,
        }


AUDIT_STEPS = ("S1_kernel_integral", "S2_meanvalue", "S3_abs_kernel")


def audit_proof_steps(f: TestFunction, w: Weight, iv, x: float) -> List[ProofStepAudit]:
    """Exact value vs. claimed value for three equalities used in the proof.

    S1: int_a^b P(x,t) dt        vs  w(x) (b-a) (x-(a+b)/2)
    S2: int_a^b f'(s) w(s) ds    vs  f'(x) m(a,b)
    S3: int_a^b |P(x,s)| ds      vs  w(x) ((x-a)^2 + (x-b)^2) / 2

    Discrepancies are reported, never asserted.  S2 is a mean-value
    statement, so even for w = 1 it only holds at particular x unless f' is
    constant on [a, b].
    """
    iv = as_interval(iv)
    x = iv.check_point(x)
    a, b = iv.a, iv.b
    s1 = ProofStepAudit(AUDIT_STEPS[0], kernel_integral(w, iv, x), paper_coefficient(w, iv, x))
    fpw = oracle.integrate(lambda t: f.eval(1, t) * w.eval(t), a, b, tol=1e-15)
    s2 = ProofStepAudit(AUDIT_STEPS[1], fpw, f.eval(1, x) * moment(w, a, b))
    s3 = ProofStepAudit(
        AUDIT_STEPS[2],
        kernel_abs_integral(w, iv, x),
        0.5 * w.eval(x) * ((x - a) ** 2 + (x - b) ** 2),
    )
    return [s1, s2, s3]


# -- suites -----------------------------------------------------------------

SUITES = {
    "unweighted_default": {
        "weight": "unit",
        "inequalities": (
            InequalityId.OSTROWSKI_1_1,
            InequalityId.L1_1_2,
            InequalityId.TWICE_1_3,
            InequalityId.UNWEIGHTED_2_6,
            InequalityId.MIDPOINT_2_7,
            InequalityId.TRAPEZOID_2_8,
        ),
        "regions": ((-3.0, 3.0), (0.5, 4.0)),
    },
    "weighted_invsqrt": {
        "weight": "inv_sqrt",
        "inequalities": (
            InequalityId.WEIGHTED_2_1,
            InequalityId.MIDPOINT_2_7,
            InequalityId.TRAPEZOID_2_8,
        ),
        "regions": ((0.5, 4.0),),
    },
}

# drawn uniformly among those valid on the sampled interval
SUITE_FUNCTIONS = (
    ("identity", None),
    ("square", None),
    ("cubic", None),
    ("poly6", None),
    ("exp", None),
    ("sin", None),
    ("sqrt_ln", None),
    ("inv_sqrt_f", None),
    ("pow_p_half", 2.0),
    ("pow_p_half", -0.3),
)

KNOWN_COUNTEREXAMPLE = ("sqrt_ln", None, 1.0, 2.0, 1.5)
LENGTH_RANGE = (0.2, 2.0)


@dataclass(frozen=True)
class Sample:
    index: int
    function: str
    p: Optional[float]
    a: float
    b: float
    x: float

    def to_dict(self) -> dict:
        return {"index": self.index, "function": self.function, "p": self.p, "a": self.a, "b": self.b, "x": self.x}


@dataclass
class InequalityTally:
    checked: int = 0
    held: int = 0
    violated: int = 0
    worst: Optional[BoundReport] = None

    def add(self, report: BoundReport) -> None:
        self.checked += 1
        if report.holds:
            self.held += 1
        else:
            self.violated += 1
        if self.worst is None or report.margin < self.worst.margin:
            self.worst = report

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "held": self.held,
            "violated": self.violated,
            "worst": self.worst.to_dict() if self.worst else None,
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    samples: List[Sample] = field(default_factory=list)
    reports: List[List[BoundReport]] = field(default_factory=list, repr=False)
    per_inequality: Dict[str, InequalityTally] = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return sum(t.violated for t in self.per_inequality.values())

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "samples": len(self.samples),
            "per_inequality": {k: v.to_dict() for k, v in self.per_inequality.items()},
            "sample_log": [s.to_dict() for s in self.samples],
        }

    def rows(self) -> List[dict]:
        """One flat row per (sample, inequality)."""
        out = []
        for sample, reports in zip(self.samples, self.reports):
            for r in reports:
                out.append({"sample": sample.index, **r.to_dict()})
        return out


def draw_samples(suite: str, samples: int, seed: int) -> List[Sample]:
    """Deterministic (function, a, b, x) draws for a suite.

    A region is chosen uniformly, then the length uniformly in [0.2, 2], then
    a, then x uniformly in [a, b], then a function valid on [a, b].
    """
    spec = SUITES[suite]
    rng = np.random.default_rng(seed)
    out = []
    if suite == "weighted_invsqrt" and samples > 0:
        fid, p, a, b, x = KNOWN_COUNTEREXAMPLE
        out.append(Sample(0, fid, p, a, b, x))
    regions = spec["regions"]
    while len(out) < samples:
        lo, hi = regions[int(rng.integers(len(regions)))]
        length = float(rng.uniform(*LENGTH_RANGE))
        a = float(rng.uniform(lo, hi - length))
        b = a + length
        x = float(rng.uniform(a, b))
        valid = [(fid, p) for fid, p in SUITE_FUNCTIONS if get_function(fid, p).contains(a, b)]
        fid, p = valid[int(rng.integers(len(valid)))]
        out.append(Sample(len(out), fid, p, a, b, x))
    return out


def _evaluate_sample(args) -> List[BoundReport]:
    suite, sample = args
    spec = SUITES[suite]
    f = get_function(sample.function, sample.p)
    w = get_weight(spec["weight"])
    ctx = context(f, w, (sample.a, sample.b))
    return [
        evaluate_bound(ineq, f, w, (sample.a, sample.b), sample.x, "paper", ctx)
        for ineq in spec["inequalities"]
    ]


def run_suite(suite: str, samples: int, seed: int, workers: int = 1) -> SuiteReport:
    """Check every inequality of ``suite`` on ``samples`` seeded draws.

    Violations are recorded, never raised.  ``workers > 1`` evaluates samples
    in separate processes; aggregation is by sample index, so the report does
    not depend on scheduling.
    """
    if suite not in SUITES:
        from .errors import UnknownIdError

        raise UnknownIdError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    if samples < 0:
        raise ValueError(f"samples must be >= 0, got {samples}")
    draws = draw_samples(suite, samples, seed)
    jobs = [(suite, s) for s in draws]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_sample, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_evaluate_sample(j) for j in jobs]

    report = SuiteReport(suite, seed, draws, results)
    for ineq in SUITES[suite]["inequalities"]:
        report.per_inequality[ineq.value] = InequalityTally()
    for reports in results:
        for r in reports:
            report.per_inequality[r.inequality].add(r)
    return report


def reevaluate(report: BoundReport) -> BoundReport:
    """Recompute a report from its recorded inputs, without any shared cache."""
    fid, p = report.function, None
    if "(" in fid:
        fid, rest = fid.split("(", 1)
        p = float(rest.rstrip(")").split("=", 1)[1])
    return evaluate_bound(
        report.inequality,
        get_function(fid, p),
        get_weight(report.weight),
        (report.a, report.b),
        report.x,
        report.mode,
    )
