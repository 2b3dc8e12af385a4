"""Special means and the closed-form inequality cases built on them.

The means are fixed by the integrals they encode:

* identric I:           (b - a) ln I       = int_a^b ln t dt
* logarithmic L_{-1}:   (b - a) / L_{-1}   = ln(b / a)
* generalized L_p:      (b - a) L_p^p      = int_a^b t^p dt

Each case evaluates a one-point inequality for the weight w(t) = 1/sqrt(t)
entirely in closed form (moment m(a, b) = 2 (sqrt(b) - sqrt(a))), so it can be
compared with :func:`ostroquad.bounds.evaluate_bound`, which gets the same
numbers from the reference integrator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .bounds import BoundReport
from .errors import DomainError, UnknownIdError


class MeanKind(str, enum.Enum):
    ARITHMETIC = "ARITHMETIC"
    IDENTRIC = "IDENTRIC"
    LOG = "LOG"
    GENLOG = "GENLOG"


def _check_endpoints(a: float, b: float) -> None:
    if not (a > 0 and b > 0):
        raise DomainError(f"means need positive endpoints, got a={a!r}, b={b!r}")
    if a > b:
        raise DomainError(f"means need a <= b, got a={a!r}, b={b!r}")


def arithmetic_mean(a: float, b: float) -> float:
    _check_endpoints(a, b)
    return 0.5 * (a + b)


def identric_mean(a: float, b: float) -> float:
    _check_endpoints(a, b)
    if a == b:
        return a
    # (1/e) (b^b / a^a)^(1/(b-a)) in log form
    return math.exp((b * math.log(b) - a * math.log(a)) / (b - a) - 1.0)


def log_mean(a: float, b: float) -> float:
    _check_endpoints(a, b)
    if a == b:
        return a
    return (b - a) / (math.log(b) - math.log(a))


def generalized_log_mean(a: float, b: float, p: float) -> float:
    _check_endpoints(a, b)
    if p in (-1.0, 0.0):
        raise DomainError(f"generalized logarithmic mean needs p not in {{-1, 0}}, got {p!r}")
    if a == b:
        return a
    return ((b ** (p + 1) - a ** (p + 1)) / ((p + 1) * (b - a))) ** (1.0 / p)


def special_mean(kind, a: float, b: float, p: Optional[float] = None) -> float:
    """Evaluate a special mean; ``p`` is required for ``GENLOG``."""
    try:
        kind = MeanKind(str(kind).upper()) if not isinstance(kind, MeanKind) else kind
    except ValueError:
        raise UnknownIdError(f"unknown mean kind {kind!r}") from None
    if kind is MeanKind.ARITHMETIC:
        return arithmetic_mean(a, b)
    if kind is MeanKind.IDENTRIC:
        return identric_mean(a, b)
    if kind is MeanKind.LOG:
        return log_mean(a, b)
    if p is None:
        raise DomainError("GENLOG needs a parameter p")
    return generalized_log_mean(a, b, p)


CASES = ("C3_1", "C3_2", "C3_3", "C3_4", "C3_5", "C3_6")
_AT_MIDPOINT = {"C3_2": "C3_1", "C3_4": "C3_3", "C3_6": "C3_5"}
_FUNCTION_OF = {"C3_1": "sqrt_ln", "C3_3": "inv_sqrt_f", "C3_5": "pow_p_half"}


@dataclass(frozen=True)
class MeansCase:
    case: str
    a: float
    b: float
    x: Optional[float] = None
    p: Optional[float] = None

    def __post_init__(self):
        if self.case not in CASES:
            raise UnknownIdError(f"unknown means case {self.case!r}; expected one of {', '.join(CASES)}")
        if not 0 < self.a < self.b:
            raise DomainError(f"{self.case} needs 0 < a < b, got a={self.a!r}, b={self.b!r}")
        if self.case in ("C3_1", "C3_3", "C3_5"):
            if self.x is None:
                raise DomainError(f"{self.case} needs x")
            if not self.a <= self.x <= self.b:
                raise DomainError(f"x={self.x!r} outside [{self.a!r}, {self.b!r}]")
        if self.case in ("C3_5", "C3_6"):
            if self.p is None:
                raise DomainError(f"{self.case} needs p")
            if self.p in (-1.0, 0.0, 1.0):
                # p = 1 makes the factor (p^2 - 1/4)/(p - 1) singular
                raise DomainError(f"{self.case} needs p not in {{-1, 0, 1}}, got {self.p!r}")

    @property
    def point(self) -> float:
        return arithmetic_mean(self.a, self.b) if self.case in _AT_MIDPOINT else self.x

    @property
    def function_id(self) -> str:
        return _FUNCTION_OF[_AT_MIDPOINT.get(self.case, self.case)]


def _sqrt_ln_seminorm(a: float, b: float) -> float:
    """int_a^b |ln t| / (4 t^2) dt for f(t) = sqrt(t) ln t, w = 1/sqrt(t).

    For a >= 1 this is (b - a)/(4ab) * (1 - (a ln b - b ln a)/(b - a)); the
    integrand changes sign at t = 1, so straddling intervals are split there.
    """

    def G(t):
        return -(math.log(t) + 1.0) / (4.0 * t)

    if a < 1.0 < b:
        return abs(G(1.0) - G(a)) + abs(G(b) - G(1.0))
    return abs(G(b) - G(a))


def case_report(case: MeansCase) -> BoundReport:
    """Closed-form lhs and rhs of one special-means case."""
    a, b = case.a, case.b
    x = case.point
    A = arithmetic_mean(a, b)
    s = math.sqrt(b) - math.sqrt(a)
    h = b - a
    d = x - A
    kind = _AT_MIDPOINT.get(case.case, case.case)

    if kind == "C3_1":
        avg = h * math.log(identric_mean(a, b)) / (2.0 * s)
        corr = h * d * (1.0 + 0.5 * math.log(x)) / (2.0 * s * x)
        lhs = abs(math.sqrt(x) * math.log(x) - corr - avg)
        seminorm = _sqrt_ln_seminorm(a, b)
    elif kind == "C3_3":
        avg = h / (log_mean(a, b) * 2.0 * s)
        corr = -h * d / (4.0 * s * x * x)
        lhs = abs(1.0 / math.sqrt(x) - corr - avg)
        seminorm = 0.375 * (b * b - a * a) / (a * a * b * b)
    else:
        p = case.p
        avg = h * generalized_log_mean(a, b, p) ** p / (2.0 * s)
        corr = h * d * (p + 0.5) * x**p / (2.0 * s * x)
        lhs = abs(x**p * math.sqrt(x) - corr - avg)
        # |p^2 - 1/4|: the factor must stay non-negative for |p| < 1/2
        seminorm = abs(p * p - 0.25) / (p - 1.0) * (b ** (p - 1.0) - a ** (p - 1.0))

    rhs = (
        (0.5 * h * h + 2.0 * d * d) * (0.5 * h + abs(d)) * seminorm
        / (8.0 * s * s * math.sqrt(x))
    )
    if case.case in _AT_MIDPOINT:
        # the x = A forms collapse the prefactor; keep the displayed algebra
        collapsed = {
            "C3_2": h**3 * seminorm / (32.0 * s * s),
            "C3_4": 3.0 * h**3 * (b * b - a * a) / (256.0 * s * s * a * a * b * b),
            "C3_6": h**3 * seminorm / (32.0 * s * s),
        }[case.case]
        rhs = collapsed / math.sqrt(A)
    function = case.function_id
    if case.p is not None:
        function = f"{function}(p={case.p:g})"
    return BoundReport(case.case, float(lhs), float(rhs), function, "inv_sqrt", a, b, x, "paper")
