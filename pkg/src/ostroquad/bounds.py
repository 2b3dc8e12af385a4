"""Left- and right-hand sides of the Ostrowski-type inequalities.

Seven inequalities are covered:

==================  =======================================================
``OSTROWSKI_1_1``   classical Ostrowski bound with ||f'||_inf
``L1_1_2``          Ostrowski bound with ||f'||_1
``TWICE_1_3``       perturbed bound with ||f''||_1 for twice-differentiable f
``WEIGHTED_2_1``    weighted one-point bound with ||f''||_{w,1}
``UNWEIGHTED_2_6``  ``WEIGHTED_2_1`` specialised to w = 1
``MIDPOINT_2_7``    weighted perturbed midpoint inequality
``TRAPEZOID_2_8``   weighted perturbed trapezoid inequality
==================  =======================================================

The weighted seminorm is ``||f''||_{w,1} = int_a^b |f''(t)| w(t) dt``.  This is
the reading under which the closed forms used by :mod:`ostroquad.means` come
out exactly: for f = t^(-1/2), w = t^(-1/2) it gives
(3/8) (b^2 - a^2) / (a^2 b^2), which the means module reproduces and the
test-suite checks against the oracle.

In ``paper`` mode the correction term of ``WEIGHTED_2_1`` uses the displayed
coefficient w(x) (b - a) (x - (a + b)/2); in ``exact`` mode it uses the exact
kernel integral from :mod:`ostroquad.kernel`.  The two agree for w = 1 only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Optional

from . import oracle
from .errors import DomainError, OracleError, UnknownIdError
from .funcspace import TestFunction, Weight
from .kernel import Interval, IntervalLike, as_interval, correction_coefficient, moment

HOLD_RTOL = 1e-9
MODES = ("paper", "exact")


class InequalityId(str, enum.Enum):
    OSTROWSKI_1_1 = "OSTROWSKI_1_1"
    L1_1_2 = "L1_1_2"
    TWICE_1_3 = "TWICE_1_3"
    WEIGHTED_2_1 = "WEIGHTED_2_1"
    UNWEIGHTED_2_6 = "UNWEIGHTED_2_6"
    MIDPOINT_2_7 = "MIDPOINT_2_7"
    TRAPEZOID_2_8 = "TRAPEZOID_2_8"

    @property
    def number(self) -> str:
        return self.value.rsplit("_", 2)[-2] + "." + self.value.rsplit("_", 1)[-1]

    @classmethod
    def parse(cls, text) -> "InequalityId":
        """Accept ``"2.6"``, ``"UNWEIGHTED_2_6"`` or an existing member."""
        if isinstance(text, cls):
            return text
        key = str(text).strip()
        for member in cls:
            if key.upper() == member.value or key == member.number:
                return member
        raise UnknownIdError(f"unknown inequality id {text!r}")


UNWEIGHTED_ONLY = frozenset(
    {
        InequalityId.OSTROWSKI_1_1,
        InequalityId.L1_1_2,
        InequalityId.TWICE_1_3,
        InequalityId.UNWEIGHTED_2_6,
    }
)

_DESCRIPTIONS = {
    InequalityId.OSTROWSKI_1_1: (
        "Eq. (1.1) Ostrowski: |f(x) - (1/(b-a)) int f| <= "
        "[1/4 + (x-(a+b)/2)^2/(b-a)^2] (b-a) ||f'||_inf; weight: unit"
    ),
    InequalityId.L1_1_2: (
        "Eq. (1.2) Ostrowski in L1: |f(x) - (1/(b-a)) int f| <= "
        "[1/2 + |x-(a+b)/2|/(b-a)] ||f'||_1; weight: unit"
    ),
    InequalityId.TWICE_1_3: (
        "Eq. (1.3) twice-differentiable: |f(x) - (1/(b-a)) int f - (x-(a+b)/2) f'(x)| <= "
        "(|x-(a+b)/2| + (b-a)/2)^2 ||f''||_1 / (2(b-a)); weight: unit"
    ),
    InequalityId.WEIGHTED_2_1: (
        "Eq. (2.1) weighted one-point: |f(x) - (1/m) w(x)(b-a)(x-(a+b)/2) f'(x) - (1/m) int f w| <= "
        "w(x) ((b-a)^2/2 + 2(x-(a+b)/2)^2) ((b-a)/2 + |x-(a+b)/2|) ||f''||_{w,1} / (2 m^2); "
        "weight: any"
    ),
    InequalityId.UNWEIGHTED_2_6: (
        "Eq. (2.6) unweighted reduction of (2.1): |f(x) - (x-(a+b)/2) f'(x) - (1/(b-a)) int f| <= "
        "((b-a)^2/2 + 2(x-(a+b)/2)^2) ((b-a)/2 + |x-(a+b)/2|) ||f''||_1 / (2(b-a)^2); weight: unit"
    ),
    InequalityId.MIDPOINT_2_7: (
        "Eq. (2.7) perturbed midpoint: |f((a+b)/2) - (1/m) int f w| <= "
        "w((a+b)/2) (b-a)^3 ||f''||_{w,1} / (8 m^2); weight: any"
    ),
    InequalityId.TRAPEZOID_2_8: (
        "Eq. (2.8) perturbed trapezoid: |(f(a)+f(b))/2 - (1/m) int f w + "
        "(1/m) ((b-a)^2/4) (w(a) f'(a) - w(b) f'(b))| <= "
        "(b-a)^3 (w(a)+w(b)) ||f''||_{w,1} / (4 m^2); weight: any"
    ),
}


def describe(ineq) -> str:
    return _DESCRIPTIONS[InequalityId.parse(ineq)]


def holds_verdict(lhs: float, rhs: float) -> bool:
    return lhs <= rhs + HOLD_RTOL * max(1.0, rhs)


@dataclass(frozen=True)
class BoundReport:
    """One evaluated inequality instance with its inputs."""

    inequality: str
    lhs: float
    rhs: float
    function: str
    weight: str
    a: float
    b: float
    x: Optional[float]
    mode: str

    def __post_init__(self):
        if not (math.isfinite(self.lhs) and math.isfinite(self.rhs)):
            raise OracleError(f"{self.inequality}: non-finite side lhs={self.lhs!r} rhs={self.rhs!r}")

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return holds_verdict(self.lhs, self.rhs)

    @property
    def ratio(self) -> Optional[float]:
        return self.lhs / self.rhs if self.rhs > 0 else None

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(margin=self.margin, holds=self.holds, ratio=self.ratio)
        return {k: d[k] for k in REPORT_KEYS}


REPORT_KEYS = ("inequality", "lhs", "rhs", "margin", "holds", "ratio", "function", "weight", "a", "b", "x", "mode")


class _Context:
    """Lazily computed integrals and norms for one (f, w, [a, b])."""

    def __init__(self, f: TestFunction, w: Weight, iv: Interval):
        if not f.contains(iv.a, iv.b):
            raise DomainError(f"[{iv.a!r}, {iv.b!r}] not inside the domain of {f.id}")
        self.f, self.w, self.iv = f, w, iv
        self._cache = {}

    def _get(self, key, compute):
        if key not in self._cache:
            value = compute()
            if not math.isfinite(value):
                raise OracleError(f"non-finite {key} for {self.f.id} on [{self.iv.a}, {self.iv.b}]")
            self._cache[key] = value
        return self._cache[key]

    @property
    def m(self) -> float:
        return self._get("m", lambda: moment(self.w, self.iv.a, self.iv.b))

    @property
    def integral(self) -> float:
        f, w, iv = self.f, self.w, self.iv
        if w.is_unit:
            def integrand(t):
                return f.eval(0, t)
        else:
            def integrand(t):
                return f.eval(0, t) * w.eval(t)
        return self._get("int_fw", lambda: oracle.integrate(integrand, iv.a, iv.b))

    def norm(self, order: int, p) -> float:
        w = self.w if p == 1 else None
        return self._get(
            ("norm", order, p),
            lambda: oracle.weighted_seminorm(self.f, w, self.iv.a, self.iv.b, order, p),
        )


def _weighted_sides(ctx: _Context, x: float, mode: str):
    """(lhs, rhs) of the weighted one-point inequality at x."""
    f, w, iv = ctx.f, ctx.w, ctx.iv
    m = ctx.m
    c = correction_coefficient(w, iv, x, mode)
    lhs = abs(f.eval(0, x) - c * f.eval(1, x) / m - ctx.integral / m)
    d = x - iv.midpoint
    h = iv.length
    rhs = (
        w.eval(x) * (0.5 * h * h + 2.0 * d * d) * (0.5 * h + abs(d))
        * ctx.norm(2, 1) / (2.0 * m * m)
    )
    return lhs, rhs


def evaluate_bound(
    ineq,
    f: TestFunction,
    w: Weight,
    iv: IntervalLike,
    x: Optional[float] = None,
    mode: str = "paper",
    context: Optional[_Context] = None,
) -> BoundReport:
    """Evaluate both sides of one inequality.

    ``x`` is ignored by ``MIDPOINT_2_7`` (fixed at the midpoint) and by
    ``TRAPEZOID_2_8`` (which uses both endpoints).  Inequalities from the
    unweighted family reject any weight other than ``unit``.
    """
    ineq = InequalityId.parse(ineq)
    if mode not in MODES:
        raise ValueError(f"mode must be 'paper' or 'exact', got {mode!r}")
    iv = as_interval(iv)
    if not iv.a < iv.b:
        raise DomainError(f"inequalities need a < b, got [{iv.a!r}, {iv.b!r}]")
    if ineq in UNWEIGHTED_ONLY and not w.is_unit:
        raise DomainError(f"{ineq.value} is stated for w = 1 only, got weight {w.id!r}")
    if ineq is InequalityId.MIDPOINT_2_7:
        x = iv.midpoint
    elif ineq is InequalityId.TRAPEZOID_2_8:
        x = None
    else:
        if x is None:
            raise DomainError(f"{ineq.value} needs an evaluation point x")
        x = iv.check_point(x)
    ctx = context if context is not None else _Context(f, w, iv)

    h = iv.length
    if ineq in (InequalityId.OSTROWSKI_1_1, InequalityId.L1_1_2, InequalityId.TWICE_1_3):
        d = x - iv.midpoint
        avg = ctx.integral / h
        if ineq is InequalityId.OSTROWSKI_1_1:
            lhs = abs(f.eval(0, x) - avg)
            rhs = (0.25 + d * d / (h * h)) * h * ctx.norm(1, math.inf)
        elif ineq is InequalityId.L1_1_2:
            lhs = abs(f.eval(0, x) - avg)
            rhs = (0.5 + abs(d) / h) * ctx.norm(1, 1)
        else:
            lhs = abs(f.eval(0, x) - avg - d * f.eval(1, x))
            rhs = (abs(d) + 0.5 * h) ** 2 * ctx.norm(2, 1) / (2.0 * h)
    elif ineq in (InequalityId.WEIGHTED_2_1, InequalityId.UNWEIGHTED_2_6, InequalityId.MIDPOINT_2_7):
        lhs, rhs = _weighted_sides(ctx, x, mode)
        if ineq is InequalityId.MIDPOINT_2_7 and mode == "paper":
            # displayed form: correction term dropped, rhs w(x)(b-a)^3/(8m^2)
            lhs = abs(f.eval(0, x) - ctx.integral / ctx.m)
            rhs = w.eval(x) * h**3 * ctx.norm(2, 1) / (8.0 * ctx.m**2)
    else:
        m = ctx.m
        ca = correction_coefficient(w, iv, iv.a, mode)
        cb = correction_coefficient(w, iv, iv.b, mode)
        # average of the x=a and x=b one-point expressions; in paper mode
        # -(ca*f'(a) + cb*f'(b))/(2m) = (1/m)((b-a)^2/4)(w(a)f'(a) - w(b)f'(b))
        lhs = abs(
            0.5 * (f.eval(0, iv.a) + f.eval(0, iv.b))
            - ctx.integral / m
            - (ca * f.eval(1, iv.a) + cb * f.eval(1, iv.b)) / (2.0 * m)
        )
        rhs = h**3 * (w.eval(iv.a) + w.eval(iv.b)) * ctx.norm(2, 1) / (4.0 * m * m)

    return BoundReport(ineq.value, float(lhs), float(rhs), f.label, w.id, iv.a, iv.b, x, mode)


def context(f: TestFunction, w: Weight, iv: IntervalLike) -> _Context:
    """Shared cache of integrals and norms for several inequalities on one input."""
    return _Context(f, w, as_interval(iv))
