"""Weighted Peano kernel, moments and kernel integrals.

For a weight ``w`` on [a, b] and a point x in [a, b] the kernel is::

    P(x, t) =  int_a^t w    for a <= t <= x
    P(x, t) =  int_b^t w    for x <  t <= b

and integration by parts gives, for any differentiable f,

    m(a, b) f(x) - int_a^b f w = int_a^b P(x, t) f'(t) dt.

All quantities here are exact: closed-form antiderivatives of the weight
when it has them, the reference integrator otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from . import oracle
from .errors import DomainError, OracleError
from .funcspace import Weight


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"interval endpoints must be finite, got [{self.a!r}, {self.b!r}]")
        if not self.a <= self.b:
            raise DomainError(f"interval needs a <= b, got [{self.a!r}, {self.b!r}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def check_point(self, x: float, name: str = "x") -> float:
        x = float(x)
        if not self.a <= x <= self.b:
            raise DomainError(f"{name}={x!r} outside [{self.a!r}, {self.b!r}]")
        return x


IntervalLike = Union[Interval, Tuple[float, float]]


def as_interval(iv: IntervalLike) -> Interval:
    if isinstance(iv, Interval):
        return iv
    a, b = iv
    return Interval(float(a), float(b))


def _check_weight(w: Weight, iv: Interval) -> None:
    if not w.contains(iv.a, iv.b):
        lo, hi = w.domain
        raise DomainError(
            f"[{iv.a!r}, {iv.b!r}] not inside the domain ({lo}, {hi}) of weight {w.id}"
        )


def _primitive(w: Weight, lo: float, hi: float) -> float:
    """int_lo^hi w for lo, hi already validated."""
    if w.antiderivative is not None:
        return float(w.antiderivative(np.float64(hi)) - w.antiderivative(np.float64(lo)))
    return oracle.integrate(w.eval, lo, hi)


def moment(w: Weight, a: float, b: float) -> float:
    """m(a, b) = int_a^b w(t) dt."""
    iv = as_interval((a, b))
    _check_weight(w, iv)
    m = _primitive(w, iv.a, iv.b)
    if not math.isfinite(m):
        raise OracleError(f"moment of {w.id} on [{a!r}, {b!r}] is not finite")
    return m


def peano_kernel(w: Weight, iv: IntervalLike, x: float, t: float) -> float:
    iv = as_interval(iv)
    _check_weight(w, iv)
    x = iv.check_point(x)
    t = iv.check_point(t, "t")
    if t <= x:
        return _primitive(w, iv.a, t)
    return -_primitive(w, t, iv.b)


def _kernel_halves(w: Weight, iv: Interval, x: float) -> Tuple[float, float]:
    """(int_a^x P(x,t) dt, int_x^b P(x,t) dt); the first is >= 0, the second <= 0."""
    a, b = iv.a, iv.b
    M, MM = w.antiderivative, w.second_antiderivative
    if M is not None and MM is not None:
        ma, mb = float(M(np.float64(a))), float(M(np.float64(b)))
        mma, mmx, mmb = (float(MM(np.float64(s))) for s in (a, x, b))
        left = (mmx - mma) - ma * (x - a)
        right = mb * (b - x) - (mmb - mmx)
        return max(left, 0.0), min(-right, 0.0)
    # Cauchy's formula for repeated integration:
    #   int_a^x int_a^t w = int_a^x (x - u) w(u) du
    #   int_x^b int_t^b w = int_x^b (u - x) w(u) du
    left = oracle.integrate(lambda u: (x - u) * w.eval(u), a, x) if x > a else 0.0
    right = oracle.integrate(lambda u: (u - x) * w.eval(u), x, b) if x < b else 0.0
    return left, -right


def kernel_integral(w: Weight, iv: IntervalLike, x: float) -> float:
    """Exact int_a^b P(x, t) dt."""
    iv = as_interval(iv)
    _check_weight(w, iv)
    x = iv.check_point(x)
    left, right = _kernel_halves(w, iv, x)
    return left + right


def kernel_abs_integral(w: Weight, iv: IntervalLike, x: float) -> float:
    """int_a^b |P(x, t)| dt; P changes sign only at t = x."""
    iv = as_interval(iv)
    _check_weight(w, iv)
    x = iv.check_point(x)
    left, right = _kernel_halves(w, iv, x)
    return left - right


def paper_coefficient(w: Weight, iv: IntervalLike, x: float) -> float:
    """The displayed correction coefficient w(x) (b - a) (x - (a + b)/2).

    Equals :func:`kernel_integral` only for constant weights.
    """
    iv = as_interval(iv)
    _check_weight(w, iv)
    x = iv.check_point(x)
    return w.eval(x) * iv.length * (x - iv.midpoint)


def correction_coefficient(w: Weight, iv: IntervalLike, x: float, mode: str) -> float:
    if mode == "paper":
        return paper_coefficient(w, iv, x)
    if mode == "exact":
        return kernel_integral(w, iv, x)
    raise ValueError(f"mode must be 'paper' or 'exact', got {mode!r}")


def kernel_f_prime_integral(f, w: Weight, iv: IntervalLike, x: float) -> float:
    """int_a^b P(x, t) f'(t) dt by the reference integrator, split at t = x."""
    iv = as_interval(iv)
    _check_weight(w, iv)
    x = iv.check_point(x)
    a, b = iv.a, iv.b
    M = w.antiderivative
    if M is not None:
        ma, mb = float(M(np.float64(a))), float(M(np.float64(b)))

        def left(t):
            return (M(t) - ma) * f.eval(1, t)

        def right(t):
            return (M(t) - mb) * f.eval(1, t)
    else:
        def left(t):
            return np.array([_primitive(w, a, s) for s in np.atleast_1d(t)]) * f.eval(1, t)

        def right(t):
            return -np.array([_primitive(w, s, b) for s in np.atleast_1d(t)]) * f.eval(1, t)

    # absolute floor: the integrand vanishes at both ends of each half
    scale = max(1e-300, moment(w, a, b) * (b - a))
    total = 0.0
    if x > a:
        total += oracle.integrate(left, a, x, tol=1e-15 * scale)
    if x < b:
        total += oracle.integrate(right, x, b, tol=1e-15 * scale)
    return total
