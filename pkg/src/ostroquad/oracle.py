"""Reference integration and weighted derivative seminorms.

The integrator is a deterministic adaptive bisection driven by the nested
7-point Gauss / 15-point Kronrod pair.  It is the ground truth every bound
and identity in the package is checked against, so it deliberately shares no
code with the quadrature rules under test.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, OracleError
from .funcspace import TestFunction, Weight

DEFAULT_RTOL = 1e-12
MAX_DEPTH = 50
MAX_INTERVALS = 20000
SUP_GRID = 1025
_ROUNDOFF = 50 * np.finfo(float).eps
ROOT_GRID = 257

# Kronrod abscissae on [-1, 1] (non-negative half), the even-indexed ones
# are the Gauss nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class OracleResult:
    value: float
    error_estimate: float
    evaluations: int


def _kronrod(g, a: float, b: float):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    y = np.asarray(g(c + h * _NODES), dtype=float)
    if y.shape != _NODES.shape:
        y = np.broadcast_to(y, _NODES.shape)
    if not np.all(np.isfinite(y)):
        raise OracleError(f"non-finite integrand value on [{a!r}, {b!r}]")
    k = h * float(_KW @ y)
    gauss = h * float(_GW @ y)
    return k, abs(k - gauss), abs(h) * float(_KW @ np.abs(y))


def reference_integral(
    g: Callable,
    a: float,
    b: float,
    tol: float = 0.0,
    rtol: float = DEFAULT_RTOL,
) -> OracleResult:
    """Integrate ``g`` over [a, b] to within ``max(tol, rtol * |value|)``.

    ``g`` must accept a numpy array.  Integrands that are not finite at the
    endpoints are rejected; singular weights enter the package only through
    closed-form moments.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("reference_integral needs a finite interval")
    if a == b:
        return OracleResult(0.0, 0.0, 0)
    if a > b:
        r = reference_integral(g, b, a, tol, rtol)
        return OracleResult(-r.value, r.error_estimate, r.evaluations)
    if tol <= 0.0 and rtol <= 0.0:
        raise ValueError("need a positive tol or rtol")

    try:
        ends = np.asarray(g(np.array([a, b])), dtype=float)
    except DomainError:
        raise
    except (ArithmeticError, ValueError) as exc:
        raise OracleError(f"integrand failed at an endpoint: {exc}") from exc
    if not np.all(np.isfinite(ends)):
        raise OracleError(f"integrand is singular at an endpoint of [{a!r}, {b!r}]")

    evals = 2
    k, e, mass = _kronrod(g, a, b)
    evals += 15
    # heap of (-error, seq, a, b, value, error, depth); seq keeps ties stable
    seq = 0
    heap = [(-e, seq, a, b, k, e, 0)]
    total, err = k, e
    while True:
        # roundoff floor: relative accuracy on cancelling integrands is
        # limited by the integral of |g|
        target = max(tol, rtol * abs(total), _ROUNDOFF * mass)
        if err <= target:
            break
        if len(heap) >= MAX_INTERVALS:
            raise OracleError(
                f"tolerance {target:.3g} not met on [{a!r}, {b!r}]: "
                f"error estimate {err:.3g} after {len(heap)} intervals"
            )
        _, _, lo, hi, v, ev, depth = heapq.heappop(heap)
        if depth >= MAX_DEPTH:
            raise OracleError(
                f"tolerance {target:.3g} not met on [{a!r}, {b!r}]: "
                f"maximum bisection depth reached (error estimate {err:.3g})"
            )
        mid = 0.5 * (lo + hi)
        k1, e1, _ = _kronrod(g, lo, mid)
        k2, e2, _ = _kronrod(g, mid, hi)
        evals += 30
        total += k1 + k2 - v
        err += e1 + e2 - ev
        seq += 1
        heapq.heappush(heap, (-e1, seq, lo, mid, k1, e1, depth + 1))
        seq += 1
        heapq.heappush(heap, (-e2, seq, mid, hi, k2, e2, depth + 1))

    # re-sum in interval order so the value does not carry update drift
    pieces = sorted(heap, key=lambda item: item[2])
    value = math.fsum(item[4] for item in pieces)
    err = math.fsum(item[5] for item in pieces)
    return OracleResult(value, err, evals)


def integrate(g: Callable, a: float, b: float, tol: float = 0.0, rtol: float = DEFAULT_RTOL) -> float:
    return reference_integral(g, a, b, tol, rtol).value


def sign_changes(g: Callable, a: float, b: float, grid: int = ROOT_GRID) -> list:
    """Points in (a, b) where ``g`` changes sign, located by bracketing.

    Exact zeros on the grid are kept as breakpoints too.
    """
    t = np.linspace(a, b, grid)
    y = np.asarray(g(t), dtype=float)
    roots = []
    for i in range(grid - 1):
        if y[i] == 0.0 and 0 < i:
            roots.append(float(t[i]))
        elif y[i] * y[i + 1] < 0.0:
            roots.append(brentq(lambda s: float(g(np.array(s))), t[i], t[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return roots


def _pieces(a: float, b: float, breakpoints: Sequence[float]) -> list:
    pts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    return [(lo, hi) for lo, hi in zip(pts[:-1], pts[1:]) if hi > lo]


def weighted_seminorm(
    f: TestFunction,
    w: Optional[Weight],
    a: float,
    b: float,
    order: int,
    p=1,
    breakpoints: Optional[Sequence[float]] = None,
    rtol: float = DEFAULT_RTOL,
) -> float:
    """Weighted L1 seminorm or sup norm of ``f``'s derivative of given order.

    ``p=1`` returns the integral of ``|f^(order)| * w`` over [a, b], split at the
    sign changes of ``f^(order)`` so every piece is smooth.  Pass
    ``breakpoints`` (sign changes already known on a larger interval) to skip
    the root search.  ``p=inf`` returns the maximum of ``|f^(order)|``; ``w`` is
    ignored.  The sup is taken on a 1025-point grid plus the interior
    critical points of f^(order) when f^(order+1) is available, otherwise the
    grid maxima are polished by a bounded scalar search.  Not certified.
    """
    if a >= b:
        if a == b:
            return 0.0
        raise DomainError(f"empty interval [{a!r}, {b!r}]")
    if order not in (0, 1, 2):
        raise ValueError(f"unregistered derivative order {order!r}")
    if not f.contains(a, b):
        raise DomainError(f"[{a!r}, {b!r}] not inside the domain of {f.id}")

    def deriv(t):
        return f.eval(order, t)

    if p in (math.inf, "inf", "infinity"):
        return _sup_norm(f, order, a, b)
    if p != 1:
        raise ValueError(f"only p=1 and p=inf are supported, got {p!r}")

    if w is not None and not w.contains(a, b):
        raise DomainError(f"[{a!r}, {b!r}] not inside the domain of weight {w.id}")

    if breakpoints is None:
        breakpoints = sign_changes(deriv, a, b)

    if w is None or w.is_unit:
        def integrand(t):
            return np.abs(deriv(t))
    else:
        def integrand(t):
            return np.abs(deriv(t)) * w.eval(t)

    total = 0.0
    for lo, hi in _pieces(a, b, breakpoints):
        total += reference_integral(integrand, lo, hi, rtol=rtol).value
    return total


def _sup_norm(f: TestFunction, order: int, a: float, b: float) -> float:
    t = np.linspace(a, b, SUP_GRID)
    vals = np.abs(f.eval(order, t))
    best = float(np.max(vals))
    if order < 2:
        for r in sign_changes(lambda s: f.eval(order + 1, s), a, b, SUP_GRID):
            best = max(best, abs(f.eval(order, r)))
        return best
    from scipy.optimize import minimize_scalar

    interior = np.flatnonzero((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])) + 1
    for i in interior:
        res = minimize_scalar(
            lambda s: -abs(f.eval(order, s)),
            bounds=(t[i - 1], t[i + 1]),
            method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(best, -float(res.fun))
    return best


def seminorm_batch(
    f: TestFunction,
    w: Optional[Weight],
    lo: np.ndarray,
    hi: np.ndarray,
    order: int = 2,
    breakpoints: Sequence[float] = (),
    rtol: float = DEFAULT_RTOL,
) -> np.ndarray:
    """Weighted L1 seminorms on many subintervals at once.

    Runs the first Kronrod step for every subinterval in one vectorised call
    and hands any subinterval that misses the tolerance, or contains one of
    ``breakpoints``, to :func:`weighted_seminorm`.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    out = np.zeros(lo.shape)
    if lo.size == 0:
        return out
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    t = c[:, None] + h[:, None] * _NODES[None, :]
    y = np.abs(f.eval(order, t))
    if w is not None and not w.is_unit:
        y = y * w.eval(t)
    k = h * (y @ _KW)
    g = h * (y @ _GW)
    ok = np.abs(k - g) <= np.maximum(rtol * np.abs(k), _ROUNDOFF * np.abs(k))
    ok &= np.isfinite(k)
    bp = np.asarray(sorted(breakpoints), dtype=float)
    if bp.size:
        idx = np.searchsorted(bp, lo, side="right")
        has_bp = (idx < bp.size) & (bp[np.minimum(idx, bp.size - 1)] < hi)
        ok &= ~has_bp
    out[ok] = k[ok]
    for i in np.flatnonzero(~ok):
        out[i] = weighted_seminorm(f, w, float(lo[i]), float(hi[i]), order, 1, breakpoints, rtol)
    return out
