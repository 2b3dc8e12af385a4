"""One-point weighted rule, the composite perturbed Riemann sum and its bound.

On a partition a = x_0 < ... < x_n = b with intermediate points xi_i the
composite rule is

    A = sum_i m(x_i, x_{i+1}) f(xi_i) - sum_i C_i f'(xi_i)

with C_i = w(xi_i) h_i (xi_i - (x_i + x_{i+1})/2) in ``paper`` mode and the
exact kernel integral of the subinterval in ``exact`` mode.  The a-priori
remainder bound sums, over subintervals,

    ||f''||_{w,1,i} / (2 m_i) * w(xi_i) (h_i^2/2 + 2 d_i^2) (h_i/2 + |d_i|)

where d_i = xi_i - (x_i + x_{i+1})/2 and the local seminorm is computed on
each subinterval separately.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import oracle
from .errors import DomainError, ToleranceNotMet
from .funcspace import TestFunction, Weight
from .kernel import IntervalLike, as_interval, kernel_integral, moment

log = logging.getLogger(__name__)

MAX_DEPTH = 60
MAX_INTERVALS = 2_000_000
XI_KINDS = ("midpoint", "left", "right", "random")


@dataclass(frozen=True)
class Partition:
    nodes: tuple

    def __post_init__(self):
        nodes = tuple(float(v) for v in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 2:
            raise DomainError("a partition needs at least two nodes")
        if not all(math.isfinite(v) for v in nodes):
            raise DomainError("partition nodes must be finite")
        if any(hi <= lo for lo, hi in zip(nodes[:-1], nodes[1:])):
            raise DomainError("partition nodes must be strictly increasing")

    @classmethod
    def uniform(cls, a: float, b: float, n: int) -> "Partition":
        if n < 1:
            raise DomainError(f"need n >= 1 subintervals, got {n}")
        nodes = np.linspace(a, b, n + 1)
        nodes[0], nodes[-1] = a, b
        return cls(tuple(nodes))

    @property
    def n(self) -> int:
        return len(self.nodes) - 1

    @property
    def lows(self) -> np.ndarray:
        return np.asarray(self.nodes[:-1])

    @property
    def highs(self) -> np.ndarray:
        return np.asarray(self.nodes[1:])

    @property
    def widths(self) -> np.ndarray:
        return self.highs - self.lows


def intermediate_points(part: Partition, kind: str = "midpoint", seed: Optional[int] = None) -> np.ndarray:
    """One point per subinterval; ``random`` draws uniformly from ``seed``."""
    lo, hi = part.lows, part.highs
    if kind == "midpoint":
        return 0.5 * (lo + hi)
    if kind == "left":
        return lo.copy()
    if kind == "right":
        return hi.copy()
    if kind == "random":
        rng = np.random.default_rng(seed)
        return lo + rng.random(part.n) * (hi - lo)
    raise DomainError(f"unknown xi kind {kind!r}; expected one of {', '.join(XI_KINDS)}")


def _check_xi(part: Partition, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (part.n,):
        raise DomainError(f"need {part.n} intermediate points, got {xi.size}")
    if np.any(xi < part.lows) or np.any(xi > part.highs):
        i = int(np.flatnonzero((xi < part.lows) | (xi > part.highs))[0])
        raise DomainError(f"xi[{i}]={xi[i]!r} outside [{part.lows[i]!r}, {part.highs[i]!r}]")
    return xi


def _check_inputs(f: TestFunction, w: Weight, a: float, b: float) -> None:
    if not f.contains(a, b):
        raise DomainError(f"[{a!r}, {b!r}] not inside the domain of {f.id}")
    if not w.contains(a, b):
        raise DomainError(f"[{a!r}, {b!r}] not inside the domain of weight {w.id}")


def _local_moments(w: Weight, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    if w.antiderivative is not None:
        return np.asarray(w.antiderivative(hi) - w.antiderivative(lo), dtype=float)
    return np.array([moment(w, l, h) for l, h in zip(lo, hi)])


def _coefficients(w: Weight, lo, hi, xi, mode: str) -> np.ndarray:
    if mode == "paper":
        return w.eval(xi) * (hi - lo) * (xi - 0.5 * (lo + hi))
    if mode == "exact":
        return np.array([kernel_integral(w, (l, h), x) for l, h, x in zip(lo, hi, xi)])
    raise ValueError(f"mode must be 'paper' or 'exact', got {mode!r}")


def _local_estimates(f, w, lo, hi, xi, mode) -> np.ndarray:
    m = _local_moments(w, lo, hi)
    return m * f.eval(0, xi) - _coefficients(w, lo, hi, xi, mode) * f.eval(1, xi)


def _local_bounds(f, w, lo, hi, xi, breakpoints) -> np.ndarray:
    norms = oracle.seminorm_batch(f, w, lo, hi, 2, breakpoints)
    m = _local_moments(w, lo, hi)
    h = hi - lo
    d = xi - 0.5 * (lo + hi)
    return norms / (2.0 * m) * w.eval(xi) * (0.5 * h * h + 2.0 * d * d) * (0.5 * h + np.abs(d))


def one_point_estimate(f: TestFunction, w: Weight, iv: IntervalLike, x: float, mode: str = "paper") -> float:
    """m(a, b) f(x) - C f'(x), an approximation of int_a^b f w."""
    iv = as_interval(iv)
    x = iv.check_point(x)
    _check_inputs(f, w, iv.a, iv.b)
    if iv.a == iv.b:
        return 0.0
    c = _coefficients(w, np.array([iv.a]), np.array([iv.b]), np.array([x]), mode)[0]
    return moment(w, iv.a, iv.b) * f.eval(0, x) - c * f.eval(1, x)


def composite_estimate(f: TestFunction, w: Weight, part: Partition, xi, mode: str = "paper") -> float:
    xi = _check_xi(part, xi)
    _check_inputs(f, w, part.nodes[0], part.nodes[-1])
    return math.fsum(_local_estimates(f, w, part.lows, part.highs, xi, mode))


def _breakpoints(f: TestFunction, a: float, b: float) -> list:
    return oracle.sign_changes(lambda t: f.eval(2, t), a, b)


def composite_bound(f: TestFunction, w: Weight, part: Partition, xi) -> float:
    xi = _check_xi(part, xi)
    a, b = part.nodes[0], part.nodes[-1]
    _check_inputs(f, w, a, b)
    return math.fsum(_local_bounds(f, w, part.lows, part.highs, xi, _breakpoints(f, a, b)))


@dataclass
class QuadratureResult:
    estimate: float
    bound: float
    reference: Optional[float] = None
    per_interval: List[tuple] = field(default_factory=list, repr=False)
    mode: str = "paper"

    @property
    def n(self) -> int:
        return len(self.per_interval)

    @property
    def actual_error(self) -> Optional[float]:
        if self.reference is None:
            return None
        return abs(self.estimate - self.reference)

    def to_dict(self, intervals: bool = True) -> dict:
        d = {
            "n": self.n,
            "estimate": self.estimate,
            "reference": self.reference,
            "error": self.actual_error,
            "bound": self.bound,
            "mode": self.mode,
        }
        if intervals:
            d["intervals"] = [
                {"a": lo, "b": hi, "estimate": est, "bound": bnd}
                for lo, hi, est, bnd in self.per_interval
            ]
        return d

    def csv_row(self) -> dict:
        return {k: self.to_dict(False)[k] for k in CSV_COLUMNS}


CSV_COLUMNS = ("n", "estimate", "reference", "error", "bound")


def _reference(f: TestFunction, w: Weight, a: float, b: float) -> float:
    if w.is_unit:
        return oracle.integrate(lambda t: f.eval(0, t), a, b)
    return oracle.integrate(lambda t: f.eval(0, t) * w.eval(t), a, b)


def _result(f, w, lo, hi, xi, mode, bounds, reference) -> QuadratureResult:
    est = _local_estimates(f, w, lo, hi, xi, mode)
    rows = [(float(l), float(h), float(e), float(bd)) for l, h, e, bd in zip(lo, hi, est, bounds)]
    return QuadratureResult(math.fsum(est), math.fsum(bounds), reference, rows, mode)


def integrate_partition(
    f: TestFunction,
    w: Weight,
    part: Partition,
    xi=None,
    mode: str = "paper",
    with_reference: bool = True,
) -> QuadratureResult:
    """Composite estimate, bound and (optionally) oracle reference on ``part``."""
    if xi is None:
        xi = intermediate_points(part)
    xi = _check_xi(part, xi)
    a, b = part.nodes[0], part.nodes[-1]
    _check_inputs(f, w, a, b)
    lo, hi = part.lows, part.highs
    bounds = _local_bounds(f, w, lo, hi, xi, _breakpoints(f, a, b))
    ref = _reference(f, w, a, b) if with_reference else None
    return _result(f, w, lo, hi, xi, mode, bounds, ref)


def adaptive_integrate(
    f: TestFunction,
    w: Weight,
    iv: IntervalLike,
    tol: float,
    mode: str = "paper",
    max_intervals: int = MAX_INTERVALS,
) -> QuadratureResult:
    """Bisect the subinterval with the largest local bound until the total
    bound is at most ``tol``.

    Intermediate points are subinterval midpoints.  Children are computed in
    vectorised batches, but pops are replayed in strict largest-first order,
    so the final partition is the one plain greedy bisection produces.
    Raises :class:`ToleranceNotMet` (carrying the best result) when a
    subinterval would exceed 60 bisections or ``max_intervals`` is reached.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if mode not in ("paper", "exact"):
        raise ValueError(f"mode must be 'paper' or 'exact', got {mode!r}")
    iv = as_interval(iv)
    a, b = iv.a, iv.b
    if a == b:
        return QuadratureResult(0.0, 0.0, 0.0, [], mode)
    _check_inputs(f, w, a, b)
    bps = _breakpoints(f, a, b)

    def bounds_of(lo, hi):
        return _local_bounds(f, w, lo, hi, 0.5 * (lo + hi), bps)

    b0 = float(bounds_of(np.array([a]), np.array([b]))[0])
    # entries: (-bound, lo, hi, depth); lo is unique among live intervals
    heap = [(-b0, a, b, 0)]
    total = b0
    failure = None
    while total > tol:
        heap.sort()
        top = -heap[0][0]
        if heap[0][3] >= MAX_DEPTH:
            failure = f"depth cap {MAX_DEPTH} reached"
            break
        if len(heap) >= max_intervals:
            failure = f"interval cap {max_intervals} reached"
            break
        # batch size is only a guess; the replay below keeps greedy order
        k = 1
        while k < len(heap) and -heap[k][0] >= top / 16.0 and len(heap) + k < max_intervals:
            k += 1
        cands = heap[:k]
        lo = np.array([c[1] for c in cands])
        hi = np.array([c[2] for c in cands])
        mid = 0.5 * (lo + hi)
        left = bounds_of(lo, mid)
        right = bounds_of(mid, hi)

        popped = 0
        child_max = -math.inf
        for j, (nb, _, _, depth) in enumerate(cands):
            # greedy would pop a pending child (or stop) before this one
            if j and (depth >= MAX_DEPTH or child_max > -nb):
                break
            total += left[j] + right[j] + nb
            child_max = max(child_max, left[j], right[j])
            popped += 1
            if total <= tol:
                break
        children = []
        for j in range(popped):
            _, l, h, depth = cands[j]
            children.append((-float(left[j]), l, float(mid[j]), depth + 1))
            children.append((-float(right[j]), float(mid[j]), h, depth + 1))
        heap = heap[popped:] + children
        # re-sum so the running total does not drift over many updates
        total = math.fsum(-e[0] for e in heap)

    heap.sort(key=lambda e: e[1])
    lo = np.array([e[1] for e in heap])
    hi = np.array([e[2] for e in heap])
    bounds = np.array([-e[0] for e in heap])
    result = _result(f, w, lo, hi, 0.5 * (lo + hi), mode, bounds, _reference(f, w, a, b))
    if failure is not None:
        raise ToleranceNotMet(
            f"bound target {tol:g} not reached ({failure}); achieved bound {result.bound:.6g}",
            result,
        )
    log.debug("adaptive_integrate: %d intervals, bound %.3g", result.n, result.bound)
    return result


def convergence_table(
    f: TestFunction,
    w: Weight,
    iv: IntervalLike,
    ns: Sequence[int],
    mode: str = "paper",
) -> List[QuadratureResult]:
    """Uniform partitions with midpoint xi, one result per n, in the given order."""
    ns = list(ns)
    if not ns:
        raise DomainError("need at least one n")
    iv = as_interval(iv)
    _check_inputs(f, w, iv.a, iv.b)
    ref = _reference(f, w, iv.a, iv.b)
    rows = []
    for n in ns:
        part = Partition.uniform(iv.a, iv.b, int(n))
        res = integrate_partition(f, w, part, None, mode, with_reference=False)
        res.reference = ref
        rows.append(res)
    return rows


def observed_orders(rows: Sequence[QuadratureResult]) -> List[Optional[float]]:
    """log2 of successive error ratios, for rows with doubling n."""
    out = []
    for prev, cur in zip(rows[:-1], rows[1:]):
        e0, e1 = prev.actual_error, cur.actual_error
        if not e0 or not e1:
            out.append(None)
        else:
            out.append(math.log(e0 / e1) / math.log(cur.n / prev.n))
    return out
