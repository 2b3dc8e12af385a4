"""Registries of test functions and weights.

Every registered function carries closed forms for f, f' and f''; every
weight carries its antiderivative ``M`` (``M' = w``) and, where cheap, a
second antiderivative ``MM`` (``MM' = M``) used for exact kernel integrals.
Evaluators accept scalars or numpy arrays.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError, UnknownIdError

Evaluator = Callable[[np.ndarray], np.ndarray]

REAL_LINE = (-math.inf, math.inf)
POSITIVE = (0.0, math.inf)

_FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)


def _check_domain(name: str, domain: Tuple[float, float], t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    lo, hi = domain
    if not np.all((arr > lo) & (arr < hi)):
        bad = arr[~((arr > lo) & (arr < hi))] if arr.ndim else arr
        raise DomainError(f"{name}: argument {np.ravel(bad)[0]!r} outside domain ({lo}, {hi})")
    return arr


def _as_output(arr: np.ndarray, like):
    return float(arr) if np.ndim(like) == 0 else arr


@dataclass(frozen=True)
class TestFunction:
    """A named smooth function with evaluators for f, f' and f''.

    ``domain`` is the open interval of validity; evaluation outside it raises
    :class:`DomainError` instead of returning NaN.
    """

    __test__ = False  # not a pytest class

    id: str
    domain: Tuple[float, float]
    evaluators: Tuple[Evaluator, Evaluator, Evaluator] = field(repr=False)
    description: str = ""
    params: Tuple[Tuple[str, float], ...] = ()

    def eval(self, order: int, t):
        if order not in (0, 1, 2):
            raise ValueError(f"derivative order must be 0, 1 or 2, got {order!r}")
        arr = _check_domain(self.id, self.domain, t)
        return _as_output(np.asarray(self.evaluators[order](arr), dtype=float), t)

    def __call__(self, t):
        return self.eval(0, t)

    def contains(self, a: float, b: float) -> bool:
        """True if the closed interval [a, b] lies inside the domain."""
        lo, hi = self.domain
        return lo < a and b < hi

    @property
    def label(self) -> str:
        if not self.params:
            return self.id
        extra = ",".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.id}({extra})"


@dataclass(frozen=True)
class Weight:
    """A named non-negative density ``w`` with optional closed-form moments.

    ``antiderivative`` is M with M' = w, ``second_antiderivative`` is MM with
    MM' = M.  Either may be None, in which case callers fall back to the
    reference integrator.
    """

    id: str
    domain: Tuple[float, float]
    density: Evaluator = field(repr=False)
    antiderivative: Optional[Evaluator] = field(default=None, repr=False)
    second_antiderivative: Optional[Evaluator] = field(default=None, repr=False)
    description: str = ""

    def eval(self, t):
        arr = _check_domain(self.id, self.domain, t)
        return _as_output(np.asarray(self.density(arr), dtype=float), t)

    def __call__(self, t):
        return self.eval(t)

    def contains(self, a: float, b: float) -> bool:
        lo, hi = self.domain
        return lo < a and b < hi

    @property
    def is_unit(self) -> bool:
        return self.id == "unit"


def _central_difference(g: Evaluator) -> Evaluator:
    def dg(t):
        t = np.asarray(t, dtype=float)
        h = _FD_STEP * np.maximum(1.0, np.abs(t))
        return (g(t + h) - g(t - h)) / (2.0 * h)

    return dg


def from_callables(
    id: str,
    f: Evaluator,
    domain: Tuple[float, float] = REAL_LINE,
    df: Optional[Evaluator] = None,
    d2f: Optional[Evaluator] = None,
    description: str = "",
) -> TestFunction:
    """Wrap a user function; missing derivatives use central differences."""
    if df is None:
        df = _central_difference(f)
    if d2f is None:
        d2f = _central_difference(df)
    return TestFunction(id, domain, (f, df, d2f), description)


def polynomial(id: str, coefficients, description: str = "") -> TestFunction:
    """Polynomial test function from ascending coefficients."""
    p = Polynomial(coefficients)
    return TestFunction(id, REAL_LINE, (p, p.deriv(1), p.deriv(2)), description)


def _pow_p_half(p: float) -> TestFunction:
    # f(t) = t^p * sqrt(t) = t^(p + 1/2)
    q = p + 0.5
    return TestFunction(
        "pow_p_half",
        POSITIVE,
        (
            lambda t: t**q,
            lambda t: q * t ** (q - 1.0),
            lambda t: q * (q - 1.0) * t ** (q - 2.0),
        ),
        "t^p * sqrt(t)",
        (("p", float(p)),),
    )


@functools.lru_cache(maxsize=None)
def _pow_p_half_cached(p: float) -> TestFunction:
    return _pow_p_half(p)


def _build_functions():
    fns = [
        TestFunction(
            "constant",
            REAL_LINE,
            (np.ones_like, np.zeros_like, np.zeros_like),
            "f(t) = 1",
        ),
        TestFunction(
            "identity",
            REAL_LINE,
            (lambda t: 1.0 * t, np.ones_like, np.zeros_like),
            "f(t) = t",
        ),
        polynomial("square", [0.0, 0.0, 1.0], "f(t) = t^2"),
        polynomial("cubic", [0.0, 0.0, 0.0, 1.0], "f(t) = t^3"),
        polynomial(
            "poly6",
            [0.5, -1.0, 0.0, 1.0 / 3.0, -0.5, 0.0, 1.0 / 20.0],
            "f(t) = t^6/20 - t^4/2 + t^3/3 - t + 1/2",
        ),
        TestFunction("exp", REAL_LINE, (np.exp, np.exp, np.exp), "f(t) = e^t"),
        TestFunction(
            "sin",
            REAL_LINE,
            (np.sin, np.cos, lambda t: -np.sin(t)),
            "f(t) = sin t",
        ),
        TestFunction(
            "sqrt_ln",
            POSITIVE,
            (
                lambda t: np.sqrt(t) * np.log(t),
                lambda t: (1.0 + 0.5 * np.log(t)) / np.sqrt(t),
                lambda t: -0.25 * np.log(t) * t**-1.5,
            ),
            "f(t) = sqrt(t) ln t",
        ),
        TestFunction(
            "inv_sqrt_f",
            POSITIVE,
            (
                lambda t: t**-0.5,
                lambda t: -0.5 * t**-1.5,
                lambda t: 0.75 * t**-2.5,
            ),
            "f(t) = t^(-1/2)",
        ),
    ]
    return MappingProxyType({fn.id: fn for fn in fns})


def _build_weights():
    ws = [
        Weight(
            "unit",
            REAL_LINE,
            np.ones_like,
            lambda t: 1.0 * t,
            lambda t: 0.5 * t * t,
            "w(t) = 1",
        ),
        Weight(
            "inv_sqrt",
            POSITIVE,
            lambda t: 1.0 / np.sqrt(t),
            lambda t: 2.0 * np.sqrt(t),
            lambda t: (4.0 / 3.0) * t**1.5,
            "w(t) = 1/sqrt(t)",
        ),
    ]
    return MappingProxyType({w.id: w for w in ws})


FUNCTIONS = _build_functions()
WEIGHTS = _build_weights()
PARAMETRIC = MappingProxyType({"pow_p_half": "t^p * sqrt(t), parameter p not in {-1, 0}"})
DEFAULT_P = 2.0


def get_function(id: str, p: Optional[float] = None) -> TestFunction:
    """Look up a registered function; ``p`` parameterizes ``pow_p_half``."""
    if id == "pow_p_half":
        p = DEFAULT_P if p is None else float(p)
        if p in (-1.0, 0.0):
            raise DomainError(f"pow_p_half requires p not in {{-1, 0}}, got {p:g}")
        return _pow_p_half_cached(p)
    try:
        return FUNCTIONS[id]
    except KeyError:
        raise UnknownIdError(f"unknown function id {id!r}") from None


def get_weight(id: str) -> Weight:
    try:
        return WEIGHTS[id]
    except KeyError:
        raise UnknownIdError(f"unknown weight id {id!r}") from None


def eval(fn, order: int, t, p: Optional[float] = None):
    """Evaluate ``fn`` (a TestFunction or registry id) or a derivative at ``t``."""
    if isinstance(fn, str):
        fn = get_function(fn, p)
    return fn.eval(order, t)


def list_registry() -> dict:
    return {
        "functions": sorted([*FUNCTIONS, *PARAMETRIC]),
        "weights": sorted(WEIGHTS),
    }
