import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ostroquad import funcspace, oracle
from ostroquad.errors import DomainError
from ostroquad.funcspace import get_function, get_weight
from ostroquad.kernel import (
    Interval,
    kernel_abs_integral,
    kernel_f_prime_integral,
    kernel_integral,
    moment,
    paper_coefficient,
    peano_kernel,
)
from ostroquad.verify import identity_residual, identity_scale

# a weight with no closed forms, to exercise the oracle fallbacks
BUMP = funcspace.Weight("bump", funcspace.REAL_LINE, lambda t: 1.0 + 0.5 * np.cos(t))


@pytest.mark.parametrize(
    "wid,a,b,expected",
    [("unit", 0, 1, 1.0), ("inv_sqrt", 1, 4, 2.0), ("inv_sqrt", 1, 2, 2 * (math.sqrt(2) - 1))],
)
def test_moment(wid, a, b, expected):
    assert moment(get_weight(wid), a, b) == pytest.approx(expected, rel=1e-15)


def test_moment_without_antiderivative():
    assert moment(BUMP, 0.0, math.pi) == pytest.approx(math.pi, rel=1e-13)


def test_moment_domain():
    with pytest.raises(DomainError):
        moment(get_weight("inv_sqrt"), 0.0, 1.0)
    with pytest.raises(DomainError):
        moment(get_weight("unit"), 2.0, 1.0)


@pytest.mark.parametrize(
    "wid,iv,x,t,expected",
    [
        ("unit", (0, 1), 0.5, 0.25, 0.25),
        ("unit", (0, 1), 0.5, 0.75, -0.25),
        ("inv_sqrt", (1, 4), 2.0, 1.44, 0.4),
        ("unit", (0, 1), 0.5, 0.5, 0.5),  # t = x takes the left branch
    ],
)
def test_peano_kernel(wid, iv, x, t, expected):
    assert peano_kernel(get_weight(wid), iv, x, t) == pytest.approx(expected, rel=1e-14)


def test_peano_kernel_domain():
    with pytest.raises(DomainError):
        peano_kernel(get_weight("unit"), (0, 1), 0.5, 1.5)
    with pytest.raises(DomainError):
        peano_kernel(get_weight("unit"), (0, 1), -0.1, 0.5)


@pytest.mark.parametrize(
    "wid,iv,x,expected",
    [
        ("unit", (0, 1), 0.75, 0.25),
        ("unit", (0, 1), 0.5, 0.0),
        # closed form with M = 2 sqrt t, MM = (4/3) t^1.5; mpmath agrees to 30 digits
        ("inv_sqrt", (1, 4), 2.0, -2.0 / 3.0),
    ],
)
def test_kernel_integral(wid, iv, x, expected):
    assert kernel_integral(get_weight(wid), iv, x) == pytest.approx(expected, abs=1e-14)


def test_paper_coefficient_differs_for_inv_sqrt():
    assert paper_coefficient(get_weight("inv_sqrt"), (1, 4), 2.0) == pytest.approx(-1.0606601717798212, rel=1e-14)


@pytest.mark.parametrize(
    "wid,iv,x,expected",
    [
        ("unit", (0, 1), 0.5, 0.25),
        ("unit", (0, 1), 0.0, 0.5),
        # 0.437902833 + 1.104569500 (mpmath)
        ("inv_sqrt", (1, 4), 2.0, 1.5424723326565069),
    ],
)
def test_kernel_abs_integral(wid, iv, x, expected):
    assert kernel_abs_integral(get_weight(wid), iv, x) == pytest.approx(expected, abs=1e-13)


def _brute_kernel_integrals(w, a, b, x):
    """Both kernel integrals from pointwise P(x, t) and the oracle."""
    p = np.vectorize(lambda t: peano_kernel(w, (a, b), x, float(t)))
    left = oracle.integrate(p, a, x) if x > a else 0.0
    right = oracle.integrate(p, x, b) if x < b else 0.0
    return left + right, left - right


@pytest.mark.parametrize("w", [get_weight("unit"), get_weight("inv_sqrt"), BUMP], ids=lambda w: w.id)
@pytest.mark.parametrize("frac", [0.0, 0.2, 0.5, 0.9, 1.0])
def test_kernel_integrals_against_pointwise_kernel(w, frac):
    a, b = 0.7, 2.9
    x = min(b, a + frac * (b - a))
    exact, absval = _brute_kernel_integrals(w, a, b, x)
    assert kernel_integral(w, (a, b), x) == pytest.approx(exact, rel=1e-9, abs=1e-12)
    assert kernel_abs_integral(w, (a, b), x) == pytest.approx(absval, rel=1e-9, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(-5, 5), st.floats(0.01, 5), st.floats(0, 1))
def test_unit_kernel_integral_closed_form(a, length, frac):
    b = a + length
    x = min(b, a + frac * length)
    got = kernel_integral(get_weight("unit"), (a, b), x)
    assert abs(got - length * (x - 0.5 * (a + b))) <= 1e-12 * max(1.0, length) ** 2


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["unit", "inv_sqrt"]), st.floats(0.1, 5), st.floats(0.01, 5), st.floats(0, 1))
def test_abs_kernel_dominates(wid, a, length, frac):
    w = get_weight(wid)
    b = a + length
    x = min(b, a + frac * length)
    assert kernel_abs_integral(w, (a, b), x) >= abs(kernel_integral(w, (a, b), x)) - 1e-15


@pytest.mark.parametrize("wid", ["unit", "inv_sqrt"])
def test_kernel_monotone_on_each_branch(wid):
    w = get_weight(wid)
    a, b, x = 0.5, 3.0, 1.3
    left = [peano_kernel(w, (a, b), x, t) for t in np.linspace(a, x, 50)]
    right = [peano_kernel(w, (a, b), x, t) for t in np.linspace(x, b, 51)[1:]]
    assert np.all(np.diff(left) >= 0)
    assert np.all(np.diff(right) >= 0)
    assert left[0] == 0.0 and right[-1] == pytest.approx(0.0, abs=1e-15)


PAIRS = [
    (get_function(fid), get_weight(wid))
    for fid in ("constant", "identity", "square", "cubic", "poly6", "exp", "sin", "sqrt_ln", "inv_sqrt_f")
    for wid in ("unit", "inv_sqrt")
] + [(get_function("pow_p_half", 2.0), get_weight("inv_sqrt")), (get_function("exp"), BUMP)]


@pytest.mark.parametrize("f,w", PAIRS, ids=lambda v: v.label if hasattr(v, "label") else v.id)
def test_integration_by_parts_identity(f, w):
    for a, b, x in [(0.5, 4.0, 0.5), (0.6, 1.1, 0.9), (1.0, 3.0, 3.0), (2.0, 2.5, 2.1)]:
        res = identity_residual(f, w, (a, b), x)
        assert res <= 1e-8 * identity_scale(f, w, (a, b), x)


def test_kernel_f_prime_integral_linear():
    # P integrates to the kernel integral when f' = 1
    w = get_weight("inv_sqrt")
    got = kernel_f_prime_integral(get_function("identity"), w, (1, 4), 2.0)
    assert got == pytest.approx(kernel_integral(w, (1, 4), 2.0), rel=1e-12)


def test_interval_validation():
    with pytest.raises(DomainError):
        Interval(2.0, 1.0)
    with pytest.raises(DomainError):
        Interval(0.0, math.inf)
    iv = Interval(1.0, 3.0)
    assert iv.midpoint == 2.0 and iv.length == 2.0
