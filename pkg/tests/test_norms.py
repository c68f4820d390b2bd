import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from fracorlicz.conditions import SmoothnessParams
from fracorlicz.errors import DomainError
from fracorlicz.norms import (
    MeasureSpec,
    SampledFunction,
    decreasing_rearrangement,
    distribution_function,
    holder_check,
    kernel_norms,
    luxemburg_norm,
    orlicz_lorentz_norm,
)
from fracorlicz.young import Exponential, LInftyGauge, Power, PowerLog

STEP = SampledFunction.step([0.0, 0.5, 1.2, 2.0, 3.5], [0.3, -2.0, 1.0, 0.7])


def test_sampled_function_evaluation():
    np.testing.assert_allclose(STEP(np.array([0.1, 0.6, 3.0, 4.0])), [0.3, -2.0, 0.7, 0.0])
    lin = SampledFunction.linear([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
    np.testing.assert_allclose(lin(np.array([0.5, 1.5, 2.5])), [1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        SampledFunction.step([0.0, 1.0], [1.0, 2.0])


def test_csv_roundtrip(tmp_path):
    p = tmp_path / "u.csv"
    STEP.to_csv(p)
    back = SampledFunction.from_csv(p)
    np.testing.assert_allclose(back.grid, STEP.grid)
    np.testing.assert_allclose(back.values, STEP.values)


@pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
def test_luxemburg_power_equals_lp(p):
    exact = np.sum(np.diff(STEP.grid) * np.abs(STEP.values) ** p) ** (1 / p)
    np.testing.assert_allclose(luxemburg_norm(Power(p), STEP).value, exact, rtol=1e-9)


@pytest.mark.parametrize("A", [PowerLog(2, 0, 3, 1), Exponential(-1, 1)], ids=repr)
def test_luxemburg_indicator_uses_inverse(A):
    # ||chi_E||_A = 1 / A^-1(1/|E|)
    f = SampledFunction.indicator(0.0, 2.5)
    np.testing.assert_allclose(luxemburg_norm(A, f).value, 1.0 / float(A.inverse(1 / 2.5)), rtol=1e-8)


def test_luxemburg_linfty_gauge_is_sup():
    np.testing.assert_allclose(luxemburg_norm(LInftyGauge(), STEP).value, 2.0, rtol=1e-9)


def test_luxemburg_callable_against_quad():
    # ||x^-1/4||_{L^2(0,1)} = (int_0^1 x^-1/2)^(1/2) = sqrt(2)
    res = luxemburg_norm(Power(2), lambda x: x ** -0.25, MeasureSpec(0.0, 1.0))
    np.testing.assert_allclose(res.value, math.sqrt(2.0), rtol=1e-7)


def test_luxemburg_zero_function():
    assert luxemburg_norm(Power(2), SampledFunction.constant(0.0, 3.0)).value == 0.0


def test_distribution_and_rearrangement():
    np.testing.assert_allclose(distribution_function(STEP, [0.0, 0.5, 1.5]), [3.5, 3.0, 0.7])
    us = decreasing_rearrangement(STEP)
    np.testing.assert_allclose(us.values, [2.0, 1.0, 0.7, 0.3])
    np.testing.assert_allclose(us.grid, [0.0, 0.7, 1.5, 3.0, 3.5])


def test_rearrangement_of_linear_profile():
    lin = SampledFunction.linear([0.0, 1.0, 3.0], [0.0, 2.0, 0.0])
    us = decreasing_rearrangement(lin)
    # tent of base 3 and height 2: u*(r) = 2 (1 - r/3)
    r = np.linspace(0.01, 2.99, 7)
    np.testing.assert_allclose(us(r), 2 * (1 - r / 3), atol=1e-12)


def test_orlicz_lorentz_power_indicator():
    # ||r^(-1/q)||_{L^p(0, L)} = (L^(1-p/q) / (1 - p/q))^(1/p) for p < q
    p, q, L = 2.0, 3.0, 1.7
    res = orlicz_lorentz_norm(Power(p), q, SampledFunction.indicator(0.0, L))
    np.testing.assert_allclose(res.value, (L ** (1 - p / q) / (1 - p / q)) ** (1 / p), rtol=1e-7)
    assert not res.flags


def test_orlicz_lorentz_flags_failed_condition():
    res = orlicz_lorentz_norm(Power(4.0), 3.0, SampledFunction.indicator(0.0, 1.0))
    assert res.flags


def test_orlicz_lorentz_rejects_small_q():
    with pytest.raises(DomainError):
        orlicz_lorentz_norm(Power(2.0), 1.0, STEP)


def test_kernel_norm_power_closed_form():
    # K0(r) = || rho^(s/n - 1) ||_{L^conj(0, r^n)}, conj(t) = c t^p'
    p, n, s, r = 5.0, 2, 0.5, 0.7
    pp = p / (p - 1)
    c = (p - 1) * p ** (-pp)
    g = s / n - 1
    R = r ** n
    exact = (c * R ** (1 + g * pp) / (1 + g * pp)) ** (1 / pp)
    k0, kinf = kernel_norms(Power(p), SmoothnessParams(n, s), r)
    np.testing.assert_allclose(k0, exact, rtol=1e-7)
    assert math.isnan(kinf)


def test_kernel_norm_outer_against_quad():
    # Kinf for Power(2): conj = t^2/4, so Kinf = r (int_R^inf rho^(2g) / 4)^(1/2)
    n, s, r = 3, 1.5, 0.8
    g = (s - 1) / n - 1
    R = r ** n
    integral = quad(lambda x: x ** (2 * g) / 4, R, np.inf)[0]
    _, kinf = kernel_norms(Power(2.0), SmoothnessParams(n, s), r)
    np.testing.assert_allclose(kinf, r * math.sqrt(integral), rtol=1e-7)


def test_holder_check():
    v = SampledFunction.step([0.0, 1.0, 2.5, 3.5], [1.0, -0.5, 2.0])
    rep = holder_check(STEP, v, PowerLog(2, 0, 3, 1))
    assert rep["passed"] and rep["holder_pass"] and rep["hardy_littlewood_pass"]


@st.composite
def step_profiles(draw):
    k = draw(st.integers(1, 6))
    lens = draw(st.lists(st.floats(0.05, 3.0), min_size=k, max_size=k))
    vals = draw(st.lists(st.floats(-5.0, 5.0), min_size=k, max_size=k))
    return SampledFunction.step(np.concatenate([[0.0], np.cumsum(lens)]), vals)


@settings(max_examples=30, deadline=None)
@given(u=step_profiles(), c=st.floats(0.1, 10.0))
def test_luxemburg_homogeneity(u, c):
    A = PowerLog(2, 0, 3, 1)
    a = luxemburg_norm(A, u).value
    np.testing.assert_allclose(luxemburg_norm(A, u.scaled(c)).value, c * a, rtol=1e-8, atol=1e-300)


@settings(max_examples=30, deadline=None)
@given(u=step_profiles())
def test_rearrangement_preserves_norm(u):
    A = Exponential(-1, 1)
    np.testing.assert_allclose(luxemburg_norm(A, decreasing_rearrangement(u)).value,
                               luxemburg_norm(A, u).value, rtol=1e-9, atol=1e-300)


@settings(max_examples=20, deadline=None)
@given(u=step_profiles(), v=step_profiles())
def test_holder_inequality_random(u, v):
    assert holder_check(u, v, Power(3.0))["passed"]
