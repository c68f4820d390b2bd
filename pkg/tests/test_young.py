import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from fracorlicz.battery import young_battery
from fracorlicz.young import (
    Exponential,
    LInftyGauge,
    Power,
    PowerLog,
    TabulatedMonotone,
    check_axioms,
    dominates,
    equivalent,
    legendre,
    matuszewska_indices,
    young_from_dict,
)

GRID = np.logspace(-4, 4, 41)


def _brute_conjugate(A, t):
    # independent oracle: bounded scalar maximization of tau*t - A(tau) in log tau
    res = minimize_scalar(lambda u: -(math.exp(u) * t - float(A(math.exp(u)))),
                          bounds=(-30, 30), method="bounded", options={"xatol": 1e-12})
    return -res.fun


@pytest.mark.parametrize("A", young_battery(), ids=repr)
def test_battery_passes_axioms(A):
    assert check_axioms(A).passed


def test_power_values():
    A = Power(3.0, coef=2.0)
    np.testing.assert_allclose(A(np.array([0.0, 1.0, 2.0])), [0.0, 2.0, 16.0])
    assert A(0.0) == 0.0


def test_power_rejects_sublinear():
    with pytest.raises(ValueError):
        Power(0.5)


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_power_conjugate_closed_form(p):
    t = np.array([0.1, 1.0, 3.0])
    exact = (p - 1) * (t / p) ** (p / (p - 1))
    np.testing.assert_allclose(Power(p).conjugate()(t), exact, rtol=1e-8)


@pytest.mark.filterwarnings("ignore:invalid value:RuntimeWarning")
@pytest.mark.parametrize("A", [PowerLog(2, 0, 3, 1), Exponential(-1, 1), PowerLog(1.5, -1, 4, 2)], ids=repr)
def test_conjugate_matches_brute_force(A):
    for t in (0.3, 1.0, 4.0):
        np.testing.assert_allclose(legendre(A, t), _brute_conjugate(A, t), rtol=1e-7)


def test_linfty_gauge():
    A = LInftyGauge(2.0)
    np.testing.assert_allclose(A(np.array([1.0, 2.0])), [0.0, 0.0])
    assert A(2.5) == np.inf
    assert A.finiteness_threshold == 2.0
    # conjugate of the gauge is level * t
    np.testing.assert_allclose(A.conjugate()(np.array([0.5, 3.0])), [1.0, 6.0], rtol=1e-6)


@pytest.mark.parametrize("A", [Power(2.5), PowerLog(3, 0, 3, 1), Exponential(-1, 1)], ids=repr)
def test_inverse_roundtrip(A):
    y = np.logspace(-3, 3, 13)
    np.testing.assert_allclose(A(A.inverse(y)), y, rtol=1e-9)


def test_inverse_rejects_negative():
    with pytest.raises(ValueError):
        Power(2).inverse(-1.0)


@pytest.mark.parametrize("p", [1.2, 2.0, 5.0])
def test_power_indices(p):
    est = matuszewska_indices(Power(p))
    np.testing.assert_allclose(tuple(est), (p, p), rtol=1e-6)


def test_powerlog_indices_follow_leading_powers():
    i0, iinf = matuszewska_indices(PowerLog(2, 0, 6, -1))
    assert abs(i0 - 2) < 0.1 and abs(iinf - 6) < 0.2


def test_domination():
    assert dominates(Power(3), Power(2), range="NearInfinity").found
    assert not dominates(Power(2), Power(3), range="NearInfinity").found
    assert equivalent(Power(2), Power(2, coef=5.0))


def test_from_dict():
    A = young_from_dict({"kind": "power", "p": 2.0})
    assert isinstance(A, Power) and A.p == 2.0
    B = young_from_dict({"kind": "power_log", "p0": 2, "alpha0": 0, "p": 3, "alpha": 1})
    np.testing.assert_allclose(B(GRID), PowerLog(2, 0, 3, 1)(GRID))


def test_tabulated_linear_reproduces_samples():
    t = np.linspace(0, 4, 9)
    A = TabulatedMonotone(t, t ** 2, tail_exponent=2.0)
    np.testing.assert_allclose(A(t), t ** 2)
    assert check_axioms(A).passed


@settings(max_examples=40, deadline=None)
@given(p=st.floats(1.0, 6.0), t=st.floats(1e-3, 1e3), lam=st.floats(0.01, 1.0))
def test_convexity_under_scaling(p, t, lam):
    # A(lam t) <= lam A(t) for convex A with A(0) = 0
    A = Power(p)
    assert A(lam * t) <= lam * A(t) * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(t=st.floats(1e-2, 1e2), tau=st.floats(1e-2, 1e2))
def test_young_inequality(t, tau):
    for A in (PowerLog(3, 0, 3, 1), Exponential(-1, 1)):
        assert t * tau <= float(A(tau)) + float(legendre(A, t)) * (1 + 1e-9) + 1e-12
