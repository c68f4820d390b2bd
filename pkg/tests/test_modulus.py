import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracorlicz.conditions import SmoothnessParams
from fracorlicz.errors import AdmissibilityError, EvaluationError, NoEmbeddingError
from fracorlicz.modulus import (
    EquivalenceConfig,
    rho,
    sigma,
    sigma_table,
    theta,
    verify_equivalence,
    write_sigma_csv,
)
from fracorlicz.young import Exponential, Power, PowerLog


def _power_theta(p, n, s):
    # E(t) = c t^p' for A = t^p, hence theta(r) = c^(1/p') r^(s - n/p)
    pp = p / (p - 1)
    q = n / (n - s)
    c = (p - 1) * p ** (-pp) / (q - pp)
    return lambda r: c ** (1 / pp) * r ** (s - n / p)


def _power_rho(p, n, s):
    pp = p / (p - 1)
    q = n / (n - s + 1)
    c = (p - 1) * p ** (-pp) / (pp - q)
    return lambda r: c ** (1 / pp) * r ** (s - n / p)


@pytest.mark.parametrize("p,n,s", [(5.0, 2, 0.5), (3.0, 1, 0.5), (8.0, 3, 0.7)])
def test_theta_power_closed_form(p, n, s):
    r = np.logspace(-4, 4, 9)
    np.testing.assert_allclose(theta(Power(p), SmoothnessParams(n, s))(r), _power_theta(p, n, s)(r), rtol=1e-6)


def test_rho_power_closed_form():
    p, n, s = 2.0, 3, 1.5
    r = np.logspace(-4, 4, 9)
    np.testing.assert_allclose(rho(Power(p), SmoothnessParams(n, s))(r), _power_rho(p, n, s)(r), rtol=1e-6)


def test_sigma_regimes():
    assert sigma(Power(5.0), SmoothnessParams(2, 0.5)).regime == "Subcritical01"
    mid = sigma(Power(5.0), SmoothnessParams(3, 1.5))
    assert mid.regime.startswith("Mid1n") and set(mid.components) == {"theta", "rho"}
    assert sigma(Power(1.2), SmoothnessParams(2, 2.5)).regime.startswith("Super_n")


def test_sigma_mid_is_sum_or_piecewise():
    A, P = Power(5.0), SmoothnessParams(3, 1.5)
    sg = sigma(A, P)
    r = np.logspace(-3, -1, 5)
    th, rh = sg.components["theta"], sg.components["rho"]
    if sg.regime == "Mid1n_Case_ii":
        np.testing.assert_allclose(sg(r), r)
    else:
        np.testing.assert_allclose(sg(r), th(r) + rh(r))


def test_sigma_errors():
    with pytest.raises(AdmissibilityError):
        sigma(Power(2.0), SmoothnessParams(1, 2.5))
    with pytest.raises(NoEmbeddingError):
        sigma(Power(2.0), SmoothnessParams(2, 0.5))


@pytest.mark.parametrize("A", [Power(20.0), PowerLog(3, 0, 6, 1), Exponential(-1, 1)], ids=repr)
def test_modulus_is_quasi_monotone(A):
    ok, worst = sigma(A, SmoothnessParams(2, 0.5)).check_quasi_monotone()
    assert ok and worst >= 1.0


def test_vanishing_check():
    # r^0.4 drops below 1e-3 within 12 decades; r^0.1 vanishes too slowly for the check
    P = SmoothnessParams(2, 0.5)
    assert sigma(Power(20.0), P).check_vanishing()[0]
    ok, v = sigma(Power(5.0), P).check_vanishing()
    assert not ok and np.all(np.diff(v) < 0)
    sg = sigma(Power(20.0), P)
    sg._fn = lambda r: np.ones_like(r)
    assert not sg.check_vanishing()[0]


def test_modulus_rejects_nonpositive_r():
    with pytest.raises(ValueError):
        theta(Power(5.0), SmoothnessParams(2, 0.5))(0.0)


def test_verify_equivalence():
    rep = verify_equivalence(lambda r: 3 * r ** 0.5, lambda r: r ** 0.5)
    assert rep.verdict
    np.testing.assert_allclose(rep.ratio_min, 3.0)
    assert not verify_equivalence(lambda r: r ** 0.4, lambda r: r ** 0.5).verdict
    # log factor: spread grows without bound
    assert not verify_equivalence(lambda r: r * np.log(1 / r + 1), lambda r: r).verdict
    rep = verify_equivalence(lambda r: r, lambda r: r, config=EquivalenceConfig(decades=2), C=1.5)
    assert rep.config["C"] == 1.5 and rep.config["decades"] == 2


def test_verify_equivalence_rejects_nonpositive():
    with pytest.raises(EvaluationError):
        verify_equivalence(lambda r: r - 0.5, lambda r: r)


def test_sigma_table_and_csv():
    tab = sigma_table(Power(5.0), SmoothnessParams(2, 0.5), np.array([0.1, 1.0]))
    assert np.all(np.isnan(tab["rho"]))
    np.testing.assert_allclose(tab["sigma"], tab["theta"])
    text = write_sigma_csv(tab)
    lines = text.strip().splitlines()
    assert lines[0] == "r,theta,rho,sigma,regime" and len(lines) == 3
    buf = io.StringIO()
    write_sigma_csv(tab, buf)
    assert buf.getvalue() == text


@settings(max_examples=20, deadline=None)
@given(p=st.floats(4.5, 9.0), lam=st.floats(1e-3, 1e3), r=st.floats(1e-3, 1e3))
def test_theta_power_homogeneity(p, lam, r):
    th = theta(Power(p), SmoothnessParams(2, 0.5))
    np.testing.assert_allclose(th(lam * r) / th(r), lam ** (0.5 - 2 / p), rtol=1e-5)
