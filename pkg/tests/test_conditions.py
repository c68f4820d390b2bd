from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracorlicz.conditions import (
    SmoothnessParams,
    build_E,
    build_F,
    build_I,
    classify_gate,
    classify_integral,
)
from fracorlicz.errors import DomainError, PreconditionError
from fracorlicz.young import PowerLog, Power


def test_params_validation():
    with pytest.raises(DomainError):
        SmoothnessParams(2, 1.0)
    with pytest.raises(DomainError):
        SmoothnessParams(0, 0.5)
    with pytest.raises(DomainError):
        SmoothnessParams(2, Fraction(4, 2))
    P = SmoothnessParams(3, 1.5)
    assert P.int_part == 1 and P.frac_part == 0.5 and P.regime == "Mid1n"
    np.testing.assert_allclose(P.omega_n, 4 * np.pi / 3)


@pytest.mark.parametrize("n,s,regime", [(2, 0.5, "Subcritical01"), (2, 2.5, "Super_n"), (1, 2.5, "Inadmissible")])
def test_regimes(n, s, regime):
    assert SmoothnessParams(n, s).regime == regime


def test_gate_exponents():
    P = SmoothnessParams(3, 1.5)
    assert P.gate_q("TailSub") == 2.0
    np.testing.assert_allclose(P.gate_q("OriginGrad"), 3 / 2.5)
    assert SmoothnessParams(3, Fraction(3, 2)).gate_q("TailSub") == Fraction(2)
    with pytest.raises(DomainError):
        SmoothnessParams(2, 0.5).gate_q("TailGrad")


def test_classify_integral_powers():
    assert classify_integral(lambda t: t ** -1.5, "infinity")[0] == "Converges"
    assert classify_integral(lambda t: t ** -1.0, "infinity")[0] == "Diverges"
    assert classify_integral(lambda t: t ** -0.5, "zero")[0] == "Converges"
    assert classify_integral(lambda t: t ** -1.0, "zero")[0] == "Diverges"


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0, 5.0, 7.0])
@pytest.mark.parametrize("gate", ["TailSub", "OriginSub"])
def test_power_gate_by_exponent_arithmetic(p, gate):
    # int (t / t^p)^(q-1) dt at the gate's end; q = 4/3 for n = 2, s = 1/2
    P = SmoothnessParams(2, 0.5)
    e = (Fraction(p) - 1) * (SmoothnessParams(2, Fraction(1, 2)).gate_q(gate) - 1)
    expect = (e > 1) if gate == "TailSub" else (e < 1)
    rep = classify_gate(Power(p), P, gate)
    assert (rep.verdict == "Converges") == expect
    assert rep.dual_verdict == rep.verdict


@pytest.mark.parametrize("A", [Power(5.0), PowerLog(2, 0, 6, 1), PowerLog(1.5, -1, 4, 2)], ids=repr)
@pytest.mark.parametrize("gate", ["TailSub", "OriginSub"])
def test_numeric_route_agrees_with_closed_form(A, gate):
    P = SmoothnessParams(2, 0.5)
    sym = classify_gate(A, P, gate)
    num = classify_gate(A, P, gate, numeric=True)
    assert num.verdict in (sym.verdict, "Inconclusive")
    assert num.method == "NumericTailFit" and sym.method == "ClosedForm"


def test_build_E_power_closed_form():
    # A = t^p: conj = (p-1) p^(-p') t^p', so E(t) = (p-1) p^(-p') t^p' / (q - p')
    p, P = 5.0, SmoothnessParams(2, 0.5)
    q = 4.0 / 3.0
    pp = p / (p - 1)
    E = build_E(Power(p), P)
    t = np.logspace(-3, 3, 7)
    exact = (p - 1) * p ** (-pp) * t ** pp / (q - pp)
    np.testing.assert_allclose(E(t), exact, rtol=1e-6)


def test_build_E_requires_gate():
    with pytest.raises(PreconditionError):
        build_E(Power(2.0), SmoothnessParams(2, 0.5))


def test_build_F_power_closed_form():
    # F(t) = t^q int_0^t conj(tau) tau^(-1-q) dtau = c t^p' / (p' - q)
    p, P = 2.0, SmoothnessParams(3, 1.5)
    q = 3.0 / 2.5
    pp = p / (p - 1)
    F = build_F(Power(p), P)
    t = np.logspace(-3, 3, 7)
    exact = (p - 1) * p ** (-pp) * t ** pp / (pp - q)
    np.testing.assert_allclose(F(t), exact, rtol=1e-6)


def test_build_I_power_closed_form():
    # n < s < n+1: q = n/(n-s) < 0 and I(t) = c t^p' / (p' - q)
    p, P = 1.2, SmoothnessParams(2, 2.5)
    q = 2.0 / (2.0 - 2.5)
    pp = p / (p - 1)
    I = build_I(Power(p), P)
    t = np.logspace(-2, 2, 5)
    exact = (p - 1) * p ** (-pp) * t ** pp / (pp - q)
    np.testing.assert_allclose(I(t), exact, rtol=1e-6)


@settings(max_examples=15, deadline=None)
@given(n=st.integers(1, 5), s=st.floats(0.05, 5.95))
def test_gate_q_formulae(n, s):
    if abs(s - round(s)) < 1e-6:
        return
    P = SmoothnessParams(n, s)
    if s < n:
        np.testing.assert_allclose(P.gate_q("TailSub"), n / (n - s))
    if s > 1:
        np.testing.assert_allclose(P.gate_q("TailGrad"), n / (n - s + 1))
