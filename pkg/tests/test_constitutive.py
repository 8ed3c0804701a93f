import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from lagfem.constitutive import (
    L_prime, L_value, PhysicalParams, conductivity, entropy_density, g_weight, pressure, viscosity,
)
from lagfem.errors import PositivityViolation

pos = st.floats(1e-3, 1e3)


def test_pressure():
    p = PhysicalParams(K=1.0)
    assert pressure(1.0, 1.0, p) == 1.0
    assert pressure(2.0, 4.0, p) == 0.5
    with pytest.raises(PositivityViolation):
        pressure(1.0, 0.0, p)


def test_pressure_array_reports_element():
    with pytest.raises(PositivityViolation) as exc:
        pressure(np.ones(3), np.array([1.0, 1.0, -2.0]), PhysicalParams())
    assert exc.value.field == "tau" and exc.value.index == 3


def test_transport_coefficients():
    assert viscosity(5.0, PhysicalParams(mu_bar=2.0)) == 2.0
    assert conductivity(4.0, PhysicalParams(beta=0.5)) == pytest.approx(2.0)
    assert conductivity(2.0, PhysicalParams(beta=1.0, kappa_bar=3.0)) == pytest.approx(6.0)
    np.testing.assert_array_equal(viscosity(np.array([1.0, 7.0]), PhysicalParams(mu_bar=2.0)), [2, 2])


def test_kirchhoff_closed_forms():
    assert L_value(2.0, PhysicalParams(beta=0.0)) == pytest.approx(2.0)
    assert L_prime(3.0, PhysicalParams(beta=1.0, kappa_bar=2.0)) == pytest.approx(9.0)
    assert L_value(0.0, PhysicalParams()) == 0.0
    with pytest.raises(PositivityViolation):
        L_prime(-1.0, PhysicalParams())


def test_kirchhoff_against_quadrature():
    p = PhysicalParams(beta=0.5, kappa_bar=1.0)
    theta = 1.7
    # L(theta) = int_0^theta int_0^s kappa(r) dr ds
    inner = lambda s: integrate.quad(lambda r: conductivity(r, p) if r > 0 else 0.0, 0, s, epsabs=1e-14, epsrel=1e-13)[0]  # noqa: E731
    val, _ = integrate.quad(inner, 0, theta, epsabs=1e-14, epsrel=1e-13)
    assert abs(L_value(theta, p) - val) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 20), st.floats(0, 3), st.floats(0.1, 5))
def test_kirchhoff_derivatives(theta, beta, kbar):
    p = PhysicalParams(beta=beta, kappa_bar=kbar)
    e = 1e-4 * theta
    d1 = (L_value(theta + e, p) - L_value(theta - e, p)) / (2 * e)
    d2 = (L_prime(theta + e, p) - L_prime(theta - e, p)) / (2 * e)
    assert d1 == pytest.approx(L_prime(theta, p), rel=1e-6)
    assert d2 == pytest.approx(conductivity(theta, p), rel=1e-6)


def test_g_weight():
    assert g_weight(1.0, 1.0) == 1.0
    assert g_weight(1.0, 3.0) == 0.5
    assert g_weight(2.0, 2.0) == 0.5
    with pytest.raises(PositivityViolation):
        g_weight(0.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(pos, pos)
def test_g_weight_between_reciprocals(a, b):
    g = g_weight(a, b)
    assert min(1 / a, 1 / b) * (1 - 1e-12) <= g <= max(1 / a, 1 / b) * (1 + 1e-12)
    assert g == g_weight(b, a)


def test_entropy_density_examples():
    p = PhysicalParams(K=1.0)
    assert entropy_density(1.0, 0.0, 1.0, p) == pytest.approx(2.0)
    assert entropy_density(1.0, 2.0, 1.0, p) == pytest.approx(4.0)
    assert entropy_density(math.e, 0.0, 1.0, p) == pytest.approx(math.e)


@settings(max_examples=80, deadline=None)
@given(pos, st.floats(-10, 10), pos, st.floats(0.1, 10))
def test_entropy_density_bounded_below(tau, u, theta, K):
    # x - log x >= 1 termwise
    assert entropy_density(tau, u, theta, PhysicalParams(K=K)) >= 1 + K - 1e-9


def test_params_validation_and_warnings():
    with pytest.raises(ValueError, match="kappa_bar"):
        PhysicalParams(kappa_bar=-1.0)
    with pytest.raises(ValueError, match="beta"):
        PhysicalParams(beta=-0.1)
    assert PhysicalParams().regime_warnings == []
    w = PhysicalParams(beta=1.6).regime_warnings
    assert len(w) == 1 and "3/2" in w[0]
    assert len(PhysicalParams(beta=2.0, alpha=0.5, c_v=2.0).regime_warnings) == 4
