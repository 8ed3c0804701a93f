"""Material laws for an ideal polytropic gas with power-law transport.

All functions accept scalars or numpy arrays.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PositivityViolation


@dataclass(frozen=True)
class PhysicalParams:
    """Gas constant, specific heat and transport coefficients.

    Viscosity is ``mu_bar * theta**alpha`` and conductivity is
    ``kappa_bar * theta**beta``.
    """

    K: float = 1.0
    c_v: float = 1.0
    mu_bar: float = 1.0
    kappa_bar: float = 1.0
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        for name in ("K", "c_v", "mu_bar", "kappa_bar"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive, got {value!r}")
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value!r}")

    @property
    def regime_warnings(self):
        """Reasons the parameters fall outside the proven existence regimes."""
        out = []
        if self.alpha > 0:
            out.append("alpha > 0: temperature-dependent viscosity, pointwise bounds unproven")
        if self.beta >= 1.5:
            out.append("beta >= 3/2: outside the regime of the global existence result")
        if self.beta >= 2:
            out.append("beta >= 2: outside the regime of the convergence result")
        if self.c_v != 1.0:
            out.append("c_v != 1: experimental, temperature equation rescaled by 1/c_v")
        return out


def _check_positive(x, field):
    arr = np.asarray(x)
    if arr.ndim == 0:
        if not arr > 0:
            raise PositivityViolation(field, None, float(arr))
        return
    bad = ~(arr > 0)
    if bad.any():
        j = int(np.argmax(bad))
        raise PositivityViolation(field, j + 1, float(arr[j]))


def pressure(theta, tau, params):
    _check_positive(theta, "theta")
    _check_positive(tau, "tau")
    return params.K * theta / tau


def viscosity(theta, params):
    _check_positive(theta, "theta")
    if params.alpha == 0:
        if np.ndim(theta) == 0:
            return params.mu_bar
        return np.full(np.shape(theta), params.mu_bar)
    return params.mu_bar * np.power(theta, params.alpha)


def conductivity(theta, params):
    _check_positive(theta, "theta")
    if params.beta == 0:
        if np.ndim(theta) == 0:
            return params.kappa_bar
        return np.full(np.shape(theta), params.kappa_bar)
    return params.kappa_bar * np.power(theta, params.beta)


def _check_nonnegative(theta):
    arr = np.asarray(theta)
    if (arr < 0).any():
        j = int(np.argmax(arr.ravel() < 0))
        raise PositivityViolation("theta", j + 1 if arr.ndim else None, float(arr.ravel()[j]))


def L_value(theta, params):
    """Kirchhoff potential: the double antiderivative of the conductivity."""
    _check_nonnegative(theta)
    b = params.beta
    return params.kappa_bar * np.power(theta, b + 2.0) / ((b + 1.0) * (b + 2.0))


def L_prime(theta, params):
    _check_nonnegative(theta)
    b = params.beta
    return params.kappa_bar * np.power(theta, b + 1.0) / (b + 1.0)


def g_weight(tau_left, tau_right):
    """Interface weight ``2 / (tau_left + tau_right)``."""
    _check_positive(tau_left, "tau")
    _check_positive(tau_right, "tau")
    return 2.0 / (tau_left + tau_right)


def entropy_density(tau, u, theta, params):
    """``u^2/2 + c_v theta + K tau - c_v log theta - K log tau``."""
    _check_positive(tau, "tau")
    _check_positive(theta, "theta")
    K, cv = params.K, params.c_v
    return 0.5 * u * u + cv * theta + K * tau - cv * np.log(theta) - K * np.log(tau)
