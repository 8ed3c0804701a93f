"""Right-hand side of the semi-discrete scheme ``z_t = F(z)``.

Continuity and temperature equations are tested against piecewise constants
and are therefore elementwise. The momentum equation is tested against
interior hat functions and requires a solve with the consistent mass matrix.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import PositivityViolation
from .mesh import gram_apply


@dataclass(frozen=True, eq=False)
class StateDerivative:
    dtau: np.ndarray
    du: np.ndarray
    dtheta: np.ndarray


class TridiagonalSystem:
    """Mass matrix of the interior hat functions.

    Interior rows are ``(h/6, 2h/3, h/6)``. The Thomas elimination
    multipliers are computed once per mesh, so each solve is one forward
    and one backward sweep.
    """

    def __init__(self, mesh):
        self.mesh = mesh
        h = mesh.h
        n = mesh.N - 1
        self.diag = np.full(n, 2.0 * h / 3.0)
        self.sub = np.full(n - 1, h / 6.0)
        self.sup = np.full(n - 1, h / 6.0)
        self.cp, self.inv = _kernels.thomas_factor(self.sub, self.diag, self.sup)

    def matvec(self, x):
        out = self.diag * x
        out[:-1] += self.sup * x[1:]
        out[1:] += self.sub * x[:-1]
        return out

    def solve(self, rhs):
        out = np.empty(len(self.diag))
        _kernels.thomas_apply(self.sub, self.cp, self.inv, np.asarray(rhs, dtype=float), out)
        return out


def constants(mesh, params):
    """Scalar tuple consumed by the compiled kernels."""
    return (
        float(mesh.h), float(params.K), float(params.c_v), float(params.mu_bar),
        float(params.alpha), float(params.kappa_bar), float(params.beta),
    )


def check_positivity(state):
    for name, arr in (("tau", state.tau), ("theta", state.theta)):
        if not np.all(arr > 0):
            j = int(np.argmax(~(arr > 0)))
            raise PositivityViolation(name, j + 1, float(arr[j]))


def _mu(theta, params):
    if params.alpha == 0:
        return params.mu_bar
    return params.mu_bar * theta**params.alpha


def _kappa(theta, params):
    if params.beta == 0:
        return params.kappa_bar
    return params.kappa_bar * theta**params.beta


def _L_prime(theta, params):
    b = params.beta
    if b == 0:
        return params.kappa_bar * theta
    return params.kappa_bar * theta ** (b + 1.0) / (b + 1.0)


def continuity_rhs(state, mesh):
    """``tau_t`` on each element: the slope of ``u``."""
    return np.diff(state.u) / mesh.h


def effective_flux(state, mesh, params):
    """``mu(theta) u_x / tau - p`` on each element."""
    check_positivity(state)
    return _flux(state.tau, state.theta, np.diff(state.u) / mesh.h, params)


def _flux(tau, theta, s, params):
    return (_mu(theta, params) * s - params.K * theta) / tau


def momentum_rhs(state, mesh, params, system):
    """``u_t`` solving ``M u_t = load`` with ``load_i = F_{i+1} - F_i``."""
    flux = effective_flux(state, mesh, params)
    du = np.zeros(mesh.N + 1)
    du[1:-1] = system.solve(np.diff(flux))
    return du


def temperature_rhs(state, mesh, params):
    """``theta_t`` in flux form with zero diffusive flux at the boundary."""
    check_positivity(state)
    s = np.diff(state.u) / mesh.h
    return _theta_t(state.tau, state.theta, s, mesh.h, params)


def _theta_t(tau, theta, s, h, params):
    G = 2.0 / (tau[:-1] + tau[1:])
    phi = np.zeros(len(tau) + 1)
    phi[1:-1] = G * np.diff(_L_prime(theta, params))
    source = (_mu(theta, params) * s - params.K * theta) * s / tau
    out = np.diff(phi) / (h * h) + source
    if params.c_v != 1.0:
        out /= params.c_v
    return out


def rhs_arrays(tau, u, theta, mesh, params, system):
    """Unchecked array form of :func:`rhs`; returns ``(dtau, du, dtheta)``.

    Evaluated by the compiled kernel; :func:`continuity_rhs`,
    :func:`momentum_rhs` and :func:`temperature_rhs` are the numpy
    equivalents.
    """
    n = len(tau)
    dtau, du, dtheta = np.empty(n), np.empty(n + 1), np.empty(n)
    _kernels.rhs(
        np.asarray(tau, dtype=float), np.asarray(u, dtype=float), np.asarray(theta, dtype=float),
        constants(mesh, params), system.sub, system.cp, system.inv, dtau, du, dtheta,
    )
    return dtau, du, dtheta


def rhs(state, mesh, params, system):
    """Full semi-discrete right-hand side ``F(z)``."""
    check_positivity(state)
    return StateDerivative(*rhs_arrays(state.tau, state.u, state.theta, mesh, params, system))


def entropy_production(state, mesh, params):
    """Entropy dissipation rate: viscous part plus the interface jump part.

    Both parts are nonnegative since ``L'`` is increasing and ``1/theta``
    decreasing.
    """
    check_positivity(state)
    tau, theta = state.tau, state.theta
    s = np.diff(state.u) / mesh.h
    viscous = mesh.h * np.sum(_mu(theta, params) * s * s / (tau * theta))
    G = 2.0 / (tau[:-1] + tau[1:])
    conductive = -np.sum(G * np.diff(_L_prime(theta, params)) * np.diff(1.0 / theta)) / mesh.h
    return float(viscous + conductive)


def energy_rate(deriv, state, mesh, params):
    """``d/dt int(u^2/2 + c_v theta)`` from a derivative triple."""
    return float(
        mesh.h * params.c_v * np.sum(deriv.dtheta) + np.dot(gram_apply(deriv.du, mesh), state.u)
    )


def entropy_rate(deriv, state, mesh, params):
    """``d/dt`` of the entropy integral by the chain rule."""
    K, cv = params.K, params.c_v
    thermo = cv * (1.0 - 1.0 / state.theta) * deriv.dtheta + K * (1.0 - 1.0 / state.tau) * deriv.dtau
    return float(np.dot(gram_apply(deriv.du, mesh), state.u) + mesh.h * np.sum(thermo))
