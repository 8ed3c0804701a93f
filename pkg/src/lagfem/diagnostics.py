"""Run-time monitors: conservation, entropy, energy functionals and bounds."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .constitutive import L_prime
from .semidiscrete import constants

TIMESERIES_COLUMNS = (
    "t", "dt", "mass", "energy", "entropy", "entropy_production",
    "tau_min", "tau_max", "theta_min", "theta_max",
    "A", "B", "D", "omega_min", "omega_max",
)


def grad_u_norm(state, mesh):
    """``int |u_x|^2``."""
    s = np.diff(state.u) / mesh.h
    return float(mesh.h * np.dot(s, s))


def jump_energy(state, mesh, params):
    """``(1/h) sum_i G_i [[L'(theta)]]_i^2`` over interior nodes."""
    G = 2.0 / (state.tau[:-1] + state.tau[1:])
    dl = np.diff(L_prime(state.theta, params))
    return float(np.dot(G, dl * dl) / mesh.h)


def initial_omega(u0, mesh):
    """Element averages of ``x -> int_0^x u0`` for a nodal field ``u0``.

    The antiderivative is piecewise quadratic; its element mean is
    ``W(x_{j-1}) + h (2 a + b) / 6`` with ``a, b`` the end values of ``u0``.
    """
    a, b = u0[:-1], u0[1:]
    W = np.concatenate(([0.0], np.cumsum(0.5 * mesh.h * (a + b))))
    return W[:-1] + mesh.h * (2.0 * a + b) / 6.0


@dataclass
class FunctionalAccumulators:
    A_sup_grad: float = 0.0
    A_int_ut: float = 0.0
    B_sup_L: float = 0.0
    B_int_jump: float = 0.0
    D_sup_jump: float = 0.0
    D_int_kth: float = 0.0

    @property
    def A(self):
        return self.A_sup_grad + self.A_int_ut

    @property
    def B(self):
        return self.B_sup_L + self.B_int_jump

    @property
    def D(self):
        return self.D_sup_jump + self.D_int_kth


@dataclass
class BoundsMonitor:
    tau_min: float = math.inf
    tau_max: float = -math.inf
    theta_min: float = math.inf
    theta_max: float = -math.inf
    theta_Linf_time_integral: float = 0.0
    omega_min: float = math.inf
    omega_max: float = -math.inf


@dataclass
class ConditionAccumulators:
    """Pieces of the realized [C1]-[C3] constants."""

    theta_L2_sup: float = 0.0
    theta_jump_int: float = 0.0
    u_L2_sup: float = 0.0
    ux_int: float = 0.0
    mu_max: float = 0.0


class _Series:
    """Growable float table, one column per timeseries field."""

    def __init__(self, ncols):
        self._buf = np.empty((256, ncols))
        self._n = 0

    def append(self, row):
        if self._n == len(self._buf):
            self._buf = np.concatenate((self._buf, np.empty_like(self._buf)))
        self._buf[self._n] = row
        self._n += 1

    def array(self):
        return self._buf[: self._n].copy()


class Diagnostics:
    """Observer accumulating every monitored quantity along a run.

    Call as ``diag(step, state, derivative, dt)``; see
    :func:`lagfem.timestepper.advance`. Time integrals use the trapezoid
    rule over accepted steps.
    """

    def __init__(self, mesh, params, u0=None):
        self.mesh = mesh
        self.params = params
        self.acc = FunctionalAccumulators()
        self.bounds = BoundsMonitor()
        self.cond = ConditionAccumulators()
        self.omega = None
        self.cumulative_dissipation = 0.0
        self._u0 = u0
        self._prev = None
        self._series = _Series(len(TIMESERIES_COLUMNS))
        self.steps = []
        self._consts = constants(mesh, params)

    # integrands at one time level
    def _integrands(self, state, deriv):
        flux = np.empty(state.N)
        (mass, energy, entropy, dissipation, ut2, ux2, jump, kth, theta_jump,
         L_int, theta_l2sq, kinetic, tau_min, tau_max, theta_min, theta_max,
         mu_max) = _kernels.integrands(
            state.tau, state.u, state.theta, deriv.du, deriv.dtheta, self._consts, flux,
        )
        return {
            "mass": mass, "energy": energy, "entropy": entropy, "dissipation": dissipation,
            "ut2": ut2, "ux2": ux2, "jump": jump, "kth": kth, "theta_jump": theta_jump,
            "L_int": L_int, "theta_l2sq": theta_l2sq, "kinetic": kinetic,
            "tau_min": tau_min, "tau_max": tau_max, "theta_min": theta_min,
            "theta_inf": theta_max, "mu_max": mu_max, "flux": flux,
        }

    def __call__(self, step, state, deriv, dt):
        cur = self._integrands(state, deriv)
        acc, b, c = self.acc, self.bounds, self.cond

        if self._prev is None:
            u0 = state.u if self._u0 is None else self._u0
            self.omega = initial_omega(u0, self.mesh)
        else:
            prev = self._prev
            half = 0.5 * dt
            acc.A_int_ut += half * (prev["ut2"] + cur["ut2"])
            acc.B_int_jump += half * (prev["jump"] + cur["jump"])
            acc.D_int_kth += half * (prev["kth"] + cur["kth"])
            b.theta_Linf_time_integral += half * (prev["theta_inf"] + cur["theta_inf"])
            c.theta_jump_int += half * (prev["theta_jump"] + cur["theta_jump"])
            c.ux_int += half * (prev["ux2"] + cur["ux2"])
            self.cumulative_dissipation += half * (prev["dissipation"] + cur["dissipation"])
            self.omega = self.omega + half * (prev["flux"] + cur["flux"])
        self._prev = cur

        acc.A_sup_grad = max(acc.A_sup_grad, cur["ux2"])
        acc.B_sup_L = max(acc.B_sup_L, cur["L_int"])
        acc.D_sup_jump = max(acc.D_sup_jump, 0.5 * cur["jump"])

        b.tau_min = min(b.tau_min, cur["tau_min"])
        b.tau_max = max(b.tau_max, cur["tau_max"])
        b.theta_min = min(b.theta_min, cur["theta_min"])
        b.theta_max = max(b.theta_max, cur["theta_inf"])
        om_min, om_max = float(self.omega.min()), float(self.omega.max())
        b.omega_min = min(b.omega_min, om_min)
        b.omega_max = max(b.omega_max, om_max)

        c.theta_L2_sup = max(c.theta_L2_sup, math.sqrt(cur["theta_l2sq"]))
        c.u_L2_sup = max(c.u_L2_sup, math.sqrt(2.0 * cur["kinetic"]))
        c.mu_max = max(c.mu_max, cur["mu_max"])

        self._series.append((
            state.t, dt, cur["mass"], cur["energy"], cur["entropy"], cur["dissipation"],
            cur["tau_min"], cur["tau_max"], cur["theta_min"], cur["theta_inf"],
            acc.A, acc.B, acc.D, om_min, om_max,
        ))
        self.steps.append(step)

    def timeseries(self):
        """All observed rows as an array with :data:`TIMESERIES_COLUMNS`."""
        return self._series.array()

    def column(self, name):
        return self.timeseries()[:, TIMESERIES_COLUMNS.index(name)]

    @property
    def current_flux(self):
        return None if self._prev is None else self._prev["flux"]

    def summary(self):
        return RunSummary(
            acc=FunctionalAccumulators(**vars(self.acc)),
            bounds=BoundsMonitor(**vars(self.bounds)),
            cond=ConditionAccumulators(**vars(self.cond)),
            cumulative_dissipation=self.cumulative_dissipation,
        )


@dataclass(frozen=True)
class RunSummary:
    acc: FunctionalAccumulators
    bounds: BoundsMonitor
    cond: ConditionAccumulators
    cumulative_dissipation: float = 0.0


@dataclass(frozen=True)
class ConditionReport:
    C1: float
    C2: float
    C3: float
    theta_L2_sup: float
    theta_jump_int: float
    u_L2_sup: float
    ux_int: float
    B_sup_L: float
    notes: list = field(default_factory=list)

    def text(self):
        lines = [f"C1 = {self.C1!r}", f"C2 = {self.C2!r}", f"C3 = {self.C3!r}"]
        lines.extend(self.notes)
        return "\n".join(lines)


def check_C_conditions(summary, params):
    """Realized constants of the three convergence conditions for one run.

    Observations only; nothing here is treated as a failure. Degenerate
    lower bounds are reported as an infinite C1 with a note.
    """
    b, c = summary.bounds, summary.cond
    notes = []
    inv = []
    for name, value in (("tau", b.tau_min), ("theta", b.theta_min)):
        if not value > 0 or not np.isfinite(value):
            notes.append(f"C1 diverges: min {name} = {value!r} is not positive")
            inv.append(math.inf)
        else:
            inv.append(1.0 / value)
    mu_max = c.mu_max if c.mu_max > 0 else params.mu_bar
    C1 = max(inv[0], inv[1], mu_max)
    C2 = c.theta_L2_sup + c.theta_jump_int
    C3 = c.u_L2_sup + c.ux_int
    return ConditionReport(
        C1=C1, C2=C2, C3=C3,
        theta_L2_sup=c.theta_L2_sup, theta_jump_int=c.theta_jump_int,
        u_L2_sup=c.u_L2_sup, ux_int=c.ux_int, B_sup_L=summary.acc.B_sup_L,
        notes=notes,
    )
