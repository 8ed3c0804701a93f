"""Explicit SSP-RK3 time integration with a positivity guard."""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import PositivityViolation, StepFailure
from .semidiscrete import (
    StateDerivative, TridiagonalSystem, check_positivity, constants, rhs_arrays,
)
from .state import DiscreteState

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepControl:
    t_end: float
    cfl: float = 0.25
    safety: float = 0.9
    dt_min: float = None
    max_retries: int = 30
    progress_stride: int = 0
    compensated: bool = True

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end!r}")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl!r}")
        if not 0 < self.safety or self.cfl * self.safety > 1:
            raise ValueError("need safety > 0 and cfl*safety <= 1")
        if self.dt_min is None:
            object.__setattr__(self, "dt_min", 1e-12 * self.t_end)
        if not self.dt_min > 0:
            raise ValueError(f"dt_min must be positive, got {self.dt_min!r}")
        if self.max_retries < 0:
            raise ValueError("max_retries must be nonnegative")


def stable_dt(tau, theta, mesh, params):
    """Unscaled step bound ``min(dt_diff, dt_ac)`` for the given fields.

    ``dt_diff = h^2 min(tau) / (4 max(kappa/c_v, mu))`` and
    ``dt_ac = h / max(sqrt(K gamma theta) / tau)`` with ``gamma = 1 + K/c_v``.
    """
    return float(_kernels.stable_dt(tau, theta, constants(mesh, params)))


def select_dt(state, mesh, params, ctrl):
    check_positivity(state)
    return _clamp(_kernels.stable_dt(state.tau, state.theta, constants(mesh, params)), state, ctrl)


def _clamp(dt_stable, state, ctrl):
    dt = max(ctrl.safety * ctrl.cfl * dt_stable, ctrl.dt_min)
    return min(dt, ctrl.t_end - state.t)


_FIELDS = {_kernels.BAD_TAU: "tau", _kernels.BAD_THETA: "theta"}


def step_ssprk3(state, dt, mesh, params, system, k1=None, carry=None, consts=None):
    """One Shu-Osher SSP-RK3 step.

    ``k1`` may carry ``F(state)`` already evaluated by the caller. Every stage
    state is positivity-checked. ``carry`` enables compensated accumulation:
    pass a list of three low-order correction arrays (initially zeros); it
    is updated in place with the rounding error of the state update.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if k1 is None:
        check_positivity(state)
        k1 = rhs_arrays(state.tau, state.u, state.theta, mesh, params, system)
    else:
        k1 = (k1.dtau, k1.du, k1.dtheta)
    n = state.N
    out = (np.empty(n), np.empty(n + 1), np.empty(n))
    compensated = carry is not None
    if not compensated:
        carry = (np.zeros(n), np.zeros(n + 1), np.zeros(n))
    status, j, value = _kernels.ssprk3_step(
        state.tau, state.u, state.theta, *k1, float(dt),
        constants(mesh, params) if consts is None else consts,
        system.sub, system.cp, system.inv, *carry, compensated, *out,
    )
    if status != _kernels.OK:
        raise PositivityViolation(_FIELDS[status], int(j) + 1, float(value))
    return DiscreteState(out[0], out[1], out[2], state.t + dt)


@dataclass
class StepRecord:
    step: int
    t: float
    dt: float
    retries: int


@dataclass
class RunTrajectory:
    """Accepted-step records and sampled states of one run."""

    records: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    final_state: DiscreteState = None
    final_derivative: StateDerivative = None

    @property
    def times(self):
        return np.array([r.t for r in self.records])

    @property
    def total_retries(self):
        return sum(r.retries for r in self.records)

    @property
    def n_steps(self):
        return len(self.records) - 1


def advance(state, mesh, params, ctrl, observers=(), sample_stride=0, system=None):
    """Integrate from ``state`` to ``ctrl.t_end``.

    Observers are called as ``obs(step, state, derivative, dt)`` for the
    initial state (``dt = 0``) and after every accepted step, where
    ``derivative`` is ``F(state)``. States are sampled every
    ``sample_stride`` accepted steps (0 keeps only the initial and final
    state).
    """
    if system is None:
        system = TridiagonalSystem(mesh)
    check_positivity(state)
    consts = constants(mesh, params)

    def F(z):
        n = z.N
        out = (np.empty(n), np.empty(n + 1), np.empty(n))
        _kernels.rhs(z.tau, z.u, z.theta, consts, system.sub, system.cp, system.inv, *out)
        return StateDerivative(*out)

    traj = RunTrajectory()
    deriv = F(state)
    traj.records.append(StepRecord(0, state.t, 0.0, 0))
    traj.samples.append((0, state))
    for obs in observers:
        obs(0, state, deriv, 0.0)

    step = 0
    carry = [np.zeros_like(state.tau), np.zeros_like(state.u), np.zeros_like(state.theta)]
    # stop when the remaining interval is below rounding of t_end
    t_tol = 4.0 * np.finfo(float).eps * max(1.0, abs(ctrl.t_end))
    while ctrl.t_end - state.t > t_tol:
        # accepted states are already positivity-checked
        dt = _clamp(_kernels.stable_dt(state.tau, state.theta, consts), state, ctrl)
        retries = 0
        while True:
            try:
                new = step_ssprk3(
                    state, dt, mesh, params, system, k1=deriv,
                    carry=carry if ctrl.compensated else None, consts=consts,
                )
                break
            except PositivityViolation as exc:
                retries += 1
                dt *= 0.5
                if retries > ctrl.max_retries or dt < ctrl.dt_min:
                    raise StepFailure(state.t, dt, retries, exc) from exc
        step += 1
        if ctrl.t_end - new.t <= t_tol:
            new = DiscreteState(new.tau, new.u, new.theta, ctrl.t_end)
        state = new
        deriv = F(state)
        traj.records.append(StepRecord(step, state.t, dt, retries))
        if sample_stride and step % sample_stride == 0:
            traj.samples.append((step, state))
        for obs in observers:
            obs(step, state, deriv, dt)
        if ctrl.progress_stride and step % ctrl.progress_stride == 0:
            log.info("t=%.6e dt=%.3e retries=%d", state.t, dt, retries)

    if traj.samples[-1][0] != step:
        traj.samples.append((step, state))
    traj.final_state = state
    traj.final_derivative = deriv
    return traj
