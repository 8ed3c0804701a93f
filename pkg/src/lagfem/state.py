"""Discrete unknowns, initial data and the conserved/entropy integrals."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PositivityViolation
from .mesh import l2_project_v, project_q


def _first_nonpositive(arr, name):
    if arr.min() > 0:
        return
    bad = ~(arr > 0)
    if bad.any():
        j = int(np.argmax(bad))
        raise PositivityViolation(name, j + 1, float(arr[j]))


@dataclass(frozen=True, eq=False)
class DiscreteState:
    """``(tau, u, theta)`` at time ``t``.

    ``tau`` and ``theta`` are element values, ``u`` nodal values vanishing at
    both boundary nodes.
    """

    tau: np.ndarray
    u: np.ndarray
    theta: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        n = len(self.tau)
        if len(self.theta) != n or len(self.u) != n + 1:
            raise ValueError(
                f"inconsistent field sizes: tau {len(self.tau)}, "
                f"u {len(self.u)}, theta {len(self.theta)}"
            )
        if self.u[0] != 0.0 or self.u[-1] != 0.0:
            raise ValueError("velocity must vanish at the boundary nodes")
        _first_nonpositive(self.tau, "tau")
        _first_nonpositive(self.theta, "theta")

    @property
    def N(self):
        return len(self.tau)

    def copy(self):
        return DiscreteState(self.tau.copy(), self.u.copy(), self.theta.copy(), self.t)


@dataclass(frozen=True)
class InvariantRegionRecord:
    """Initial mass, energy and log-moment bounding the discrete flow."""

    mass0: float
    energy0: float
    logmoment0: float


# --- initial conditions ----------------------------------------------------

PRESETS = {
    "constant": "uniform base state; parameters tau, u, theta (defaults 1, 0, 1)",
    "gaussian_theta": "theta += amplitude*exp(-(x-center)^2/width^2); "
    "defaults amplitude=1, center=L/2, width=0.1*L",
    "shear_u": "u += amplitude*sin(pi*x/L); default amplitude=0.5",
}

_PRESET_PARAMS = {
    "constant": {"tau", "u", "theta"},
    "gaussian_theta": {"amplitude", "center", "width"},
    "shear_u": {"amplitude"},
}


@dataclass
class InitialCondition:
    """Initial profiles as vectorized callables on ``(0, L)``."""

    tau0: object
    u0: object
    theta0: object
    description: list = field(default_factory=list)

    @classmethod
    def from_presets(cls, presets, L):
        """Compose named presets in order.

        Each entry is a mapping with ``name`` plus preset parameters. The base
        state is ``constant`` with defaults unless a ``constant`` entry sets it;
        the other presets add perturbations to it.
        """
        base = {"tau": 1.0, "u": 0.0, "theta": 1.0}
        perturb_theta = []
        perturb_u = []
        desc = []
        for entry in presets:
            entry = dict(entry)
            name = entry.pop("name")
            if name not in PRESETS:
                raise ValueError(f"unknown initial-condition preset {name!r}")
            unknown = set(entry) - _PRESET_PARAMS[name]
            if unknown:
                raise ValueError(f"preset {name!r}: unknown parameters {sorted(unknown)}")
            if name == "constant":
                base.update({k: float(v) for k, v in entry.items()})
            elif name == "gaussian_theta":
                a = float(entry.get("amplitude", 1.0))
                c = float(entry.get("center", 0.5 * L))
                w = float(entry.get("width", 0.1 * L))
                if w <= 0:
                    raise ValueError("gaussian_theta: width must be positive")
                perturb_theta.append(lambda x, a=a, c=c, w=w: a * np.exp(-((x - c) ** 2) / w**2))
            elif name == "shear_u":
                a = float(entry.get("amplitude", 0.5))
                perturb_u.append(lambda x, a=a: a * np.sin(np.pi * x / L))
            desc.append(name)

        def tau0(x):
            return np.full(np.shape(x), base["tau"])

        def u0(x):
            return base["u"] + sum((p(x) for p in perturb_u), np.zeros(np.shape(x)))

        def theta0(x):
            return base["theta"] + sum((p(x) for p in perturb_theta), np.zeros(np.shape(x)))

        return cls(tau0, u0, theta0, desc)

    @classmethod
    def tabulated(cls, x, tau, u, theta):
        """Piecewise linear interpolation of sampled profiles."""
        x = np.asarray(x, dtype=float)
        if np.any(np.diff(x) <= 0):
            raise ValueError("tabulated x must be strictly increasing")
        cols = [np.asarray(c, dtype=float) for c in (tau, u, theta)]
        for c in cols:
            if c.shape != x.shape:
                raise ValueError("tabulated columns must match x in length")
        fns = [lambda y, c=c: np.interp(y, x, c) for c in cols]
        return cls(*fns, ["tabulated"])


# --- integrals -------------------------------------------------------------

def kinetic_energy(u, mesh):
    """Exact ``int u^2/2`` for a piecewise linear ``u`` (Simpson per element)."""
    a, b = u[:-1], u[1:]
    return mesh.h / 6.0 * math.fsum(a * a + a * b + b * b)


def total_mass(state, mesh):
    return mesh.h * math.fsum(state.tau)


def total_energy(state, mesh, params):
    # correctly rounded sums: energy drift is monitored near rounding level
    a, b = state.u[:-1], state.u[1:]
    kin = (mesh.h / 6.0) * (a * a + a * b + b * b)
    return math.fsum(np.concatenate((kin, (mesh.h * params.c_v) * state.theta)))


def log_moment(state, mesh, params):
    """``int c_v log(theta) + K log(tau)``."""
    return float(mesh.h * np.sum(params.c_v * np.log(state.theta) + params.K * np.log(state.tau)))


def entropy_integral(state, mesh, params):
    K, cv = params.K, params.c_v
    tau, theta = state.tau, state.theta
    thermo = cv * theta + K * tau - cv * np.log(theta) - K * np.log(tau)
    return kinetic_energy(state.u, mesh) + float(mesh.h * np.sum(thermo))


def init_state(ic, mesh, params):
    """Project initial data onto the discrete spaces.

    Returns the state and the invariant-region record it defines.
    """
    tau = project_q(ic.tau0, mesh)
    theta = project_q(ic.theta0, mesh)
    _first_nonpositive(tau, "tau")
    _first_nonpositive(theta, "theta")
    u = l2_project_v(ic.u0, mesh, zero_boundary=True)
    state = DiscreteState(tau, u, theta, 0.0)
    record = InvariantRegionRecord(
        mass0=total_mass(state, mesh),
        energy0=total_energy(state, mesh, params),
        logmoment0=log_moment(state, mesh, params),
    )
    return state, record


@dataclass(frozen=True)
class InvariantRegionReport:
    mass_ok: bool
    energy_ok: bool
    logmoment_ok: bool
    mass_slack: float
    energy_slack: float
    logmoment_slack: float

    @property
    def ok(self):
        return self.mass_ok and self.energy_ok and self.logmoment_ok


def check_invariant_region(state, record, mesh, params, tol=1e-8):
    """Compare a state with the invariant set defined by the initial data.

    Slacks are signed: ``mass - mass0``, ``energy - energy0`` and
    ``logmoment - logmoment0``.
    """
    dm = total_mass(state, mesh) - record.mass0
    de = total_energy(state, mesh, params) - record.energy0
    dl = log_moment(state, mesh, params) - record.logmoment0
    return InvariantRegionReport(
        mass_ok=abs(dm) <= tol,
        energy_ok=abs(de) <= tol,
        logmoment_ok=dl >= -tol,
        mass_slack=dm,
        energy_slack=de,
        logmoment_slack=dl,
    )
