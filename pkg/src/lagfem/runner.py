"""Single-run driver tying initial data, stepper and diagnostics together."""

from dataclasses import dataclass, field

from .diagnostics import Diagnostics, check_C_conditions
from .semidiscrete import TridiagonalSystem
from .state import init_state
from .timestepper import advance


@dataclass
class FieldSnapshot:
    step: int
    state: object
    flux: object
    omega: object


@dataclass
class RunResult:
    config: object
    mesh: object
    params: object
    initial_state: object
    record: object
    trajectory: object
    diagnostics: Diagnostics
    snapshots: list = field(default_factory=list)

    @property
    def final_state(self):
        return self.trajectory.final_state

    @property
    def conditions(self):
        return check_C_conditions(self.diagnostics.summary(), self.params)


def run(config, extra_observers=()):
    """Execute one run described by a :class:`~lagfem.config.RunConfig`."""
    mesh = config.build_mesh()
    params = config.physical_params()
    ctrl = config.step_control()
    state0, record = init_state(config.initial_condition(), mesh, params)
    diag = Diagnostics(mesh, params)
    snapshots = []
    stride = config.output.field_stride

    def snap(step, state, deriv, dt):
        if step == 0 or (stride and step % stride == 0):
            snapshots.append(FieldSnapshot(step, state, diag.current_flux, diag.omega))

    traj = advance(
        state0, mesh, params, ctrl,
        observers=(diag, snap, *extra_observers),
        system=TridiagonalSystem(mesh),
    )
    last = traj.records[-1].step
    if snapshots[-1].step != last:
        snapshots.append(FieldSnapshot(last, traj.final_state, diag.current_flux, diag.omega))
    return RunResult(config, mesh, params, state0, record, traj, diag, snapshots)
