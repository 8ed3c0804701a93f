"""CSV/JSON writers for runs and refinement studies.

Floats are written with ``repr`` so every value round-trips exactly.
"""

import csv
import json
import math
import os
from pathlib import Path

from . import __version__
from .config import serialize_config
from .diagnostics import TIMESERIES_COLUMNS

ELEMENT_HEADER = ("j", "x_left", "x_right", "tau", "theta", "F", "omega")
NODE_HEADER = ("i", "x", "u")
RATES_HEADER = (
    "level", "N", "e_tau", "e_u", "e_theta", "r_tau", "r_u", "r_theta", "C1", "C2", "C3",
)


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    return repr(value)


def _write_rows(path, header, rows):
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def write_timeseries(path, rows, stride=1):
    """Write diagnostics rows, keeping every ``stride``-th plus the last."""
    rows = list(rows)
    keep = [r for k, r in enumerate(rows) if k % stride == 0]
    if rows and (len(rows) - 1) % stride != 0:
        keep.append(rows[-1])
    return _write_rows(path, TIMESERIES_COLUMNS, keep)


def write_fields(directory, step, state, mesh, flux=None, omega=None):
    """Write ``elements_<step>.csv`` and ``nodes_<step>.csv``."""
    directory = Path(directory)
    x = mesh.nodes
    n = mesh.N
    flux = [None] * n if flux is None else flux
    omega = [None] * n if omega is None else omega
    elements = (
        (j + 1, x[j], x[j + 1], state.tau[j], state.theta[j], flux[j], omega[j])
        for j in range(n)
    )
    nodes = ((i, x[i], state.u[i]) for i in range(n + 1))
    tag = f"{step:06d}"
    return (
        _write_rows(directory / f"elements_{tag}.csv", ELEMENT_HEADER, elements),
        _write_rows(directory / f"nodes_{tag}.csv", NODE_HEADER, nodes),
    )


def rates_rows(study):
    rows = []
    for k, res in enumerate(study.results):
        e = study.errors[k] if k < len(study.errors) else None
        r = study.rates[k] if k < len(study.rates) else None
        c = res.conditions
        rows.append((
            k, res.N,
            *(e[f] if e else None for f in ("tau", "u", "theta")),
            *(r[f] if r else None for f in ("tau", "u", "theta")),
            c.C1, c.C2, c.C3,
        ))
    return rows


def write_rates(path, study):
    return _write_rows(path, RATES_HEADER, rates_rows(study))


def write_manifest(path, config, **extra):
    data = {
        "code_version": __version__,
        "config": json.loads(serialize_config(config)),
        "regime_warnings": config.regime_warnings,
        "u_t_norm": "consistent Gram (mass matrix) form",
        "D_sup_term": "jump form (1/2h) sum G_i [[L'(theta)]]_i^2",
    }
    data.update(extra)
    path = Path(path)
    try:
        with open(path, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True, allow_nan=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def write_run(result, directory=None):
    """Write all outputs of a :class:`~lagfem.runner.RunResult`."""
    cfg = result.config
    directory = Path(directory if directory is not None else cfg.output.directory)
    os.makedirs(directory, exist_ok=True)
    write_timeseries(directory / "timeseries.csv", result.diagnostics.timeseries(),
                     cfg.output.timeseries_stride)
    for snap in result.snapshots:
        write_fields(directory, snap.step, snap.state, result.mesh, snap.flux, snap.omega)
    d = result.diagnostics
    cond = result.conditions
    write_manifest(
        directory / "manifest.json", cfg,
        status="completed",
        steps=result.trajectory.n_steps,
        retries=result.trajectory.total_retries,
        final_time=result.final_state.t,
        functionals={"A": d.acc.A, "B": d.acc.B, "D": d.acc.D, **vars(d.acc)},
        bounds=vars(d.bounds),
        conditions={"C1": cond.C1, "C2": cond.C2, "C3": cond.C3, "notes": cond.notes},
        cumulative_dissipation=d.cumulative_dissipation,
    )
    return directory
