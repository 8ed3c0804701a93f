"""Self-convergence study over nested uniform meshes."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import StepFailure
from .mesh import gram_apply
from .runner import run


def _ratio(fine_mesh, coarse_mesh):
    r, rem = divmod(fine_mesh.N, coarse_mesh.N)
    if rem or r < 1 or not math.isclose(fine_mesh.L, coarse_mesh.L, rel_tol=1e-14):
        raise ValueError(
            f"meshes are not nested: N={fine_mesh.N} over N={coarse_mesh.N}, "
            f"L={fine_mesh.L} vs {coarse_mesh.L}"
        )
    return r


def restrict_q(fine, fine_mesh, coarse_mesh):
    """Average fine element values over each coarse element."""
    r = _ratio(fine_mesh, coarse_mesh)
    return np.asarray(fine, dtype=float).reshape(coarse_mesh.N, r).mean(axis=1)


def restrict_v(fine, fine_mesh, coarse_mesh):
    """Sample fine nodal values at the coarse nodes."""
    r = _ratio(fine_mesh, coarse_mesh)
    return np.asarray(fine, dtype=float)[::r].copy()


def l2_distance_q(a, b, mesh):
    a, b = mesh.check_q(a), mesh.check_q(b)
    d = a - b
    return math.sqrt(mesh.h * float(np.dot(d, d)))


def l2_distance_v(a, b, mesh):
    a, b = mesh.check_v(a), mesh.check_v(b)
    d = a - b
    return math.sqrt(max(float(np.dot(d, gram_apply(d, mesh))), 0.0))


def _rate(e_coarse, e_fine):
    if e_coarse > 0 and e_fine > 0:
        return math.log2(e_coarse / e_fine)
    return math.nan


@dataclass
class LevelResult:
    level: int
    N: int
    final_state: object
    mesh: object
    conditions: object
    functional_total: float
    tau_min: float
    theta_min: float


@dataclass
class RefinementStudy:
    base_N: int
    levels: int
    results: list = field(default_factory=list)
    errors: list = field(default_factory=list)  # dicts with tau/u/theta, len levels-1
    rates: list = field(default_factory=list)   # dicts with tau/u/theta, len levels-2

    def error_column(self, name):
        return np.array([e[name] for e in self.errors])

    def rate_column(self, name):
        return np.array([r[name] for r in self.rates])

    def constants(self, name):
        return np.array([getattr(r.conditions, name) for r in self.results])


def run_level(config, level):
    res = run(config)
    acc = res.diagnostics.acc
    b = res.diagnostics.bounds
    return LevelResult(
        level=level,
        N=res.mesh.N,
        final_state=res.final_state,
        mesh=res.mesh,
        conditions=res.conditions,
        functional_total=acc.A + acc.B + acc.D,
        tau_min=b.tau_min,
        theta_min=b.theta_min,
    )


def _run_level_safe(args):
    config, level = args
    try:
        return run_level(config, level)
    except StepFailure as exc:
        exc.args = (f"level {level} (N={config.mesh.N}): {exc}",)
        raise


def run_refinement_study(config, levels, max_workers=1):
    """Run ``levels`` nested resolutions ``N0 * 2**k`` and compare them.

    ``config.mesh.N`` is the base resolution. Errors compare level ``k``
    with level ``k + 1`` restricted to the coarser mesh; rates are
    ``log2(e_k / e_{k+1})`` (NaN when an error vanishes).
    """
    if levels < 3:
        raise ValueError(f"a refinement study needs at least 3 levels, got {levels}")
    n0 = config.mesh.N
    configs = [config.with_updates(mesh={"N": n0 * 2**k}) for k in range(levels)]
    jobs = [(c, k) for k, c in enumerate(configs)]
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_run_level_safe, jobs))
    else:
        results = [_run_level_safe(j) for j in jobs]

    study = RefinementStudy(base_N=n0, levels=levels, results=results)
    for coarse, fine in zip(results, results[1:]):
        cm, fm = coarse.mesh, fine.mesh
        cs, fs = coarse.final_state, fine.final_state
        study.errors.append({
            "tau": l2_distance_q(cs.tau, restrict_q(fs.tau, fm, cm), cm),
            "u": l2_distance_v(cs.u, restrict_v(fs.u, fm, cm), cm),
            "theta": l2_distance_q(cs.theta, restrict_q(fs.theta, fm, cm), cm),
        })
    for e0, e1 in zip(study.errors, study.errors[1:]):
        study.rates.append({k: _rate(e0[k], e1[k]) for k in ("tau", "u", "theta")})
    return study
