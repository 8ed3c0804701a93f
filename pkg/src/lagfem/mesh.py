"""Uniform 1D mesh, dual mesh and the finite element field operations.

Fields are plain numpy arrays:

* a Q-field (piecewise constant) has one value per element, ``shape == (N,)``;
  element ``E_j`` (``j = 1..N``) is stored at offset ``j - 1``;
* a V-field (continuous piecewise linear) has one value per node,
  ``shape == (N + 1,)``; node ``x_i`` is stored at offset ``i``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# 3-point Gauss-Legendre rule on [-1, 1]
GAUSS_POINTS = np.array([-np.sqrt(3.0 / 5.0), 0.0, np.sqrt(3.0 / 5.0)])
GAUSS_WEIGHTS = np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])


@dataclass(frozen=True)
class Mesh:
    """Uniform partition of ``(0, L)`` into ``N`` elements."""

    L: float
    N: int

    def __post_init__(self):
        if not np.isfinite(self.L) or self.L <= 0:
            raise ValueError(f"domain length must be positive, got L={self.L!r}")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"need at least 2 elements, got N={self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self):
        return self.L / self.N

    @cached_property
    def nodes(self):
        x = np.arange(self.N + 1) * self.h
        x.flags.writeable = False
        return x

    @cached_property
    def centers(self):
        x = (np.arange(self.N) + 0.5) * self.h
        x.flags.writeable = False
        return x

    @cached_property
    def quadrature_points(self):
        """Gauss points, shape ``(N, 3)``."""
        pts = self.centers[:, None] + 0.5 * self.h * GAUSS_POINTS[None, :]
        pts.flags.writeable = False
        return pts

    def check_q(self, q, name="field"):
        q = np.asarray(q, dtype=float)
        if q.shape != (self.N,):
            raise ValueError(f"{name} must have {self.N} element values, got {q.shape}")
        return q

    def check_v(self, v, name="field"):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.N + 1,):
            raise ValueError(f"{name} must have {self.N + 1} nodal values, got {v.shape}")
        return v


def build_mesh(L, N):
    return Mesh(L, N)


@dataclass(frozen=True)
class DualMesh:
    """Dual mesh whose interior vertices are the primal element midpoints.

    Vertices are ``0, h/2, 3h/2, ..., L - h/2, L``; the two outermost
    intervals are the boundary half-cells.
    """

    mesh: Mesh

    @cached_property
    def vertices(self):
        v = np.concatenate(([0.0], self.mesh.centers, [self.mesh.L]))
        v.flags.writeable = False
        return v


def _as_values(f, x):
    vals = np.asarray(f(x), dtype=float)
    return np.broadcast_to(vals, np.shape(x)).astype(float)


def project_q(f, mesh):
    """Element averages of ``f`` by 3-point Gauss quadrature."""
    vals = _as_values(f, mesh.quadrature_points)
    return 0.5 * vals @ GAUSS_WEIGHTS


def interpolate_v(f, mesh):
    """Nodal interpolant of ``f``."""
    return _as_values(f, mesh.nodes).copy()


def gram_bands(mesh):
    """Consistent mass matrix of the full P1 space as (sub, diag, super)."""
    h = mesh.h
    diag = np.full(mesh.N + 1, 2.0 * h / 3.0)
    diag[0] = diag[-1] = h / 3.0
    off = np.full(mesh.N, h / 6.0)
    return off.copy(), diag, off.copy()


def gram_apply(v, mesh):
    """Mass-matrix product ``M v`` for a nodal field."""
    sub, diag, sup = gram_bands(mesh)
    out = diag * v
    out[:-1] += sup * v[1:]
    out[1:] += sub * v[:-1]
    return out


def gram_inner(a, b, mesh):
    """Exact L2 inner product of two piecewise linear fields."""
    return float(np.dot(a, gram_apply(b, mesh)))


def thomas_solve(sub, diag, sup, rhs):
    """Solve a tridiagonal system by Thomas elimination.

    ``sub[k]`` couples row ``k + 1`` to column ``k``; ``sup[k]`` couples row
    ``k`` to column ``k + 1``. No pivoting, so the matrix should be
    diagonally dominant or SPD.
    """
    n = len(diag)
    cp = np.empty(n)
    dp = np.empty(n)
    cp[0] = sup[0] / diag[0] if n > 1 else 0.0
    dp[0] = rhs[0] / diag[0]
    for k in range(1, n):
        denom = diag[k] - sub[k - 1] * cp[k - 1]
        if k < n - 1:
            cp[k] = sup[k] / denom
        dp[k] = (rhs[k] - sub[k - 1] * dp[k - 1]) / denom
    x = np.empty(n)
    x[-1] = dp[-1]
    for k in range(n - 2, -1, -1):
        x[k] = dp[k] - cp[k] * x[k + 1]
    return x


def hat_loads(f, mesh):
    """Load vector ``b_i = int f phi_i`` for all nodal hat functions."""
    vals = _as_values(f, mesh.quadrature_points)
    # hat restricted to an element: left-node and right-node shape functions
    left = 0.5 * (1.0 - GAUSS_POINTS)
    right = 0.5 * (1.0 + GAUSS_POINTS)
    w = 0.5 * mesh.h * GAUSS_WEIGHTS
    b = np.zeros(mesh.N + 1)
    b[:-1] += vals @ (w * left)
    b[1:] += vals @ (w * right)
    return b


def l2_project_v(f, mesh, zero_boundary=False):
    """L2 projection of ``f`` onto continuous piecewise linears.

    With ``zero_boundary`` the boundary rows are replaced by identity rows so
    the result is the best approximation among fields vanishing at both ends.
    """
    sub, diag, sup = gram_bands(mesh)
    b = hat_loads(f, mesh)
    if zero_boundary:
        diag[0] = diag[-1] = 1.0
        sup[0] = 0.0
        sub[-1] = 0.0
        b[0] = b[-1] = 0.0
    out = thomas_solve(sub, diag, sup, b)
    if zero_boundary:
        out[0] = out[-1] = 0.0
    return out


def jump(q, i):
    """``q|E_{i+1} - q|E_i`` for an interior node index ``i`` (1..N-1)."""
    n = len(q)
    if not 1 <= i <= n - 1:
        raise IndexError(f"jump index {i} outside 1..{n - 1}")
    return q[i] - q[i - 1]


def jumps(q):
    """All interior jumps, ``[jump(q, 1), ..., jump(q, N-1)]``."""
    return np.diff(q)


def slopes(v, mesh):
    """Elementwise derivative of a piecewise linear field."""
    return np.diff(v) / mesh.h


def lift_to_dual(q, mesh, dual=None):
    """Continuous piecewise linear lift of a Q-field onto the dual mesh.

    Returns ``(vertices, values)``. The lift equals ``q|E_j`` at the midpoint
    of ``E_j``, has slope ``jump(q, i) / h`` between consecutive midpoints
    and is constant on the boundary half-cells.
    """
    q = mesh.check_q(q)
    if dual is None:
        dual = DualMesh(mesh)
    values = np.concatenate(([q[0]], q, [q[-1]]))
    return dual.vertices, values


def evaluate_lift(q, mesh, x):
    verts, values = lift_to_dual(q, mesh)
    return np.interp(x, verts, values)
