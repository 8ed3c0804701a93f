"""Independent reference computations used by the tests.

The weak-form oracle assembles every integral by quadrature against explicit
basis functions and solves with dense linear algebra; it never calls the
solver's flux/jump helpers.
"""

import numpy as np

GP = np.array([-np.sqrt(3.0 / 5.0), 0.0, np.sqrt(3.0 / 5.0)])
GW = np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])


def hat(i, x, nodes):
    """Value and derivative of the i-th nodal hat function at points x."""
    h = nodes[1] - nodes[0]
    val = np.zeros_like(x)
    der = np.zeros_like(x)
    if i > 0:
        m = (x >= nodes[i - 1]) & (x < nodes[i])
        val[m] = (x[m] - nodes[i - 1]) / h
        der[m] = 1.0 / h
    if i < len(nodes) - 1:
        m = (x >= nodes[i]) & (x < nodes[i + 1])
        val[m] = (nodes[i + 1] - x[m]) / h
        der[m] = -1.0 / h
    return val, der


def element_quadrature(nodes):
    """Gauss points (one row per element) and matching weights."""
    h = nodes[1] - nodes[0]
    centers = 0.5 * (nodes[:-1] + nodes[1:])
    x = centers[:, None] + 0.5 * h * GP[None, :]
    w = np.broadcast_to(0.5 * h * GW, x.shape)
    return x, w


def weak_form_rhs(tau, u, theta, L, K, mu_bar, kappa_bar, alpha, beta):
    """(u_t, theta_t) by brute-force Galerkin assembly."""
    N = len(tau)
    nodes = np.linspace(0.0, L, N + 1)
    h = L / N
    xq, wq = element_quadrature(nodes)
    elem = np.repeat(np.arange(N)[:, None], 3, axis=1)
    tq, thq = tau[elem], theta[elem]

    ux = np.zeros_like(xq)
    for i in range(N + 1):
        _, d = hat(i, xq, nodes)
        ux += u[i] * d
    mu = mu_bar * thq**alpha
    p = K * thq / tq
    stress = mu * ux / tq - p

    # momentum: interior test functions only
    interior = range(1, N)
    M = np.zeros((N - 1, N - 1))
    b = np.zeros(N - 1)
    for a, i in enumerate(interior):
        vi, di = hat(i, xq, nodes)
        b[a] = -np.sum(wq * stress * di)
        for c, j in enumerate(interior):
            vj, _ = hat(j, xq, nodes)
            M[a, c] = np.sum(wq * vi * vj)
    du = np.zeros(N + 1)
    du[1:-1] = np.linalg.solve(M, b)

    # temperature: piecewise-constant test functions
    Lp = kappa_bar * theta ** (beta + 1.0) / (beta + 1.0)
    source = mu * ux**2 / tq - p * ux
    dtheta = np.zeros(N)
    for j in range(N):
        psi = np.zeros(N)
        psi[j] = 1.0
        psi_q = psi[elem]
        mass = np.sum(wq * psi_q * psi_q)
        jump_term = 0.0
        for i in range(1, N):
            G = 2.0 / (tau[i - 1] + tau[i])
            jump_term += G * (Lp[i] - Lp[i - 1]) * (psi[i] - psi[i - 1])
        jump_term /= h
        dtheta[j] = (np.sum(wq * source * psi_q) - jump_term) / mass
    return du, dtheta


def random_state(rng, N, L=1.0):
    tau = rng.uniform(0.5, 2.0, N)
    theta = rng.uniform(0.5, 3.0, N)
    u = np.zeros(N + 1)
    u[1:-1] = rng.uniform(-1.0, 1.0, N - 1)
    return tau, u, theta


def random_params(rng):
    from lagfem.constitutive import PhysicalParams

    return PhysicalParams(
        K=rng.uniform(0.2, 2.0),
        mu_bar=rng.uniform(0.1, 2.0),
        kappa_bar=rng.uniform(0.1, 2.0),
        alpha=rng.choice([0.0, rng.uniform(0.0, 1.0)]),
        beta=rng.uniform(0.0, 1.9),
    )
