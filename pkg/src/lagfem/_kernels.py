"""Compiled inner loops for the right-hand side and the SSP-RK3 step.

These mirror the array formulas in :mod:`lagfem.semidiscrete` element by
element; the pure numpy versions there remain the reference and are checked
against these in the tests. Material constants are passed as a tuple
``(h, K, c_v, mu_bar, alpha, kappa_bar, beta)``.
"""

import numpy as np
from numba import njit

# status codes returned by ssprk3_step
OK = 0
BAD_TAU = 1
BAD_THETA = 2


@njit(cache=True)
def thomas_factor(sub, diag, sup):
    """Elimination multipliers ``cp`` and reciprocal pivots for Thomas."""
    n = diag.shape[0]
    cp = np.zeros(n)
    inv = np.empty(n)
    inv[0] = 1.0 / diag[0]
    if n > 1:
        cp[0] = sup[0] * inv[0]
    for k in range(1, n):
        inv[k] = 1.0 / (diag[k] - sub[k - 1] * cp[k - 1])
        if k < n - 1:
            cp[k] = sup[k] * inv[k]
    return cp, inv


@njit(cache=True)
def thomas_apply(sub, cp, inv, rhs, out):
    n = rhs.shape[0]
    out[0] = rhs[0] * inv[0]
    for k in range(1, n):
        out[k] = (rhs[k] - sub[k - 1] * out[k - 1]) * inv[k]
    for k in range(n - 2, -1, -1):
        out[k] -= cp[k] * out[k + 1]


@njit(cache=True)
def rhs(tau, u, theta, c, sub, cp, inv, dtau, du, dtheta):
    h, K, cv, mu_bar, alpha, kappa_bar, beta = c
    n = tau.shape[0]
    flux = np.empty(n)
    lp = np.empty(n)
    for j in range(n):
        s = (u[j + 1] - u[j]) / h
        dtau[j] = s
        mu = mu_bar if alpha == 0.0 else mu_bar * theta[j] ** alpha
        flux[j] = (mu * s - K * theta[j]) / tau[j]
        if beta == 0.0:
            lp[j] = kappa_bar * theta[j]
        else:
            lp[j] = kappa_bar * theta[j] ** (beta + 1.0) / (beta + 1.0)

    # momentum: interior Gram system with loads F_{i+1} - F_i
    load = np.empty(n - 1)
    for i in range(n - 1):
        load[i] = flux[i + 1] - flux[i]
    du[0] = 0.0
    du[n] = 0.0
    thomas_apply(sub, cp, inv, load, du[1:n])

    # temperature: diffusive fluxes through interior interfaces
    hh = h * h
    for j in range(n):
        dtheta[j] = flux[j] * dtau[j]
    for i in range(n - 1):
        phi = 2.0 * (lp[i + 1] - lp[i]) / (tau[i] + tau[i + 1]) / hh
        dtheta[i] += phi
        dtheta[i + 1] -= phi
    if cv != 1.0:
        for j in range(n):
            dtheta[j] /= cv


@njit(cache=True)
def stable_dt(tau, theta, c):
    """``min(dt_diff, dt_ac)``; see :func:`lagfem.timestepper.stable_dt`."""
    h, K, cv, mu_bar, alpha, kappa_bar, beta = c
    tau_min = np.inf
    theta_max = 0.0
    c2_max = 0.0
    for j in range(tau.shape[0]):
        tau_min = min(tau_min, tau[j])
        theta_max = max(theta_max, theta[j])
        c2_max = max(c2_max, theta[j] / (tau[j] * tau[j]))
    mu_max = mu_bar if alpha == 0.0 else mu_bar * theta_max**alpha
    kappa_max = kappa_bar if beta == 0.0 else kappa_bar * theta_max**beta
    kappa_max /= cv
    dt_diff = h * h * tau_min / (4.0 * max(kappa_max, mu_max))
    dt_ac = h / np.sqrt(K * (1.0 + K / cv) * c2_max)
    return min(dt_diff, dt_ac)


@njit(cache=True)
def _first_bad(tau, theta):
    for j in range(tau.shape[0]):
        if not tau[j] > 0.0:
            return BAD_TAU, j, tau[j]
    for j in range(theta.shape[0]):
        if not theta[j] > 0.0:
            return BAD_THETA, j, theta[j]
    return OK, -1, 0.0


@njit(cache=True)
def ssprk3_step(tau, u, theta, k1t, k1u, k1h, dt, c, sub, cp, inv,
                carry_t, carry_u, carry_h, compensated, out_t, out_u, out_h):
    """One Shu-Osher SSP-RK3 step into ``out_*``.

    Returns ``(status, element, value)``; on failure the outputs are
    undefined and the carries untouched.
    """
    n = tau.shape[0]
    t1 = np.empty(n)
    u1 = np.empty(n + 1)
    h1 = np.empty(n)
    for j in range(n):
        t1[j] = tau[j] + dt * k1t[j]
        h1[j] = theta[j] + dt * k1h[j]
    for i in range(n + 1):
        u1[i] = u[i] + dt * k1u[i]
    st, j, v = _first_bad(t1, h1)
    if st != OK:
        return st, j, v
    k2t = np.empty(n)
    k2u = np.empty(n + 1)
    k2h = np.empty(n)
    rhs(t1, u1, h1, c, sub, cp, inv, k2t, k2u, k2h)

    t2 = np.empty(n)
    u2 = np.empty(n + 1)
    h2 = np.empty(n)
    for j in range(n):
        t2[j] = 0.75 * tau[j] + 0.25 * (t1[j] + dt * k2t[j])
        h2[j] = 0.75 * theta[j] + 0.25 * (h1[j] + dt * k2h[j])
    for i in range(n + 1):
        u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * k2u[i])
    st, j, v = _first_bad(t2, h2)
    if st != OK:
        return st, j, v
    k3t = np.empty(n)
    k3u = np.empty(n + 1)
    k3h = np.empty(n)
    rhs(t2, u2, h2, c, sub, cp, inv, k3t, k3u, k3h)

    # z/3 + 2/3 (z2 + dt k3) written as z + dt (k1 + k2 + 4 k3) / 6,
    # accumulated with Fast2Sum when compensated
    w = dt / 6.0
    lo_t = np.empty(n)
    lo_u = np.empty(n + 1)
    lo_h = np.empty(n)
    for j in range(n):
        d = w * (k1t[j] + k2t[j] + 4.0 * k3t[j])
        e = w * (k1h[j] + k2h[j] + 4.0 * k3h[j])
        if compensated:
            d += carry_t[j]
            e += carry_h[j]
        out_t[j] = tau[j] + d
        out_h[j] = theta[j] + e
        lo_t[j] = d - (out_t[j] - tau[j])
        lo_h[j] = e - (out_h[j] - theta[j])
    for i in range(n + 1):
        d = w * (k1u[i] + k2u[i] + 4.0 * k3u[i])
        if compensated:
            d += carry_u[i]
        out_u[i] = u[i] + d
        lo_u[i] = d - (out_u[i] - u[i])
    out_u[0] = 0.0
    out_u[n] = 0.0
    lo_u[0] = 0.0
    lo_u[n] = 0.0
    st, j, v = _first_bad(out_t, out_h)
    if st != OK:
        return st, j, v
    if compensated:
        carry_t[:] = lo_t
        carry_u[:] = lo_u
        carry_h[:] = lo_h
    return OK, -1, 0.0


@njit(cache=True)
def _neumaier(acc, comp, x):
    t = acc + x
    if abs(acc) >= abs(x):
        comp += (acc - t) + x
    else:
        comp += (x - t) + acc
    return t, comp


@njit(cache=True)
def integrands(tau, u, theta, du, dtheta, c, flux):
    """Every per-step diagnostic integral in one pass.

    Fills ``flux`` with the effective viscous flux and returns
    ``(mass, energy, entropy, dissipation, ut2, ux2, jump, kth, theta_jump,
    L_int, theta_l2sq, kinetic, tau_min, tau_max, theta_min, theta_max,
    mu_max)``. Mass and energy use compensated summation.
    """
    h, K, cv, mu_bar, alpha, kappa_bar, beta = c
    n = tau.shape[0]
    m_acc = 0.0
    m_c = 0.0
    e_acc = 0.0
    e_c = 0.0
    kin = 0.0
    ent = 0.0
    visc = 0.0
    ut2 = 0.0
    ux2 = 0.0
    kth = 0.0
    L_int = 0.0
    th2 = 0.0
    tau_min = np.inf
    tau_max = -np.inf
    th_min = np.inf
    th_max = -np.inf
    mu_max = 0.0
    for j in range(n):
        a = u[j]
        b = u[j + 1]
        s = (b - a) / h
        th = theta[j]
        tj = tau[j]
        mu = mu_bar if alpha == 0.0 else mu_bar * th**alpha
        kap = kappa_bar if beta == 0.0 else kappa_bar * th**beta
        flux[j] = (mu * s - K * th) / tj
        q = (h / 6.0) * (a * a + a * b + b * b)
        kin += q
        m_acc, m_c = _neumaier(m_acc, m_c, h * tj)
        e_acc, e_c = _neumaier(e_acc, e_c, q)
        e_acc, e_c = _neumaier(e_acc, e_c, (h * cv) * th)
        ent += cv * th + K * tj - cv * np.log(th) - K * np.log(tj)
        visc += mu * s * s / (tj * th)
        da = du[j]
        db = du[j + 1]
        ut2 += (h / 3.0) * (da * da + da * db + db * db)
        ux2 += s * s
        kth += kap * dtheta[j] * dtheta[j]
        L_int += kappa_bar * th ** (beta + 2.0) / ((beta + 1.0) * (beta + 2.0))
        th2 += th * th
        tau_min = min(tau_min, tj)
        tau_max = max(tau_max, tj)
        th_min = min(th_min, th)
        th_max = max(th_max, th)
        mu_max = max(mu_max, mu)
    jump = 0.0
    cond = 0.0
    th_jump = 0.0
    for i in range(n - 1):
        G = 2.0 / (tau[i] + tau[i + 1])
        if beta == 0.0:
            dl = kappa_bar * (theta[i + 1] - theta[i])
        else:
            dl = kappa_bar * (theta[i + 1] ** (beta + 1.0) - theta[i] ** (beta + 1.0)) / (beta + 1.0)
        jump += G * dl * dl
        cond -= G * dl * (1.0 / theta[i + 1] - 1.0 / theta[i])
        dth = theta[i + 1] - theta[i]
        th_jump += dth * dth
    return (
        m_acc + m_c, e_acc + e_c, kin + h * ent, h * visc + cond / h, ut2, h * ux2,
        jump / h, h * kth, th_jump / h, h * L_int, h * th2, kin,
        tau_min, tau_max, th_min, th_max, mu_max,
    )
