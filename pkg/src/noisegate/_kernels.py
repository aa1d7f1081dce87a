"""Hot numerical kernels for the transient solver.

Everything here is plain numpy-on-scalars code written so that
numba.jit_module can compile the whole file; with NOISEGATE_NO_NUMBA=1
the same functions run under the interpreter (see jitconf).

Circuit state is a flat voltage vector `v_all`: unknown node voltages
first (0..n_unknown-1), then driven nodes (inputs, VDD, GND) whose
values come from the stimulus matrix each step.  MOSFET terminal
indices point into that vector.
"""

import numpy as np

DC_STATUS_OK = 0
DC_STATUS_NO_CONVERGENCE = 1
TR_STATUS_OK = 0
TR_STATUS_NO_CONVERGENCE = 1
TR_STATUS_NONFINITE = 2


def mos_eval(vd, vg, vs, vth, k, lam, is_p):
    """Channel current drain->source and its partials wrt (vd, vg, vs).

    Source/drain symmetry handles reversed bias; PMOS is the NMOS
    model on negated voltages.
    """
    if is_p:
        i, gd, gg, gs = _nmos_eval(-vd, -vg, -vs, vth, k, lam)
        return -i, gd, gg, gs
    return _nmos_eval(vd, vg, vs, vth, k, lam)


def _nmos_eval(vd, vg, vs, vth, k, lam):
    if vd >= vs:
        vgs = vg - vs
        vds = vd - vs
        swapped = False
    else:
        vgs = vg - vd
        vds = vs - vd
        swapped = True
    vov = vgs - vth
    if vov <= 0.0:
        return 0.0, 0.0, 0.0, 0.0
    clm = 1.0 + lam * vds
    if vds >= vov:
        i = 0.5 * k * vov * vov * clm
        gm = k * vov * clm
        go = 0.5 * k * vov * vov * lam
    else:
        core = vov * vds - 0.5 * vds * vds
        i = k * core * clm
        gm = k * vds * clm
        go = k * (vov - vds) * clm + k * core * lam
    if not swapped:
        return i, go, gm, -(gm + go)
    return -i, gm + go, -gm, -go


def solve_inplace(a, b):
    """Gaussian elimination with partial pivoting; solution lands in b.

    Destroys a.  Returns 1 when the matrix is numerically singular.
    """
    n = a.shape[0]
    for col in range(n):
        piv = col
        best = abs(a[col, col])
        for r in range(col + 1, n):
            mag = abs(a[r, col])
            if mag > best:
                best = mag
                piv = r
        if best < 1e-300:
            return 1
        if piv != col:
            for c in range(col, n):
                tmp = a[col, c]
                a[col, c] = a[piv, c]
                a[piv, c] = tmp
            tmp = b[col]
            b[col] = b[piv]
            b[piv] = tmp
        inv = 1.0 / a[col, col]
        for r in range(col + 1, n):
            f = a[r, col] * inv
            if f != 0.0:
                a[r, col] = 0.0
                for c in range(col + 1, n):
                    a[r, c] -= f * a[col, c]
                b[r] -= f * b[col]
    for r in range(n - 1, -1, -1):
        acc = b[r]
        for c in range(r + 1, n):
            acc -= a[r, c] * b[c]
        b[r] = acc / a[r, r]
    return 0


def assemble(v_all, mos_d, mos_g, mos_s, mos_vth, mos_k, mos_isp, lam,
             n_unknown, coef_c, v_prev, i_prev, theta, gmin, a, r):
    """Residual r and Jacobian a of the theta-scheme step equation.

    r[i] = coef_c[i] (v[i]-v_prev[i]) - theta I_into[i](v)
           - (1-theta) i_prev[i] + gmin v[i]
    """
    for i in range(n_unknown):
        for j in range(n_unknown):
            a[i, j] = 0.0
        a[i, i] = coef_c[i] + gmin
        r[i] = (coef_c[i] * (v_all[i] - v_prev[i])
                - (1.0 - theta) * i_prev[i] + gmin * v_all[i])
    for m in range(mos_d.shape[0]):
        d = mos_d[m]
        g = mos_g[m]
        s = mos_s[m]
        ids, gd, gg, gs = mos_eval(v_all[d], v_all[g], v_all[s],
                                   mos_vth[m], mos_k[m], lam, mos_isp[m])
        if d < n_unknown:
            r[d] += theta * ids
            a[d, d] += theta * gd
            if g < n_unknown:
                a[d, g] += theta * gg
            if s < n_unknown:
                a[d, s] += theta * gs
        if s < n_unknown:
            r[s] -= theta * ids
            a[s, s] -= theta * gs
            if d < n_unknown:
                a[s, d] -= theta * gd
            if g < n_unknown:
                a[s, g] -= theta * gg


def currents(v_all, mos_d, mos_g, mos_s, mos_vth, mos_k, mos_isp, lam,
             n_unknown, vdd_idx, out_i):
    """Device current into every unknown node; returns current into VDD."""
    for i in range(n_unknown):
        out_i[i] = 0.0
    into_vdd = 0.0
    for m in range(mos_d.shape[0]):
        d = mos_d[m]
        g = mos_g[m]
        s = mos_s[m]
        ids, _, _, _ = mos_eval(v_all[d], v_all[g], v_all[s],
                                mos_vth[m], mos_k[m], lam, mos_isp[m])
        if d < n_unknown:
            out_i[d] -= ids
        elif d == vdd_idx:
            into_vdd -= ids
        if s < n_unknown:
            out_i[s] += ids
        elif s == vdd_idx:
            into_vdd += ids
    return into_vdd


def dc_newton(v_all, mos_d, mos_g, mos_s, mos_vth, mos_k, mos_isp, lam,
              n_unknown, tol_i, max_steps, gmin):
    """Damped Newton on the static KCL system.

    Returns (status, iterations, worst_node, worst_residual); the
    solution is left in v_all[:n_unknown].
    """
    n = n_unknown
    a = np.zeros((n, n))
    r = np.zeros(n)
    dx = np.zeros(n)
    v_trial = v_all.copy()
    coef0 = np.zeros(n)
    zero = np.zeros(n)

    worst_node = -1
    worst_res = 0.0
    for it in range(max_steps):
        assemble(v_all, mos_d, mos_g, mos_s, mos_vth, mos_k, mos_isp, lam,
                 n, coef0, zero, zero, 1.0, gmin, a, r)
        worst_res = 0.0
        worst_node = 0
        for i in range(n):
            mag = abs(r[i])
            if mag > worst_res:
                worst_res = mag
                worst_node = i
        if worst_res < tol_i:
            return DC_STATUS_OK, it, worst_node, worst_res
        for i in range(n):
            dx[i] = -r[i]
        if solve_inplace(a, dx) != 0:
            return DC_STATUS_NO_CONVERGENCE, it, worst_node, worst_res
        # cap the raw step at 1 V max-norm
        mx = 0.0
        for i in range(n):
            mag = abs(dx[i])
            if mag > mx:
                mx = mag
        if mx > 1.0:
            scale = 1.0 / mx
            for i in range(n):
                dx[i] *= scale
        # backtrack until the residual shrinks
        alpha = 1.0
        for _ in range(8):
            for i in range(n):
                v_trial[i] = v_all[i] + alpha * dx[i]
            assemble(v_trial, mos_d, mos_g, mos_s, mos_vth, mos_k, mos_isp,
                     lam, n, coef0, zero, zero, 1.0, gmin, a, r)
            trial_res = 0.0
            for i in range(n):
                mag = abs(r[i])
                if mag > trial_res:
                    trial_res = mag
            if trial_res < worst_res:
                break
            alpha *= 0.5
        for i in range(n):
            v_all[i] += alpha * dx[i]
    return DC_STATUS_NO_CONVERGENCE, max_steps, worst_node, worst_res


def transient(v_all, mos_d, mos_g, mos_s, mos_vth, mos_k, mos_isp, lam,
              n_unknown, vdd_idx, coef_c, stim, theta, tol_v, max_iters,
              gmin, v_out, ivdd_out):
    """Fixed-step theta-scheme integration with a Newton solve per step.

    stim is (n_driven, n_samples); v_all[:n_unknown] holds the initial
    condition.  Node voltages land in v_out (n_samples, n_unknown) and
    the current delivered by the VDD source in ivdd_out.  Returns
    (status, bad_step).
    """
    n = n_unknown
    n_samples = stim.shape[1]
    a = np.zeros((n, n))
    r = np.zeros(n)
    dx = np.zeros(n)
    i_prev = np.zeros(n)
    v_prev = np.zeros(n)

    for j in range(stim.shape[0]):
        v_all[n + j] = stim[j, 0]
    into_vdd = currents(v_all, mos_d, mos_g, mos_s, mos_vth, mos_k, mos_isp,
                        lam, n, vdd_idx, i_prev)
    for i in range(n):
        v_out[0, i] = v_all[i]
    ivdd_out[0] = -into_vdd

    for step in range(1, n_samples):
        for i in range(n):
            v_prev[i] = v_all[i]
        for j in range(stim.shape[0]):
            v_all[n + j] = stim[j, step]
        converged = False
        for _ in range(max_iters):
            assemble(v_all, mos_d, mos_g, mos_s, mos_vth, mos_k, mos_isp,
                     lam, n, coef_c, v_prev, i_prev, theta, gmin, a, r)
            for i in range(n):
                dx[i] = -r[i]
            if solve_inplace(a, dx) != 0:
                return TR_STATUS_NO_CONVERGENCE, step
            mx = 0.0
            for i in range(n):
                mag = abs(dx[i])
                if mag > mx:
                    mx = mag
            if mx > 0.5:
                scale = 0.5 / mx
                for i in range(n):
                    dx[i] *= scale
                mx = 0.5
            for i in range(n):
                v_all[i] += dx[i]
            if mx < tol_v:
                converged = True
                break
        if not converged:
            return TR_STATUS_NO_CONVERGENCE, step
        for i in range(n):
            if not np.isfinite(v_all[i]):
                return TR_STATUS_NONFINITE, step
        into_vdd = currents(v_all, mos_d, mos_g, mos_s, mos_vth, mos_k,
                            mos_isp, lam, n, vdd_idx, i_prev)
        for i in range(n):
            v_out[step, i] = v_all[i]
        ivdd_out[step] = -into_vdd
    return TR_STATUS_OK, 0


from .jitconf import NUMBA_ENABLED  # noqa: E402

if NUMBA_ENABLED:
    import numba

    numba.jit_module(nopython=True, cache=True, nogil=True)
