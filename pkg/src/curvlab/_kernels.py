"""Compiled inner loop for the Ricci flow integrator.

The numpy right-hand side in flow.py is the readable reference; this module
repeats the same arithmetic (same stencils, same grouping, same pole
extrapolation of the Ricci values) as a numba kernel so that a full RK4
step costs microseconds.  flow.integrate uses it when numba imports;
test_flow asserts the two paths agree to near machine precision.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


@njit(cache=True, error_model="numpy")
def _stage(S, chan, node, sign, w, dr, ext, vm, d2, ric, out):
    n = S.shape[1]
    next_ = n + 8
    inv12dr = 1.0 / (12.0 * dr)

    for c in range(4):
        for j in range(next_):
            ext[c, j] = S[chan[c, j], node[c, j]] * sign[c, j]

    for c in range(4):
        for j in range(n + 4):
            p = j + 2
            d1 = ((ext[c, p - 2] - ext[c, p + 2])
                  + 8.0 * (ext[c, p + 1] - ext[c, p - 1])) * inv12dr
            vm[c, j] = d1 / ext[0, p]

    for c in range(1, 4):
        for j in range(n):
            p = j + 2
            d = ((vm[c, p - 2] - vm[c, p + 2])
                 + 8.0 * (vm[c, p + 1] - vm[c, p - 1])) * inv12dr
            d2[c - 1, j] = d / S[0, j]

    max_sec = 0.0
    for j in range(n):
        phi = S[1, j]
        psi = S[2, j]
        xi = S[3, j]
        dphi = vm[1, j + 2]
        dpsi = vm[2, j + 2]
        dxi = vm[3, j + 2]
        phi2 = phi * phi
        psi2 = psi * psi
        xi2 = xi * xi
        denom = 4.0 * phi2 * psi2 * xi2
        sec23 = (psi2 * psi2 + xi2 * xi2 - phi2 * phi2
                 + 2.0 * (xi2 - phi2) * (phi2 - psi2)) / denom - dpsi * dxi / (psi * xi)
        sec31 = (phi2 * phi2 + xi2 * xi2 - psi2 * psi2
                 + 2.0 * (phi2 - psi2) * (psi2 - xi2)) / denom - dphi * dxi / (phi * xi)
        sec12 = (phi2 * phi2 + psi2 * psi2 - xi2 * xi2
                 + 2.0 * (psi2 - xi2) * (xi2 - phi2)) / denom - dphi * dpsi / (phi * psi)
        sec01 = -d2[0, j] / phi
        sec02 = -d2[1, j] / psi
        sec03 = -d2[2, j] / xi
        ric[0, j] = sec01 + sec02 + sec03
        ric[1, j] = sec01 + sec12 + sec31
        ric[2, j] = sec02 + sec12 + sec23
        ric[3, j] = sec03 + sec31 + sec23
        if 4 <= j < n - 4:
            for s in (sec01, sec02, sec03, sec23, sec31, sec12):
                a = abs(s)
                if a > max_sec:
                    max_sec = a

    for c in range(4):
        for tgt in range(4):
            acc_l = 0.0
            acc_r = 0.0
            for s in range(12):
                acc_l += w[tgt, s] * ric[c, 4 + s]
                acc_r += w[tgt, s] * ric[c, n - 5 - s]
            ric[c, tgt] = acc_l
            ric[c, n - 1 - tgt] = acc_r

    for c in range(4):
        for j in range(n):
            out[c, j] = -S[c, j] * ric[c, j]
    out[1, 0] = 0.0
    out[3, n - 1] = 0.0
    return max_sec


@njit(cache=True, error_model="numpy")
def rk4_step(F, dt, chan, node, sign, w, dr, ext, vm, d2, ric, k1, k2, k3, k4, tmp):
    """One classical RK4 step in place; returns max |sec| at the step start."""
    n = F.shape[1]
    max_sec = _stage(F, chan, node, sign, w, dr, ext, vm, d2, ric, k1)
    for c in range(4):
        for j in range(n):
            tmp[c, j] = F[c, j] + 0.5 * dt * k1[c, j]
    _stage(tmp, chan, node, sign, w, dr, ext, vm, d2, ric, k2)
    for c in range(4):
        for j in range(n):
            tmp[c, j] = F[c, j] + 0.5 * dt * k2[c, j]
    _stage(tmp, chan, node, sign, w, dr, ext, vm, d2, ric, k3)
    for c in range(4):
        for j in range(n):
            tmp[c, j] = F[c, j] + dt * k3[c, j]
    _stage(tmp, chan, node, sign, w, dr, ext, vm, d2, ric, k4)
    sixth = dt / 6.0
    for c in range(4):
        for j in range(n):
            F[c, j] += sixth * (k1[c, j] + 2.0 * k2[c, j] + 2.0 * k3[c, j] + k4[c, j])
    F[1, 0] = 0.0
    F[3, n - 1] = 0.0
    return max_sec


def make_workspace(n_nodes: int):
    return (
        np.empty((4, n_nodes + 8)),
        np.empty((4, n_nodes + 4)),
        np.empty((3, n_nodes)),
        np.empty((4, n_nodes)),
        np.empty((4, n_nodes)),
        np.empty((4, n_nodes)),
        np.empty((4, n_nodes)),
        np.empty((4, n_nodes)),
        np.empty((4, n_nodes)),
    )
