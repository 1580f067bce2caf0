"""Float kernel for the flow right-hand side.

The hot loop propagates phi (from the left) and psi (from the right) across
the masses at one value of lam, together with their lam-derivatives, and
returns omega = phi psi and the averaged slope <omega_x> at every mass.

With numba installed the kernel is compiled with ``@njit``; setting
``ISOSTRING_DISABLE_NUMBA=1`` (or not having numba) runs the identical
source as plain Python over numpy arrays.
"""

import os

import numpy as np

DISABLED = os.environ.get("ISOSTRING_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def _omega_masses(xs, ms, h, left_dirichlet, H, right_dirichlet, lam):
    n = xs.shape[0]
    # left solution: value and slope to the right of each mass, plus d/dlam
    phi = np.empty(n)
    dphi = np.empty(n)
    sl = np.empty(n + 1)
    dsl = np.empty(n + 1)
    if left_dirichlet:
        p, q = 1.0, 0.0
    else:
        p, q = h, 1.0
    dp, dq = 0.0, 0.0
    sl[0] = p
    dsl[0] = 0.0
    prev = 0.0
    for j in range(n):
        l = xs[j] - prev
        q = p * l + q
        dq = dp * l + dq
        dp = dp + ms[j] * q + lam * ms[j] * dq
        p = p + lam * ms[j] * q
        phi[j] = q
        dphi[j] = dq
        sl[j + 1] = p
        dsl[j + 1] = dp
        prev = xs[j]
    # right solution: value and slope on each interval, plus d/dlam
    psi = np.empty(n)
    dpsi = np.empty(n)
    sr = np.empty(n + 1)
    dsr = np.empty(n + 1)
    if right_dirichlet:
        s, v = -1.0, 0.0
    else:
        s, v = -H, 1.0
    ds, dv = 0.0, 0.0
    sr[n] = s
    dsr[n] = 0.0
    nxt = 1.0
    for j in range(n - 1, -1, -1):
        l = nxt - xs[j]
        v = v - s * l
        dv = dv - ds * l
        ds = ds - ms[j] * v - lam * ms[j] * dv
        s = s - lam * ms[j] * v
        psi[j] = v
        dpsi[j] = dv
        sr[j] = s
        dsr[j] = ds
        nxt = xs[j]
    om = np.empty(n)
    dom = np.empty(n)
    avg = np.empty(n)
    davg = np.empty(n)
    for j in range(n):
        ap = 0.5 * (sl[j] + sl[j + 1])
        dap = 0.5 * (dsl[j] + dsl[j + 1])
        aq = 0.5 * (sr[j] + sr[j + 1])
        daq = 0.5 * (dsr[j] + dsr[j + 1])
        om[j] = phi[j] * psi[j]
        dom[j] = dphi[j] * psi[j] + phi[j] * dpsi[j]
        avg[j] = psi[j] * ap + phi[j] * aq
        davg[j] = dpsi[j] * ap + psi[j] * dap + dphi[j] * aq + phi[j] * daq
    return om, dom, avg, davg


omega_masses_python = _omega_masses
omega_masses = njit(cache=True)(_omega_masses) if HAVE_NUMBA else _omega_masses


def rhs_float(xs, ms, h, left_dirichlet, H, right_dirichlet, poles, weights, mu0, scale,
              kernel=None):
    """(dx/dt, dm/dt) for the limit flow (``poles`` empty) or a pole flow."""
    k = omega_masses if kernel is None else kernel
    if len(poles) == 0:
        _, dom, _, davg = k(xs, ms, h, left_dirichlet, H, right_dirichlet, 0.0)
        b0 = -scale * dom
        b0x = -scale * davg
    else:
        om0, _, avg0, _ = k(xs, ms, h, left_dirichlet, H, right_dirichlet, 0.0)
        b0 = np.zeros_like(xs)
        b0x = np.zeros_like(xs)
        for eps, mu in zip(poles, weights):
            om, _, avg, _ = k(xs, ms, h, left_dirichlet, H, right_dirichlet, eps)
            b0 += (mu0 * om0 - mu * om) / eps
            b0x += (mu0 * avg0 - mu * avg) / eps
        b0 *= scale
        b0x *= scale
    return -b0, ms * b0x
