"""Isospectral ODEs for the masses, their integration and diagnostics.

Every flow moves a mass with the local value of the field b_0 and
rescales it with the averaged slope:

    dx_j/dt = -b_0(x_j),    dm_j/dt = m_j <b_0,x>(x_j).

The exact route (:func:`flow_rhs`) builds the piecewise polynomial fields;
the float route used by :func:`integrate` calls the compiled kernel.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import MassCollapse, OrderingViolation, ValidationError
from .fields import HALF, FlowSpec, beta, build_fields
from .string_core import DiscreteString, char_poly, eigenvalues, is_dirichlet

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowState:
    t: object
    string: DiscreteString


def flow_rhs(string, bc, spec=FlowSpec(), fields=None):
    """(dx/dt, dm/dt); exact for Fraction input. Pass ``fields`` to reuse them."""
    fs = build_fields(string, bc, spec) if fields is None else fields
    xdot = [-fs.b0(x) for x in string.positions]
    mdot = [m * fs.b0.average(x) for x, m in zip(string.positions, string.masses)]
    return xdot, mdot


def _kernel_args(bc, spec):
    h, H = bc.left, bc.right
    ld, rd = is_dirichlet(h), is_dirichlet(H)
    if spec.is_rescaled:
        w = bc.wronskian()
        if w == 0:
            raise ValidationError("rescaled flow needs W(c0, c0_hat) != 0")
        scale = 1.0 / float(w)
    else:
        scale = 1.0
    if spec.kind == "limit":
        poles, weights = np.empty(0), np.empty(0)
    else:
        pl = spec.pole_list()
        poles = np.array([float(e) for e, _ in pl])
        weights = np.array([float(m) for _, m in pl])
    return (0.0 if ld else float(h), ld, 0.0 if rd else float(H), rd,
            poles, weights, float(spec.mu0), scale)


def flow_rhs_float(xs, ms, bc, spec=FlowSpec(), kernel=None):
    h, ld, H, rd, poles, weights, mu0, scale = _kernel_args(bc, spec)
    return _kernels.rhs_float(np.asarray(xs, float), np.asarray(ms, float),
                              h, ld, H, rd, poles, weights, mu0, scale, kernel)


def invariants(string, bc, rescaled=True):
    """I_1..I_N: coefficients of the characteristic polynomial, in Green's form
    (divided by W(c0, c0_hat)) when ``rescaled``."""
    d = char_poly(string, bc)
    coeffs = [d.coeff(k) for k in range(1, string.n + 1)]
    if rescaled:
        w = bc.wronskian()
        if w == 0:
            raise ValidationError("Green's-form invariants need W(c0, c0_hat) != 0")
        coeffs = [c / w for c in coeffs]
    return coeffs


def lax_residuals(string, bc, fields, zs, rhs=None):
    """Jump-condition residuals (r1_j, r2_j) at every mass for each z."""
    xdot, mdot = flow_rhs(string, bc, fields.spec) if rhs is None else rhs
    out = []
    for z in zs:
        b = fields.at(z)
        rows = []
        for x, m, xd, md in zip(string.positions, string.masses, xdot, mdot):
            r1 = z * m * xd + HALF * b.jump(x, 1) + z * m * b(x)
            r2 = z * md - HALF * b.jump(x, 2) - z * m * b.average(x, 1)
            rows.append((r1, r2))
        out.append(rows)
    return out


def _check(xs, ms):
    """None if the state is a valid string, otherwise the reason."""
    if not np.all(np.isfinite(xs)) or not np.all(np.isfinite(ms)):
        return "non-finite state"
    bounds = np.concatenate(([0.0], xs, [1.0]))
    if np.any(np.diff(bounds) <= 0):
        return "positions left 0 < x_1 < ... < x_N < 1"
    if np.any(ms <= 0):
        return "a mass reached zero"
    return None


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    invariants: list = field(default_factory=list)
    eigenvalues: list = field(default_factory=list)
    drift_alarm: bool = False
    steps: int = 0
    rejected: int = 0

    def final(self):
        return self.states[-1]


def _float_string(xs, ms):
    return DiscreteString(tuple(float(x) for x in xs), tuple(float(m) for m in ms))


def _record(traj, t, xs, ms, bc, spec, monitor):
    s = _float_string(xs, ms)
    traj.times.append(t)
    traj.states.append(s)
    if monitor:
        traj.invariants.append([float(c) for c in invariants(s, bc, spec.is_rescaled and not bc.is_neumann_neumann)])
        traj.eigenvalues.append([float(z) for z in eigenvalues(s, bc, "float")])


def _rel_drift(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def integrate(string, bc, spec=FlowSpec(), t_end=1.0, dt=1e-2, tol=1e-10, stride=1,
              drift_tol=1e-7, monitor=True, min_dt=1e-13, kernel=None):
    """Classical RK4 with step-doubling error control.

    A step is accepted when the two-half-steps and one-full-step results
    agree to ``tol`` (relative to max(1, |y|)); otherwise dt is halved.
    Leaving the admissible set (ordering, containment, positive masses)
    also halves dt; once dt drops below ``min_dt`` the flow is declared to
    have broken down and :class:`OrderingViolation` or :class:`MassCollapse`
    is raised with the last good state and the partial trajectory.
    """
    if dt <= 0:
        raise ValidationError("dt must be positive")
    if t_end < 0:
        raise ValidationError("t_end must be nonnegative")
    args = _kernel_args(bc, spec)
    k = _kernels.omega_masses if kernel is None else kernel
    n = string.n

    def f(y):
        dx, dm = _kernels.rhs_float(y[:n], y[n:], *args, kernel=k)
        return np.concatenate((dx, dm))

    def rk4(y, hstep):
        k1 = f(y)
        k2 = f(y + 0.5 * hstep * k1)
        k3 = f(y + 0.5 * hstep * k2)
        k4 = f(y + hstep * k3)
        return y + hstep / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)

    y = np.concatenate((np.asarray(string.positions, float), np.asarray(string.masses, float)))
    traj = Trajectory()
    _record(traj, 0.0, y[:n], y[n:], bc, spec, monitor)
    t = 0.0
    hcur = float(dt)
    accepted = 0
    reason = None
    while t < t_end and n > 0:
        remaining = t_end - t
        last = hcur >= remaining * (1 - 1e-9)
        hstep = remaining if last else hcur
        with np.errstate(all="ignore"):
            full = rk4(y, hstep)
            half = rk4(y, 0.5 * hstep)
            reason = _check(half[:n], half[n:])
            two = rk4(half, 0.5 * hstep) if reason is None else half
        reason = reason or _check(two[:n], two[n:]) or _check(full[:n], full[n:])
        if reason is None:
            err = float(np.max(np.abs(two - full) / np.maximum(1.0, np.abs(two)))) / 15.0
        if reason is not None or not err <= tol:
            traj.rejected += 1
            hcur = 0.5 * hstep
            if hcur < min_dt:
                break
            continue
        y = two + (two - full) / 15.0
        if _check(y[:n], y[n:]) is not None:
            y = two
        t = t_end if last else t + hstep
        accepted += 1
        traj.steps = accepted
        if accepted % stride == 0 or t >= t_end:
            _record(traj, t, y[:n], y[n:], bc, spec, monitor)
            if monitor and len(traj.invariants) > 1:
                drift = max(_rel_drift(traj.invariants[-1], traj.invariants[0]),
                            _rel_drift(traj.eigenvalues[-1], traj.eigenvalues[0]))
                if drift > drift_tol and not traj.drift_alarm:
                    traj.drift_alarm = True
                    log.warning("invariant drift %.3g exceeds %.3g at t=%.6g", drift, drift_tol, t)
        if err < tol / 64 and hcur < dt:
            hcur = min(2 * hcur, float(dt))
    else:
        if n == 0 and t_end > 0:
            traj.times.append(float(t_end))
            traj.states.append(traj.states[0])
        return traj
    last_state = FlowState(t, _float_string(y[:n], y[n:]))
    msg = f"flow broke down near t={t:.12g}: {reason or 'step size underflow'}"
    if reason == "a mass reached zero":
        raise MassCollapse(msg, last_state=last_state, trajectory=traj)
    raise OrderingViolation(msg, last_state=last_state, trajectory=traj)


def beta_drift(string0, string1, bc, spec, zs):
    """max |beta_1(z) - beta_0(z)| over sample z (beta is a flow invariant)."""
    b0 = beta(build_fields(string0, bc, spec), bc)
    b1 = beta(build_fields(string1, bc, spec), bc)
    return max(abs(float(b1(z)) - float(b0(z))) for z in zs)

