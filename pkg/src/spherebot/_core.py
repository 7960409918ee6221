"""Scalar fast path for the fixed-step Lie-group integrator.

The public math modules (so3, model, control) are the readable numpy
reference; this module unrolls the same formulas on plain floats because a
60 s run at dt = 1e-3 makes 240k controller evaluations and small-array
numpy overhead dominates by an order of magnitude. test_core_equivalence
pins both paths together on random states.

Attitude representation here is a row-major 9-tuple (r11, r12, ..., r33).

Integrator: classical RK4 run through the exponential chart at the current
attitude (Munthe-Kaas). Each stage evaluates the flat rates (x_dot, y_dot,
omega_dot) plus a body-frame increment rate; for a body-frame update
R_next = R exp(hat(theta)) the increment rate carries the inverse
differential of exp,

    theta_dot = omega + (theta x omega)/2 + theta x (theta x omega)/12,

truncated after the second commutator, which preserves the classical
4th order. The final attitude update is R exp(dt * wbar) with wbar the
RK4-weighted average of the stage increment rates.
"""

import math

import numpy as np


class DivergenceError(RuntimeError):
    """Raised when the propagated state blows up or turns non-finite."""


# Divergence guard: abort beyond this body rate (rad/s).
OMEGA_LIMIT = 1e6

IDENTITY9 = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)


def _exp_update(R, w1, w2, w3, dt):
    """R @ exp(hat(dt * w)) with R a row-major 9-tuple."""
    t1, t2, t3 = dt * w1, dt * w2, dt * w3
    th2 = t1 * t1 + t2 * t2 + t3 * t3
    if th2 < 1e-12:  # ||t|| < 1e-6: series for the Rodrigues coefficients
        a = 1.0 - th2 / 6.0
        b = 0.5 - th2 / 24.0
    else:
        th = math.sqrt(th2)
        a = math.sin(th) / th
        b = (1.0 - math.cos(th)) / th2
    e11 = 1.0 - b * (t2 * t2 + t3 * t3)
    e12 = -a * t3 + b * t1 * t2
    e13 = a * t2 + b * t1 * t3
    e21 = a * t3 + b * t1 * t2
    e22 = 1.0 - b * (t1 * t1 + t3 * t3)
    e23 = -a * t1 + b * t2 * t3
    e31 = -a * t2 + b * t1 * t3
    e32 = a * t1 + b * t2 * t3
    e33 = 1.0 - b * (t1 * t1 + t2 * t2)
    r11, r12, r13, r21, r22, r23, r31, r32, r33 = R
    return (
        r11 * e11 + r12 * e21 + r13 * e31,
        r11 * e12 + r12 * e22 + r13 * e32,
        r11 * e13 + r12 * e23 + r13 * e33,
        r21 * e11 + r22 * e21 + r23 * e31,
        r21 * e12 + r22 * e22 + r23 * e32,
        r21 * e13 + r22 * e23 + r23 * e33,
        r31 * e11 + r32 * e21 + r33 * e31,
        r31 * e12 + r32 * e22 + r33 * e32,
        r31 * e13 + r32 * e23 + r33 * e33,
    )


def _dexpinv(p1, p2, p3, w1, w2, w3):
    """Body-frame increment rate: w + (p x w)/2 + p x (p x w)/12."""
    c1 = p2 * w3 - p3 * w2
    c2 = p3 * w1 - p1 * w3
    c3 = p1 * w2 - p2 * w1
    d1 = p2 * c3 - p3 * c2
    d2 = p3 * c1 - p1 * c3
    d3 = p1 * c2 - p2 * c1
    return w1 + 0.5 * c1 + d1 / 12.0, w2 + 0.5 * c2 + d2 / 12.0, w3 + 0.5 * c3 + d3 / 12.0


def _control(x, y, R, w1, w2, w3, kp, kv, r, J1, J2, J3):
    """Feedforward and PD accelerations; returns (ff1, ff2, ff3, pd1, pd2, pd3)."""
    r11, r12, r13, r21, r22, r23, r31, r32, r33 = R
    d1, d2, d3 = r31, r32, r33  # R.T e3, third row
    # ff = d x w + ( w x d + Jinv (w x (J d) - (J w) x d) ) / 2
    cx1 = d2 * w3 - d3 * w2
    cx2 = d3 * w1 - d1 * w3
    cx3 = d1 * w2 - d2 * w1
    jd1, jd2, jd3 = J1 * d1, J2 * d2, J3 * d3
    p1 = w2 * jd3 - w3 * jd2
    p2 = w3 * jd1 - w1 * jd3
    p3 = w1 * jd2 - w2 * jd1
    jw1, jw2, jw3 = J1 * w1, J2 * w2, J3 * w3
    q1 = jw2 * d3 - jw3 * d2
    q2 = jw3 * d1 - jw1 * d3
    q3 = jw1 * d2 - jw2 * d1
    ff1 = cx1 + 0.5 * (-cx1 + (p1 - q1) / J1)
    ff2 = cx2 + 0.5 * (-cx2 + (p2 - q2) / J2)
    ff3 = cx3 + 0.5 * (-cx3 + (p3 - q3) / J3)
    # pd = -Jinv ( kp r R.T (x e2 - y e1) + kv (w - d) )
    s = kp * r
    pd1 = -(s * (x * r21 - y * r11) + kv * (w1 - d1)) / J1
    pd2 = -(s * (x * r22 - y * r12) + kv * (w2 - d2)) / J2
    pd3 = -(s * (x * r23 - y * r13) + kv * (w3 - d3)) / J3
    return ff1, ff2, ff3, pd1, pd2, pd3


def _rates(x, y, R, w1, w2, w3, t1, t2, t3, r, J1, J2, J3):
    """Flat rate field (x_dot, y_dot, omega_dot) under torque t."""
    r11, r12, r13, r21, r22, r23, r31, r32, r33 = R
    xd = r * (w1 * r21 + w2 * r22 + w3 * r23)
    yd = -r * (w1 * r11 + w2 * r12 + w3 * r13)
    jw1, jw2, jw3 = J1 * w1, J2 * w2, J3 * w3
    h1 = w2 * jw3 - w3 * jw2
    h2 = w3 * jw1 - w1 * jw3
    h3 = w1 * jw2 - w2 * jw1
    return xd, yd, (t1 - h1) / J1, (t2 - h2) / J2, (t3 - h3) / J3


def _stage_tau(x, y, R, w1, w2, w3, kp, kv, r, J1, J2, J3):
    ff1, ff2, ff3, pd1, pd2, pd3 = _control(x, y, R, w1, w2, w3, kp, kv, r, J1, J2, J3)
    return J1 * (ff1 + pd1), J2 * (ff2 + pd2), J3 * (ff3 + pd3)


def step_scalar(x, y, R, w1, w2, w3, dt, par, gains=None, torque=None, t0=0.0):
    """One Lie-group RK4 step.

    par is (r, J1, J2, J3). With gains=(kp, kv) the controller is evaluated
    at every stage (closed loop). Otherwise `torque` supplies the stage
    torque: a 3-tuple held constant over the step, or a callable
    (t, x, y, R9, w3tuple) -> 3-tuple evaluated at the stage time/state.
    """
    r, J1, J2, J3 = par
    closed = gains is not None
    if closed:
        kp, kv = gains

    def tau_at(trel, xs, ys, Rs, u1, u2, u3):
        if closed:
            return _stage_tau(xs, ys, Rs, u1, u2, u3, kp, kv, r, J1, J2, J3)
        if callable(torque):
            return torque(t0 + trel, xs, ys, Rs, (u1, u2, u3))
        return torque

    h = 0.5 * dt
    t1, t2, t3 = tau_at(0.0, x, y, R, w1, w2, w3)
    xd1, yd1, a1, b1, c1 = _rates(x, y, R, w1, w2, w3, t1, t2, t3, r, J1, J2, J3)
    k11, k12, k13 = w1, w2, w3

    p1, p2, p3 = h * k11, h * k12, h * k13
    R2 = _exp_update(R, k11, k12, k13, h)
    x2, y2 = x + h * xd1, y + h * yd1
    u1, u2, u3 = w1 + h * a1, w2 + h * b1, w3 + h * c1
    t1, t2, t3 = tau_at(h, x2, y2, R2, u1, u2, u3)
    xd2, yd2, a2, b2, c2 = _rates(x2, y2, R2, u1, u2, u3, t1, t2, t3, r, J1, J2, J3)
    k21, k22, k23 = _dexpinv(p1, p2, p3, u1, u2, u3)

    p1, p2, p3 = h * k21, h * k22, h * k23
    R3 = _exp_update(R, k21, k22, k23, h)
    x3, y3 = x + h * xd2, y + h * yd2
    u1, u2, u3 = w1 + h * a2, w2 + h * b2, w3 + h * c2
    t1, t2, t3 = tau_at(h, x3, y3, R3, u1, u2, u3)
    xd3, yd3, a3, b3, c3 = _rates(x3, y3, R3, u1, u2, u3, t1, t2, t3, r, J1, J2, J3)
    k31, k32, k33 = _dexpinv(p1, p2, p3, u1, u2, u3)

    p1, p2, p3 = dt * k31, dt * k32, dt * k33
    R4 = _exp_update(R, k31, k32, k33, dt)
    x4, y4 = x + dt * xd3, y + dt * yd3
    u1, u2, u3 = w1 + dt * a3, w2 + dt * b3, w3 + dt * c3
    t1, t2, t3 = tau_at(dt, x4, y4, R4, u1, u2, u3)
    xd4, yd4, a4, b4, c4 = _rates(x4, y4, R4, u1, u2, u3, t1, t2, t3, r, J1, J2, J3)
    k41, k42, k43 = _dexpinv(p1, p2, p3, u1, u2, u3)

    s = dt / 6.0
    xn = x + s * (xd1 + 2.0 * (xd2 + xd3) + xd4)
    yn = y + s * (yd1 + 2.0 * (yd2 + yd3) + yd4)
    wn1 = w1 + s * (a1 + 2.0 * (a2 + a3) + a4)
    wn2 = w2 + s * (b1 + 2.0 * (b2 + b3) + b4)
    wn3 = w3 + s * (c1 + 2.0 * (c2 + c3) + c4)
    wb1 = (k11 + 2.0 * (k21 + k31) + k41) / 6.0
    wb2 = (k12 + 2.0 * (k22 + k32) + k42) / 6.0
    wb3 = (k13 + 2.0 * (k23 + k33) + k43) / 6.0
    Rn = _exp_update(R, wb1, wb2, wb3, dt)
    return xn, yn, Rn, wn1, wn2, wn3


def _orth_defect(R):
    """Frobenius norm of R.T R - I from a row-major 9-tuple."""
    r11, r12, r13, r21, r22, r23, r31, r32, r33 = R
    g11 = r11 * r11 + r21 * r21 + r31 * r31 - 1.0
    g22 = r12 * r12 + r22 * r22 + r32 * r32 - 1.0
    g33 = r13 * r13 + r23 * r23 + r33 * r33 - 1.0
    g12 = r11 * r12 + r21 * r22 + r31 * r32
    g13 = r11 * r13 + r21 * r23 + r31 * r33
    g23 = r12 * r13 + r22 * r23 + r32 * r33
    return math.sqrt(g11 * g11 + g22 * g22 + g33 * g33 + 2.0 * (g12 * g12 + g13 * g13 + g23 * g23))


def _project9(R):
    """Polar reprojection of a near-rotation 9-tuple (iterated averaging)."""
    M = np.array(R, dtype=float).reshape(3, 3)
    for _ in range(50):
        Mn = 0.5 * (M + np.linalg.inv(M).T)
        if np.linalg.norm(Mn - M) <= 1e-14:
            M = Mn
            break
        M = Mn
    return tuple(M.ravel().tolist())


def run_loop(x, y, R, w1, w2, w3, dt, n_steps, par, gains=None, torque=None,
             record_every=1, reproject_every=100):
    """Propagate n_steps and record samples every record_every steps.

    Returns (times, states, controls, max_drift) where states is a
    (n_rec, 14) array of [x, y, R(9 row-major), omega(3)] and controls a
    (n_rec, 9) array of [f_ff, f_pd, tau] at the sample states. In open
    loop f_ff and f_pd are reported as zero and tau is the applied torque.
    max_drift is the largest observed ||R.T R - I||_F (measured at sample
    and reprojection points, before reprojection).
    """
    r, J1, J2, J3 = par
    closed = gains is not None
    tape = torque if isinstance(torque, np.ndarray) else None

    rec_idx = [k for k in range(0, n_steps + 1) if k % record_every == 0]
    if rec_idx[-1] != n_steps:
        rec_idx.append(n_steps)
    n_rec = len(rec_idx)
    times = np.empty(n_rec)
    states = np.empty((n_rec, 14))
    controls = np.zeros((n_rec, 9))

    def record(slot, k):
        t = k * dt
        times[slot] = t
        states[slot, 0] = x
        states[slot, 1] = y
        states[slot, 2:11] = R
        states[slot, 11] = w1
        states[slot, 12] = w2
        states[slot, 13] = w3
        if closed:
            kp, kv = gains
            ff1, ff2, ff3, pd1, pd2, pd3 = _control(x, y, R, w1, w2, w3, kp, kv, r, J1, J2, J3)
            controls[slot, 0:3] = (ff1, ff2, ff3)
            controls[slot, 3:6] = (pd1, pd2, pd3)
            controls[slot, 6:9] = (J1 * (ff1 + pd1), J2 * (ff2 + pd2), J3 * (ff3 + pd3))
        elif tape is not None:
            controls[slot, 6:9] = tape[min(k, n_steps - 1)]
        elif callable(torque):
            controls[slot, 6:9] = torque(t, x, y, R, (w1, w2, w3))
        else:
            controls[slot, 6:9] = torque

    slot = 0
    record(slot, 0)
    slot += 1
    max_drift = 0.0
    for k in range(n_steps):
        tau_k = tuple(tape[k]) if tape is not None else torque
        x, y, R, w1, w2, w3 = step_scalar(
            x, y, R, w1, w2, w3, dt, par, gains=gains, torque=tau_k, t0=k * dt
        )
        total = x + y + w1 + w2 + w3 + R[0] + R[4] + R[8]
        if not math.isfinite(total) or w1 * w1 + w2 * w2 + w3 * w3 > OMEGA_LIMIT * OMEGA_LIMIT:
            raise DivergenceError(
                f"state diverged at step {k + 1} (t = {(k + 1) * dt:.6g} s): "
                f"|omega| = {math.sqrt(abs(w1 * w1 + w2 * w2 + w3 * w3)):.3e} rad/s"
            )
        k1 = k + 1
        at_sample = slot < n_rec and rec_idx[slot] == k1
        if at_sample or k1 % reproject_every == 0:
            max_drift = max(max_drift, _orth_defect(R))
        if k1 % reproject_every == 0:
            R = _project9(R)
        if at_sample:
            record(slot, k1)
            slot += 1
    return times, states, controls, max_drift
