"""Lyapunov bookkeeping and convergence verification.

The candidate Lyapunov function for the closed loop is

    V = e_w . (J e_w) / 2 + psi(x, y),      V_dot = -k_v ||e_w||^2,

with e_w the velocity error and psi the position error function. Along
simulated closed-loop trajectories V must be nonincreasing up to
integrator accuracy; check_convergence additionally detects sustained
arrival near the target set E = {x = 0, y = 0, omega = R.T e3}.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .control import Gains, error_function, velocity_error
from .model import RobotParams, RobotState


@dataclass(frozen=True)
class EnergyRecord:
    """Pointwise energy bookkeeping for one sample."""

    t: float
    V: float
    Vdot: float  # analytic rate -k_v ||e_w||^2, always <= 0
    psi: float
    e_w_norm: float
    pos_norm: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of the sustained-threshold convergence check.

    spin_sign is the sign of the final omega . e3: +1 for the spin-up
    branch, -1 for the inverted branch. max_lyapunov_violation is the
    worst positive jump of V between consecutive samples (0 for a
    monotone record).
    """

    converged: bool
    settling_time: Optional[float]
    spin_sign: int
    max_lyapunov_violation: float
    final_e_w_norm: float
    final_pos_norm: float


def lyapunov_value(state: RobotState, gains: Gains, params: RobotParams) -> float:
    """V = e_w . (J e_w) / 2 + psi; zero exactly on the target set."""
    e_w = velocity_error(state)
    return 0.5 * float(e_w @ (params.inertia * e_w)) + error_function(state.x, state.y, gains)


def lyapunov_rate(state: RobotState, gains: Gains) -> float:
    """Analytic closed-loop rate -k_v ||e_w||^2."""
    e_w = velocity_error(state)
    return -gains.k_v * float(e_w @ e_w)


def energy_record(state: RobotState, gains: Gains, params: RobotParams, t: float = 0.0) -> EnergyRecord:
    """Evaluate all energy fields at one state."""
    e_w = velocity_error(state)
    return EnergyRecord(
        t=t,
        V=lyapunov_value(state, gains, params),
        Vdot=lyapunov_rate(state, gains),
        psi=error_function(state.x, state.y, gains),
        e_w_norm=float(np.linalg.norm(e_w)),
        pos_norm=float(np.hypot(state.x, state.y)),
    )


def check_convergence(traj, tol_pos: float = 0.05, tol_vel: float = 0.01,
                      hold: float = 1.0) -> ConvergenceReport:
    """Detect sustained convergence toward the target set.

    The trajectory converges if ||(x, y)|| < tol_pos and ||e_w|| < tol_vel
    hold simultaneously over a contiguous window of at least `hold`
    seconds; the settling time is the start of the first such window.

    Args:
        traj: a Trajectory (nonempty).
        tol_pos: position norm threshold in m.
        tol_vel: velocity-error norm threshold in rad/s.
        hold: required sustained duration in s.
    """
    n = len(traj)
    if n == 0:
        raise ValueError("check_convergence: empty trajectory")
    ok = (traj.pos_norm < tol_pos) & (traj.e_w_norm < tol_vel)
    settling = None
    i = 0
    while i < n:
        if ok[i]:
            j = i
            while j + 1 < n and ok[j + 1]:
                j += 1
            if traj.t[j] - traj.t[i] >= hold:
                settling = float(traj.t[i])
                break
            i = j + 1
        else:
            i += 1
    dV = np.diff(traj.V)
    violation = float(max(0.0, dV.max())) if len(dV) else 0.0
    return ConvergenceReport(
        converged=settling is not None,
        settling_time=settling,
        spin_sign=int(np.sign(traj.omega[-1, 2])),
        max_lyapunov_violation=violation,
        final_e_w_norm=float(traj.e_w_norm[-1]),
        final_pos_norm=float(traj.pos_norm[-1]),
    )
