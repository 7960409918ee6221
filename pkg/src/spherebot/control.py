"""Geometric feedforward + PD controller for position and spin-axis
regulation of the rolling sphere.

The target set is E = {x = 0, y = 0, omega = R.T e3}: the sphere rests at
the origin while spinning about the inertial vertical. The desired spatial
angular velocity is the constant e3; transported to the current attitude it
becomes R.T e3 in body coordinates, giving the velocity error

    e_w = omega - R.T e3.

The configuration error is psi = k_p (x^2 + y^2) / 2. The factor 1/2 makes
d(psi)/dt = k_p (x x_dot + y y_dot) hold exactly, so the closed loop obeys
V_dot = -k_v ||e_w||^2 for V = e_w . (J e_w) / 2 + psi with no residual.
"""

from dataclasses import dataclass

import numpy as np

from .model import RobotParams, RobotState

# Desired spatial angular velocity: spin about the inertial vertical at 1 rad/s.
OMEGA_DESIRED = np.array([0.0, 0.0, 1.0])

_E1 = np.array([1.0, 0.0, 0.0])
_E2 = np.array([0.0, 1.0, 0.0])
_E3 = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class Gains:
    """Controller gains, both strictly positive."""

    k_p: float
    k_v: float

    def __post_init__(self):
        if not self.k_p > 0.0:
            raise ValueError(f"k_p must be > 0, got {self.k_p}")
        if not self.k_v > 0.0:
            raise ValueError(f"k_v must be > 0, got {self.k_v}")


@dataclass(frozen=True)
class ControlOutput:
    """Controller decomposition: tau = J (f_ff + f_pd) by construction."""

    f_ff: np.ndarray
    f_pd: np.ndarray
    tau: np.ndarray


def error_function(x: float, y: float, gains: Gains) -> float:
    """Configuration error psi = k_p (x^2 + y^2) / 2."""
    return 0.5 * gains.k_p * (x * x + y * y)


def d_psi(state: RobotState, gains: Gains, params: RobotParams) -> np.ndarray:
    """Body-frame gradient of psi: k_p r R.T (x e2 - y e1).

    Along the rolling kinematics, d(psi)/dt = d_psi(state) . omega.
    """
    return gains.k_p * params.radius * (state.R.T @ (state.x * _E2 - state.y * _E1))


def transport_desired_velocity(R: np.ndarray) -> np.ndarray:
    """Desired body angular velocity transported to attitude R: R.T e3.

    Independent of the particular desired attitude R_d (any R_d with
    R_d e3 = e3 gives the same transported velocity).
    """
    return R.T @ _E3


def velocity_error(state: RobotState) -> np.ndarray:
    """e_w = omega - R.T e3; zero exactly on the target set."""
    return state.omega - transport_desired_velocity(state.R)


def feedforward(state: RobotState, params: RobotParams) -> np.ndarray:
    """Feedforward term cancelling the transport map's covariant derivative.

        f_ff = (R.T e3) x omega
             + ( omega x (R.T e3) + J^-1 (omega x J R.T e3 - J omega x R.T e3) ) / 2

    Depends only on (R, omega, J). On the target set it reduces to
    J^-1 (omega x J omega), which freezes the closed-loop spin.
    """
    J = params.inertia
    w = state.omega
    wd = transport_desired_velocity(state.R)
    return np.cross(wd, w) + 0.5 * (
        np.cross(w, wd) + (np.cross(w, J * wd) - np.cross(J * w, wd)) / J
    )


def pd_term(state: RobotState, gains: Gains, params: RobotParams) -> np.ndarray:
    """Proportional-derivative term -J^-1 (d_psi + k_v e_w)."""
    return -(d_psi(state, gains, params) + gains.k_v * velocity_error(state)) / params.inertia


def control_torque(state: RobotState, gains: Gains, params: RobotParams) -> ControlOutput:
    """Commanded body torque tau = J (f_ff + f_pd) with its decomposition.

    Substituted into the dynamics this yields the closed loop

        omega_dot = -J^-1 (omega x J omega) + f_ff + f_pd.
    """
    f_ff = feedforward(state, params)
    f_pd = pd_term(state, gains, params)
    return ControlOutput(f_ff=f_ff, f_pd=f_pd, tau=params.inertia * (f_ff + f_pd))
