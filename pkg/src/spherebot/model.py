"""Spherical robot model: parameters, state, rolling kinematics, and the
Euler attitude dynamics reduced to the body frame.

Conventions. The attitude R maps body to inertial coordinates and r_i
denotes row i of R, computed as R.T @ e_i. The no-slip contact constraint
couples the planar position rates to the body angular velocity:

    x_dot = r * (omega . r2),   y_dot = -r * (omega . r1),   R_dot = R @ hat(omega)

Rows, not columns: the row convention is forced by the contact constraint
v = r * (R omega) x e3 and is the single most error-prone sign choice in
this model, so every consumer goes through these functions.
"""

from dataclasses import dataclass, field

import numpy as np

from .so3 import hat, require_rotation

_E3 = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class RobotParams:
    """Physical constants of the spherical shell.

    Attributes:
        radius: shell radius in m.
        mass: shell mass in kg. Stored for fidelity; the attitude dynamics
            and rolling kinematics never use it (no translational force
            coupling exists in this model).
        inertia: principal moments (J1, J2, J3) in kg m^2, strictly
            increasing and positive.
    """

    radius: float
    mass: float
    inertia: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "inertia", np.asarray(self.inertia, dtype=float))
        if not self.radius > 0.0:
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if not self.mass > 0.0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        J = self.inertia
        if J.shape != (3,) or not np.all(np.isfinite(J)):
            raise ValueError("inertia must be three finite principal moments")
        if not (0.0 < J[0] < J[1] < J[2]):
            raise ValueError(f"principal moments must satisfy 0 < J1 < J2 < J3, got {J.tolist()}")


@dataclass(frozen=True)
class RobotState:
    """Planar position, attitude, and body angular velocity."""

    x: float
    y: float
    R: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "R", require_rotation(self.R, what="RobotState.R"))
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float))
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise ValueError("RobotState: non-finite position")
        if self.omega.shape != (3,) or not np.all(np.isfinite(self.omega)):
            raise ValueError("RobotState: omega must be a finite 3-vector")

    @property
    def r3(self) -> np.ndarray:
        """Third row of R: the inertial vertical expressed in body axes."""
        return self.R.T @ _E3


@dataclass(frozen=True)
class StateRate:
    """Time derivative of a RobotState; R_dot lives in the tangent space at R."""

    x_dot: float
    y_dot: float
    R_dot: np.ndarray
    omega_dot: np.ndarray = field(default_factory=lambda: np.zeros(3))


def kinematics(state: RobotState, params: RobotParams):
    """Rolling kinematics (x_dot, y_dot, R_dot) at the given state."""
    r = params.radius
    x_dot = r * float(state.omega @ state.R[1])
    y_dot = -r * float(state.omega @ state.R[0])
    R_dot = state.R @ hat(state.omega)
    return x_dot, y_dot, R_dot


def contact_velocity(state: RobotState, params: RobotParams) -> np.ndarray:
    """No-slip contact-point velocity r * (R omega) x e3.

    Its first two components reproduce the kinematics (x_dot, y_dot) and
    the third is identically zero; exposed for constraint verification.
    """
    return params.radius * np.cross(state.R @ state.omega, _E3)


def dynamics(state: RobotState, tau: np.ndarray, params: RobotParams) -> np.ndarray:
    """Body angular acceleration under torque tau.

        omega_dot = -J^-1 (omega x J omega) + J^-1 tau
    """
    J = params.inertia
    w = state.omega
    return (tau - np.cross(w, J * w)) / J


def state_rate(state: RobotState, tau: np.ndarray, params: RobotParams) -> StateRate:
    """Full rate field combining kinematics and dynamics."""
    x_dot, y_dot, R_dot = kinematics(state, params)
    return StateRate(x_dot, y_dot, R_dot, dynamics(state, tau, params))
