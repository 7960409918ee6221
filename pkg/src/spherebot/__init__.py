"""Rolling spherical robot on SO(3): geometric feedforward + PD control,
fixed-step Lie-group simulation, and Lyapunov-based convergence checks."""

from .analysis import (ConvergenceReport, EnergyRecord, check_convergence,
                       energy_record, lyapunov_rate, lyapunov_value)
from .control import (OMEGA_DESIRED, ControlOutput, Gains, control_torque, d_psi,
                      error_function, feedforward, pd_term,
                      transport_desired_velocity, velocity_error)
from .model import (RobotParams, RobotState, StateRate, contact_velocity,
                    dynamics, kinematics, state_rate)
from .simulate import (PRESET_NAMES, DivergenceError, Scenario, SimConfig,
                       SweepSummary, Trajectory, preset_scenario, simulate,
                       step, sweep)
from .so3 import (adjoint, bracket, connection, exp_so3, hat, is_rotation,
                  project_so3, require_rotation, trace_inner, vee)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # so3
    "hat", "vee", "bracket", "adjoint", "trace_inner", "exp_so3",
    "project_so3", "connection", "is_rotation", "require_rotation",
    # model
    "RobotParams", "RobotState", "StateRate", "kinematics",
    "contact_velocity", "dynamics", "state_rate",
    # control
    "Gains", "ControlOutput", "OMEGA_DESIRED", "error_function", "d_psi",
    "velocity_error", "transport_desired_velocity", "feedforward",
    "pd_term", "control_torque",
    # simulate
    "SimConfig", "Scenario", "Trajectory", "SweepSummary", "DivergenceError",
    "step", "simulate", "sweep", "preset_scenario", "PRESET_NAMES",
    # analysis
    "EnergyRecord", "ConvergenceReport", "lyapunov_value", "lyapunov_rate",
    "energy_record", "check_convergence",
]
