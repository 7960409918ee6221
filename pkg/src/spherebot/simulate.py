"""Fixed-step Lie-group simulation of the rolling sphere, closed or open loop.

Closed-loop runs evaluate the controller at every integrator stage, so the
integrated system is exactly the continuous closed-loop vector field. Open
loop runs apply a caller-supplied torque schedule instead: a constant
3-vector, a per-step (n_steps, 3) table held constant over each step, or a
callable (t, state) -> torque evaluated per stage.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _core
from ._core import DivergenceError  # re-exported: raised on blowup
from .control import ControlOutput, Gains, control_torque
from .model import RobotParams, RobotState
from .so3 import exp_so3

__all__ = [
    "SimConfig", "Scenario", "Trajectory", "SweepSummary", "DivergenceError",
    "step", "simulate", "sweep", "preset_scenario", "PRESET_NAMES",
]

TorqueSchedule = Union[np.ndarray, Sequence[float], Callable[[float, RobotState], np.ndarray]]


@dataclass(frozen=True)
class SimConfig:
    """Integration settings.

    Attributes:
        dt: step size in s.
        t_final: horizon in s (rounded to a whole number of steps).
        record_every: output decimation in steps.
        reproject_every: attitude polar-reprojection cadence in steps.
        mode: "closed-loop" (controller drives tau) or "open-loop"
            (caller-supplied torque schedule).
    """

    dt: float = 1e-3
    t_final: float = 60.0
    record_every: int = 10
    reproject_every: int = 100
    mode: str = "closed-loop"

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if not self.t_final >= self.dt:
            raise ValueError(f"t_final must be >= dt, got {self.t_final}")
        if self.record_every < 1 or self.reproject_every < 1:
            raise ValueError("record_every and reproject_every must be >= 1")
        if self.mode not in ("closed-loop", "open-loop"):
            raise ValueError(f"mode must be 'closed-loop' or 'open-loop', got {self.mode!r}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))


@dataclass(frozen=True)
class Scenario:
    """Everything needed to run one simulation."""

    params: RobotParams
    gains: Gains
    initial: RobotState
    sim: SimConfig = field(default_factory=SimConfig)


class Trajectory:
    """Columnar record of a simulation run.

    Sample arrays (length n): t, x, y, R (n, 3, 3), omega (n, 3), and the
    per-sample controller decomposition f_ff, f_pd, tau (n, 3). Energy
    bookkeeping per sample: V, Vdot (the analytic -k_v ||e_w||^2), psi,
    e_w_norm, pos_norm. max_so3_drift is the largest observed
    ||R.T R - I||_F across the run.
    """

    def __init__(self, scenario, t, x, y, R, omega, f_ff, f_pd, tau, max_so3_drift):
        self.scenario = scenario
        self.t = t
        self.x = x
        self.y = y
        self.R = R
        self.omega = omega
        self.f_ff = f_ff
        self.f_pd = f_pd
        self.tau = tau
        self.max_so3_drift = max_so3_drift
        k_p, k_v = scenario.gains.k_p, scenario.gains.k_v
        J = scenario.params.inertia
        e_w = omega - R[:, 2, :]  # row 3 of each R is R.T e3
        self.e_w_norm = np.linalg.norm(e_w, axis=1)
        self.pos_norm = np.hypot(x, y)
        self.psi = 0.5 * k_p * (x * x + y * y)
        self.V = 0.5 * np.einsum("ij,j,ij->i", e_w, J, e_w) + self.psi
        self.Vdot = -k_v * self.e_w_norm**2

    def __len__(self) -> int:
        return len(self.t)

    def state_at(self, i: int) -> RobotState:
        return RobotState(x=float(self.x[i]), y=float(self.y[i]), R=self.R[i], omega=self.omega[i])

    def control_at(self, i: int) -> ControlOutput:
        return ControlOutput(f_ff=self.f_ff[i], f_pd=self.f_pd[i], tau=self.tau[i])


@dataclass(frozen=True)
class SweepSummary:
    """One sweep grid point: parameters and convergence outcome."""

    point: dict
    status: str  # "ok", or "diverged: ..."/"invalid: ..." for failed runs
    converged: bool
    settling_time: Optional[float]
    final_e_w_norm: Optional[float]
    final_pos_norm: Optional[float]
    spin_sign: Optional[int]


def step(state: RobotState, tau: np.ndarray, params: RobotParams, dt: float) -> RobotState:
    """One integrator step holding the torque constant."""
    if not dt > 0.0:
        raise ValueError(f"dt must be > 0, got {dt}")
    tau = np.asarray(tau, dtype=float)
    x, y, R, w1, w2, w3 = _core.step_scalar(
        float(state.x), float(state.y), tuple(state.R.ravel().tolist()),
        float(state.omega[0]), float(state.omega[1]), float(state.omega[2]),
        dt, _par_tuple(params), torque=(tau[0], tau[1], tau[2]),
    )
    total = x + y + w1 + w2 + w3
    if not np.isfinite(total):
        raise DivergenceError("non-finite state after one step (check torque and dt)")
    return RobotState(x=x, y=y, R=np.array(R).reshape(3, 3), omega=np.array([w1, w2, w3]))


def simulate(scenario: Scenario, torque: Optional[TorqueSchedule] = None) -> Trajectory:
    """Run a scenario to its horizon and return the recorded trajectory.

    Closed-loop mode computes the commanded torque from the scenario gains
    at every stage; `torque` must be None. Open-loop mode requires a
    torque schedule (constant vector, per-step table, or callable of
    (t, RobotState)).
    """
    cfg = scenario.sim
    closed = cfg.mode == "closed-loop"
    if closed and torque is not None:
        raise ValueError("closed-loop mode computes its own torque; pass mode='open-loop' for schedules")
    if not closed and torque is None:
        raise ValueError("open-loop mode requires a torque schedule")

    core_torque = None
    if not closed:
        if callable(torque):
            fn = torque

            def core_torque(t, x, y, R9, w):  # noqa: ANN001 - internal adapter
                s = RobotState(x=x, y=y, R=np.array(R9).reshape(3, 3), omega=np.array(w))
                out = np.asarray(fn(t, s), dtype=float)
                return (out[0], out[1], out[2])

        else:
            arr = np.asarray(torque, dtype=float)
            if arr.shape == (3,):
                core_torque = (arr[0], arr[1], arr[2])
            elif arr.ndim == 2 and arr.shape == (cfg.n_steps, 3):
                core_torque = arr
            else:
                raise ValueError(
                    f"torque schedule must have shape (3,) or (n_steps, 3) = ({cfg.n_steps}, 3), got {arr.shape}"
                )

    s0 = scenario.initial
    times, states, controls, max_drift = _core.run_loop(
        float(s0.x), float(s0.y), tuple(s0.R.ravel().tolist()),
        float(s0.omega[0]), float(s0.omega[1]), float(s0.omega[2]),
        cfg.dt, cfg.n_steps, _par_tuple(scenario.params),
        gains=(scenario.gains.k_p, scenario.gains.k_v) if closed else None,
        torque=core_torque,
        record_every=cfg.record_every, reproject_every=cfg.reproject_every,
    )
    return Trajectory(
        scenario=scenario,
        t=times,
        x=states[:, 0], y=states[:, 1],
        R=states[:, 2:11].reshape(-1, 3, 3),
        omega=states[:, 11:14],
        f_ff=controls[:, 0:3], f_pd=controls[:, 3:6], tau=controls[:, 6:9],
        max_so3_drift=max_drift,
    )


# Scenario presets reproducing the two published simulation runs: shell
# radius 0.4 m, inertia diag(0.3, 0.4, 0.5) kg m^2, gains k_p = 5, k_v = 1,
# start at (x, y) = (4, 3) m at rest. fig2 tilts the initial attitude 45
# degrees about the body X axis; fig3 starts upside down (180 degrees).
_SQ2 = 1.0 / np.sqrt(2.0)
_R0_FIG2 = np.array([[1.0, 0.0, 0.0], [0.0, _SQ2, -_SQ2], [0.0, _SQ2, _SQ2]])
_R0_FIG3 = np.diag([1.0, -1.0, -1.0])
PRESET_NAMES = ("fig2", "fig3")


def preset_scenario(name: str, **sim_overrides) -> Scenario:
    """Build a named preset Scenario; sim_overrides patch the SimConfig."""
    try:
        R0 = {"fig2": _R0_FIG2, "fig3": _R0_FIG3}[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}") from None
    return Scenario(
        params=RobotParams(radius=0.4, mass=1.0, inertia=np.array([0.3, 0.4, 0.5])),
        gains=Gains(k_p=5.0, k_v=1.0),
        initial=RobotState(x=4.0, y=3.0, R=R0, omega=np.zeros(3)),
        sim=SimConfig(**sim_overrides),
    )


# Sweepable scenario fields. tilt_x builds the initial attitude as a
# rotation by the given angle about the body X axis.
SWEEP_KEYS = ("k_p", "k_v", "dt", "x0", "y0", "wx", "wy", "wz", "tilt_x")


def _apply_point(base: Scenario, point: dict) -> Scenario:
    gains = base.gains
    if "k_p" in point or "k_v" in point:
        gains = Gains(k_p=point.get("k_p", gains.k_p), k_v=point.get("k_v", gains.k_v))
    sim = base.sim if "dt" not in point else replace(base.sim, dt=point["dt"])
    init = base.initial
    w = init.omega.copy()
    for i, key in enumerate(("wx", "wy", "wz")):
        if key in point:
            w[i] = point[key]
    R0 = exp_so3(np.array([point["tilt_x"], 0.0, 0.0])) if "tilt_x" in point else init.R
    init = RobotState(
        x=point.get("x0", init.x), y=point.get("y0", init.y), R=R0, omega=w
    )
    return Scenario(params=base.params, gains=gains, initial=init, sim=sim)


def sweep(base: Scenario, grid: dict) -> list:
    """Run one simulation per grid point and summarize each.

    grid maps sweepable field names (see SWEEP_KEYS) to value sequences;
    points are enumerated in deterministic row-major order over the given
    key order. Divergent or invalid points yield failed summaries instead
    of raising.
    """
    from itertools import product

    from .analysis import check_convergence

    if not grid:
        raise ValueError("sweep grid must be nonempty")
    for key in grid:
        if key not in SWEEP_KEYS:
            raise ValueError(f"unknown sweep key {key!r}; valid: {', '.join(SWEEP_KEYS)}")
    keys = list(grid)
    rows = []
    for values in product(*(grid[k] for k in keys)):
        point = dict(zip(keys, values))
        try:
            traj = simulate(_apply_point(base, point))
            report = check_convergence(traj)
            rows.append(SweepSummary(
                point=point, status="ok",
                converged=report.converged, settling_time=report.settling_time,
                final_e_w_norm=float(traj.e_w_norm[-1]),
                final_pos_norm=float(traj.pos_norm[-1]),
                spin_sign=report.spin_sign,
            ))
        except DivergenceError as exc:
            rows.append(SweepSummary(point=point, status=f"diverged: {exc}", converged=False,
                                     settling_time=None, final_e_w_norm=None,
                                     final_pos_norm=None, spin_sign=None))
        except ValueError as exc:
            rows.append(SweepSummary(point=point, status=f"invalid: {exc}", converged=False,
                                     settling_time=None, final_e_w_norm=None,
                                     final_pos_norm=None, spin_sign=None))
    return rows


def _par_tuple(params: RobotParams):
    J = params.inertia
    return (float(params.radius), float(J[0]), float(J[1]), float(J[2]))
