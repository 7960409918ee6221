"""Trajectory/report serialization and TOML scenario loading.

Exports are deterministic: floats are written with 17 significant digits
(exact float64 round trip), keys are sorted, and no timestamps or absolute
paths are embedded, so identical runs produce byte-identical files.
"""

import json
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .analysis import ConvergenceReport
from .control import Gains
from .model import RobotParams, RobotState
from .simulate import Scenario, SimConfig, SweepSummary, Trajectory
from .so3 import exp_so3, project_so3, rotation_defect

CSV_HEADER = ("t,x,y,r11,r12,r13,r21,r22,r23,r31,r32,r33,"
              "wx,wy,wz,tau_x,tau_y,tau_z,V,Vdot,e_w_norm")

# Attitude matrices from config files are projected to SO(3) when within
# this orthogonality tolerance, rejected beyond it.
CONFIG_ATTITUDE_TOL = 1e-6


def _fmt(v: float) -> str:
    return f"{v:.16e}"


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Write one row per recorded sample under the fixed 21-column schema."""
    rows = [CSV_HEADER]
    R = traj.R.reshape(len(traj), 9)
    for i in range(len(traj)):
        vals = (traj.t[i], traj.x[i], traj.y[i], *R[i], *traj.omega[i], *traj.tau[i],
                traj.V[i], traj.Vdot[i], traj.e_w_norm[i])
        rows.append(",".join(_fmt(v) for v in vals))
    Path(path).write_text("\n".join(rows) + "\n")


def write_trajectory_json(traj: Trajectory, path) -> None:
    """Columnar JSON export with the same fields as the CSV schema."""
    doc = {
        "t": traj.t.tolist(),
        "x": traj.x.tolist(),
        "y": traj.y.tolist(),
        "R": traj.R.reshape(len(traj), 9).tolist(),
        "omega": traj.omega.tolist(),
        "tau": traj.tau.tolist(),
        "V": traj.V.tolist(),
        "Vdot": traj.Vdot.tolist(),
        "e_w_norm": traj.e_w_norm.tolist(),
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n")


def scenario_dict(sc: Scenario) -> dict:
    return {
        "params": {"radius": sc.params.radius, "mass": sc.params.mass,
                   "inertia": sc.params.inertia.tolist()},
        "gains": {"k_p": sc.gains.k_p, "k_v": sc.gains.k_v},
        "initial": {"x": sc.initial.x, "y": sc.initial.y,
                    "attitude": sc.initial.R.ravel().tolist(),
                    "omega": sc.initial.omega.tolist()},
        "sim": {"dt": sc.sim.dt, "t_final": sc.sim.t_final,
                "record_every": sc.sim.record_every,
                "reproject_every": sc.sim.reproject_every, "mode": sc.sim.mode},
    }


def build_run_summary(source: str, traj: Trajectory, report: ConvergenceReport,
                      trajectory_file: str) -> dict:
    return {
        "source": source,
        **scenario_dict(traj.scenario),
        "report": {
            "converged": report.converged,
            "settling_time": report.settling_time,
            "spin_sign": report.spin_sign,
            "max_lyapunov_violation": report.max_lyapunov_violation,
            "final_e_w_norm": report.final_e_w_norm,
            "final_pos_norm": report.final_pos_norm,
        },
        "final_state": {"t": float(traj.t[-1]), "x": float(traj.x[-1]), "y": float(traj.y[-1]),
                        "attitude": traj.R[-1].ravel().tolist(),
                        "omega": traj.omega[-1].tolist()},
        "samples": len(traj),
        "max_so3_drift": traj.max_so3_drift,
        "trajectory_file": trajectory_file,
    }


def write_summary_json(summary: dict, path) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def write_sweep_csv(rows: list, grid_keys: list, path) -> None:
    """Deterministic sweep table: one row per grid point, grid order preserved."""
    header = [*grid_keys, "status", "converged", "settling_time",
              "final_e_w_norm", "final_pos_norm", "spin_sign"]
    lines = [",".join(header)]
    for row in rows:
        assert isinstance(row, SweepSummary)
        cells = [_fmt(row.point[k]) for k in grid_keys]
        cells.append(row.status.replace(",", ";"))
        cells.append("true" if row.converged else "false")
        for v in (row.settling_time, row.final_e_w_norm, row.final_pos_norm):
            cells.append("" if v is None else _fmt(v))
        cells.append("" if row.spin_sign is None else str(row.spin_sign))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def _attitude_from_config(initial: dict) -> np.ndarray:
    if "attitude" in initial and "axis_angle" in initial:
        raise ValueError("[initial] must give either 'attitude' or 'axis_angle', not both")
    if "axis_angle" in initial:
        v = np.asarray(initial["axis_angle"], dtype=float)
        if v.shape != (3,):
            raise ValueError("[initial] axis_angle must have 3 entries")
        return exp_so3(v)
    if "attitude" in initial:
        entries = np.asarray(initial["attitude"], dtype=float)
        if entries.shape != (9,):
            raise ValueError("[initial] attitude must be a 9-entry row-major matrix")
        M = entries.reshape(3, 3)
        defect = rotation_defect(M)
        if defect > CONFIG_ATTITUDE_TOL:
            raise ValueError(
                f"[initial] attitude is not orthogonal (defect {defect:.3e} > {CONFIG_ATTITUDE_TOL:.1e})"
            )
        return project_so3(M)
    return np.eye(3)


def load_scenario_toml(path) -> Scenario:
    """Parse and validate a scenario config file.

    Expected sections: [params] (radius, mass, inertia), [gains] (k_p, k_v),
    [initial] (x, y, omega, and attitude or axis_angle), optional [sim].
    """
    path = Path(path)
    try:
        doc = tomllib.loads(path.read_text())
    except OSError as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ValueError(f"invalid TOML in {path}: {exc}") from exc
    for section in ("params", "gains", "initial"):
        if section not in doc:
            raise ValueError(f"config {path} is missing the [{section}] section")
    p, g, ini = doc["params"], doc["gains"], doc["initial"]
    try:
        params = RobotParams(radius=float(p["radius"]), mass=float(p["mass"]),
                             inertia=np.asarray(p["inertia"], dtype=float))
        gains = Gains(k_p=float(g["k_p"]), k_v=float(g["k_v"]))
        omega = np.asarray(ini.get("omega", (0.0, 0.0, 0.0)), dtype=float)
        initial = RobotState(x=float(ini.get("x", 0.0)), y=float(ini.get("y", 0.0)),
                             R=_attitude_from_config(ini), omega=omega)
        sim = SimConfig(**doc.get("sim", {}))
    except KeyError as exc:
        raise ValueError(f"config {path}: missing key {exc}") from exc
    except TypeError as exc:
        raise ValueError(f"config {path}: {exc}") from exc
    return Scenario(params=params, gains=gains, initial=initial, sim=sim)
