"""Command-line entry point.

Verbs: run (one scenario), sweep (grid of scenarios), presets (list the
built-in scenarios), validate (check a config file). Scenarios come from
--preset or --config; --dt/--t-final override the integration settings.
Output directory: --out, else the SPHEREBOT_OUT_DIR environment variable,
else the working directory.

Exit status: 0 on success (a non-converging but completed run is still
success; see the summary), 2 on usage/config errors, 3 on divergence.
"""

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import io as sio
from .analysis import check_convergence
from .simulate import PRESET_NAMES, DivergenceError, preset_scenario, simulate, sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DIVERGED = 3

OUT_DIR_ENV = "SPHEREBOT_OUT_DIR"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spherebot",
                                     description="Rolling spherical robot simulation and control")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_source(p):
        p.add_argument("--preset", choices=PRESET_NAMES, help="built-in scenario")
        p.add_argument("--config", help="TOML scenario file")
        p.add_argument("--out", default=None, help=f"output directory (default: ${OUT_DIR_ENV} or .)")
        p.add_argument("--dt", type=float, default=None, help="override step size (s)")
        p.add_argument("--t-final", type=float, default=None, help="override horizon (s)")

    p_run = sub.add_parser("run", help="simulate one scenario and export trajectory + summary")
    add_source(p_run)
    p_run.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="trajectory export format (default csv)")

    p_sweep = sub.add_parser("sweep", help="run a parameter grid and export a summary table")
    add_source(p_sweep)
    p_sweep.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2,...",
                         help="grid values, repeatable (keys: k_p k_v dt x0 y0 wx wy wz tilt_x)")

    sub.add_parser("presets", help="list built-in scenarios")

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("--config", required=True, help="TOML scenario file")
    return parser


def _load_scenario(args):
    if (args.preset is None) == (args.config is None):
        raise ValueError("exactly one of --preset or --config is required")
    if args.preset is not None:
        scenario, name = preset_scenario(args.preset), args.preset
    else:
        scenario, name = sio.load_scenario_toml(args.config), Path(args.config).stem
    overrides = {}
    if args.dt is not None:
        overrides["dt"] = args.dt
    if args.t_final is not None:
        overrides["t_final"] = args.t_final
    if overrides:
        scenario = replace(scenario, sim=replace(scenario.sim, **overrides))
    return scenario, name


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_DIR_ENV) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_run(args) -> int:
    scenario, name = _load_scenario(args)
    out = _out_dir(args)
    traj = simulate(scenario)
    report = check_convergence(traj)
    traj_file = f"{name}_trajectory.{args.format}"
    if args.format == "csv":
        sio.write_trajectory_csv(traj, out / traj_file)
    else:
        sio.write_trajectory_json(traj, out / traj_file)
    source = f"preset:{name}" if args.preset else f"config:{name}"
    summary = sio.build_run_summary(source, traj, report, traj_file)
    sio.write_summary_json(summary, out / f"{name}_summary.json")
    status = "converged" if report.converged else "did not converge"
    print(f"{name}: {status}"
          + (f" at t = {report.settling_time:g} s" if report.converged else "")
          + f", spin sign {report.spin_sign:+d}; wrote {traj_file}")
    return EXIT_OK


def _parse_grid(specs) -> dict:
    grid = {}
    for spec in specs:
        key, _, values = spec.partition("=")
        if not values:
            raise ValueError(f"--grid expects KEY=V1,V2,..., got {spec!r}")
        grid[key.strip()] = [float(v) for v in values.split(",")]
    if not grid:
        raise ValueError("sweep requires at least one --grid")
    return grid


def _cmd_sweep(args) -> int:
    scenario, name = _load_scenario(args)
    grid = _parse_grid(args.grid)
    out = _out_dir(args)
    rows = sweep(scenario, grid)
    table = f"{name}_sweep.csv"
    sio.write_sweep_csv(rows, list(grid), out / table)
    n_ok = sum(r.converged for r in rows)
    print(f"{name}: {len(rows)} grid points, {n_ok} converged; wrote {table}")
    return EXIT_OK


def _cmd_presets() -> int:
    for name in PRESET_NAMES:
        sc = preset_scenario(name)
        tilt = "45 deg about X" if name == "fig2" else "180 deg about X"
        print(f"{name}: r={sc.params.radius} J={sc.params.inertia.tolist()} "
              f"k_p={sc.gains.k_p} k_v={sc.gains.k_v} start=({sc.initial.x}, {sc.initial.y}) "
              f"attitude {tilt}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    scenario = sio.load_scenario_toml(args.config)
    print(f"{args.config}: ok ({scenario.sim.mode}, dt={scenario.sim.dt:g}, "
          f"t_final={scenario.sim.t_final:g})")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "presets":
            return _cmd_presets()
        return _cmd_validate(args)
    except DivergenceError as exc:
        print(f"error: simulation diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
