import json

import numpy as np
import pytest

import spherebot as sb
from spherebot import io as sio


@pytest.fixture(scope="module")
def short_traj():
    return sb.simulate(sb.preset_scenario("fig2", t_final=0.5, record_every=50))


GOOD_CONFIG = """
[params]
radius = 0.4
mass = 1.0
inertia = [0.3, 0.4, 0.5]

[gains]
k_p = 5.0
k_v = 1.0

[initial]
x = 4.0
y = 3.0
omega = [0.0, 0.0, 0.0]
axis_angle = [0.7853981633974483, 0.0, 0.0]

[sim]
dt = 1e-3
t_final = 2.0
record_every = 10
"""


class TestTrajectoryCsv:
    def test_header_and_shape(self, short_traj, tmp_path):
        path = tmp_path / "traj.csv"
        sio.write_trajectory_csv(short_traj, path)
        lines = path.read_text().splitlines()
        assert lines[0] == sio.CSV_HEADER
        assert len(lines) == 1 + len(short_traj)
        assert len(lines[1].split(",")) == 21

    def test_values_round_trip_exactly(self, short_traj, tmp_path):
        path = tmp_path / "traj.csv"
        sio.write_trajectory_csv(short_traj, path)
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        assert np.array_equal(data[:, 0], short_traj.t)
        assert np.array_equal(data[:, 1], short_traj.x)
        assert np.array_equal(data[:, 3:12], short_traj.R.reshape(len(short_traj), 9))
        assert np.array_equal(data[:, 12:15], short_traj.omega)
        assert np.array_equal(data[:, 15:18], short_traj.tau)
        assert np.array_equal(data[:, 18], short_traj.V)
        assert np.array_equal(data[:, 19], short_traj.Vdot)
        assert np.array_equal(data[:, 20], short_traj.e_w_norm)

    def test_byte_determinism(self, short_traj, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        sio.write_trajectory_csv(short_traj, p1)
        sio.write_trajectory_csv(sb.simulate(short_traj.scenario), p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestTrajectoryJson:
    def test_round_trip(self, short_traj, tmp_path):
        path = tmp_path / "traj.json"
        sio.write_trajectory_json(short_traj, path)
        doc = json.loads(path.read_text())
        assert doc["t"] == short_traj.t.tolist()
        assert doc["V"] == short_traj.V.tolist()
        assert np.array_equal(np.array(doc["R"]), short_traj.R.reshape(len(short_traj), 9))


class TestSummary:
    def test_numbers_match_memory_exactly(self, short_traj, tmp_path):
        rep = sb.check_convergence(short_traj)
        summary = sio.build_run_summary("preset:fig2", short_traj, rep, "x.csv")
        path = tmp_path / "s.json"
        sio.write_summary_json(summary, path)
        doc = json.loads(path.read_text())
        assert doc["final_state"]["x"] == float(short_traj.x[-1])
        assert doc["final_state"]["omega"] == short_traj.omega[-1].tolist()
        assert doc["report"]["final_e_w_norm"] == rep.final_e_w_norm
        assert doc["max_so3_drift"] == short_traj.max_so3_drift
        assert doc["samples"] == len(short_traj)


class TestSweepCsv:
    def test_table_layout(self, tmp_path):
        rows = sb.sweep(sb.preset_scenario("fig2", t_final=1.0), {"k_v": [0.5, 1.0]})
        path = tmp_path / "sweep.csv"
        sio.write_sweep_csv(rows, ["k_v"], path)
        lines = path.read_text().splitlines()
        assert lines[0] == "k_v,status,converged,settling_time,final_e_w_norm,final_pos_norm,spin_sign"
        assert len(lines) == 3
        assert lines[1].startswith(f"{0.5:.16e},ok,false,")


class TestLoadScenario:
    def test_good_config(self, tmp_path):
        p = tmp_path / "sc.toml"
        p.write_text(GOOD_CONFIG)
        sc = sio.load_scenario_toml(p)
        assert sc.params.radius == 0.4
        assert sc.sim.t_final == 2.0
        s2 = 1.0 / np.sqrt(2.0)
        assert np.max(np.abs(sc.initial.R - np.array([[1, 0, 0], [0, s2, -s2], [0, s2, s2]]))) <= 1e-15

    def test_attitude_matrix_projected(self, tmp_path):
        # slightly non-orthogonal matrix within 1e-6 gets polar-projected
        R = np.eye(3) + 3e-8 * np.arange(9).reshape(3, 3)
        cfg = GOOD_CONFIG.replace("axis_angle = [0.7853981633974483, 0.0, 0.0]",
                                  f"attitude = {R.ravel().tolist()}")
        p = tmp_path / "sc.toml"
        p.write_text(cfg)
        sc = sio.load_scenario_toml(p)
        assert sb.is_rotation(sc.initial.R, tol=1e-12)

    def test_attitude_matrix_rejected_beyond_tolerance(self, tmp_path):
        R = np.eye(3) + 1e-3 * np.ones((3, 3))
        cfg = GOOD_CONFIG.replace("axis_angle = [0.7853981633974483, 0.0, 0.0]",
                                  f"attitude = {R.ravel().tolist()}")
        p = tmp_path / "sc.toml"
        p.write_text(cfg)
        with pytest.raises(ValueError, match="orthogonal"):
            sio.load_scenario_toml(p)

    def test_both_attitude_forms_rejected(self, tmp_path):
        cfg = GOOD_CONFIG.replace("axis_angle = [0.7853981633974483, 0.0, 0.0]",
                                  "axis_angle = [0.1, 0.0, 0.0]\nattitude = "
                                  + str(np.eye(3).ravel().tolist()))
        p = tmp_path / "sc.toml"
        p.write_text(cfg)
        with pytest.raises(ValueError, match="not both"):
            sio.load_scenario_toml(p)

    def test_default_attitude_is_identity(self, tmp_path):
        cfg = GOOD_CONFIG.replace("axis_angle = [0.7853981633974483, 0.0, 0.0]", "")
        p = tmp_path / "sc.toml"
        p.write_text(cfg)
        assert np.array_equal(sio.load_scenario_toml(p).initial.R, np.eye(3))

    def test_missing_section(self, tmp_path):
        p = tmp_path / "sc.toml"
        p.write_text("[params]\nradius = 0.4\nmass = 1.0\ninertia = [0.3, 0.4, 0.5]\n")
        with pytest.raises(ValueError, match="gains"):
            sio.load_scenario_toml(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValueError, match="cannot read"):
            sio.load_scenario_toml(tmp_path / "nope.toml")

    def test_invalid_toml(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text("[params\nradius=")
        with pytest.raises(ValueError, match="invalid TOML"):
            sio.load_scenario_toml(p)

    def test_bad_sim_key(self, tmp_path):
        cfg = GOOD_CONFIG + "\nwarp_speed = 9\n"
        p = tmp_path / "sc.toml"
        p.write_text(cfg)
        with pytest.raises(ValueError, match="warp_speed"):
            sio.load_scenario_toml(p)
