import numpy as np
import pytest
from scipy.spatial.transform import Rotation

import spherebot as sb


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)


def random_rotations(n: int, seed: int) -> np.ndarray:
    """(n, 3, 3) uniform random rotation matrices, deterministic per seed."""
    return Rotation.random(n, random_state=seed).as_matrix()


@pytest.fixture(scope="session")
def params():
    return sb.RobotParams(radius=0.4, mass=1.0, inertia=np.array([0.3, 0.4, 0.5]))


@pytest.fixture(scope="session")
def gains():
    return sb.Gains(k_p=5.0, k_v=1.0)


@pytest.fixture(scope="session")
def fig2_dense():
    """fig2 preset recorded at every step (dt = 1e-3, 60 s)."""
    return sb.simulate(sb.preset_scenario("fig2", record_every=1))


@pytest.fixture(scope="session")
def fig3_dense():
    return sb.simulate(sb.preset_scenario("fig3", record_every=1))


def random_states(n: int, seed: int, pos_scale: float = 3.0, omega_scale: float = 2.0):
    """Deterministic list of generic RobotStates."""
    gen = np.random.default_rng(seed)
    Rs = random_rotations(n, seed)
    states = []
    for i in range(n):
        x, y = gen.normal(scale=pos_scale, size=2)
        w = gen.normal(scale=omega_scale, size=3)
        states.append(sb.RobotState(x=float(x), y=float(y), R=Rs[i], omega=w))
    return states
