"""Pins the scalar fast path in _core to the public numpy reference math.

The simulator unrolls the controller, rate field, and exponential update on
plain floats for speed; any edit that lets the two implementations drift
apart must fail here.
"""

import numpy as np

import spherebot as sb
from spherebot import _core

from conftest import random_states


def _unpack(s):
    return float(s.x), float(s.y), tuple(s.R.ravel().tolist()), s.omega


def test_control_matches_public_controller(params, gains):
    par = (params.radius, *params.inertia.tolist())
    for s in random_states(300, seed=101):
        x, y, R9, w = _unpack(s)
        out = _core._control(x, y, R9, w[0], w[1], w[2], gains.k_p, gains.k_v, *par)
        ff = sb.feedforward(s, params)
        pd = sb.pd_term(s, gains, params)
        assert np.max(np.abs(np.array(out[0:3]) - ff)) <= 1e-13
        assert np.max(np.abs(np.array(out[3:6]) - pd)) <= 1e-13


def test_rates_match_model(params):
    par = (params.radius, *params.inertia.tolist())
    gen = np.random.default_rng(103)
    for s in random_states(300, seed=107):
        tau = gen.normal(size=3)
        x, y, R9, w = _unpack(s)
        xd, yd, a, b, c = _core._rates(x, y, R9, w[0], w[1], w[2], *tau, *par)
        kxd, kyd, _ = sb.kinematics(s, params)
        wd = sb.dynamics(s, tau, params)
        assert abs(xd - kxd) <= 1e-13 and abs(yd - kyd) <= 1e-13
        assert np.max(np.abs(np.array([a, b, c]) - wd)) <= 1e-13


def test_exp_update_matches_exp_so3(rng):
    from conftest import random_rotations

    Rs = random_rotations(100, seed=109)
    for R in Rs:
        w = rng.normal(size=3)
        dt = float(rng.uniform(1e-8, 0.05))
        got = np.array(_core._exp_update(tuple(R.ravel().tolist()), *w, dt)).reshape(3, 3)
        expected = R @ sb.exp_so3(dt * w)
        assert np.max(np.abs(got - expected)) <= 1e-13


def test_project9_matches_project_so3(rng):
    from conftest import random_rotations

    for R in random_rotations(20, seed=113):
        M = R + 1e-6 * rng.normal(size=(3, 3))
        got = np.array(_core._project9(tuple(M.ravel().tolist()))).reshape(3, 3)
        assert np.max(np.abs(got - sb.project_so3(M))) <= 1e-12


def test_orth_defect_matches_frobenius(rng):
    from spherebot.so3 import rotation_defect

    M = np.eye(3) + 1e-5 * rng.normal(size=(3, 3))
    got = _core._orth_defect(tuple(M.ravel().tolist()))
    assert abs(got - rotation_defect(M)) <= 1e-15
