import os
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ottospin import ramp_hamiltonian
from ottospin._kernels import (
    rk4_propagate_numba,
    rk4_propagate_numpy,
    stage_coefficients,
)
from ottospin.propagator import RampProtocol

PROTO = RampProtocol(2000.0, 3600.0, 200e-6, steps=512)


def _hamiltonian_from_coefficients(e01, e10, j):
    scale = -2j * np.pi
    return np.array([[0.0, e01[j] / scale], [e10[j] / scale, 0.0]])


@pytest.mark.parametrize("direction", ["expansion", "compression"])
def test_stage_coefficients_match_ramp_hamiltonian(direction):
    e01, e10, dt = stage_coefficients(PROTO.nu_cold, PROTO.nu_hot, PROTO.tau,
                                      PROTO.steps, direction)
    assert dt == PROTO.tau / PROTO.steps
    for j in (0, 1, 17, 2 * PROTO.steps):
        t = 0.5 * j * dt
        expected = ramp_hamiltonian(PROTO, t, direction)
        assert_allclose(_hamiltonian_from_coefficients(e01, e10, j), expected, atol=1e-10)


@pytest.mark.skipif(rk4_propagate_numba is None, reason="numba backend unavailable")
def test_backends_agree():
    e01, e10, dt = stage_coefficients(PROTO.nu_cold, PROTO.nu_hot, PROTO.tau,
                                      PROTO.steps, "expansion")
    u_jit, drift_jit = rk4_propagate_numba(e01, e10, dt, PROTO.steps)
    u_np, drift_np = rk4_propagate_numpy(e01, e10, dt, PROTO.steps)
    assert np.max(np.abs(u_jit - u_np)) < 1e-12
    assert abs(drift_jit - drift_np) < 1e-12


def test_projection_keeps_result_unitary_even_when_raw_drifts():
    e01, e10, dt = stage_coefficients(PROTO.nu_cold, PROTO.nu_hot, PROTO.tau, 10,
                                      "expansion")
    u, drift = rk4_propagate_numpy(e01, e10, dt, 10)
    assert drift > 1e-9
    assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-12


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, OTTOSPIN_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from ottospin._kernels import BACKEND; print(BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_default_backend_reported():
    from ottospin._kernels import BACKEND

    assert BACKEND in ("numba", "numpy")
