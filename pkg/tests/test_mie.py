import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornerlab.incident import eval_incident, plane_wave
from cornerlab.mie import MieScene, mie_coefficients, mie_far_field, mie_total_field


def test_no_contrast_no_scattering():
    s = MieScene(1.0, 1.0, 2.0)
    _, an, _ = mie_coefficients(s)
    assert np.max(np.abs(an)) < 1e-15
    assert np.max(np.abs(mie_far_field(s, 0.0).values)) < 1e-15
    x = np.random.default_rng(0).uniform(-2, 2, (50, 2))
    assert np.allclose(mie_total_field(s, 0.3, x), eval_incident(plane_wave(2.0, 0.3), x), atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(ka=st.floats(0.2, 10.0), q0=st.floats(0.3, 4.0))
def test_mode_map_is_unitary(ka, q0):
    # lossless disk: the exterior S-matrix entries 1 + 2 a_n have unit modulus
    _, an, _ = mie_coefficients(MieScene(1.0, q0, ka))
    assert np.max(np.abs(np.abs(1 + 2 * an) - 1)) < 1e-10


def test_truncation_self_convergence():
    s = MieScene(1.0, 1.5, 4.0)
    f1 = mie_far_field(s, 0.2)
    f2 = mie_far_field(MieScene(1.0, 1.5, 4.0, n_modes=2 * s.modes), 0.2)
    assert f1.distance(f2) <= 1e-12 * f2.norm()


def test_transmission_conditions():
    s = MieScene(1.3, 2.2, 3.0, center=(0.4, -0.2))
    c = np.asarray(s.center)
    t = np.linspace(0, 2 * np.pi, 37)
    nrm = np.stack([np.cos(t), np.sin(t)], axis=1)
    on = c + s.radius * nrm
    uin = mie_total_field(s, 0.5, on, side="in")
    uout = mie_total_field(s, 0.5, on, side="out")
    assert np.max(np.abs(uin - uout)) <= 1e-10 * np.max(np.abs(uout))
    d = 1e-5
    din = (mie_total_field(s, 0.5, on + d * nrm, "in") - mie_total_field(s, 0.5, on - d * nrm, "in")) / (2 * d)
    dout = (mie_total_field(s, 0.5, on + d * nrm, "out") - mie_total_field(s, 0.5, on - d * nrm, "out")) / (2 * d)
    assert np.max(np.abs(din - dout)) <= 1e-8 * np.max(np.abs(dout))


def test_total_field_is_continuous_at_interface():
    s = MieScene(1.0, 1.5, 2.0)
    x = np.array([[1 - 1e-12, 0.0], [1 + 1e-12, 0.0]])
    u = mie_total_field(s, 0.0, x)
    assert abs(u[0] - u[1]) < 1e-10


@settings(max_examples=20, deadline=None)
@given(theta=st.floats(0, 2 * math.pi), rot=st.floats(0, 2 * math.pi))
def test_rotation_covariance(theta, rot):
    s = MieScene(1.0, 1.5, 3.0)
    m = 64
    f1 = mie_far_field(s, theta, m)
    f2 = mie_far_field(s, theta + rot, m)
    phis = 2 * np.pi * np.arange(m) / m
    f1_rot = mie_far_field(s, theta, np.mod(phis - rot, 2 * np.pi))
    assert np.max(np.abs(f2.values - f1_rot.values)) < 1e-10
    assert f1.values.shape == (m,)


def test_invalid_scenes():
    with pytest.raises(ValueError):
        MieScene(1.0, 1.5 + 0.1j, 1.0)
    with pytest.raises(ValueError):
        MieScene(-1.0, 1.5, 1.0)
    with pytest.raises(ValueError):
        MieScene(1.0, 1.5, 1.0, n_modes=2)
