import math

import numpy as np
import pytest

from hzd_walker.dynamics import (
    IntegrationOptions,
    ZeroDynState,
    integrate_for,
    integrate_until_switch,
    m_xy,
    momenta_from_velocities,
    vector_field,
    velocities_from_momenta,
)
from hzd_walker.errors import NoSwitchReached, SingularConstraint
from hzd_walker.gait import default_opts_for, start_of_step
from hzd_walker.lip import LipParams, LipState, flow, periodic_velocities
from hzd_walker.manifold import ManifoldParams
from hzd_walker.surface import SurfaceParams

M1 = ManifoldParams.from_shift(1.0)
FLAT = SurfaceParams(0.7, 0.0, M1)
P = LipParams(0.7)


def test_m_xy_flat():
    assert np.array_equal(m_xy(FLAT, 0.3, -0.2), [[0.0, -0.7], [0.7, 0.0]])
    assert np.linalg.det(m_xy(FLAT, 0.1, 0.1)) == pytest.approx(0.49)


def test_lip_velocities():
    s = ZeroDynState(0.1, 0.2, 0.35, 1.4)
    assert velocities_from_momenta(s, FLAT) == pytest.approx((1.4 / 0.7, -0.35 / 0.7))


def test_round_trip():
    s = SurfaceParams(0.7, 0.02, ManifoldParams.from_shift(1.1, 0.015, 0.011))
    rng = np.random.default_rng(2)
    for _ in range(50):
        X, Y = rng.uniform(-0.5, 0.5, 2)
        xd, yd = rng.uniform(-3, 3, 2)
        st = momenta_from_velocities(s, X, Y, xd, yd)
        assert velocities_from_momenta(st, s) == pytest.approx((xd, yd), abs=1e-12)


def test_singular_constraint():
    # det = f (f - fx X - fy Y); the second factor stays positive for a >= 0,
    # so the surface degenerates only where the height itself reaches zero
    s = SurfaceParams(0.01, 1.0, M1)
    X = math.sqrt(0.51)
    assert abs(np.linalg.det(m_xy(s, X, 0.0))) < 1e-12
    with pytest.raises(SingularConstraint):
        velocities_from_momenta(ZeroDynState(X, 0.0, 0.1, 0.1), s)


def test_vector_field():
    f = vector_field(ZeroDynState(0.3, 0.0, 0.1, 0.2), FLAT)
    assert f.sigmaX == 0.0
    assert f.sigmaY == pytest.approx(2.943, abs=1e-12)


def test_lip_field_matches_analytic():
    w2 = P.omega_sq
    for X in np.linspace(-0.5, 0.5, 5):
        for Y in np.linspace(-0.5, 0.5, 5):
            xd, yd = 1.3, -0.7
            st = momenta_from_velocities(FLAT, X, Y, xd, yd)
            f = vector_field(st, FLAT)
            assert (f.X, f.Y) == pytest.approx((xd, yd), abs=1e-12)
            assert f.sigmaY / 0.7 == pytest.approx(w2 * X, abs=1e-12)
            assert -f.sigmaX / 0.7 == pytest.approx(w2 * Y, abs=1e-12)


def test_integrator_matches_lip_flow():
    s = LipState(-0.4, 0.3, 1.7, -1.1)
    st = momenta_from_velocities(FLAT, s.X, s.Y, s.Xdot, s.Ydot)
    out = integrate_for(st, FLAT, 1.0)
    ref = flow(s, P, 1.0)
    xd, yd = velocities_from_momenta(out, FLAT)
    assert np.allclose([out.X, out.Y, xd, yd], [ref.X, ref.Y, ref.Xdot, ref.Ydot], atol=1e-8)


def test_lip_switch_time():
    xd, yd = periodic_velocities(0.6, P)
    st = momenta_from_velocities(FLAT, -0.5, 0.5, xd, yd)
    s_minus, T, trace = integrate_until_switch(st, FLAT, M1, IntegrationOptions(t_max=3.0))
    assert T == pytest.approx(0.6, abs=1e-6)
    assert (s_minus.X, s_minus.Y) == pytest.approx((0.5, 0.5), abs=1e-8)
    assert np.all(np.diff(trace.t) > 0)
    assert abs(M1.s_a(*trace.states[-1, :2])) < 1e-12
    ref = flow(LipState(-0.5, 0.5, xd, yd), P, T)
    assert (s_minus.X, s_minus.Y) == pytest.approx((ref.X, ref.Y), abs=1e-8)


def test_immediate_switch():
    xd, yd = 2.0, 1.5
    st = momenta_from_velocities(FLAT, 0.5, 0.5, xd, yd)
    s_minus, T, _ = integrate_until_switch(st, FLAT, M1)
    assert T == 0.0 and s_minus == st


def test_no_switch():
    st = momenta_from_velocities(FLAT, -0.5, 0.5, 0.1, 0.0)
    with pytest.raises(NoSwitchReached):
        integrate_until_switch(st, FLAT, M1, IntegrationOptions(t_max=0.01))


def test_momentum_integral_and_vlip_exit(vlip_gait):
    g = vlip_gait
    m = g.manifold
    surface, s0 = start_of_step(g.surface, m.X0, m.Y0, g.Xdot0, g.Ydot0, g.zdot_carry)
    opts = default_opts_for(g, IntegrationOptions(n_samples=2001))
    s_minus, T, tr = integrate_until_switch(s0, surface, m, opts)
    assert np.allclose(s_minus, g.exit_state, atol=1e-7)
    assert T == pytest.approx(0.7, abs=1e-6)
    # sigma_X + g * int Y dt is constant
    from scipy.integrate import cumulative_trapezoid

    inv = tr.states[:, 2] + 9.81 * cumulative_trapezoid(tr.states[:, 1], tr.t, initial=0.0)
    assert np.ptp(inv) < 1e-6
    dets = [np.linalg.det(m_xy(surface, X, Y)) for X, Y in tr.states[:, :2]]
    assert min(dets) > 0
    # velocities agree with differentiated positions
    fd = np.gradient(tr.states[:, 0], tr.t)
    assert np.allclose(fd[1:-1], tr.velocities[1:-1, 0], atol=1e-5)
    assert m.rate(*s_minus[:2], *velocities_from_momenta(s_minus, surface)) > 0
