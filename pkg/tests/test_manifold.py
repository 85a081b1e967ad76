import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hzd_walker.errors import NoRealRoot, PreconditionViolated
from hzd_walker.manifold import ManifoldParams

shifts = st.floats(0.0, 0.1)
Cs = st.floats(0.3, 4.0)


def test_lip_center_and_value():
    m = ManifoldParams.from_shift(1.0)
    assert m.Xa == 0.0
    assert m.s_a(0.0, 0.0) == pytest.approx(-0.5, abs=1e-15)


@given(Cs, shifts, shifts)
def test_endpoints_on_manifold(C, DX, DY):
    m = ManifoldParams.from_shift(C, DX, DY)
    assert abs(m.s_a(m.X0, m.Y0)) < 1e-12
    assert abs(m.s_a(m.Xf, m.Yf)) < 1e-12
    assert m.Xa == pytest.approx(0.5 * ((m.Xf + m.X0) + C * (m.Yf - m.Y0)))


def test_rejects_bad_parameters():
    with pytest.raises(PreconditionViolated):
        ManifoldParams.from_shift(0.0)
    with pytest.raises(PreconditionViolated):
        ManifoldParams(C=1.0, X0=-0.5, Y0=0.5, Xf=0.6, Yf=0.5)


def test_gradient_known_values():
    m = ManifoldParams.from_shift(1.0)
    assert m.gradient(m.Xa, 0.0) == (0.0, 0.0)
    assert m.gradient(0.5, 0.5) == pytest.approx((1.0, 1.0))


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    h = 1e-6
    for _ in range(100):
        m = ManifoldParams.from_shift(rng.uniform(0.5, 3.0), rng.uniform(0, 0.05), rng.uniform(0, 0.05))
        X, Y = rng.uniform(-1, 1, size=2)
        fd = ((m.s_a(X + h, Y) - m.s_a(X - h, Y)) / (2 * h), (m.s_a(X, Y + h) - m.s_a(X, Y - h)) / (2 * h))
        assert np.allclose(m.gradient(X, Y), fd, atol=1e-8)


@given(Cs, st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_exactly_quadratic(C, X, Y, dx, dy):
    m = ManifoldParams.from_shift(C)
    vals = [m.s_a(X + k * dx, Y + k * dy) for k in range(4)]
    d2 = [vals[k + 2] - 2 * vals[k + 1] + vals[k] for k in range(2)]
    assert d2[0] == pytest.approx(d2[1], abs=1e-9)
    assert d2[0] == pytest.approx(2 * (dx * dx + C * dy * dy), abs=1e-9)


@given(Cs, shifts, shifts, st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_minimum_at_center(C, DX, DY, fx, fy):
    m = ManifoldParams.from_shift(C, DX, DY)
    X = m.Xa + (fx - 0.5) * 0.5
    Y = (fy - 0.5) * 0.5
    assert m.s_a(m.Xa, 0.0) <= m.s_a(X, Y)
    assert m.s_a(m.Xa, 0.0) < 0


def test_exit_tangent_lip():
    tx, ty = ManifoldParams.from_shift(1.0).exit_tangent()
    assert (tx, ty) == pytest.approx((1 / math.sqrt(2), -1 / math.sqrt(2)), abs=1e-15)


@given(Cs, shifts, shifts)
def test_exit_tangent_orthogonal_unit(C, DX, DY):
    m = ManifoldParams.from_shift(C, DX, DY)
    tx, ty = m.exit_tangent()
    gx, gy = m.gradient(m.Xf, m.Yf)
    assert tx * gx + ty * gy == pytest.approx(0.0, abs=1e-12)
    assert math.hypot(tx, ty) == pytest.approx(1.0)
    assert tx > 0


def test_exit_tangent_invariant_to_scaling():
    # s_a scaled by k has gradient scaled by k; only the direction enters
    m = ManifoldParams.from_shift(1.3, 0.01, 0.02)
    gx, gy = m.gradient(m.Xf, m.Yf)
    for k in (0.1, 7.0):
        n = math.hypot(k * gx, k * gy)
        t = (-k * gy / n, k * gx / n)
        if t[0] < 0:
            t = (-t[0], -t[1])
        assert t == pytest.approx(m.exit_tangent())


def test_optimal_C_aligns_tangent_with_initial_velocity():
    xd, yd = 2.3147, -1.5136
    m = ManifoldParams.from_shift(-xd / yd)
    tx, ty = m.exit_tangent()
    assert abs(tx * yd - ty * xd) < 1e-10


def test_x_on_manifold_roots():
    m = ManifoldParams.from_shift(1.1, 0.015, 0.011)
    assert m.x_on_manifold(m.Yf) == pytest.approx(m.Xf, abs=1e-14)
    assert m.x_on_manifold(m.Y0) == pytest.approx(2 * m.Xa - m.X0, abs=1e-14)
    for Y in np.linspace(-0.6, 0.6, 25):
        assert abs(m.s_a(m.x_on_manifold(Y), Y)) < 1e-12
    with pytest.raises(NoRealRoot):
        m.x_on_manifold(5.0)


def test_y_on_manifold_roundtrip():
    m = ManifoldParams.from_shift(1.4, 0.02, 0.01)
    assert m.y_on_manifold(m.Xf) == pytest.approx(m.Yf, abs=1e-13)
    with pytest.raises(NoRealRoot):
        m.y_on_manifold(10.0)
