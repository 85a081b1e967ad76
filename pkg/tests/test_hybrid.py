import numpy as np
import pytest

from hzd_walker.dynamics import momenta_from_velocities, velocities_from_momenta
from hzd_walker.errors import Diverged
from hzd_walker.gait import lip_periodic_gait
from hzd_walker.hybrid import WalkState, impact, initial_state, simulate, step, walk_outcome

from conftest import REF_XDOT0, REF_YDOT0


def test_lip_impact(lip_gait_06):
    g = lip_gait_06
    s_minus = momenta_from_velocities(g.surface, 0.5, 0.5, REF_XDOT0, -REF_YDOT0)
    post, _, _ = impact(s_minus, g.surface, g)
    assert (post.X, post.Y, post.Xdot, post.Ydot) == pytest.approx((-0.5, 0.5, REF_XDOT0, REF_YDOT0), abs=1e-14)


def test_impact_flips_lateral_velocity(vlip_gait):
    g = vlip_gait
    rng = np.random.default_rng(3)
    for _ in range(10):
        Y = rng.uniform(0.3, 0.6)
        X = g.manifold.x_on_manifold(Y)
        xd, yd = rng.uniform(1.5, 3.0), rng.uniform(0.5, 2.0)
        s_minus = momenta_from_velocities(g.surface, X, Y, xd, yd)
        post, nxt, s_plus = impact(s_minus, g.surface, g)
        assert post.Xdot == pytest.approx(xd, abs=1e-12)
        assert post.Ydot == pytest.approx(-yd, abs=1e-12)
        assert (post.X, post.Y) == (g.manifold.X0, g.manifold.Y0)
        # the corrected surface reproduces the carried vertical velocity
        zd_before = g.surface.vertical_velocity(X, Y, xd, yd)
        xp, yp = velocities_from_momenta(s_plus, nxt)
        assert nxt.vertical_velocity(post.X, post.Y, xp, yp) == pytest.approx(zd_before, abs=1e-10)


def test_fixed_point_maps_to_itself(vlip_gait):
    g = vlip_gait
    s0 = initial_state(g)
    summary, _, nxt = step(s0, g)
    assert np.allclose([nxt.Xdot, nxt.Ydot, nxt.zdot], [s0.Xdot, s0.Ydot, s0.zdot], atol=1e-7)
    assert summary.duration == pytest.approx(0.7, abs=1e-6)


def test_lip_energy_across_step(lip_gait_06):
    g = lip_gait_06
    w2 = 9.81 / 0.7
    s0 = initial_state(g, 2.35, -1.48)
    summary, _, nxt = step(s0, g)
    e_plus = s0.Xdot**2 - w2 * s0.X**2
    e_minus = summary.Xdot_minus**2 - w2 * summary.X_minus**2
    assert e_minus == pytest.approx(e_plus, abs=1e-8)
    # kinetic-energy-like quantity is continuous through the impact
    assert nxt.Xdot**2 + nxt.Ydot**2 == pytest.approx(summary.Xdot_minus**2 + summary.Ydot_minus**2, rel=1e-15)


def test_post_impact_position_exact(vlip_gait):
    g = vlip_gait
    s0 = initial_state(g, g.Xdot0 * 1.01, g.Ydot0 * 0.99)
    state = s0
    for k in range(3):
        _, _, state = step(state, g, index=k)
        assert state.X == g.manifold.X0 and state.Y == g.manifold.Y0


def test_trace_recorded(vlip_gait):
    g = vlip_gait
    _, traces = simulate(initial_state(g), g, 2, record=True)
    assert len(traces) == 2
    tr = traces[0]
    assert tr.swing.shape == (len(tr.t), 3)
    assert tr.swing[0] == pytest.approx((-1.0, 1.0, 0.0), abs=1e-10)
    assert tr.impact["zdot_carry"] == pytest.approx(g.zdot_carry, abs=1e-7)


def test_simulate_rejects_zero_steps(lip_gait_06):
    with pytest.raises(ValueError):
        simulate(initial_state(lip_gait_06), lip_gait_06, 0)


def test_divergence_is_reported():
    g = lip_periodic_gait(0.6, 0.7, 0.95)
    s0 = WalkState(-0.5, 0.5, REF_XDOT0, REF_YDOT0)
    try:
        summaries, _ = simulate(s0, g, 10)
        failed = False
    except Diverged as exc:
        summaries, failed = exc.summaries, True
    assert walk_outcome(summaries, g, failed) == "diverged"


def test_outcome_ok_at_fixed_point(lip_gait_06):
    summaries, _ = simulate(initial_state(lip_gait_06), lip_gait_06, 4)
    assert walk_outcome(summaries, lip_gait_06) == "ok"
    assert walk_outcome(summaries, lip_gait_06, failed=True) == "diverged"
