"""Ten-step LIP walks from a perturbed start settle on the velocities the
switching geometry selects."""

import pytest

from hzd_walker.gait import lip_periodic_gait
from hzd_walker.hybrid import WalkState, simulate


@pytest.mark.parametrize("C, target", [(1.2, (2.3265, -1.5059)), (1.45, (2.2639, -1.5476))])
def test_perturbed_start_converges(C, target):
    g = lip_periodic_gait(0.6, 0.7, C)
    # start 5% fast sagittally and 10% slow laterally
    s0 = WalkState(-0.5, 0.5, 1.05 * g.Xdot0, 0.9 * g.Ydot0)
    summaries, _ = simulate(s0, g, 10)
    last = summaries[-1]
    assert last.Xdot_minus == pytest.approx(target[0], abs=5e-3)
    assert -last.Ydot_minus == pytest.approx(target[1], abs=5e-3)
    assert abs(last.L) < 2e-2 * abs(summaries[0].L)


def test_synchronized_start_stays_put():
    # an already synchronized state is a periodic gait for any C
    g = lip_periodic_gait(0.6, 0.7, 1.2)
    s0 = WalkState(-0.5, 0.5, 2.3147, -1.5136)
    summaries, _ = simulate(s0, g, 10)
    assert summaries[-1].Xdot_minus == pytest.approx(2.3147, abs=1e-3)
