"""Support exchange and multi-step walking.

Legs are massless, so the CoM velocity is continuous across the impact;
only the reference frame changes (new stance foot, flipped lateral axis).
The swing-foot constraint makes the post-impact CoM position equal to
(X0, Y0) on every step, which is assigned directly here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import (
    IntegrationOptions,
    StepTrace,
    ZeroDynState,
    integrate_until_switch,
    velocities_from_momenta,
)
from .errors import Diverged, InvalidInterval, WalkerError
from .gait import PeriodicGait, default_opts_for, start_of_step
from .surface import SurfaceParams
from .swing import build_blends, swing_position

DIVERGENCE_FACTOR = 100.0


@dataclass(frozen=True)
class WalkState:
    """Kinematic state at the start of a step plus the carried vertical velocity."""

    X: float
    Y: float
    Xdot: float
    Ydot: float
    zdot: Optional[float] = None


@dataclass(frozen=True)
class StepSummary:
    index: int
    X_minus: float
    Y_minus: float
    Xdot_minus: float
    Ydot_minus: float
    Xdot_plus: float
    Ydot_plus: float
    zdot_minus: float
    duration: float
    L: float  # synchronization measure at the exit, using omega^2 = g/z0

    def as_row(self) -> dict:
        return dict(self.__dict__)


def impact(
    s_minus: ZeroDynState, surface: SurfaceParams, gait: PeriodicGait
) -> tuple[WalkState, SurfaceParams, ZeroDynState]:
    """Support exchange at the end of a step.

    ``surface`` is the (possibly corrected) surface of the step that just
    ended.  Returns the post-impact kinematic state, the corrected surface
    for the next step and the post-impact momenta.
    """
    m = gait.manifold
    xd, yd = velocities_from_momenta(s_minus, surface)
    zd = surface.vertical_velocity(s_minus.X, s_minus.Y, xd, yd)
    post = WalkState(m.X0, m.Y0, xd, -yd, zd)
    next_surface, s_plus = start_of_step(gait.surface, post.X, post.Y, post.Xdot, post.Ydot, zd)
    return post, next_surface, s_plus


def _swing_samples(gait: PeriodicGait, trace: StepTrace, start: WalkState, swing_start) -> np.ndarray:
    sp = gait.swing
    try:
        bp = build_blends(sp, start.X, start.Y, start.Xdot, start.Ydot, swing_start)
    except InvalidInterval:
        bp = None
    return np.array([swing_position(sp, bp, X, Y) for X, Y in trace.states[:, :2]])


def step(
    start: WalkState,
    gait: PeriodicGait,
    opts: Optional[IntegrationOptions] = None,
    index: int = 0,
    record: bool = False,
    swing_start: tuple[float, float] = (-1.0, 1.0),
) -> tuple[StepSummary, Optional[StepTrace], WalkState]:
    """One continuous phase from ``start`` followed by the support exchange."""
    opts = default_opts_for(gait, opts)
    surface, s0 = start_of_step(gait.surface, start.X, start.Y, start.Xdot, start.Ydot, start.zdot)
    s_minus, duration, trace = integrate_until_switch(s0, surface, gait.manifold, opts, record=record)
    post, _, _ = impact(s_minus, surface, gait)

    xd, yd = post.Xdot, -post.Ydot
    w2 = gait.config.g / gait.config.z0
    summary = StepSummary(
        index=index,
        X_minus=s_minus.X,
        Y_minus=s_minus.Y,
        Xdot_minus=xd,
        Ydot_minus=yd,
        Xdot_plus=start.Xdot,
        Ydot_plus=start.Ydot,
        zdot_minus=post.zdot,
        duration=duration,
        L=xd * yd - w2 * s_minus.X * s_minus.Y,
    )
    if trace is not None:
        trace.swing = _swing_samples(gait, trace, start, swing_start)
        trace.impact = {"zdot_carry": post.zdot, "post_impact": post}
    return summary, trace, post


def simulate(
    s0: WalkState,
    gait: PeriodicGait,
    n_steps: int,
    opts: Optional[IntegrationOptions] = None,
    record: bool = False,
) -> tuple[list[StepSummary], list[StepTrace]]:
    """Walk ``n_steps`` steps from ``s0``.

    ``s0.zdot=None`` starts without a height correction.  Raises
    :class:`Diverged` (with the completed ``summaries``/``traces``
    attached) when a step fails or the velocities blow up.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    limit_x = DIVERGENCE_FACTOR * abs(gait.Xdot0)
    limit_y = DIVERGENCE_FACTOR * abs(gait.Ydot0)
    summaries: list[StepSummary] = []
    traces: list[StepTrace] = []
    state = s0
    swing_start = (-1.0, 1.0)
    m = gait.manifold
    for k in range(n_steps):
        try:
            summary, trace, nxt = step(state, gait, opts, index=k, record=record, swing_start=swing_start)
        except WalkerError as exc:
            err = Diverged(k, exc)
            err.summaries, err.traces = summaries, traces
            raise err from exc
        summaries.append(summary)
        if trace is not None:
            traces.append(trace)
        if not (math.isfinite(nxt.Xdot) and abs(nxt.Xdot) <= limit_x and abs(nxt.Ydot) <= limit_y):
            err = Diverged(k, f"velocity ({nxt.Xdot:.3g}, {nxt.Ydot:.3g}) beyond divergence bound")
            err.summaries, err.traces = summaries, traces
            raise err
        # old stance foot expressed in the new frame
        swing_start = (-(summary.X_minus - m.X0), m.Y0 + summary.Y_minus)
        state = nxt
    return summaries, traces


def initial_state(gait: PeriodicGait, Xdot: Optional[float] = None, Ydot: Optional[float] = None) -> WalkState:
    """Post-impact state of the gait, optionally with other velocities."""
    return WalkState(
        gait.manifold.X0,
        gait.manifold.Y0,
        gait.Xdot0 if Xdot is None else Xdot,
        gait.Ydot0 if Ydot is None else Ydot,
        gait.zdot_carry if gait.config.a > 0 else None,
    )


def walk_outcome(summaries: list[StepSummary], gait: PeriodicGait, failed: bool = False, sync_tol: float = 1e-9) -> str:
    """'diverged' if the walk failed or its exit sync measure drifts away from the gait's.

    Drift means |L_k - L*| strictly increasing over at least three steps
    and ending above ``sync_tol``.
    """
    if failed:
        return "diverged"
    L_star = gait.Xdot0 * (-gait.Ydot0) - gait.config.g / gait.config.z0 * gait.manifold.Xf * gait.manifold.Yf
    dev = [abs(s.L - L_star) for s in summaries]
    if len(dev) >= 3 and dev[-1] > sync_tol and all(b > a for a, b in zip(dev, dev[1:])):
        return "diverged"
    return "ok"
