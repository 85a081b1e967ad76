"""Zero dynamics of the variable-height inverted pendulum.

State is ``(X, Y, sigmaX, sigmaY)``: normalized CoM position and
mass-normalized angular momenta about the stance foot.  Positions evolve
through ``M_XY^{-1} sigma`` and the momenta through gravity only::

    sigmaX' = -g*Y,   sigmaY' = g*X
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NoSwitchReached, SingularConstraint
from .lip import G
from .manifold import ManifoldParams
from .surface import SurfaceParams

EPS_DET = 1e-9


class ZeroDynState(NamedTuple):
    X: float
    Y: float
    sigmaX: float
    sigmaY: float


@dataclass(frozen=True)
class IntegrationOptions:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    t_max: Optional[float] = None  # None: caller picks (5*T for gait steps)
    event_tol: float = 1e-12
    method: str = "DOP853"
    g: float = G
    n_samples: int = 101

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "event_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.t_max is not None and not self.t_max > 0:
            raise ValueError("t_max must be positive")


@dataclass
class StepTrace:
    t: np.ndarray
    states: np.ndarray  # (n, 4)
    velocities: np.ndarray  # (n, 2)
    z: np.ndarray
    zdot: np.ndarray
    swing: Optional[np.ndarray] = None  # (n, 3), filled by the hybrid layer
    duration: float = 0.0
    exit_state: Optional[ZeroDynState] = None
    impact: dict = field(default_factory=dict)


def m_xy(surface: SurfaceParams, X: float, Y: float) -> np.ndarray:
    f = surface.height(X, Y)
    fx, fy = surface.partials(X, Y)
    return np.array([[fx * Y, fy * Y - f], [-fx * X + f, -fy * X]])


def _velocities(surface, X, Y, sX, sY, eps_det=EPS_DET):
    f = surface.height(X, Y)
    fx, fy = surface.partials(X, Y)
    m11, m12 = fx * Y, fy * Y - f
    m21, m22 = -fx * X + f, -fy * X
    det = m11 * m22 - m12 * m21
    if abs(det) <= eps_det:
        raise SingularConstraint(f"det(M_XY)={det:.3e} at X={X:.6g}, Y={Y:.6g}")
    return (m22 * sX - m12 * sY) / det, (-m21 * sX + m11 * sY) / det


def velocities_from_momenta(s, surface: SurfaceParams, eps_det: float = EPS_DET) -> tuple[float, float]:
    X, Y, sX, sY = s
    return _velocities(surface, X, Y, sX, sY, eps_det)


def momenta_from_velocities(surface: SurfaceParams, X, Y, Xdot, Ydot) -> ZeroDynState:
    M = m_xy(surface, X, Y)
    sX, sY = M @ np.array([Xdot, Ydot])
    return ZeroDynState(X, Y, float(sX), float(sY))


def vector_field(s, surface: SurfaceParams, g: float = G) -> ZeroDynState:
    X, Y, sX, sY = s
    Xd, Yd = _velocities(surface, X, Y, sX, sY)
    return ZeroDynState(Xd, Yd, -g * Y, g * X)


def _rhs(surface, g):
    def rhs(t, y):
        X, Y, sX, sY = y
        Xd, Yd = _velocities(surface, X, Y, sX, sY)
        return [Xd, Yd, -g * Y, g * X]

    return rhs


def _make_trace(surface, t, Y):
    states = Y.T
    n = len(t)
    vel = np.empty((n, 2))
    z = np.empty(n)
    zd = np.empty(n)
    for i, (X, Yv, sX, sY) in enumerate(states):
        Xd, Yd = _velocities(surface, X, Yv, sX, sY)
        vel[i] = Xd, Yd
        z[i] = surface.height(X, Yv)
        zd[i] = surface.vertical_velocity(X, Yv, Xd, Yd)
    return StepTrace(t=np.asarray(t), states=states, velocities=vel, z=z, zdot=zd)


def integrate_for(
    s0, surface: SurfaceParams, duration: float, opts: IntegrationOptions = IntegrationOptions()
) -> ZeroDynState:
    """State reached after a fixed time, ignoring the switching manifold."""
    sol = solve_ivp(
        _rhs(surface, opts.g),
        (0.0, duration),
        list(s0),
        method=opts.method,
        rtol=opts.rel_tol,
        atol=opts.abs_tol,
    )
    if sol.status != 0:
        raise SingularConstraint(sol.message)
    return ZeroDynState(*map(float, sol.y[:, -1]))


def integrate_until_switch(
    s0,
    surface: SurfaceParams,
    manifold: Optional[ManifoldParams] = None,
    opts: IntegrationOptions = IntegrationOptions(),
    record: bool = True,
    t_max: Optional[float] = None,
) -> tuple[ZeroDynState, float, Optional[StepTrace]]:
    """Integrate until the first outward crossing of the switching manifold.

    Crossings with decreasing s_a (entering the ellipse) are ignored.
    Returns the exit state, the elapsed time, and a sampled trace when
    ``record`` is set.
    """
    manifold = manifold or surface.manifold
    s0 = ZeroDynState(*map(float, s0))
    t_max = t_max or opts.t_max or 5.0

    Xd0, Yd0 = velocities_from_momenta(s0, surface)
    if abs(manifold.s_a(s0.X, s0.Y)) < opts.event_tol and manifold.rate(s0.X, s0.Y, Xd0, Yd0) > 0:
        trace = _make_trace(surface, np.array([0.0]), np.array(s0)[:, None]) if record else None
        if trace is not None:
            trace.exit_state = s0
        return s0, 0.0, trace

    def event(t, y):
        return manifold.s_a(y[0], y[1])

    event.terminal = True
    event.direction = 1.0

    sol = solve_ivp(
        _rhs(surface, opts.g),
        (0.0, t_max),
        list(s0),
        method=opts.method,
        rtol=opts.rel_tol,
        atol=opts.abs_tol,
        events=event,
        dense_output=record,
    )
    if sol.status == -1:
        raise SingularConstraint(sol.message)
    if sol.status != 1 or len(sol.t_events[0]) == 0:
        raise NoSwitchReached(f"no exit crossing of the switching manifold within t_max={t_max}")

    t_sw = float(sol.t_events[0][0])
    s_minus = ZeroDynState(*map(float, sol.y_events[0][0]))
    trace = None
    if record:
        tt = np.linspace(0.0, t_sw, max(opts.n_samples, 2))
        yy = sol.sol(tt)
        yy[:, 0] = s0
        yy[:, -1] = s_minus
        trace = _make_trace(surface, tt, yy)
        trace.duration = t_sw
        trace.exit_state = s_minus
    return s_minus, t_sw, trace
