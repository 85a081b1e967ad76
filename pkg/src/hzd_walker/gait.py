"""Periodic gait synthesis.

For constant height the periodic gait is closed form.  With vertical
oscillations (a > 0) the support-foot shifts (DX, DY), the initial
velocities and the carried vertical velocity are found by Newton shooting
on a fixed-duration step, continued from the LIP solution in small
increments of ``a``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .dynamics import (
    IntegrationOptions,
    ZeroDynState,
    integrate_for,
    integrate_until_switch,
    momenta_from_velocities,
    velocities_from_momenta,
)
from .errors import (
    NoConvergence,
    PreconditionViolated,
    SingularJacobian,
    WalkerError,
)
from .lip import G, LipParams, periodic_velocities
from .manifold import ManifoldParams
from .surface import SurfaceParams, build_zcor
from .swing import SwingParams, solve_nu

log = logging.getLogger(__name__)

SWING_HEIGHT = 0.09  # peak swing-foot clearance (m) used to scale nu_z
CONTINUATION_STEP = 0.005


@dataclass(frozen=True)
class GaitConfig:
    C: float
    T: float
    z0: float = 0.7
    a: float = 0.0
    nu_z: Optional[float] = None  # None: scaled to SWING_HEIGHT
    reduced_impact: bool = False
    g: float = G
    S: float = 0.3
    D: float = 0.15

    def __post_init__(self):
        if not self.T > 0:
            raise PreconditionViolated("T must be positive")
        if self.a < 0:
            raise PreconditionViolated("a must be >= 0")
        if not self.z0 > 0:
            raise PreconditionViolated("z0 must be positive")
        if not self.C > 0:
            raise PreconditionViolated("C must be positive")
        if self.nu_z is not None and not self.nu_z < 0:
            raise PreconditionViolated("nu_z must be negative")


@dataclass(frozen=True)
class PeriodicGait:
    config: GaitConfig
    DX: float
    DY: float
    Xdot0: float
    Ydot0: float
    zdot_carry: float
    exit_state: ZeroDynState
    nu_x: float
    nu_y: float
    nu_z: float
    residual: float = 0.0
    iterations: int = 0
    manifold: ManifoldParams = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "manifold", ManifoldParams.from_shift(self.config.C, self.DX, self.DY))

    @property
    def is_lip(self) -> bool:
        return self.config.a == 0.0

    @property
    def surface(self) -> SurfaceParams:
        return SurfaceParams(self.config.z0, self.config.a, self.manifold)

    @property
    def swing(self) -> SwingParams:
        return SwingParams(self.nu_x, self.nu_y, self.nu_z, self.manifold)

    @property
    def sigma_minus(self) -> tuple[float, float]:
        return self.exit_state.sigmaX, self.exit_state.sigmaY

    @property
    def unknowns(self) -> np.ndarray:
        return np.array([self.DX, self.DY, self.Xdot0, self.Ydot0, self.zdot_carry])

    def lip_params(self) -> LipParams:
        return LipParams(self.config.z0, self.config.g)


def start_of_step(
    surface: SurfaceParams, X: float, Y: float, Xdot: float, Ydot: float, zdot_carry: Optional[float]
) -> tuple[SurfaceParams, ZeroDynState]:
    """Corrected surface and momenta at the beginning of a step.

    The cubic correction is skipped when no carry is given, when the
    mismatch vanishes, or when the step starts at or past mid-step.
    """
    surface = surface.nominal()
    if zdot_carry is not None and X < surface.manifold.DX:
        mismatch = zdot_carry - surface.vertical_velocity(X, Y, Xdot, Ydot)
        if mismatch != 0.0:
            zcor = build_zcor(surface, X, Xdot, zdot_carry, Yplus=Y, Ydot_plus=Ydot)
            surface = surface.with_zcor(zcor)
    return surface, momenta_from_velocities(surface, X, Y, Xdot, Ydot)


def periodicity_residual(u: Sequence[float], cfg: GaitConfig, opts: IntegrationOptions) -> np.ndarray:
    """Five residuals of one fixed-duration step for unknowns (DX, DY, Xdot0, Ydot0, zdot_carry)."""
    DX, DY, xd0, yd0, carry = (float(v) for v in u)
    manifold = ManifoldParams.from_shift(cfg.C, DX, DY)
    surface, s0 = start_of_step(SurfaceParams(cfg.z0, cfg.a, manifold), manifold.X0, manifold.Y0, xd0, yd0, carry)
    sT = integrate_for(s0, surface, cfg.T, opts)
    xdT, ydT = velocities_from_momenta(sT, surface)
    zdT = surface.vertical_velocity(sT.X, sT.Y, xdT, ydT)
    return np.array([sT.X - manifold.Xf, sT.Y - manifold.Yf, xdT - xd0, ydT + yd0, zdT - carry])


def newton_solve(fun, u0, tol=1e-9, max_iter=30, rel_step=1e-7, max_halvings=8):
    """Damped Newton with a central finite-difference Jacobian.

    Returns (u, |r|, iterations).
    """
    u = np.asarray(u0, dtype=float).copy()
    r = fun(u)
    nr = float(np.linalg.norm(r))
    for it in range(max_iter + 1):
        if nr < tol:
            return u, nr, it
        if it == max_iter:
            break
        J = np.empty((len(r), len(u)))
        for j in range(len(u)):
            h = rel_step * max(1.0, abs(u[j]))
            e = np.zeros_like(u)
            e[j] = h
            J[:, j] = (fun(u + e) - fun(u - e)) / (2.0 * h)
        if not np.all(np.isfinite(J)) or np.linalg.cond(J) > 1e14:
            raise SingularJacobian(f"shooting Jacobian is singular at iteration {it}")
        du = np.linalg.solve(J, -r)
        alpha = 1.0
        for _ in range(max_halvings + 1):
            try:
                r_new = fun(u + alpha * du)
                nr_new = float(np.linalg.norm(r_new))
            except WalkerError:
                nr_new = math.inf
            if nr_new < nr:
                break
            alpha *= 0.5
        else:
            raise NoConvergence(it + 1, nr, "line search failed to reduce the residual")
        u, r, nr = u + alpha * du, r_new, nr_new
        log.debug("newton it=%d |r|=%.3e alpha=%.3g", it + 1, nr, alpha)
    raise NoConvergence(max_iter, nr)


def _finish(cfg: GaitConfig, u, residual, iterations, opts) -> PeriodicGait:
    DX, DY, xd0, yd0, carry = (float(v) for v in u)
    manifold = ManifoldParams.from_shift(cfg.C, DX, DY)
    nominal = SurfaceParams(cfg.z0, cfg.a, manifold)
    surface, s0 = start_of_step(nominal, manifold.X0, manifold.Y0, xd0, yd0, carry if cfg.a > 0 else None)
    if cfg.a > 0:
        sT = integrate_for(s0, surface, cfg.T, opts)
    else:
        sT = ZeroDynState(manifold.Xf, manifold.Yf, -cfg.z0 * (-yd0), cfg.z0 * xd0)
    xdT, ydT = velocities_from_momenta(sT, surface)
    nu_x, nu_y = solve_nu(manifold.Xf, manifold.Yf, xdT, ydT, manifold)

    nu_z = cfg.nu_z
    if nu_z is None:
        _, _, trace = integrate_until_switch(
            s0, surface, manifold, replace(opts, n_samples=401), record=True, t_max=5 * cfg.T
        )
        depth = -min(manifold.s_a(X, Y) for X, Y in trace.states[:, :2])
        nu_z = float(-SWING_HEIGHT / depth)
        if cfg.reduced_impact:
            nu_z *= 0.5
    return PeriodicGait(
        config=cfg,
        DX=DX,
        DY=DY,
        Xdot0=xd0,
        Ydot0=yd0,
        zdot_carry=carry,
        exit_state=sT,
        nu_x=nu_x,
        nu_y=nu_y,
        nu_z=nu_z,
        residual=residual,
        iterations=iterations,
    )


def lip_periodic_gait(
    T: float, z0: float = 0.7, C: float = 1.0, g: float = G, opts: IntegrationOptions = IntegrationOptions(), **cfg_kw
) -> PeriodicGait:
    cfg = GaitConfig(C=C, T=T, z0=z0, a=0.0, g=g, **cfg_kw)
    xd0, yd0 = periodic_velocities(T, LipParams(z0, g))
    return _finish(cfg, [0.0, 0.0, xd0, yd0, 0.0], 0.0, 0, opts)


def vlip_periodic_gait(
    cfg: GaitConfig,
    guess: Union[None, PeriodicGait, Sequence[float]] = None,
    opts: IntegrationOptions = IntegrationOptions(),
    tol: float = 1e-9,
    max_iter: int = 30,
    step: float = CONTINUATION_STEP,
) -> PeriodicGait:
    """Periodic gait for ``cfg`` by Newton shooting.

    Without a guess the solve is continued from the LIP gait (a = 0) in
    increments of at most ``step`` in ``a``.
    """
    opts = replace(opts, g=cfg.g)
    if cfg.a == 0.0:
        xd0, yd0 = periodic_velocities(cfg.T, LipParams(cfg.z0, cfg.g))
        return _finish(cfg, [0.0, 0.0, xd0, yd0, 0.0], 0.0, 0, opts)
    if guess is None:
        lip = lip_periodic_gait(cfg.T, cfg.z0, cfg.C, cfg.g, opts)
        n = max(1, math.ceil(cfg.a / step - 1e-12))
        u = lip.unknowns
        for a_k in np.linspace(0.0, cfg.a, n + 1)[1:-1]:
            cfg_k = replace(cfg, a=float(a_k))
            u, _, _ = newton_solve(lambda v: periodicity_residual(v, cfg_k, opts), u, tol, max_iter)
    else:
        u = guess.unknowns if isinstance(guess, PeriodicGait) else np.asarray(guess, dtype=float)
    u, res, iters = newton_solve(lambda v: periodicity_residual(v, cfg, opts), u, tol, max_iter)
    return _finish(cfg, u, res, iters, opts)


def default_opts_for(gait: PeriodicGait, opts: Optional[IntegrationOptions] = None) -> IntegrationOptions:
    opts = opts or IntegrationOptions()
    return replace(opts, g=gait.config.g, t_max=opts.t_max or 5.0 * gait.config.T)
