"""Poincare return map on the pre-impact section and its spectrum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dynamics import IntegrationOptions, ZeroDynState, momenta_from_velocities
from .errors import Diverged, DivisionByNearZero, WalkerError
from .gait import PeriodicGait, default_opts_for
from .hybrid import WalkState, impact, initial_state, simulate, step
from .lip import lambda_L

DEFAULT_FD_STEP = 1e-6


@dataclass(frozen=True)
class PoincareCoords:
    """Pre-impact point; X (or Y with ``by_x``) is recovered on the manifold."""

    Y_minus: float
    Xdot_minus: float
    Ydot_minus: float

    def as_array(self) -> np.ndarray:
        return np.array([self.Y_minus, self.Xdot_minus, self.Ydot_minus])


@dataclass(frozen=True)
class StabilityReport:
    jacobian: np.ndarray
    eigenvalues: tuple[complex, complex, complex]
    delta: float
    lambda_L_analytic: Optional[float]
    fd_step: float

    @property
    def magnitudes(self) -> tuple[float, float, float]:
        return tuple(abs(e) for e in self.eigenvalues)

    def to_dict(self) -> dict:
        return {
            "jacobian": self.jacobian.tolist(),
            "eigenvalues": [[e.real, e.imag] for e in self.eigenvalues],
            "magnitudes": list(self.magnitudes),
            "delta": self.delta,
            "lambda_L_analytic": self.lambda_L_analytic,
            "fd_step": self.fd_step,
        }


def fixed_point(gait: PeriodicGait, by_x: bool = False) -> np.ndarray:
    m = gait.manifold
    first = m.Xf if by_x else m.Yf
    return np.array([first, gait.Xdot0, -gait.Ydot0])


def _exit_state(gait: PeriodicGait, c: Sequence[float], by_x: bool) -> ZeroDynState:
    m = gait.manifold
    if by_x:
        X, Y = c[0], m.y_on_manifold(c[0])
    else:
        X, Y = m.x_on_manifold(c[0]), c[0]
    return momenta_from_velocities(gait.surface, X, Y, c[1], c[2])


def poincare_map(
    c: Sequence[float], gait: PeriodicGait, opts: Optional[IntegrationOptions] = None, by_x: bool = False
) -> np.ndarray:
    """Next pre-impact point from the pre-impact point ``c``.

    ``c`` is (Y-, Xdot-, Ydot-), or (X-, Xdot-, Ydot-) with ``by_x``.
    """
    c = np.asarray(c.as_array() if isinstance(c, PoincareCoords) else c, dtype=float)
    try:
        s_minus = _exit_state(gait, c, by_x)
        post, _, _ = impact(s_minus, gait.surface, gait)
        summary, _, _ = step(post, gait, opts)
    except WalkerError as exc:
        raise Diverged(0, exc) from exc
    first = summary.X_minus if by_x else summary.Y_minus
    return np.array([first, summary.Xdot_minus, summary.Ydot_minus])


def jacobian(
    gait: PeriodicGait,
    fd_step: float = DEFAULT_FD_STEP,
    opts: Optional[IntegrationOptions] = None,
    by_x: bool = False,
) -> np.ndarray:
    """Central-difference Jacobian of the return map at the gait's fixed point."""
    opts = default_opts_for(gait, opts)
    c0 = fixed_point(gait, by_x)
    J = np.empty((3, 3))
    for j in range(3):
        h = fd_step * max(1.0, abs(c0[j]))
        e = np.zeros(3)
        e[j] = h
        J[:, j] = (poincare_map(c0 + e, gait, opts, by_x) - poincare_map(c0 - e, gait, opts, by_x)) / (2.0 * h)
    return J


def _charpoly(m: np.ndarray) -> tuple[float, float, float]:
    """Coefficients (c2, c1, c0) of lambda^3 + c2 lambda^2 + c1 lambda + c0."""
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    minors = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    det = float(np.linalg.det(m))
    return -tr, minors, -det


def eigen3(m) -> tuple[complex, complex, complex]:
    """Eigenvalues of a 3x3 real matrix from its characteristic cubic.

    Closed-form roots (trigonometric for three real roots, Cardano
    otherwise), each polished by Newton steps; sorted by descending
    magnitude.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise ValueError("eigen3 needs a finite 3x3 matrix")
    b, c, d = _charpoly(m)
    shift = -b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3

    if p == 0.0 and q == 0.0:
        ts = [0.0, 0.0, 0.0]
    elif p < 0.0 and disc <= 0.0:
        r = 2.0 * math.sqrt(-p / 3.0)
        denom = p * r
        arg = 3.0 * q / denom if denom != 0.0 else 0.0
        phi = math.acos(max(-1.0, min(1.0, arg)))
        ts = [r * math.cos((phi - 2.0 * math.pi * k) / 3.0) for k in range(3)]
    else:
        sq = math.sqrt(max(disc, 0.0))
        u = math.copysign(abs(-q / 2.0 + sq) ** (1.0 / 3.0), -q / 2.0 + sq)
        v = math.copysign(abs(-q / 2.0 - sq) ** (1.0 / 3.0), -q / 2.0 - sq)
        re, im = -(u + v) / 2.0, math.sqrt(3.0) / 2.0 * (u - v)
        ts = [u + v, complex(re, im), complex(re, -im)]

    def poly(z):
        return ((z + b) * z + c) * z + d

    def dpoly(z):
        return (3.0 * z + 2.0 * b) * z + c

    roots = []
    for t in ts:
        z = complex(t) + shift
        for _ in range(3):
            dz = dpoly(z)
            if dz == 0:
                break
            z_new = z - poly(z) / dz
            if abs(poly(z_new)) >= abs(poly(z)):
                break
            z = z_new
        roots.append(z)
    # conjugate pairs stay conjugate after polishing
    if isinstance(ts[1], complex):
        roots[0] = complex(roots[0].real, 0.0)
        roots[2] = roots[1].conjugate()
    else:
        roots = [complex(z.real, 0.0) for z in roots]
    roots.sort(key=lambda z: (-abs(z), -z.real, -z.imag))
    return tuple(roots)


def analyze(
    gait: PeriodicGait, fd_step: float = DEFAULT_FD_STEP, opts: Optional[IntegrationOptions] = None
) -> StabilityReport:
    J = jacobian(gait, fd_step, opts)
    eig = eigen3(J)
    lam = lambda_L(gait.config.C, gait.Xdot0, gait.Ydot0) if gait.is_lip else None
    return StabilityReport(J, eig, max(abs(e) for e in eig), lam, fd_step)


def sync_ratio_empirical(
    gait: PeriodicGait,
    perturbation: tuple[float, float] = (1e-4, 1e-4),
    n_steps: int = 5,
    opts: Optional[IntegrationOptions] = None,
    strict: bool = False,
) -> list[float]:
    """Ratios L_{i+1}/L_i of exit synchronization measures of a perturbed walk.

    The sequence stops once |L_i| drops below 1e-14 (or raises
    :class:`DivisionByNearZero` when ``strict``).
    """
    s0 = initial_state(gait, gait.Xdot0 + perturbation[0], gait.Ydot0 + perturbation[1])
    summaries, _ = simulate(s0, gait, n_steps, opts)
    Ls = [s.L for s in summaries]
    ratios = []
    for prev, nxt in zip(Ls, Ls[1:]):
        if abs(prev) < 1e-14:
            if strict:
                raise DivisionByNearZero(f"|L|={abs(prev):.2e} is numerically zero")
            break
        ratios.append(nxt / prev)
    return ratios


def entry_sync_measure(gait: PeriodicGait, s: WalkState) -> float:
    """Synchronization measure of a post-impact state (omega^2 = g/z0)."""
    return s.Xdot * s.Ydot - gait.config.g / gait.config.z0 * s.X * s.Y
