"""Swing-foot virtual constraints.

Near the end of the step the foot follows

    Xs = (1 - nu_x*s_a)*(X - X0),  Ys = (1 - nu_y*s_a)*(Y0 + Y),  zs = nu_z*s_a

so that touchdown (s_a = 0) places the next stance foot such that the
post-impact CoM position is (X0, Y0) whatever the exit point.  Polynomials
in X are blended in at the start of the step to match lift-off position
and velocity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInterval, PreconditionViolated, TangentialExit
from .manifold import ManifoldParams

BLEND_OFFSET = 0.4


@dataclass(frozen=True)
class SwingParams:
    nu_x: float
    nu_y: float
    nu_z: float
    manifold: ManifoldParams

    def __post_init__(self):
        if not self.nu_z < 0:
            raise PreconditionViolated(f"nu_z must be negative, got {self.nu_z}")

    @property
    def Xl(self) -> float:
        return BLEND_OFFSET + 0.5 * (self.manifold.X0 + self.manifold.Xf)

    @property
    def Xmid(self) -> float:
        return 0.5 * (self.manifold.X0 + self.manifold.Xf)

    def base(self, X: float, Y: float) -> tuple[float, float, float]:
        m = self.manifold
        s = m.s_a(X, Y)
        return (1.0 - self.nu_x * s) * (X - m.X0), (1.0 - self.nu_y * s) * (m.Y0 + Y), self.nu_z * s

    def base_gradients(self, X: float, Y: float) -> np.ndarray:
        """Rows d(Xs, Ys, zs)/d(X, Y) of the end-of-step terms."""
        m = self.manifold
        s = m.s_a(X, Y)
        gx, gy = m.gradient(X, Y)
        px, py = X - m.X0, m.Y0 + Y
        return np.array(
            [
                [(1.0 - self.nu_x * s) - self.nu_x * gx * px, -self.nu_x * gy * px],
                [-self.nu_y * gx * py, (1.0 - self.nu_y * s) - self.nu_y * gy * py],
                [self.nu_z * gx, self.nu_z * gy],
            ]
        )


@dataclass(frozen=True)
class BlendPolynomials:
    """Polynomials in X (coefficients of increasing powers of ``X - x_start``)."""

    px: tuple[float, ...]
    py: tuple[float, ...]
    pz: tuple[float, ...]
    x_start: float
    x_l: float
    x_mid: float

    @staticmethod
    def _eval(c, u, deriv=0):
        p = np.polynomial.polynomial
        coeffs = np.asarray(c)
        if deriv:
            coeffs = p.polyder(coeffs, deriv)
        return float(p.polyval(u, coeffs))

    def offsets(self, X: float, deriv: int = 0) -> tuple[float, float, float]:
        u = X - self.x_start
        ox = oy = oz = 0.0
        if X < self.x_l:
            ox, oy = self._eval(self.px, u, deriv), self._eval(self.py, u, deriv)
        if X < self.x_mid:
            oz = self._eval(self.pz, u, deriv)
        return ox, oy, oz


def swing_position(
    sp: SwingParams, bp: Optional[BlendPolynomials], X: float, Y: float
) -> tuple[float, float, float]:
    xs, ys, zs = sp.base(X, Y)
    if bp is not None:
        ox, oy, oz = bp.offsets(X)
        xs, ys, zs = xs + ox, ys + oy, zs + oz
    return xs, ys, zs


def swing_velocity(sp: SwingParams, bp: Optional[BlendPolynomials], X, Y, Xdot, Ydot) -> np.ndarray:
    v = sp.base_gradients(X, Y) @ np.array([Xdot, Ydot])
    if bp is not None:
        v = v + np.array(bp.offsets(X, 1)) * Xdot
    return v


def _hermite(u0: float, u1: float, at_start, at_end, degree: int) -> tuple[float, ...]:
    """Polynomial in u = X - x_start from derivative conditions at u0 and u1.

    ``at_start``/``at_end`` list values of derivatives 0, 1, 2, ... in order.
    """
    n = degree + 1
    rows, rhs = [], []
    for u, conds in ((u0, at_start), (u1, at_end)):
        for k, val in enumerate(conds):
            row = np.zeros(n)
            for j in range(k, n):
                row[j] = np.prod(np.arange(j - k + 1, j + 1)) * u ** (j - k)
            rows.append(row)
            rhs.append(val)
    if len(rows) != n:
        raise ValueError("condition count does not match polynomial degree")
    return tuple(float(c) for c in np.linalg.solve(np.array(rows), np.array(rhs)))


def build_blends(
    sp: SwingParams,
    X: float,
    Y: float,
    Xdot: float,
    Ydot: float,
    start_position: tuple[float, float] = (-1.0, 1.0),
) -> BlendPolynomials:
    """Blends giving the swing foot ``start_position`` and zero velocity at lift-off.

    Px, Py (quintic) vanish with two derivatives at Xl and additionally have
    zero curvature at lift-off.  Pz (quartic) vanishes with two derivatives
    at mid-step.
    """
    if X >= sp.Xl or X >= sp.Xmid:
        raise InvalidInterval(f"lift-off abscissa {X} past the blend boundary")
    if Xdot == 0.0:
        raise InvalidInterval("blend slopes need a nonzero forward velocity")
    xs, ys, zs = sp.base(X, Y)
    vx, vy, vz = sp.base_gradients(X, Y) @ np.array([Xdot, Ydot])
    ul, um = sp.Xl - X, sp.Xmid - X
    px = _hermite(0.0, ul, (start_position[0] - xs, -vx / Xdot, 0.0), (0.0, 0.0, 0.0), 5)
    py = _hermite(0.0, ul, (start_position[1] - ys, -vy / Xdot, 0.0), (0.0, 0.0, 0.0), 5)
    pz = _hermite(0.0, um, (-zs, -vz / Xdot), (0.0, 0.0, 0.0), 4)
    return BlendPolynomials(px, py, pz, x_start=X, x_l=sp.Xl, x_mid=sp.Xmid)


def solve_nu(Xf: float, Yf: float, Xdot_f: float, Ydot_f: float, manifold: ManifoldParams) -> tuple[float, float]:
    """Shaping gains that cancel the horizontal swing velocity at the periodic exit."""
    rate = manifold.rate(Xf, Yf, Xdot_f, Ydot_f)
    if rate == 0.0:
        raise TangentialExit("exit velocity is tangent to the switching manifold")
    # d/dt Xse = Xdot - nu_x*rate*(Xf - X0) at s_a = 0, and likewise for Y
    return Xdot_f / (rate * (Xf - manifold.X0)), Ydot_f / (rate * (manifold.Y0 + Yf))
