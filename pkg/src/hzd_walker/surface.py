"""CoM height virtual constraint ``z = z0 - a*s_a(X, Y) + zcor(X)``."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import DegenerateCorrection, InvalidInterval, PreconditionViolated
from .manifold import ManifoldParams

EPS_V = 1e-6


@dataclass(frozen=True)
class CubicCorrection:
    """Cubic in the local variable ``u = X - x_end``, active on [x_start, x_end).

    ``coeffs[k]`` multiplies ``u**k``.
    """

    coeffs: tuple[float, float, float, float]
    x_start: float
    x_end: float

    def active(self, X: float) -> bool:
        return self.x_start <= X < self.x_end

    def value(self, X: float) -> float:
        if not self.active(X):
            return 0.0
        c0, c1, c2, c3 = self.coeffs
        u = X - self.x_end
        return c0 + u * (c1 + u * (c2 + u * c3))

    def slope(self, X: float) -> float:
        if not self.active(X):
            return 0.0
        _, c1, c2, c3 = self.coeffs
        u = X - self.x_end
        return c1 + u * (2.0 * c2 + 3.0 * u * c3)


@dataclass(frozen=True)
class SurfaceParams:
    z0: float
    a: float
    manifold: ManifoldParams
    zcor: Optional[CubicCorrection] = None

    def __post_init__(self):
        if not self.z0 > 0:
            raise PreconditionViolated(f"z0 must be positive, got {self.z0}")
        if self.a < 0:
            raise PreconditionViolated(f"oscillation amplitude must be >= 0, got {self.a}")

    def height(self, X: float, Y: float) -> float:
        z = self.z0 - self.a * self.manifold.s_a(X, Y)
        if self.zcor is not None:
            z += self.zcor.value(X)
        return z

    def partials(self, X: float, Y: float) -> tuple[float, float]:
        gx, gy = self.manifold.gradient(X, Y)
        fx = -self.a * gx
        if self.zcor is not None:
            fx += self.zcor.slope(X)
        return fx, -self.a * gy

    def vertical_velocity(self, X: float, Y: float, Xdot: float, Ydot: float) -> float:
        fx, fy = self.partials(X, Y)
        return fx * Xdot + fy * Ydot

    def nominal(self) -> "SurfaceParams":
        return replace(self, zcor=None) if self.zcor is not None else self

    def with_zcor(self, zcor: Optional[CubicCorrection]) -> "SurfaceParams":
        return replace(self, zcor=zcor)


def build_zcor(
    surface: SurfaceParams,
    Xplus: float,
    Xdot_plus: float,
    zdot_carry: float,
    DX: Optional[float] = None,
    Yplus: Optional[float] = None,
    Ydot_plus: float = 0.0,
    eps_v: float = EPS_V,
) -> CubicCorrection:
    """Cubic that makes the surface reproduce ``zdot_carry`` at the start of a step.

    The mismatch is measured against the uncorrected surface at the
    post-impact state (Xplus, Yplus, Xdot_plus, Ydot_plus); ``Yplus``
    defaults to the manifold start ordinate and ``DX`` to the mid-step
    abscissa of the manifold.
    """
    m = surface.manifold
    if DX is None:
        DX = m.DX
    if Yplus is None:
        Yplus = m.Y0
    if abs(Xdot_plus) <= eps_v:
        raise DegenerateCorrection(f"forward velocity {Xdot_plus:.3e} too small to realize slope")
    if Xplus >= DX:
        raise InvalidInterval(f"correction window empty: X+={Xplus} >= DX={DX}")

    zdot_nominal = surface.nominal().vertical_velocity(Xplus, Yplus, Xdot_plus, Ydot_plus)
    slope = (zdot_carry - zdot_nominal) / Xdot_plus

    # rows: value(Xplus), slope(Xplus), value(DX), slope(DX) in powers of u = X - DX
    u0 = Xplus - DX
    A = np.array(
        [
            [1.0, u0, u0**2, u0**3],
            [0.0, 1.0, 2.0 * u0, 3.0 * u0**2],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]
    )
    rhs = np.array([0.0, slope, 0.0, 0.0])
    coeffs = np.linalg.solve(A, rhs)
    # c0 and c1 are structurally zero; pin them so X = DX is exact
    coeffs[0] = coeffs[1] = 0.0
    return CubicCorrection(tuple(float(c) for c in coeffs), x_start=Xplus, x_end=DX)
