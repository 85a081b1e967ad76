"""Ellipse-shaped switching manifold.

The swing foot touches the ground when the CoM reaches the zero level set
of the quadratic field ``s_a``.  All coordinates are normalized by step
length (X) and step width (Y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NoRealRoot, PreconditionViolated

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class ManifoldParams:
    C: float
    X0: float
    Y0: float
    Xf: float
    Yf: float
    Xa: float = field(init=False)

    def __post_init__(self):
        if not self.C > 0:
            raise PreconditionViolated(f"ellipse parameter C must be positive, got {self.C}")
        if abs(self.Xf - self.X0 - 1.0) > _NORM_TOL or abs(self.Y0 + self.Yf - 1.0) > _NORM_TOL:
            raise PreconditionViolated("endpoints violate Xf - X0 = 1, Y0 + Yf = 1")
        object.__setattr__(self, "Xa", 0.5 * ((self.Xf + self.X0) + self.C * (self.Yf - self.Y0)))

    @classmethod
    def from_shift(cls, C: float, DX: float = 0.0, DY: float = 0.0) -> "ManifoldParams":
        """Manifold through X0=-1/2+DX, Y0=1/2-DY and Xf=1/2+DX, Yf=1/2+DY."""
        return cls(C=C, X0=-0.5 + DX, Y0=0.5 - DY, Xf=0.5 + DX, Yf=0.5 + DY)

    @property
    def DX(self) -> float:
        return 0.5 * (self.X0 + self.Xf)

    @property
    def DY(self) -> float:
        return 0.5 * (self.Yf - self.Y0)

    @property
    def radius_sq(self) -> float:
        # (X0 - Xa)^2 + C Y0^2, the constant offset of s_a
        return (self.X0 - self.Xa) ** 2 + self.C * self.Y0**2

    def s_a(self, X: float, Y: float) -> float:
        return (X - self.Xa) ** 2 + self.C * Y * Y - self.radius_sq

    def gradient(self, X: float, Y: float) -> tuple[float, float]:
        return 2.0 * (X - self.Xa), 2.0 * self.C * Y

    def rate(self, X: float, Y: float, Xdot: float, Ydot: float) -> float:
        """Time derivative of s_a along a motion with velocity (Xdot, Ydot)."""
        gx, gy = self.gradient(X, Y)
        return gx * Xdot + gy * Ydot

    def exit_tangent(self) -> tuple[float, float]:
        gx, gy = self.gradient(self.Xf, self.Yf)
        norm = math.hypot(gx, gy)
        tx, ty = -gy / norm, gx / norm
        if tx < 0 or (tx == 0 and ty < 0):
            tx, ty = -tx, -ty
        return tx, ty

    def x_on_manifold(self, Y: float) -> float:
        """Exit-branch root X >= Xa of s_a(X, Y) = 0."""
        disc = self.radius_sq - self.C * Y * Y
        if disc < 0:
            raise NoRealRoot(f"no point of the manifold at Y={Y}")
        return self.Xa + math.sqrt(disc)

    def y_on_manifold(self, X: float) -> float:
        """Root Y >= 0 of s_a(X, Y) = 0 (the exit side for Y0 + Yf = 1)."""
        disc = (self.radius_sq - (X - self.Xa) ** 2) / self.C
        if disc < 0:
            raise NoRealRoot(f"no point of the manifold at X={X}")
        return math.sqrt(disc)
