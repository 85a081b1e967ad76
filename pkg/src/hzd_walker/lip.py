"""Closed-form 3D linear inverted pendulum (constant CoM height).

Sagittal and frontal motions decouple into two hyperbolic oscillators with
frequency ``omega = sqrt(g/z0)``.  The orbital energies of each axis and the
synchronization measure ``L = Xdot*Ydot - omega^2*X*Y`` are conserved
during a step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateGait, PreconditionViolated

G = 9.81


@dataclass(frozen=True)
class LipState:
    X: float
    Y: float
    Xdot: float
    Ydot: float


@dataclass(frozen=True)
class LipParams:
    z0: float
    g: float = G
    omega: float = field(init=False)

    def __post_init__(self):
        if not self.z0 > 0:
            raise PreconditionViolated("z0 must be positive")
        object.__setattr__(self, "omega", math.sqrt(self.g / self.z0))

    @property
    def omega_sq(self) -> float:
        return self.g / self.z0


def flow(s: LipState, p: LipParams, t: float) -> LipState:
    w = p.omega
    ch, sh = math.cosh(w * t), math.sinh(w * t)
    return LipState(
        X=s.X * ch + s.Xdot / w * sh,
        Y=s.Y * ch + s.Ydot / w * sh,
        Xdot=s.X * w * sh + s.Xdot * ch,
        Ydot=s.Y * w * sh + s.Ydot * ch,
    )


def orbital_energies(s: LipState, p: LipParams) -> tuple[float, float]:
    w2 = p.omega_sq
    return s.Xdot**2 - w2 * s.X**2, s.Ydot**2 - w2 * s.Y**2


def sync_measure(s: LipState, p: LipParams) -> float:
    return s.Xdot * s.Ydot - p.omega_sq * s.X * s.Y


def periodic_velocities(T: float, p: LipParams) -> tuple[float, float]:
    """Initial velocities of the symmetric gait from (-1/2, 1/2) to (1/2, 1/2) in time T."""
    if not T > 0:
        raise PreconditionViolated("step duration must be positive")
    h = 0.5 * p.omega * T
    return 0.5 * p.omega / math.tanh(h), -0.5 * p.omega * math.tanh(h)


def lambda_L(C: float, Xdot0: float, Ydot0: float) -> float:
    """Step-to-step contraction factor of the synchronization measure."""
    d1 = Xdot0 + Ydot0
    d2 = Xdot0 - C * Ydot0
    if d1 == 0.0 or d2 == 0.0:
        raise DegenerateGait(f"lambda_L undefined for C={C}, velocities ({Xdot0}, {Ydot0})")
    return (Ydot0 - Xdot0) * (C * Ydot0 + Xdot0) / (d1 * d2)


def sync_range(Xdot0: float, Ydot0: float) -> tuple[float, float]:
    """Open interval of C for which |lambda_L| < 1."""
    if not (Xdot0 > 0 and Ydot0 < 0 and Xdot0 > -Ydot0):
        raise PreconditionViolated(
            "sync range needs Xdot0 > 0, Ydot0 < 0 and Xdot0 > -Ydot0"
        )
    return 1.0, (Xdot0 / Ydot0) ** 2


def optimal_C(Xdot0: float, Ydot0: float) -> float:
    """C giving one-step synchronization (lambda_L = 0)."""
    return -Xdot0 / Ydot0
