"""Inverted-pendulum walking under virtual constraints.

Periodic gait synthesis, hybrid walking simulation and Poincare-map
stability analysis for the 3D linear and variable-height inverted pendulum.
"""

from .dynamics import IntegrationOptions, ZeroDynState, integrate_until_switch
from .errors import WalkerError
from .gait import GaitConfig, PeriodicGait, lip_periodic_gait, vlip_periodic_gait
from .hybrid import WalkState, simulate, step
from .lip import LipParams, LipState, lambda_L, periodic_velocities, sync_range
from .manifold import ManifoldParams
from .stability import StabilityReport, analyze, eigen3, jacobian, poincare_map
from .surface import SurfaceParams

__all__ = [
    "GaitConfig",
    "IntegrationOptions",
    "LipParams",
    "LipState",
    "ManifoldParams",
    "PeriodicGait",
    "StabilityReport",
    "SurfaceParams",
    "WalkState",
    "WalkerError",
    "ZeroDynState",
    "analyze",
    "eigen3",
    "integrate_until_switch",
    "jacobian",
    "lambda_L",
    "lip_periodic_gait",
    "periodic_velocities",
    "poincare_map",
    "simulate",
    "step",
    "sync_range",
    "vlip_periodic_gait",
]

__version__ = "0.1.0"
