"""Two-parameter sweeps of gait existence and stability.

Cells are solved in chains along one axis, each cell seeded from the
previous solved cell of its chain.  Chains are independent, so they can
run in a process pool while the assembled grid stays identical for any
degree of parallelism.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import WalkerError
from .gait import GaitConfig, PeriodicGait, vlip_periodic_gait
from .io import GRID_COLUMNS, write_csv
from .lip import lambda_L
from .stability import DEFAULT_FD_STEP, analyze

log = logging.getLogger(__name__)

AXES = ("C", "T", "a", "z0")
THREADS_ENV = "HZD_WALKER_THREADS"


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXES:
            raise ValueError(f"unknown sweep axis {self.name!r}; expected one of {AXES}")
        if self.count < 1:
            raise ValueError("axis count must be >= 1")
        if self.count > 1 and not self.stop > self.start:
            raise ValueError(f"axis {self.name} needs start < stop")

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


@dataclass(frozen=True)
class SweepSpec:
    axis1: Axis
    axis2: Axis
    fixed: dict = field(default_factory=dict)
    parallelism: Optional[int] = None
    output: Optional[str] = None
    fd_step: float = DEFAULT_FD_STEP

    def __post_init__(self):
        if self.axis1.name == self.axis2.name:
            raise ValueError("sweep axes must differ")
        bad = set(self.fixed) - set(GaitConfig.__dataclass_fields__)
        if bad:
            raise ValueError(f"unknown fixed gait fields: {sorted(bad)}")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        return cls(
            axis1=Axis(**d["axis1"]),
            axis2=Axis(**d["axis2"]),
            fixed=dict(d.get("fixed", {})),
            parallelism=d.get("parallelism"),
            output=d.get("output"),
            fd_step=float(d.get("fd_step", DEFAULT_FD_STEP)),
        )

    @classmethod
    def load(cls, path) -> "SweepSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class SweepCell:
    axis1: float
    axis2: float
    outcome: str  # ok | no_gait | diverged
    delta: float = math.nan
    magnitudes: tuple = (math.nan, math.nan, math.nan)
    DX: float = math.nan
    DY: float = math.nan
    lambda_L: float = math.nan

    def row(self) -> list:
        return [self.axis1, self.axis2, self.outcome, self.delta, *self.magnitudes, self.DX, self.DY, self.lambda_L]


def resolve_parallelism(requested: Optional[int] = None) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    if requested:
        return max(1, int(requested))
    return os.cpu_count() or 1


def _config(spec: SweepSpec, v1: float, v2: float) -> GaitConfig:
    kw = dict(spec.fixed)
    kw[spec.axis1.name] = v1
    kw[spec.axis2.name] = v2
    kw.setdefault("C", 1.1)
    kw.setdefault("T", 0.7)
    # nu_z does not enter the step dynamics; fix it to skip the scaling pass
    kw.setdefault("nu_z", -0.2)
    return GaitConfig(**kw)


def _solve_cell(cfg: GaitConfig, seed: Optional[PeriodicGait], fd_step: float):
    gait = None
    if seed is not None:
        try:
            gait = vlip_periodic_gait(cfg, guess=seed)
        except WalkerError:
            gait = None
    if gait is None:
        try:
            gait = vlip_periodic_gait(cfg)
        except WalkerError as exc:
            log.info("no gait for %s: %s", cfg, exc)
            return None, "no_gait", None
    try:
        report = analyze(gait, fd_step)
    except WalkerError as exc:
        log.info("stability failed for %s: %s", cfg, exc)
        return gait, "diverged", None
    if not math.isfinite(report.delta):
        return gait, "diverged", None
    return gait, "ok", report


def _run_chain(args) -> list[SweepCell]:
    spec, pairs = args
    cells = []
    seed = None
    for v1, v2 in pairs:
        try:
            cfg = _config(spec, v1, v2)
        except WalkerError:
            cells.append(SweepCell(v1, v2, "no_gait"))
            seed = None
            continue
        gait, outcome, report = _solve_cell(cfg, seed, spec.fd_step)
        seed = gait
        if gait is None:
            cells.append(SweepCell(v1, v2, outcome))
            continue
        lam = math.nan
        if cfg.a == 0.0:
            try:
                lam = lambda_L(cfg.C, gait.Xdot0, gait.Ydot0)
            except WalkerError:
                pass
        if report is None:
            cells.append(SweepCell(v1, v2, outcome, DX=gait.DX, DY=gait.DY, lambda_L=lam))
        else:
            cells.append(
                SweepCell(v1, v2, outcome, report.delta, report.magnitudes, gait.DX, gait.DY, lam)
            )
    return cells


def _chains(spec: SweepSpec) -> list[list[tuple[float, float]]]:
    """Chains follow the 'a' axis when swept (continuation from a = 0), else axis2."""
    v1s, v2s = spec.axis1.values(), spec.axis2.values()
    if spec.axis1.name == "a":
        return [[(x, y) for x in v1s] for y in v2s]
    return [[(x, y) for y in v2s] for x in v1s]


def sweep(spec: SweepSpec, parallelism: Optional[int] = None) -> list[SweepCell]:
    """Evaluate every cell; returned in row-major order (axis1 outer, axis2 inner)."""
    workers = resolve_parallelism(parallelism or spec.parallelism)
    chains = _chains(spec)
    jobs = [(spec, chain) for chain in chains]
    if workers == 1 or len(jobs) == 1:
        results = [_run_chain(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_run_chain, jobs))
    by_key = {(c.axis1, c.axis2): c for chain in results for c in chain}
    return [by_key[(x, y)] for x in spec.axis1.values() for y in spec.axis2.values()]


def write_grid(cells: list[SweepCell], path) -> None:
    write_csv(path, GRID_COLUMNS, (c.row() for c in cells))
