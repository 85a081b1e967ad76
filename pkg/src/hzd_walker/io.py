"""Gait files (JSON) and CSV writers."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, Sequence

from .dynamics import ZeroDynState
from .gait import GaitConfig, PeriodicGait

SCHEMA_VERSION = 1

GRID_COLUMNS = ["axis1", "axis2", "outcome", "delta", "e1", "e2", "e3", "DX", "DY", "lambdaL"]
TRACE_COLUMNS = ["t", "X", "Y", "Xdot", "Ydot", "z", "zdot", "Xs", "Ys", "zs", "step_index"]
SUMMARY_COLUMNS = [
    "step_index",
    "X_minus",
    "Y_minus",
    "Xdot_minus",
    "Ydot_minus",
    "Xdot_plus",
    "Ydot_plus",
    "zdot_minus",
    "duration",
    "L",
    "outcome",
]


def fmt(x) -> str:
    """17 significant digits for floats, empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, bool) or isinstance(x, str):
        return str(x)
    if isinstance(x, int):
        return str(x)
    x = float(x) + 0.0  # folds -0.0
    if math.isnan(x):
        return ""
    return format(x, ".17g")


def gait_to_dict(gait: PeriodicGait) -> dict:
    m = gait.manifold
    return {
        "schema_version": SCHEMA_VERSION,
        "config": asdict(gait.config),
        "DX": gait.DX,
        "DY": gait.DY,
        "Xdot0": gait.Xdot0,
        "Ydot0": gait.Ydot0,
        "zdot_carry": gait.zdot_carry,
        "exit_state": list(gait.exit_state),
        "sigma_minus": list(gait.sigma_minus),
        "nu_x": gait.nu_x,
        "nu_y": gait.nu_y,
        "nu_z": gait.nu_z,
        "residual": gait.residual,
        "iterations": gait.iterations,
        "manifold": {"C": m.C, "X0": m.X0, "Y0": m.Y0, "Xf": m.Xf, "Yf": m.Yf, "Xa": m.Xa},
    }


def gait_from_dict(d: dict) -> PeriodicGait:
    version = d.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported gait schema_version {version!r}")
    return PeriodicGait(
        config=GaitConfig(**d["config"]),
        DX=float(d["DX"]),
        DY=float(d["DY"]),
        Xdot0=float(d["Xdot0"]),
        Ydot0=float(d["Ydot0"]),
        zdot_carry=float(d["zdot_carry"]),
        exit_state=ZeroDynState(*map(float, d["exit_state"])),
        nu_x=float(d["nu_x"]),
        nu_y=float(d["nu_y"]),
        nu_z=float(d["nu_z"]),
        residual=float(d.get("residual", 0.0)),
        iterations=int(d.get("iterations", 0)),
    )


def save_gait(gait: PeriodicGait, path) -> None:
    Path(path).write_text(json.dumps(gait_to_dict(gait), indent=2) + "\n")


def load_gait(path) -> PeriodicGait:
    return gait_from_dict(json.loads(Path(path).read_text()))


def write_csv(path, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) for v in row])
