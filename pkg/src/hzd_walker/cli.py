"""Command-line front end.

Exit status: 0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path


from .errors import Diverged, WalkerError
from .gait import GaitConfig, lip_periodic_gait, vlip_periodic_gait
from .hybrid import WalkState, initial_state, simulate, walk_outcome
from .io import SUMMARY_COLUMNS, TRACE_COLUMNS, gait_to_dict, load_gait, save_gait, write_csv
from .lip import G, LipParams, lambda_L, optimal_C, periodic_velocities, sync_range
from .stability import DEFAULT_FD_STEP, analyze, sync_ratio_empirical
from .sweep import SweepSpec, sweep, write_grid

log = logging.getLogger("hzd_walker")


def _gait_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--C", type=float, required=True, help="ellipse shape parameter")
    p.add_argument("--T", type=float, required=True, help="single-support duration (s)")
    p.add_argument("--z0", type=float, default=0.7, help="nominal CoM height (m)")
    p.add_argument("--a", type=float, default=0.0, help="vertical oscillation amplitude (m)")
    p.add_argument("--nu-z", type=float, default=None, help="swing height gain (negative)")
    p.add_argument("--reduced-impact", action="store_true", help="halve the automatic swing height")
    p.add_argument("--g", type=float, default=G)
    p.add_argument("--S", type=float, default=0.3, help="step length (m), for de-normalization")
    p.add_argument("--D", type=float, default=0.15, help="step width (m), for de-normalization")


def cmd_find_gait(args) -> int:
    cfg = GaitConfig(
        C=args.C, T=args.T, z0=args.z0, a=args.a, nu_z=args.nu_z,
        reduced_impact=args.reduced_impact, g=args.g, S=args.S, D=args.D,
    )
    gait = vlip_periodic_gait(cfg)
    if args.output:
        save_gait(gait, args.output)
    d = gait_to_dict(gait)
    print(f"DX={d['DX']:.10g} DY={d['DY']:.10g} Xdot0={d['Xdot0']:.10g} Ydot0={d['Ydot0']:.10g} "
          f"zdot_carry={d['zdot_carry']:.10g} residual={d['residual']:.3g}")
    return 0


def cmd_simulate(args) -> int:
    gait = load_gait(args.gait)
    s0 = initial_state(gait)
    s0 = WalkState(
        args.X if args.X is not None else s0.X,
        args.Y if args.Y is not None else s0.Y,
        args.Xdot if args.Xdot is not None else s0.Xdot,
        args.Ydot if args.Ydot is not None else s0.Ydot,
        args.zdot if args.zdot is not None else s0.zdot,
    )
    failed = False
    try:
        summaries, traces = simulate(s0, gait, args.n_steps, record=bool(args.trace))
    except Diverged as exc:
        print(f"walk stopped: {exc}", file=sys.stderr)
        summaries, traces, failed = exc.summaries, exc.traces, True
    outcome = walk_outcome(summaries, gait, failed)
    if args.summary:
        write_csv(
            args.summary,
            SUMMARY_COLUMNS,
            ([s.index, s.X_minus, s.Y_minus, s.Xdot_minus, s.Ydot_minus, s.Xdot_plus, s.Ydot_plus,
              s.zdot_minus, s.duration, s.L, outcome] for s in summaries),
        )
    if args.trace:
        rows, t0 = [], 0.0
        for k, tr in enumerate(traces):
            for i in range(len(tr.t)):
                rows.append([t0 + tr.t[i], *tr.states[i, :2], *tr.velocities[i], tr.z[i], tr.zdot[i],
                             *tr.swing[i], k])
            t0 += tr.duration
        write_csv(args.trace, TRACE_COLUMNS, rows)
    for s in summaries:
        print(f"step {s.index}: Xdot-={s.Xdot_minus:.6f} Ydot-={s.Ydot_minus:.6f} L={s.L:.3e} T={s.duration:.6f}")
    print(f"outcome: {outcome}")
    return 0


def cmd_stability(args) -> int:
    gait = load_gait(args.gait)
    report = analyze(gait, args.fd_step)
    if args.output:
        Path(args.output).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    for k, e in enumerate(report.eigenvalues, 1):
        print(f"e{k} = {e.real:+.8f}{e.imag:+.8f}j  |e{k}| = {abs(e):.8f}")
    print(f"delta = {report.delta:.8f}")
    if report.lambda_L_analytic is not None:
        print(f"lambda_L (analytic) = {report.lambda_L_analytic:.8f}")
    return 0


def cmd_sweep(args) -> int:
    spec = SweepSpec.load(args.spec)
    out = args.output or spec.output
    if not out:
        raise WalkerError("no output path given (use -o or 'output' in the spec)")
    cells = sweep(spec, args.parallelism)
    write_grid(cells, out)
    n_ok = sum(c.outcome == "ok" for c in cells)
    print(f"{len(cells)} cells ({n_ok} ok) written to {out}")
    return 0


def cmd_sync_check(args) -> int:
    p = LipParams(args.z0, args.g)
    xd0, yd0 = periodic_velocities(args.T, p)
    lo, hi = sync_range(xd0, yd0)
    lam = lambda_L(args.C, xd0, yd0)
    print(f"periodic velocities: Xdot0={xd0:.6f} Ydot0={yd0:.6f}")
    print(f"lambda_L = {lam:.6f}")
    print(f"sync range = ({lo:.6f}, {hi:.6f})")
    print(f"C_opt = {optimal_C(xd0, yd0):.6f}")
    gait = lip_periodic_gait(args.T, args.z0, args.C, args.g, nu_z=-0.2)
    ratios = sync_ratio_empirical(gait, (args.perturbation, args.perturbation), args.steps)
    print("empirical ratios: " + " ".join(f"{r:.6f}" for r in ratios))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hzd-walker", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("find-gait", help="solve a periodic gait and write it to a file")
    _gait_args(p)
    p.add_argument("-o", "--output", help="gait file (JSON)")
    p.set_defaults(func=cmd_find_gait)

    p = sub.add_parser("simulate", help="walk several steps from a gait file")
    p.add_argument("gait")
    p.add_argument("-n", "--n-steps", type=int, default=10)
    for name in ("X", "Y", "Xdot", "Ydot", "zdot"):
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--summary", help="per-step summary CSV")
    p.add_argument("--trace", help="sampled trajectory CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stability", help="Poincare-map eigenvalues of a gait file")
    p.add_argument("gait")
    p.add_argument("--fd-step", type=float, default=DEFAULT_FD_STEP)
    p.add_argument("-o", "--output", help="report file (JSON)")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("sweep", help="grid of gait stability over two parameters")
    p.add_argument("spec", help="sweep spec (JSON)")
    p.add_argument("-o", "--output")
    p.add_argument("-j", "--parallelism", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sync-check", help="analytic and empirical synchronization of a LIP gait")
    p.add_argument("--z0", type=float, default=0.7)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--g", type=float, default=G)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--perturbation", type=float, default=1e-4)
    p.set_defaults(func=cmd_sync_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (WalkerError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
