"""Command-line front end.

Subcommands: simulate, monodromy, circspec, verify-axioms, scenario, report.
Exit codes: 0 success, 1 verdict failure (CI-friendly), 2 input error.

Every scenario config key is also a flag (underscores become dashes), e.g.
``--n-modes 4 --step-h 0.002``; ``--config default`` uses built-in defaults.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path
from typing import Optional, get_type_hints

import numpy as np

from . import io as fio
from .circspec import SampledFunction, c0_test, periodicity_residual, spectrum_indicator
from .monodromy import build_monodromy, check_process_axioms, spectrum
from .phase_space import History, check_axiom_A1, gn_lift, norm_gamma
from .operators import ExpKernel, apply_L
from .scenario import (ScenarioConfig, apply_overrides, parse_config,
                       run_scenario)
from .solver import asymptotic_residual, solve_modal, solve_quadrature


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    hints = get_type_hints(ScenarioConfig)
    for f in fields(ScenarioConfig):
        parser.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name,
                            type=hints[f.name], default=None,
                            help=f"override config key {f.name}")


def _load_config(args) -> ScenarioConfig:
    if args.config in (None, "default"):
        config = ScenarioConfig()
    else:
        config = parse_config(args.config)
    overrides = {f.name: getattr(args, f.name) for f in fields(ScenarioConfig)
                 if getattr(args, f.name, None) is not None}
    return apply_overrides(config, overrides)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fademem",
        description="delay-diffusion dynamics with exponentially fading memory")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None,
                       help="config file path, or 'default' for built-ins")
        p.add_argument("--out", default="fademem_out", help="output directory")
        _add_config_flags(p)

    p = sub.add_parser("simulate", help="integrate the forced model, dump trajectory CSV")
    common(p)
    p.add_argument("--solver", choices=("modal", "quadrature"), default="modal")
    p.add_argument("--initial", choices=("zero", "offset"), default="zero")

    p = sub.add_parser("monodromy", help="discretize the period map, dump spectrum JSON")
    common(p)

    p = sub.add_parser("circspec", help="circular-spectrum indicator for a signal")
    common(p)
    p.add_argument("--signal",
                   choices=("constant", "cos_pi", "exp_decay", "sin_sqrt"),
                   default="sin_sqrt")
    p.add_argument("--from-trajectory", default=None,
                   help="use a trajectory CSV as the signal instead")
    p.add_argument("--t-end", dest="t_end", type=float, default=260.0)
    p.add_argument("--sample-step", dest="sample_step", type=float, default=0.25)
    p.add_argument("--n-terms", dest="n_terms", type=int, default=None,
                   help="resolvent sum depth (default: adapted to the range)")

    p = sub.add_parser("verify-axioms", help="phase-space and process axiom checks")
    common(p)

    p = sub.add_parser("scenario", help="full pipeline with verdicts")
    common(p)
    p.add_argument("--plots", action="store_true", help="also emit SVG plots")

    p = sub.add_parser("report", help="summarize artifacts from a scenario run")
    p.add_argument("--dir", dest="artifact_dir", default="fademem_out")
    p.add_argument("--plots", action="store_true",
                   help="regenerate SVG plots from the CSV artifacts")
    return parser


def _cmd_simulate(args) -> int:
    config = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    grid = config.theta_grid()
    vals = np.zeros((grid.size, config.n_modes))
    if args.initial == "offset":
        vals[:, 0] = np.exp(grid / 2)
    phi = History(grid, vals, config.gamma)
    forcing = config.forcing()
    if args.solver == "modal":
        traj = solve_modal(phi, forcing, config.t_final, config.step_h,
                           epsilon=config.epsilon())
    else:
        traj = solve_quadrature(phi, ExpKernel(), forcing, config.t_final,
                                config.step_h, epsilon=config.epsilon())
    fio.write_trajectory_csv(out / "trajectory.csv", traj,
                             stride=config.trajectory_stride)
    if traj.final_time >= 2.0:
        times, r = asymptotic_residual(traj, 0.0)
        sl = slice(None, None, max(1, config.trajectory_stride))
        fio.write_curve_csv(out / "residual.csv", times[sl], r[sl])
    print(f"wrote {out / 'trajectory.csv'}")
    return 0


def _cmd_monodromy(args) -> int:
    config = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    P = build_monodromy(n_modes=config.n_modes, theta_max=config.theta_max,
                        theta_nodes=config.theta_nodes, h=config.step_h,
                        gamma=config.gamma)
    rep = spectrum(P, band=config.band)
    fio.write_spectrum_json(out / "spectrum.json", rep)
    print(f"max eigenvalue modulus {rep.max_modulus:.6f}, "
          f"circle distance {rep.circle_distance:.6f}, "
          f"sigma_gamma_empty={rep.sigma_gamma_empty}")
    for m in rep.matches:
        print(f"  mode {m.mode}: multiplier {m.multiplier:.6f} -> "
              f"eigenvalue {m.eigenvalue:.6f} (rel err {m.rel_error:.2e})")
    print(f"wrote {out / 'spectrum.json'}")
    return 0 if rep.sigma_gamma_empty else 1


_SIGNALS = {
    "constant": lambda t: np.ones_like(t),
    "cos_pi": lambda t: np.cos(np.pi * t),
    "exp_decay": lambda t: np.exp(-t),
    "sin_sqrt": lambda t: np.sin(np.sqrt(np.maximum(t, 0.0))),
}


def _cmd_circspec(args) -> int:
    config = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.from_trajectory:
        traj = fio.read_trajectory_csv(args.from_trajectory)
        x = SampledFunction(traj.t0, traj.step, traj.values)
        label = f"trajectory:{args.from_trajectory}"
    else:
        t = np.arange(0.0, args.t_end + args.sample_step / 2, args.sample_step)
        x = SampledFunction(0.0, args.sample_step, _SIGNALS[args.signal](t))
        label = args.signal
    n_terms = args.n_terms
    if n_terms is None:
        span = x.t_end - x.t0
        n_terms = int(min(200, max(10, 0.75 * span)))
    ind = spectrum_indicator(x, n_terms=n_terms)
    fio.write_indicator_csv(out / "indicator.csv", ind)
    res = periodicity_residual(x, 0.0)
    decayed, sups = c0_test(x, tol=1e-6)
    flagged = [[z.real, z.imag] for z in ind.flagged_zetas()]
    fio.write_json(out / "circspec.json", {
        "signal": label,
        "flagged_zetas": flagged,
        "n_flagged": len(flagged),
        "periodicity_tail_sup_p0": res.tail_sup,
        "c0_verdict": decayed,
        "c0_window_sups": list(sups),
        "theta_abs": ind.theta_abs,
    })
    print(f"{label}: {len(flagged)} flagged directions, "
          f"p=0 tail residual {res.tail_sup:.4g}, decays-to-zero={decayed}")
    print(f"wrote {out / 'indicator.csv'}")
    return 0


def _cmd_verify_axioms(args) -> int:
    config = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(7)
    grid = config.theta_grid()
    nm = min(config.n_modes, 4)

    point_slacks, memory_slacks = [], []
    from .solver import Trajectory
    for _ in range(30):
        phi = History(grid, rng.standard_normal((grid.size, nm)), config.gamma)
        vals = rng.standard_normal((201, nm))
        traj = Trajectory(0.0, 0.01, vals)
        rep = check_axiom_A1(traj, phi, 0.5, 2.0)
        point_slacks.append(rep.point_slack)
        memory_slacks.append(rep.memory_slack)

    gn_errs = []
    for n in (1, 4, 16, 64):
        x = rng.standard_normal(nm)
        lifted = gn_lift(x, n, grid, config.gamma)
        gn_errs.append(abs(norm_gamma(lifted) - float(np.linalg.norm(x))))

    l_vals = []
    for _ in range(200):
        phi = History(grid, rng.standard_normal((grid.size, nm)), config.gamma)
        phi = History(grid, phi.values / norm_gamma(phi), config.gamma)
        l_vals.append(float(np.linalg.norm(apply_L(phi))))

    proc = check_process_axioms(n_modes=nm, theta_max=config.theta_max,
                                theta_nodes=config.theta_nodes, h=config.step_h,
                                gamma=config.gamma)
    passed = (min(point_slacks) >= -1e-6 and min(memory_slacks) >= -1e-6
              and max(gn_errs) <= 1e-12 and max(l_vals) <= 1 + 1e-6
              and proc.passed)
    fio.write_json(out / "axioms.json", {
        "a1_min_point_slack": min(point_slacks),
        "a1_min_memory_slack": min(memory_slacks),
        "gn_isometry_max_error": max(gn_errs),
        "delay_operator_max_norm_on_unit_ball": max(l_vals),
        "process": {
            "identity_exact": proc.identity_exact,
            "cocycle_max_residual": proc.cocycle_max_residual,
            "continuity_max_quotient": proc.continuity_max_quotient,
            "exp_bound_N": proc.exp_bound_N,
            "exp_bound_omega": proc.exp_bound_omega,
            "periodicity_residual": proc.periodicity_residual,
        },
        "passed": passed,
    })
    print(f"axiom checks {'passed' if passed else 'FAILED'}; "
          f"details in {out / 'axioms.json'}")
    return 0 if passed else 1


def _cmd_scenario(args) -> int:
    config = _load_config(args)
    out = Path(args.out)
    report = run_scenario(config, out_dir=out, emit_plots=args.plots)
    for name, ok in report.payload()["verdicts"].items():
        print(f"{name}: {ok}")
    print(f"artifacts in {out}")
    return 0 if report.all_true else 1


def _cmd_report(args) -> int:
    art = Path(args.artifact_dir)
    verdict_path = art / "verdict.json"
    if not verdict_path.exists():
        print(f"error: no verdict.json under {art}", file=sys.stderr)
        return 2
    payload = fio.read_json(verdict_path)
    print("scenario verdicts")
    for name, ok in payload["verdicts"].items():
        print(f"  {name:34s} {ok}")
    ev = payload["evidence"]
    print("evidence")
    for key in sorted(ev):
        val = ev[key]
        if isinstance(val, float):
            print(f"  {key:34s} {val:.6g}")
        elif isinstance(val, list) and val and isinstance(val[0], float):
            print(f"  {key:34s} [{min(val):.4g}, {max(val):.4g}] ({len(val)} values)")
        else:
            print(f"  {key:34s} {val}")
    spath = art / "spectrum.json"
    if spath.exists():
        spec = fio.read_json(spath)
        print("period-map spectrum")
        print(f"  max modulus {spec['max_modulus']:.6f}, "
              f"circle distance {spec['circle_distance']:.6f}")
        for m in spec["matches"]:
            print(f"  mode {m['mode']}: multiplier {m['multiplier']:.6f} "
                  f"rel err {m['rel_error']:.2e}")
    print(f"config sha256: {payload['provenance']['config_sha256']}")
    if args.plots:
        rpath = art / "residual.csv"
        if rpath.exists():
            t, r = fio.read_curve_csv(rpath)
            fio.plot_curve_svg(art / "residual.svg", t, r,
                               title="unit-shift residual", logy=True)
            print(f"wrote {art / 'residual.svg'}")
    return 0


def cli_main(argv: Optional[list] = None) -> int:
    """Entry point; returns the process exit code instead of raising."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse signals usage errors with code 2
        return int(exc.code or 0)
    handlers = {
        "simulate": _cmd_simulate,
        "monodromy": _cmd_monodromy,
        "circspec": _cmd_circspec,
        "verify-axioms": _cmd_verify_axioms,
        "scenario": _cmd_scenario,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))
