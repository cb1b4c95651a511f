"""Command-line front end.

Subcommands produce the data files behind the usual plots and reports:

    scan         S_B versus degree of entanglement G for a preset (CSV)
    pscan        S_B versus p with the argmax reported (CSV)
    covariance   field expectation / correlation / covariance report
    simulate     seeded Monte Carlo Bell experiment report
    generate     fidelity report for the state-generation protocol
    sensitivity  pulse-timing error sweep (CSV)

Every command writes its output file plus a flat key-value manifest at
<out>.manifest recording the command, resolved parameters and seed, so a
run can be reproduced byte-identically. Angles accept plain radians or
multiples of pi such as "0.25pi". CSV output uses '.' decimals, twelve
significant digits, LF line endings and a header row. Negative values of
option arguments need the = form, e.g. --theta2=-0.3pi.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .bell import (
    PRESETS,
    analytic_s_b,
    angle_preset,
    bell_function,
    bell_function_operator,
    bell_function_vs_p,
    eta_for_degree,
    optimal_p_scan,
    preset_config,
    violation_threshold,
)
from .dynamics import (
    ExperimentConfig,
    InitialAtomPair,
    detection_threshold_check,
    generate_entangled_gbs,
    run_bell_experiment,
    timing_sensitivity,
)
from .fields import (
    EntangledGbsParams,
    entangled_gbs_state,
    field_correlation_operator,
    field_covariance,
    field_expectation_operator,
)
from .fock import DEFAULT_N_MAX, fidelity


def parse_angle(text: str) -> float:
    """Parse an angle in radians, accepting multiples of pi like "0.25pi"."""
    t = text.strip().lower()
    if t.endswith("pi"):
        head = t[:-2].strip()
        if head.endswith("*"):
            head = head[:-1].strip()
        if head in ("", "+"):
            factor = 1.0
        elif head == "-":
            factor = -1.0
        else:
            factor = float(head)
        return factor * math.pi
    return float(t)


def parse_grid(text: str) -> list[float]:
    """Parse "start:stop:step" into the inclusive list of grid points."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid spec must be start:stop:step, got {text!r}")
    start, stop, step = (float(part) for part in parts)
    if step <= 0.0:
        raise ValueError("grid step must be positive")
    if stop < start:
        raise ValueError("grid stop must not be below start")
    count = int(math.floor((stop - start) / step + 1e-9))
    return [start + i * step for i in range(count + 1)]


def parse_value_list(text: str) -> list[float]:
    if ":" in text:
        return parse_grid(text)
    values = [float(part) for part in text.split(",") if part.strip()]
    if not values:
        raise ValueError(f"no values in {text!r}")
    return values


def fmt(value: float) -> str:
    v = float(value)
    if v == 0.0:
        v = 0.0  # normalize -0.0 so reports do not flip sign on a zero
    return "%.12g" % v


def _format_param(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _write_csv(path: str, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(fmt(cell) for cell in row))
    _write_text(path, "\n".join(lines) + "\n")


def _write_keyvalue(path: str, items) -> None:
    lines = [f"{key} = {_format_param(value)}" for key, value in items]
    _write_text(path, "\n".join(lines) + "\n")


def write_manifest(args, params: dict, results: dict | None = None) -> str:
    """Write the run manifest next to the output file and return its path."""
    lines = [
        f"command = {args.command}",
        f"version = {__version__}",
        f"seed = {args.seed}",
        f"n_max = {args.n_max}",
    ]
    for key in sorted(params):
        lines.append(f"param.{key} = {_format_param(params[key])}")
    lines.append(f"output = {args.out}")
    for key in sorted(results or {}):
        lines.append(f"result.{key} = {_format_param(results[key])}")
    path = args.out + ".manifest"
    _write_text(path, "\n".join(lines) + "\n")
    return path


def _require_format(args, natural: str) -> None:
    if args.format is not None and args.format != natural:
        raise ValueError(
            f"{args.command} writes {natural} output; --format {args.format} is not supported"
        )


def cmd_scan(args) -> int:
    _require_format(args, "csv")
    grid = parse_grid(args.grid)
    if grid[0] < -1e-9 or grid[-1] > 1.0 + 1e-9:
        raise ValueError("G grid must lie within [0, 1]")
    rows = []
    for raw in grid:
        g = min(max(raw, 0.0), 1.0)
        eta = eta_for_degree(g)
        config = preset_config(args.preset, eta, theta=args.theta)
        rows.append((g, analytic_s_b(args.preset, g), bell_function_operator(config, args.n_max)))
    _write_csv(args.out, "G,s_b_analytic,s_b_operator", rows)
    write_manifest(args, {"preset": args.preset, "grid": args.grid, "theta": args.theta})
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def cmd_pscan(args) -> int:
    _require_format(args, "csv")
    angles = angle_preset(args.preset, args.theta, eta_sign=1.0 if args.eta >= 0 else -1.0)
    p_star = optimal_p_scan(args.theta, args.eta, angles, step=args.step)
    count = round(1.0 / args.step)
    ps = np.linspace(0.0, 1.0, count + 1)
    values = bell_function_vs_p(args.theta, args.eta, angles, ps)
    _write_csv(args.out, "p,s_b", zip(ps, values))
    write_manifest(
        args,
        {"preset": args.preset, "eta": args.eta, "theta": args.theta, "step": args.step},
        {"p_star": p_star},
    )
    print(f"p_star = {fmt(p_star)}")
    print(f"wrote {args.out} ({len(ps)} rows)")
    return 0


def cmd_covariance(args) -> int:
    _require_format(args, "keyvalue")
    params = EntangledGbsParams(
        p1=args.p1, p2=args.p2, theta1=args.theta1, theta2=args.theta2, eta=args.eta
    )
    stats = field_covariance(params)
    e1_op = field_expectation_operator(params, 1, args.n_max)
    e2_op = field_expectation_operator(params, 2, args.n_max)
    e1e2_op = field_correlation_operator(params, args.n_max)
    items = [
        ("p1", args.p1),
        ("p2", args.p2),
        ("theta1", args.theta1),
        ("theta2", args.theta2),
        ("eta", args.eta),
        ("e1_analytic", stats.e1),
        ("e1_operator", e1_op),
        ("e2_analytic", stats.e2),
        ("e2_operator", e2_op),
        ("e1e2_analytic", stats.e1e2),
        ("e1e2_operator", e1e2_op),
        ("covariance_analytic", stats.covariance),
        ("covariance_operator", e1e2_op - e1_op * e2_op),
    ]
    _write_keyvalue(args.out, items)
    write_manifest(
        args,
        {
            "p1": args.p1,
            "p2": args.p2,
            "theta1": args.theta1,
            "theta2": args.theta2,
            "eta": args.eta,
        },
    )
    print(f"covariance = {fmt(stats.covariance)}")
    return 0


def cmd_simulate(args) -> int:
    _require_format(args, "keyvalue")
    if args.shots < 100:
        raise ValueError("shots must be at least 100")
    config = preset_config(args.preset, args.eta, p=args.p, theta=args.theta)
    experiment = ExperimentConfig(
        bell=config,
        shots=args.shots,
        seed=args.seed,
        detector_efficiency=args.alpha,
        fair_sampling=True,
        n_max=args.n_max,
    )
    estimate = run_bell_experiment(experiment)
    analytic = bell_function(config)
    report = detection_threshold_check(args.alpha)
    items = [
        ("preset", args.preset),
        ("eta", args.eta),
        ("p", args.p),
        ("theta", args.theta),
        ("shots", args.shots),
        ("seed", args.seed),
        ("alpha", args.alpha),
        ("alpha_threshold", report.alpha_threshold),
        ("alpha_above_threshold", report.violable),
        ("s_b_analytic", analytic),
        ("s_b_hat", estimate.s_b_hat),
        ("std_error", estimate.std_error),
        ("violation_threshold", violation_threshold(args.preset)),
        ("discarded_shots", estimate.discarded_shots),
    ]
    for index, setting in enumerate(estimate.settings, start=1):
        prefix = f"setting.{index}"
        items.extend(
            [
                (f"{prefix}.phi_a", setting.phi_a),
                (f"{prefix}.phi_b", setting.phi_b),
                (f"{prefix}.correlation", setting.correlation),
                (f"{prefix}.std_error", setting.std_error),
                (f"{prefix}.retained", setting.retained),
            ]
        )
    _write_keyvalue(args.out, items)
    write_manifest(
        args,
        {
            "preset": args.preset,
            "eta": args.eta,
            "p": args.p,
            "theta": args.theta,
            "shots": args.shots,
            "alpha": args.alpha,
        },
        {"s_b_hat": estimate.s_b_hat, "std_error": estimate.std_error},
    )
    print(f"s_b_hat = {fmt(estimate.s_b_hat)} +/- {fmt(estimate.std_error)}"
          f" (analytic {fmt(analytic)})")
    return 0


def cmd_generate(args) -> int:
    _require_format(args, "keyvalue")
    result = generate_entangled_gbs(
        InitialAtomPair(args.eta),
        args.p1,
        args.theta1,
        args.p2,
        args.theta2,
        n_max=args.n_max,
    )
    target = entangled_gbs_state(
        EntangledGbsParams(
            p1=args.p1, p2=args.p2, theta1=args.theta1, theta2=args.theta2, eta=args.eta
        ),
        args.n_max,
    )
    fid = fidelity(result.field, target)
    probs = result.atom_probabilities
    items = [
        ("p1", args.p1),
        ("p2", args.p2),
        ("theta1", args.theta1),
        ("theta2", args.theta2),
        ("eta", args.eta),
        ("fidelity", fid),
        ("prob_down_down", float(probs[0, 0])),
        ("prob_down_up", float(probs[0, 1])),
        ("prob_up_down", float(probs[1, 0])),
        ("prob_up_up", float(probs[1, 1])),
    ]
    _write_keyvalue(args.out, items)
    write_manifest(
        args,
        {
            "p1": args.p1,
            "p2": args.p2,
            "theta1": args.theta1,
            "theta2": args.theta2,
            "eta": args.eta,
        },
        {"fidelity": fid},
    )
    print(f"fidelity = {fmt(fid)}")
    return 0


def cmd_sensitivity(args) -> int:
    _require_format(args, "csv")
    epsilons = parse_value_list(args.epsilons)
    config = preset_config(args.preset, args.eta, p=args.p, theta=args.theta)
    experiment = ExperimentConfig(bell=config, shots=1, seed=args.seed, n_max=args.n_max)
    rows = timing_sensitivity(experiment, epsilons)
    _write_csv(
        args.out, "epsilon,fidelity,s_b", ((r.epsilon, r.fidelity, r.s_b) for r in rows)
    )
    write_manifest(
        args,
        {
            "preset": args.preset,
            "eta": args.eta,
            "p": args.p,
            "theta": args.theta,
            "epsilons": args.epsilons,
        },
    )
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-bell",
        description="Entangled two-cavity Bernoulli states: Bell scans and protocol simulation.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=12345, help="random seed (default 12345)")
    common.add_argument(
        "--n-max",
        type=int,
        default=DEFAULT_N_MAX,
        dest="n_max",
        help=f"Fock-space cutoff (default {DEFAULT_N_MAX})",
    )
    common.add_argument("--out", required=True, help="output file path")
    common.add_argument(
        "--format",
        choices=("csv", "keyvalue"),
        default=None,
        help="output format; each command has exactly one natural format",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser(
        "scan", parents=[common], help="S_B vs degree of entanglement G (CSV)"
    )
    scan.add_argument("preset", choices=PRESETS)
    scan.add_argument("--grid", default="0:1:0.05", help="G grid as start:stop:step")
    scan.add_argument("--theta", type=parse_angle, default=0.0, help="state phase")
    scan.set_defaults(handler=cmd_scan)

    pscan = sub.add_parser("pscan", parents=[common], help="S_B vs p with argmax (CSV)")
    pscan.add_argument("preset", choices=PRESETS)
    pscan.add_argument("--eta", type=float, default=1.0)
    pscan.add_argument("--theta", type=parse_angle, default=0.0)
    pscan.add_argument("--step", type=float, default=0.005, help="p grid step")
    pscan.set_defaults(handler=cmd_pscan)

    covariance = sub.add_parser(
        "covariance", parents=[common], help="field statistics report (key-value)"
    )
    covariance.add_argument("--p1", type=float, default=0.5)
    covariance.add_argument("--p2", type=float, default=0.5)
    covariance.add_argument("--theta1", type=parse_angle, default=0.0)
    covariance.add_argument("--theta2", type=parse_angle, default=0.0)
    covariance.add_argument("--eta", type=float, default=1.0)
    covariance.set_defaults(handler=cmd_covariance)

    simulate = sub.add_parser(
        "simulate", parents=[common], help="Monte Carlo Bell experiment (key-value)"
    )
    simulate.add_argument("preset", choices=PRESETS)
    simulate.add_argument("--eta", type=float, default=1.0)
    simulate.add_argument("--p", type=float, default=0.5)
    simulate.add_argument("--theta", type=parse_angle, default=0.0)
    simulate.add_argument("--shots", type=int, default=10000, help="shots per setting (min 100)")
    simulate.add_argument(
        "--alpha", type=float, default=1.0, help="detector efficiency in [0, 1]"
    )
    simulate.set_defaults(handler=cmd_simulate)

    generate = sub.add_parser(
        "generate", parents=[common], help="generation-protocol fidelity (key-value)"
    )
    generate.add_argument("--eta", type=float, default=1.0)
    generate.add_argument("--p1", type=float, default=0.5)
    generate.add_argument("--p2", type=float, default=0.5)
    generate.add_argument("--theta1", type=parse_angle, default=0.0)
    generate.add_argument("--theta2", type=parse_angle, default=0.0)
    generate.set_defaults(handler=cmd_generate)

    sensitivity = sub.add_parser(
        "sensitivity", parents=[common], help="pulse-timing error sweep (CSV)"
    )
    sensitivity.add_argument("preset", choices=PRESETS)
    sensitivity.add_argument("--eta", type=float, default=1.0)
    sensitivity.add_argument("--p", type=float, default=0.5)
    sensitivity.add_argument("--theta", type=parse_angle, default=0.0)
    sensitivity.add_argument(
        "--epsilons",
        default="-0.05,-0.02,-0.01,0,0.01,0.02,0.05",
        help="relative timing errors: comma list or start:stop:step",
    )
    sensitivity.set_defaults(handler=cmd_sensitivity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
