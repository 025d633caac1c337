"""Command-line front end.

Subcommands: equilibrium, simulate, hopf, amplitude, table <name>,
figure <n>. Parameters come from built-in defaults, overlaid by an
optional flat key=value config file (--config), overlaid by CLI flags.
Exit codes: 0 success, 2 invalid input or config, 3 numerical failure,
4 regime error (no bifurcation / no limit cycle).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from pathlib import Path

from . import presets, svgplot
from .analysis import (
    StabilitySettings,
    equilibrium_report,
    fixed_point_equilibrium,
    locate_hopf_empirically,
    measure_amplitude,
)
from .asymptotics import (
    critical_delay_modified,
    critical_delay_symmetric,
    lindstedt_amplitude,
)
from .engine import (
    HistorySpec,
    IntegrationConfig,
    available_backends,
    default_backend,
    integrate,
    trajectory_csv,
)
from .errors import ConfigError, NoLimitCycleError, NumericalError, RegimeError
from .model import ModelParams, Perturbation

CONFIG_KEYS = (
    "lambda",
    "mu",
    "theta",
    "alpha",
    "lambda_hat",
    "mu_hat",
    "theta_hat",
    "alpha_hat",
    "epsilon",
    "delta",
    "q1_init",
    "q2_init",
    "t_end",
    "steps_per_delay",
)

DEFAULTS = {
    "lambda": 10.0,
    "mu": 1.0,
    "theta": 1.0,
    "alpha": 0.0,
    "lambda_hat": 0.0,
    "mu_hat": 0.0,
    "theta_hat": 0.0,
    "alpha_hat": 0.0,
    "epsilon": 0.1,
    "delta": None,
    "q1_init": 4.99,
    "q2_init": 5.01,
    "t_end": None,
    "steps_per_delay": 200,
}


def write_atomic(path, text: str) -> None:
    """Write via a temp file in the target directory plus rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_config_file(path) -> dict:
    """Read the flat key=value format ('#' starts a comment)."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, value = line.partition("=")
        else:
            key, _, value = line.partition(" ")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{lineno}: missing value for {key!r}")
        try:
            values[key] = int(value) if key == "steps_per_delay" else float(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
    return values


def dump_config_text(settings: dict) -> str:
    lines = ["# two-queue run configuration"]
    for key in CONFIG_KEYS:
        value = settings[key]
        if value is None:
            continue
        lines.append(f"{key} = {value!r}")
    return "\n".join(lines) + "\n"


def resolve_settings(args) -> dict:
    """Defaults, overlaid by the config file, overlaid by CLI flags."""
    settings = dict(DEFAULTS)
    if args.config:
        settings.update(parse_config_file(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, key.replace("lambda", "lam") if key.startswith("lambda") else key)
        if value is not None:
            settings[key] = value
    return settings


def build_run(settings: dict):
    params = ModelParams(
        lam=settings["lambda"],
        mu=settings["mu"],
        theta=settings["theta"],
        alpha=settings["alpha"],
    )
    pert = Perturbation(
        lam_hat=settings["lambda_hat"],
        mu_hat=settings["mu_hat"],
        theta_hat=settings["theta_hat"],
        alpha_hat=settings["alpha_hat"],
        epsilon=settings["epsilon"],
    )
    history = HistorySpec(settings["q1_init"], settings["q2_init"])
    return params, pert, history


def _fmt4(value: float) -> str:
    return f"{value:.4f}"


def _require_delta(settings) -> float:
    if settings["delta"] is None:
        raise ConfigError("this command needs a delay: set delta in the config or pass --delta")
    return settings["delta"]


def _traj_svg(traj, title, hlines=()):
    return svgplot.line_chart(
        traj.times,
        [("q1", traj.q1_samples), ("q2", traj.q2_samples)],
        title=title,
        hlines=hlines,
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_equilibrium(args) -> int:
    settings = resolve_settings(args)
    params, pert, _ = build_run(settings)
    report = equilibrium_report(params, pert)
    cells = _report_cells(report)
    print(
        "q1: approx {} exact {} error {}   q2: approx {} exact {} error {}".format(*cells)
    )
    if args.out:
        header = "q1_approx,q1_exact,q1_error,q2_approx,q2_exact,q2_error"
        write_atomic(args.out, f"{header}\n{','.join(cells)}\n")
        print(f"wrote {args.out}")
    return 0


def cmd_simulate(args) -> int:
    settings = resolve_settings(args)
    params, pert, history = build_run(settings)
    delta = _require_delta(settings)
    t_end = settings["t_end"] if settings["t_end"] is not None else 100.0
    traj = integrate(
        params,
        pert,
        history,
        IntegrationConfig(delta, t_end, settings["steps_per_delay"]),
        backend=args.backend,
    )
    out = Path(args.out) if args.out else Path("trajectory.csv")
    write_atomic(out, trajectory_csv(traj))
    print(
        f"wrote {out} ({len(traj.times)} samples, final q = "
        f"({traj.q1_samples[-1]:.4f}, {traj.q2_samples[-1]:.4f}))"
    )
    if args.svg:
        svg_path = out.with_suffix(".svg")
        write_atomic(svg_path, _traj_svg(traj, f"delay = {delta:g}"))
        print(f"wrote {svg_path}")
    return 0


def cmd_hopf(args) -> int:
    settings = resolve_settings(args)
    params, pert, _ = build_run(settings)
    base = critical_delay_symmetric(params)
    mod = critical_delay_modified(params, pert)
    print(f"symmetric critical delay: {base.delta:.6f} (omega {base.omega:.6f})")
    print(f"first-order modified:     {mod.first_order:.6f}")
    print(f"closed-form modified:     {mod.closed_form:.6f} (omega {mod.omega:.6f})")
    if mod.alpha_second_order is not None:
        print(f"with second-order offset: {mod.alpha_second_order:.6f}")
    if args.empirical:
        if args.bracket:
            bracket = tuple(args.bracket)
        else:
            bracket = (mod.first_order - 0.06, mod.first_order + 0.06)
        report = locate_hopf_empirically(
            params,
            pert,
            bracket,
            tol=args.tol,
            settings=StabilitySettings(backend=args.backend),
        )
        gap = report.empirical_delta - mod.first_order
        print(
            f"empirical (bisection in [{bracket[0]:.4f}, {bracket[1]:.4f}], "
            f"tol {args.tol:g}): {report.empirical_delta:.6f} "
            f"({gap:+.2e} vs first-order)"
        )
    return 0


def cmd_amplitude(args) -> int:
    settings = resolve_settings(args)
    params, pert, history = build_run(settings)
    delta = _require_delta(settings)
    mod = critical_delay_modified(params, pert)
    if delta <= mod.closed_form and not (args.allow_critical and delta == mod.closed_form):
        raise NoLimitCycleError(
            f"delta {delta:g} does not exceed the critical delay {mod.closed_form:.6f}"
            + ("" if delta < mod.closed_form else " (pass --allow-critical for the edge case)")
        )
    prediction = lindstedt_amplitude(params, pert, delta)
    star = fixed_point_equilibrium(params, pert)
    t_end = settings["t_end"] if settings["t_end"] is not None else 300.0
    traj = integrate(
        params,
        pert,
        history,
        IntegrationConfig(delta, t_end, settings["steps_per_delay"]),
        backend=args.backend,
    )
    measured = measure_amplitude(traj, args.tail_fraction)

    half = 0.5 * prediction.amplitude
    bands = {
        "q1_low": star.q1 - half,
        "q1_high": star.q1 + half,
        "q2_low": star.q2 - half,
        "q2_high": star.q2 + half,
    }
    print(f"predicted amplitude: {prediction.amplitude:.4f}")
    print(f"measured amplitude:  q1 {measured.q1_amplitude:.4f}  q2 {measured.q2_amplitude:.4f}")
    print(
        "bands (equilibrium +/- half amplitude): "
        f"q1 [{bands['q1_low']:.4f}, {bands['q1_high']:.4f}]  "
        f"q2 [{bands['q2_low']:.4f}, {bands['q2_high']:.4f}]"
    )
    if measured.period_estimate:
        measured_omega = 2.0 * math.pi / measured.period_estimate
        # diagnostic only: the frequency correction is first-order and
        # degrades quickly away from the critical delay
        print(
            f"frequency check (informational): predicted {prediction.frequency:.4f}, "
            f"measured {measured_omega:.4f}"
        )
    if args.out:
        header = (
            "delta,delta_mod_first,delta_mod_closed,predicted_amplitude,predicted_frequency,"
            "q1_amplitude,q2_amplitude,period,q1_band_low,q1_band_high,q2_band_low,q2_band_high"
        )
        row = ",".join(
            repr(float(v)) if v is not None else ""
            for v in (
                delta,
                mod.first_order,
                mod.closed_form,
                prediction.amplitude,
                prediction.frequency,
                measured.q1_amplitude,
                measured.q2_amplitude,
                measured.period_estimate,
                bands["q1_low"],
                bands["q1_high"],
                bands["q2_low"],
                bands["q2_high"],
            )
        )
        write_atomic(args.out, f"{header}\n{row}\n")
        print(f"wrote {args.out}")
    if args.svg:
        svg_path = Path(args.out).with_suffix(".svg") if args.out else Path("amplitude.svg")
        hlines = [(name, value) for name, value in bands.items()]
        write_atomic(svg_path, _traj_svg(traj, f"delay = {delta:g}", hlines=hlines))
        print(f"wrote {svg_path}")
    return 0


def _report_cells(report) -> list[str]:
    # table convention: the error cells are differences of the two rounded
    # value columns, so the printed row is self-consistent at 4 decimals
    cells = []
    for approx, exact in ((report.approx.q1, report.exact.q1), (report.approx.q2, report.exact.q2)):
        rounded_error = abs(round(approx, 4) - round(exact, 4))
        cells.extend([_fmt4(approx), _fmt4(exact), _fmt4(rounded_error)])
    return cells


def _table_csv(name: str) -> str:
    if name == "table1":
        header = (
            "lambda,lambda_hat,mu,mu_hat,theta,theta_hat,alpha,alpha_hat,epsilon,"
            "q1_approx,q1_exact,q1_error,q2_approx,q2_exact,q2_error"
        )
        lines = [header]
        base = presets.BASE_PARAMS
        for pert, report in presets.table1_rows():
            cells = [
                f"{base.lam:g}",
                f"{pert.lam_hat:g}",
                f"{base.mu:g}",
                f"{pert.mu_hat:g}",
                f"{base.theta:g}",
                f"{pert.theta_hat:g}",
                f"{base.alpha:g}",
                f"{pert.alpha_hat:g}",
                f"{pert.epsilon:g}",
                *_report_cells(report),
            ]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    rows = presets.table2_rows() if name == "table2" else presets.table3_rows()
    hat_column = "lambda_hat" if name == "table2" else "mu_hat"
    lines = [f"{hat_column},q1_approx,q1_exact,q1_error,q2_approx,q2_exact,q2_error"]
    for hat, report in rows:
        lines.append(",".join([f"{hat:g}", *_report_cells(report)]))
    return "\n".join(lines) + "\n"


def cmd_table(args) -> int:
    text = _table_csv(args.name)
    out = Path(args.out) if args.out else Path(f"{args.name}.csv")
    write_atomic(out, text)
    print(text, end="")
    print(f"wrote {out}")
    return 0


def cmd_figure(args) -> int:
    settings = resolve_settings(args)
    preset = presets.figure_preset(args.number)
    t_end = settings["t_end"] if settings["t_end"] is not None else preset.t_end
    out_dir = Path(args.out) if args.out else Path(".")
    for panel in preset.panels:
        traj = integrate(
            preset.params,
            preset.pert,
            preset.history,
            IntegrationConfig(panel.delta, t_end, settings["steps_per_delay"]),
            backend=args.backend,
        )
        csv_path = out_dir / f"figure{preset.number}_{panel.label}.csv"
        write_atomic(csv_path, trajectory_csv(traj))
        print(f"wrote {csv_path} (delta = {panel.delta:.6f})")
        if args.svg:
            svg_path = csv_path.with_suffix(".svg")
            write_atomic(
                svg_path,
                _traj_svg(traj, f"figure {preset.number} {panel.label}: delay = {panel.delta:.4f}"),
            )
            print(f"wrote {svg_path}")
    return 0


# ---------------------------------------------------------------------------
# parser


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--out", help="output path (directory for figure)")
    common.add_argument("--svg", action="store_true", help="also write an SVG plot")
    common.add_argument(
        "--empirical",
        action="store_true",
        help="with hopf: also bisect for the observed stability change",
    )
    common.add_argument(
        "--dump-config", metavar="PATH", help="write the resolved configuration to PATH"
    )
    common.add_argument(
        "--backend",
        choices=available_backends(),
        help=f"integration kernel (default: {default_backend()})",
    )
    for flag, dest in (
        ("--lambda", "lam"),
        ("--mu", "mu"),
        ("--theta", "theta"),
        ("--alpha", "alpha"),
        ("--lambda-hat", "lam_hat"),
        ("--mu-hat", "mu_hat"),
        ("--theta-hat", "theta_hat"),
        ("--alpha-hat", "alpha_hat"),
        ("--epsilon", "epsilon"),
        ("--delta", "delta"),
        ("--q1-init", "q1_init"),
        ("--q2-init", "q2_init"),
        ("--t-end", "t_end"),
    ):
        common.add_argument(flag, dest=dest, type=float)
    common.add_argument("--steps-per-delay", dest="steps_per_delay", type=int)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoqueue",
        description="Asymmetric two-queue fluid model with delayed-information choice: "
        "simulation, critical delays, and limit-cycle amplitudes.",
    )
    common = _common_options()
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(
        "equilibrium",
        parents=[common],
        help="first-order vs exact equilibrium with errors",
    ).set_defaults(func=cmd_equilibrium)

    sub.add_parser(
        "simulate", parents=[common], help="integrate a trajectory and write t,q1,q2 CSV"
    ).set_defaults(func=cmd_simulate)

    hopf = sub.add_parser(
        "hopf", parents=[common], help="critical-delay predictions (optionally empirical)"
    )
    hopf.add_argument("--bracket", nargs=2, type=float, metavar=("LO", "HI"))
    hopf.add_argument("--tol", type=float, default=1e-3, help="bisection width tolerance")
    hopf.set_defaults(func=cmd_hopf)

    amplitude = sub.add_parser(
        "amplitude", parents=[common], help="predicted vs measured limit-cycle amplitude"
    )
    amplitude.add_argument(
        "--tail-fraction", type=float, default=0.8, help="start of the measurement tail"
    )
    amplitude.add_argument(
        "--allow-critical",
        action="store_true",
        help="permit delta exactly at the critical delay (zero amplitude)",
    )
    amplitude.set_defaults(func=cmd_amplitude)

    table = sub.add_parser("table", parents=[common], help="emit a bundled study table as CSV")
    table.add_argument("name", choices=presets.TABLE_NAMES)
    table.set_defaults(func=cmd_table)

    figure = sub.add_parser(
        "figure", parents=[common], help="run a bundled two-panel study configuration"
    )
    figure.add_argument("number", type=int, choices=presets.FIGURE_NUMBERS)
    figure.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.dump_config:
            write_atomic(args.dump_config, dump_config_text(resolve_settings(args)))
            print(f"wrote {args.dump_config}")
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
