"""Command-line front end.

    oscdecay analyze       --config FILE
    oscdecay sweep         --config FILE --out DIR [--rtol R] [--force]
    oscdecay identities    [--config FILE] [--seed K]
    oscdecay no-decay-demo --config FILE --out DIR

Exit codes: 0 success, 1 configuration or guard error, 2 quadrature did not
converge on enough points, 3 identity check failed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import decay
from .config import ConfigError, ExperimentConfig, load_config
from .phase import (
    DirectionSystem,
    RegionBox,
    apply_dn,
    certified_lower_bound,
    check_general_position,
    degenerate_decomposition,
)
from .quadrature import CutoffSpec
from .testfunctions import identity_suite

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_IDENTITY = 0, 1, 2, 3
IDENTITY_TOL = 1e-6


@dataclass
class CommandResult:
    exit_code: int
    report: str
    files: dict[str, str] = field(default_factory=dict)


def _dirs_text(dirs) -> str:
    return " ".join(f"({d.b}, {d.c})" for d in dirs)


def _direction_system(config: ExperimentConfig):
    if len(config.directions) < 3:
        return None, f"need at least 3 directions, got {len(config.directions)}"
    if not check_general_position(config.directions):
        return None, "directions are not in general position (two are parallel)"
    return DirectionSystem(config.directions), ""


def _box(config: ExperimentConfig) -> RegionBox:
    return RegionBox.around(
        tuple(Fraction(c) for c in config.cutoff_center), Fraction(config.cutoff_radius)
    )


def cmd_analyze(config: ExperimentConfig) -> CommandResult:
    lines = [f"phase: S = {config.phase}", f"directions: {_dirs_text(config.directions)}"]
    dirs, problem = _direction_system(config)
    if dirs is None:
        lines.append(f"general position: FAILED ({problem})")
        return CommandResult(EXIT_CONFIG, "\n".join(lines) + "\n")
    lines.append("general position: ok")
    n = dirs.n
    dns = apply_dn(config.phase, dirs)
    lines.append(f"D_{n} S = {dns}")
    if dns.is_zero():
        lines.append("verdict: degenerate")
        parts = degenerate_decomposition(config.phase, dirs)
        for j, (s, d) in enumerate(zip(parts, dirs), 1):
            lines.append(f"  S_{j}(t) = {s}    composed with t = {d.b}*x + {d.c}*y")
        return CommandResult(EXIT_OK, "\n".join(lines) + "\n")
    lines.append("verdict: nondegenerate")
    box = _box(config)
    bound = certified_lower_bound(dns, box, config.grid_n)
    lines.append(
        f"certified bound: |D_{n} S| >= {bound} (~{float(bound):.6g}) on "
        f"[{box.x_lo}, {box.x_hi}] x [{box.y_lo}, {box.y_hi}], grid {config.grid_n}"
    )
    lines.append(f"decay hypothesis |D_{n} S| >= 1: {'certified' if bound >= 1 else 'not certified'}")
    return CommandResult(EXIT_OK, "\n".join(lines) + "\n")


def _profile(config: ExperimentConfig, n: int) -> decay.ExponentProfile:
    if n == 3:
        if config.triple is not None:
            return decay.exponent_profile(3, triple=config.triple)
        return decay.exponent_profile(3, config.delta)
    return decay.exponent_profile(n, config.epsilon)


def _write(out: Path | None, files: dict[str, str]) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text)


def cmd_sweep(config: ExperimentConfig, out: Path | None = None, force: bool = False) -> CommandResult:
    dirs, problem = _direction_system(config)
    if dirs is None:
        return CommandResult(EXIT_CONFIG, f"error: {problem}\n")
    n = dirs.n
    if apply_dn(config.phase, dirs).is_zero() and not force:
        return CommandResult(EXIT_CONFIG, "error: phase is degenerate; no decay to measure (use --force)\n")
    if config.lambda_points < 1:
        return CommandResult(EXIT_CONFIG, "error: empty lambda grid\n")
    try:
        lams = decay.lambda_grid(config.lambda_min, config.lambda_max, config.lambda_points)
        profile = _profile(config, n)
    except ValueError as exc:
        return CommandResult(EXIT_CONFIG, f"error: {exc}\n")
    if config.family == "fixed":
        if len(config.functions) != n:
            return CommandResult(EXIT_CONFIG, f"error: family=fixed needs {n} [function] sections\n")
        family = config.functions
    else:
        family = "extremizer"
    records = decay.run_sweep(
        config.phase,
        dirs,
        lams,
        family=family,
        profile=profile,
        rtol=config.rtol,
        cutoff=CutoffSpec(config.cutoff_center, config.cutoff_radius),
        panel_budget=config.panel_budget,
        workers=config.workers,
    )
    files = {"sweep.csv": decay.records_to_csv(records)}
    expected = {"ratio": -float(decay.theoretical_decay(n))}
    if family == "extremizer":
        expected["abs_value"] = -2.0 / n
    report_lines = [f"n = {n}, exponents = {[str(p) for p in profile.exponents]}"]
    fits = {}
    try:
        for column in ("abs_value", "ratio"):
            fit = decay.fit_loglog(records, column, drop=config.drop)
            fits[column] = fit
    except decay.InsufficientData as exc:
        _write(out, files)
        return CommandResult(EXIT_NONCONVERGED, f"error: {exc}\n", files)
    reports = {}
    for column, fit in fits.items():
        r = reports[column] = decay.fit_report(fit, expected.get(column), config.tolerance, column)
        report_lines.append(
            f"{column}: slope {fit.slope:+.4f} +- {fit.stderr_slope:.2g}"
            + (f", expected {r['expected_slope']:+.4f}, pass={r['pass']}" if r["expected_slope"] is not None else "")
        )
    files["fit.json"] = decay.dumps_json(reports)
    files["loglog.dat"] = decay.plot_data(records, fits["ratio"], "ratio")
    _write(out, files)
    bad = sum(not r.converged for r in records)
    if bad:
        report_lines.append(f"warning: {bad} record(s) did not converge and were excluded")
    return CommandResult(EXIT_OK, "\n".join(report_lines) + "\n", files)


def cmd_identities(config: ExperimentConfig, seed: int | None = None) -> CommandResult:
    rng = np.random.default_rng(config.seed if seed is None else seed)
    functions = list(config.functions) or None
    dev = identity_suite(rng, samples=config.samples, functions=functions)
    lines = [f"{name}: max relative deviation {v:.3e}" for name, v in dev.items()]
    ok = all(v <= IDENTITY_TOL for v in dev.values())
    lines.append("all identities hold" if ok else f"identity failure (tolerance {IDENTITY_TOL:g})")
    return CommandResult(EXIT_OK if ok else EXIT_IDENTITY, "\n".join(lines) + "\n")


def cmd_no_decay_demo(config: ExperimentConfig, out: Path | None = None) -> CommandResult:
    dirs, problem = _direction_system(config)
    if dirs is None:
        return CommandResult(EXIT_CONFIG, f"error: {problem}\n")
    lams = decay.lambda_grid(config.demo_lambda_min, config.demo_lambda_max, config.demo_lambda_points)
    try:
        records = decay.no_decay_records(
            dirs,
            config.phase,
            lams,
            rtol=config.demo_rtol,
            width=config.demo_width,
            max_phase_step=config.demo_max_phase_step,
            cutoff=CutoffSpec(config.cutoff_center, config.cutoff_radius),
            panel_budget=config.panel_budget,
        )
    except decay.DecompositionUnavailable as exc:
        return CommandResult(EXIT_CONFIG, f"error: {exc}\n")
    files = {"no_decay.csv": decay.records_to_csv(records)}
    try:
        fit = decay.fit_loglog(records, "abs_value")
    except decay.InsufficientData as exc:
        _write(out, files)
        return CommandResult(EXIT_NONCONVERGED, f"error: {exc}\n", files)
    report = decay.fit_report(fit, 0.0, config.demo_tolerance, "abs_value")
    files["no_decay_fit.json"] = decay.dumps_json(report)
    _write(out, files)
    text = f"abs_value: slope {fit.slope:+.5f} +- {fit.stderr_slope:.2g}, expected 0, pass={report['pass']}\n"
    return CommandResult(EXIT_OK, text, files)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscdecay", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("analyze", "sweep", "identities", "no-decay-demo"):
        p = sub.add_parser(verb)
        p.add_argument("--config", type=Path, required=verb != "identities")
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--rtol", type=float, default=None)
        p.add_argument("--force", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else ExperimentConfig()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.rtol is not None:
        config = config.with_overrides(rtol=args.rtol, demo_rtol=args.rtol)
    if args.seed is not None:
        config = config.with_overrides(seed=args.seed)
    if args.verb == "analyze":
        result = cmd_analyze(config)
    elif args.verb == "sweep":
        result = cmd_sweep(config, args.out, args.force)
    elif args.verb == "identities":
        result = cmd_identities(config)
    else:
        result = cmd_no_decay_demo(config, args.out)
    stream = sys.stdout if result.exit_code == EXIT_OK else sys.stderr
    stream.write(result.report)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
