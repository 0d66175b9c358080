"""Command-line interface.

Subcommands: simulate (one run, prints metrics), sweep-pe / sweep-m
(emit CSV and optional SVG plots), verify (oracle suite). Exit codes:
0 success, 1 invalid configuration, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, apply_overrides, load_config
from .errors import ConfigError, VerificationError

PE_SWEEP_DEFAULT = [round(0.1 * k, 1) for k in range(11)]
M_SWEEP_DEFAULT = list(range(500, 5001, 500))
PLOT_METRICS = ("activated_mean", "energy_reduction_pct_mean", "active_joint_entropy_mean", "passes_mean")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; bad flags are config errors
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="secact", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file mirroring ExperimentConfig fields")
        p.add_argument("--seed", type=int, help="override master_seed")
        p.add_argument("--runs", type=int, help="override runs per sweep point")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override any config field, dotted keys for nested sections")

    p_sim = sub.add_parser("simulate", help="run one configuration and print its metrics")
    common(p_sim)

    for name in ("sweep-pe", "sweep-m"):
        p = sub.add_parser(name, help=f"{name} sweep, emits CSV and optional plots")
        common(p)
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--plots", action="store_true", help="also emit SVG line charts")

    p_ver = sub.add_parser("verify", help="run the brute-force oracle suite")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--trials", type=int, default=2000, help="identity audit sample count")
    p_ver.add_argument("--instances", type=int, default=25, help="small equilibrium instances")
    p_ver.add_argument("--tolerance", type=float, default=1e-9, help="max relative error accepted")
    return parser


def _load(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    config = apply_overrides(config, args.overrides)
    extra = {}
    if args.seed is not None:
        extra["master_seed"] = args.seed
    if getattr(args, "runs", None) is not None:
        extra["runs"] = args.runs
    if extra:
        import dataclasses

        config = dataclasses.replace(config, **extra)
    return config


def _axis_values(args, key: str, default: list):
    # sweep axes ride along --set (e.g. --set pe_values=[0,0.5,1])
    values = default
    remaining = []
    for item in args.overrides:
        if item.startswith(key + "="):
            try:
                values = json.loads(item.split("=", 1)[1])
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{key} must be a JSON list: {exc}") from exc
            if not isinstance(values, list) or not values:
                raise ConfigError(f"{key} must be a nonempty list")
        else:
            remaining.append(item)
    args.overrides = remaining
    return values


def _cmd_simulate(args) -> int:
    from .harness import run_single

    config = _load(args)
    metrics = run_single(config, run_index=0)
    print(json.dumps(metrics.as_dict(), indent=2))
    return 0


def _cmd_sweep(args, which: str) -> int:
    from .harness import emit_csv, emit_plot, sweep_m, sweep_pe

    pe_values = _axis_values(args, "pe_values", PE_SWEEP_DEFAULT)
    m_values = _axis_values(args, "m_values", M_SWEEP_DEFAULT)
    config = _load(args)
    if which == "sweep-pe":
        result = sweep_pe(config, pe_values, m_values)
    else:
        result = sweep_m(config, m_values, pe_values)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = which.replace("-", "_")
    csv_path = out / f"{stem}.csv"
    emit_csv(result, csv_path)
    print(f"wrote {csv_path}")
    if args.plots:
        for metric in PLOT_METRICS:
            svg_path = out / f"{stem}_{metric}.svg"
            emit_plot(result, metric, svg_path)
            print(f"wrote {svg_path}")
    return 0


def _cmd_verify(args) -> int:
    from .learning import run_learning, verify_gbne
    from .game import StrategyProfile
    from .oracle import audit_potential_identity, enumerate_equilibria, expected_value_by_enumeration, random_instance

    rng = np.random.default_rng(args.seed)
    failures = []

    # exact-potential identity on random instances
    worst = 0.0
    remaining = args.trials
    while remaining > 0:
        ctx = random_instance(rng)
        n = min(remaining, 25)
        worst = max(worst, audit_potential_identity(ctx, trials=n, seed=rng))
        remaining -= n
    ok = worst <= args.tolerance
    print(f"potential-identity audit: max_rel_err={worst:.3e} (tol {args.tolerance:.1e}) "
          f"{'PASS' if ok else 'FAIL'}")
    if not ok:
        failures.append("potential-identity")

    # closed-form expected secrecy and utilities vs type enumeration
    worst = 0.0
    for _ in range(200):
        ctx = random_instance(rng, m_range=(2, 12))
        i = int(rng.integers(0, ctx.m))
        profile = StrategyProfile(a=rng.integers(0, 2, ctx.m).astype(np.int8))
        closed = float(ctx.expected_secrecy[i])
        enum = expected_value_by_enumeration(ctx, i, profile, "secrecy")
        worst = max(worst, abs(closed - enum) / max(abs(enum), 1e-30))
    ok = worst <= args.tolerance
    print(f"expected-secrecy cross-check: max_rel_err={worst:.3e} (tol {args.tolerance:.1e}) "
          f"{'PASS' if ok else 'FAIL'}")
    if not ok:
        failures.append("expected-secrecy")

    # learned equilibria are contained in the exhaustively enumerated set
    bad = 0
    for _ in range(args.instances):
        ctx = random_instance(rng, m_range=(2, 8))
        outcome = run_learning(ctx, StrategyProfile.all_transmit(ctx.m))
        report = enumerate_equilibria(ctx)
        final = outcome.final_profile.a
        contained = any(np.array_equal(final, eq.a) for eq in report.equilibria)
        gbne_ok, _ = verify_gbne(ctx, outcome.final_profile)
        if not (outcome.converged and contained and gbne_ok and report.equilibria):
            bad += 1
    ok = bad == 0
    print(f"equilibrium containment: {args.instances - bad}/{args.instances} instances "
          f"{'PASS' if ok else 'FAIL'}")
    if not ok:
        failures.append("equilibrium-containment")

    if failures:
        raise VerificationError(f"verification failed: {', '.join(failures)}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command in ("sweep-pe", "sweep-m"):
            return _cmd_sweep(args, args.command)
        if args.command == "verify":
            return _cmd_verify(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 1
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
