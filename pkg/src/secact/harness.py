"""Monte-Carlo experiment harness: runs, sweeps, CSV and SVG emission.

Every run derives its own RNG streams by hash-splitting (master_seed,
run_index), so runs are independent, order-insensitive, and exactly
reproducible. Energy reduction is measured against the all-transmit
baseline.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .channel import BeliefModel, TypeAssignment
from .config import ExperimentConfig
from .errors import ConfigError
from .game import GameContext, StrategyProfile, build_context, realized_secrecy_capacity
from .gaussfield import joint_entropy
from .learning import run_learning
from .topology import build_graph, deploy_uniform, place_sinks

CSV_COLUMNS = (
    "axis1",
    "axis2",
    "runs",
    "activated_mean",
    "activated_min",
    "activated_max",
    "energy_reduction_pct_mean",
    "active_joint_entropy_mean",
    "entropy_floored_fraction",
    "passes_mean",
    "passes_min",
    "passes_max",
    "messages_mean",
    "converged_fraction",
)


@dataclass(frozen=True)
class RunMetrics:
    activated: int
    activation_fraction: float
    energy_reduction_pct: float
    active_joint_entropy: float
    entropy_floored: bool
    realized_secrecy_sum: float
    passes: int
    messages: int
    converged: bool

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class SweepResult:
    """Aggregated sweep table: one row dict per (axis1, axis2) point."""

    axis1_name: str
    axis2_name: str
    rows: list[dict]


def sample_types(m: int, p_e: float, seed) -> TypeAssignment:
    """Each sensor independently compromised with probability p_e."""
    if not 0.0 <= p_e <= 1.0:
        raise ConfigError(f"p_e must be in [0, 1], got {p_e}")
    rng = np.random.default_rng(seed)
    return TypeAssignment(t=(rng.random(m) < p_e).astype(np.int8))


def build_run_context(config: ExperimentConfig, seed) -> GameContext:
    dep = place_sinks(deploy_uniform(config.m, config.side_length, seed), config.sink_layout)
    graph = build_graph(dep, config.r)
    return build_context(
        graph,
        config.correlation,
        config.channel,
        BeliefModel.uniform(config.m, config.p_e),
        config.energy,
        energy_weight=config.energy_weight,
    )


def _initial_profile(config: ExperimentConfig, m: int, seed) -> StrategyProfile:
    if config.initial_profile == "all-transmit":
        return StrategyProfile.all_transmit(m)
    if config.initial_profile == "all-sleep":
        return StrategyProfile.all_sleep(m)
    rng = np.random.default_rng(seed)
    return StrategyProfile(a=rng.integers(0, 2, m).astype(np.int8))


def run_single(config: ExperimentConfig, run_index: int) -> RunMetrics:
    """Deploy, learn to equilibrium, and compute all per-run metrics."""
    ss = np.random.SeedSequence([int(config.master_seed), int(run_index)])
    deploy_seed, type_seed, init_seed = ss.spawn(3)
    ctx = build_run_context(config, deploy_seed)
    types = sample_types(config.m, config.p_e, type_seed)
    initial = _initial_profile(config, config.m, init_seed)
    outcome = run_learning(ctx, initial, max_passes=config.max_passes)

    profile = outcome.final_profile
    active = profile.activated
    activated = int(active.size)
    baseline_energy = float(ctx.energy_per_slot.sum())
    active_energy = float(ctx.energy_per_slot[active].sum())
    reduction = 100.0 * (baseline_energy - active_energy) / baseline_energy

    if activated == 0:
        entropy, floored = 0.0, True  # convention: flagged zero instead of -inf
    else:
        entropy, floored = joint_entropy(ctx.cov, active)
    secrecy_sum = float(
        sum(realized_secrecy_capacity(ctx, int(i), types) for i in active)
    )
    return RunMetrics(
        activated=activated,
        activation_fraction=activated / config.m,
        energy_reduction_pct=reduction,
        active_joint_entropy=float(entropy),
        entropy_floored=bool(floored),
        realized_secrecy_sum=secrecy_sum,
        passes=outcome.passes,
        messages=outcome.messages_sent,
        converged=outcome.converged,
    )


_MEAN_MIN_MAX = (
    "activated",
    "activation_fraction",
    "energy_reduction_pct",
    "active_joint_entropy",
    "realized_secrecy_sum",
    "passes",
    "messages",
)


def _aggregate(axis1, axis2, metrics: list[RunMetrics]) -> dict:
    row: dict = {"axis1": axis1, "axis2": axis2, "runs": len(metrics)}
    for name in _MEAN_MIN_MAX:
        values = [getattr(mm, name) for mm in metrics]
        row[f"{name}_mean"] = float(np.mean(values))
        row[f"{name}_min"] = min(values)
        row[f"{name}_max"] = max(values)
    row["entropy_floored_fraction"] = float(np.mean([mm.entropy_floored for mm in metrics]))
    row["converged_fraction"] = float(np.mean([mm.converged for mm in metrics]))
    return row


def _sweep(config, axis1_name, axis1_values, axis2_name, axis2_values) -> SweepResult:
    if not axis1_values or not axis2_values:
        return SweepResult(axis1_name=axis1_name, axis2_name=axis2_name, rows=[])
    rows = []
    for v1 in axis1_values:
        for v2 in axis2_values:
            point = dataclasses.replace(config, **{axis1_name: v1, axis2_name: v2})
            metrics = [run_single(point, idx) for idx in range(point.runs)]
            rows.append(_aggregate(v1, v2, metrics))
    return SweepResult(axis1_name=axis1_name, axis2_name=axis2_name, rows=rows)


def sweep_pe(config: ExperimentConfig, pe_values: list[float], m_values: list[int]) -> SweepResult:
    """Cross-product sweep with the compromise probability on axis 1."""
    return _sweep(config, "p_e", list(pe_values), "m", list(m_values))


def sweep_m(config: ExperimentConfig, m_values: list[int], pe_values: list[float]) -> SweepResult:
    """Cross-product sweep with the sensor count on axis 1."""
    return _sweep(config, "m", list(m_values), "p_e", list(pe_values))


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return repr(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def emit_csv(result: SweepResult, path) -> None:
    """Write the sweep table; floats use repr so parsing round-trips exactly."""
    lines = [",".join(CSV_COLUMNS)]
    for row in result.rows:
        lines.append(",".join(_fmt(row[c]) for c in CSV_COLUMNS))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_plot(result: SweepResult, metric: str, path) -> None:
    """Line chart of one aggregate metric, one curve per axis-2 value (SVG)."""
    if metric not in CSV_COLUMNS or metric in ("axis1", "axis2", "runs"):
        raise ValueError(f"unknown plot metric {metric!r}")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for v2 in sorted({row["axis2"] for row in result.rows}):
        pts = sorted(
            ((row["axis1"], row[metric]) for row in result.rows if row["axis2"] == v2)
        )
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        ax.plot(xs, ys, marker="o", label=f"{result.axis2_name}={v2}")
    ax.set_xlabel(result.axis1_name)
    ax.set_ylabel(metric)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
