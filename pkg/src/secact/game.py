"""Activation utilities, repercussion utilities, and the potential function.

A transmitting sensor earns the conditional entropy of its measurement
(given activated neighbors) times its expected secrecy capacity, minus
its energy cost; sleeping earns the exact negation. The repercussion
utility adds the net change a sensor's activation causes in its
neighbors' utilities, which turns the game into an exact potential game
whose potential is the plain sum of utilities.

Compromised sensors play the same utility as uncompromised ones (the
attack stays covert), so equilibrium behavior depends only on geometry
and beliefs; realized types matter only for reported secrecy metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import BeliefModel, ChannelParams, TypeAssignment, capacity
from .errors import ConfigError
from .gaussfield import CorrelationParams, CovarianceModel, conditional_entropy, covariance
from .kernels import active as _default_kernels
from .topology import NetworkGraph

TIE_TOL = 1e-12  # best-response tie tolerance; ties resolve to sleep


@dataclass(frozen=True)
class EnergyModel:
    """Per-slot transmit energy. None derives E = tx_power * slot_duration."""

    energy_per_slot: float | np.ndarray | None = None  # joules
    slot_duration: float = 1e-3  # seconds

    def __post_init__(self):
        if self.slot_duration <= 0:
            raise ConfigError("slot_duration must be > 0")
        if self.energy_per_slot is not None and np.any(np.asarray(self.energy_per_slot) < 0):
            raise ConfigError("energy_per_slot must be >= 0")

    def resolve(self, m: int, channel: ChannelParams) -> np.ndarray:
        e = self.energy_per_slot
        if e is None:
            e = channel.tx_power * self.slot_duration
        return np.broadcast_to(np.asarray(e, dtype=np.float64), (m,)).copy()


@dataclass(frozen=True)
class StrategyProfile:
    """Binary activation vector: 1 = transmit, 0 = sleep."""

    a: np.ndarray  # (m,) int8

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=np.int8))
        if not np.all((self.a == 0) | (self.a == 1)):
            raise ConfigError("actions must be 0 or 1")

    @classmethod
    def all_transmit(cls, m: int) -> "StrategyProfile":
        return cls(a=np.ones(m, dtype=np.int8))

    @classmethod
    def all_sleep(cls, m: int) -> "StrategyProfile":
        return cls(a=np.zeros(m, dtype=np.int8))

    def copy(self) -> "StrategyProfile":
        return StrategyProfile(a=self.a.copy())

    def with_action(self, i: int, action: int) -> "StrategyProfile":
        a = self.a.copy()
        a[i] = action
        return StrategyProfile(a=a)

    @property
    def activated(self) -> np.ndarray:
        return np.flatnonzero(self.a == 1)


@dataclass(frozen=True)
class GameContext:
    """Immutable game instance with the caches the hot loop needs.

    `kargs` is the positional tail shared by every kernel call:
    (xs, ys, indptr, indices, expected_secrecy, effective_energy,
    beta, inv_two_lam_sq, variance_floor, entropy_scale).
    """

    graph: NetworkGraph
    cov: CovarianceModel
    channel: ChannelParams
    beliefs: BeliefModel
    energy_per_slot: np.ndarray  # physical joules per active slot
    energy_weight: float
    sink_capacity: np.ndarray  # (m,)
    edge_capacity: np.ndarray  # aligned with graph.indices
    expected_secrecy: np.ndarray  # (m,)
    effective_energy: np.ndarray  # energy_weight * energy_per_slot
    kargs: tuple

    @property
    def m(self) -> int:
        return self.graph.m


def build_context(
    graph: NetworkGraph,
    correlation: CorrelationParams,
    channel: ChannelParams,
    beliefs: BeliefModel,
    energy: EnergyModel = EnergyModel(),
    energy_weight: float = 1.0,
) -> GameContext:
    """Precompute capacities and expected secrecy for a deployment."""
    dep = graph.deployment
    if dep.sink_of is None:
        raise ConfigError("deployment has no sinks; call place_sinks first")
    m = graph.m
    if beliefs.p.shape[0] != m:
        raise ConfigError("beliefs length does not match deployment size")
    if energy_weight < 0:
        raise ConfigError("energy_weight must be >= 0")

    sink_d = np.sqrt(
        np.sum((dep.sensor_positions - dep.sink_positions[dep.sink_of]) ** 2, axis=1)
    )
    sink_cap = np.asarray(capacity(sink_d, channel), dtype=np.float64)
    edge_cap = np.asarray(capacity(graph.edge_dist, channel), dtype=np.float64)

    exp_sec = np.empty(m)
    for i in range(m):
        lo, hi = graph.indptr[i], graph.indptr[i + 1]
        deg = hi - lo
        if deg == 0:
            exp_sec[i] = sink_cap[i]
            continue
        p = float(beliefs.p[i])
        weights = p * (1.0 - p) ** np.arange(deg)
        clamped = np.maximum(sink_cap[i] - edge_cap[lo:hi], 0.0)
        exp_sec[i] = weights @ clamped + (1.0 - p) ** deg * sink_cap[i]

    e = energy.resolve(m, channel)
    e_eff = energy_weight * e
    cov = covariance(dep, correlation)
    kargs = (
        np.ascontiguousarray(dep.sensor_positions[:, 0]),
        np.ascontiguousarray(dep.sensor_positions[:, 1]),
        graph.indptr,
        graph.indices,
        exp_sec,
        e_eff,
        correlation.beta,
        correlation.inv_two_lam_sq,
        correlation.variance_floor,
        correlation.entropy_scale,
    )
    return GameContext(
        graph=graph,
        cov=cov,
        channel=channel,
        beliefs=beliefs,
        energy_per_slot=e,
        energy_weight=float(energy_weight),
        sink_capacity=sink_cap,
        edge_capacity=edge_cap,
        expected_secrecy=exp_sec,
        effective_energy=e_eff,
        kargs=kargs,
    )


def realized_secrecy_capacity(ctx: GameContext, i: int, types: TypeAssignment) -> float:
    """Secrecy capacity of sensor i's uplink under realized types."""
    lo, hi = ctx.graph.indptr[i], ctx.graph.indptr[i + 1]
    for e in range(lo, hi):
        if types.t[ctx.graph.indices[e]] == 1:
            return max(float(ctx.sink_capacity[i] - ctx.edge_capacity[e]), 0.0)
    return float(ctx.sink_capacity[i])


def _entropy_given_active(ctx: GameContext, i: int, profile: StrategyProfile) -> float:
    nbrs = ctx.graph.ordered_neighbors(i)
    cond = nbrs[profile.a[nbrs] == 1]
    return conditional_entropy(ctx.cov, i, cond)


def realized_utility(
    ctx: GameContext, i: int, profile: StrategyProfile, types: TypeAssignment
) -> float:
    """Utility of sensor i at the profile under realized types.

    (2 a_i - 1) * (D_i * secrecy_i - E_i): the transmit and sleep branches
    are exact negations of each other.
    """
    d = _entropy_given_active(ctx, i, profile)
    sec = realized_secrecy_capacity(ctx, i, types)
    sign = 1.0 if profile.a[i] == 1 else -1.0
    return sign * (d * sec - float(ctx.effective_energy[i]))


def expected_utility(ctx: GameContext, i: int, profile: StrategyProfile) -> float:
    """Expected utility under sensor i's compromise beliefs.

    The entropy factor is type-independent, so only the secrecy factor
    carries the expectation (the cached closed form).
    """
    d = _entropy_given_active(ctx, i, profile)
    sign = 1.0 if profile.a[i] == 1 else -1.0
    return sign * (d * float(ctx.expected_secrecy[i]) - float(ctx.effective_energy[i]))


def _repercussion_terms(ctx, i, profile, value_fn) -> list[float]:
    """Signed addends of the repercussion utility: own utility, then for
    each neighbor its utility at the profile minus its utility with a_i
    forced to sleep. Summations over these use math.fsum so the exact
    cancellation structure of the potential identity survives the twelve
    orders of magnitude between capacity-entropy products and energy
    costs."""
    terms = [value_fn(ctx, i, profile)]
    if profile.a[i] == 1:
        without_i = profile.with_action(i, 0)
        for j in ctx.graph.ordered_neighbors(i):
            terms.append(value_fn(ctx, int(j), profile))
            terms.append(-value_fn(ctx, int(j), without_i))
    return terms


def repercussion_utility(
    ctx: GameContext, i: int, profile: StrategyProfile, types: TypeAssignment
) -> float:
    """Realized utility plus the activation's net effect on the neighbors."""
    fn = lambda c, j, p: realized_utility(c, j, p, types)
    return math.fsum(_repercussion_terms(ctx, i, profile, fn))


def expected_repercussion_utility(ctx: GameContext, i: int, profile: StrategyProfile) -> float:
    """Repercussion utility with every term replaced by its expectation.

    Depends on the actions of the two-hop neighborhood only.
    """
    return math.fsum(_repercussion_terms(ctx, i, profile, expected_utility))


def potential(ctx: GameContext, profile: StrategyProfile, types: TypeAssignment) -> float:
    """Exact potential of the repercussion game: the sum of all utilities."""
    return math.fsum(realized_utility(ctx, i, profile, types) for i in range(ctx.m))


def expected_potential(
    ctx: GameContext, profile: StrategyProfile, kernels=None
) -> float:
    """Sum of expected utilities under the common independent prior."""
    k = kernels if kernels is not None else _default_kernels
    out = np.empty(ctx.m)
    k.expected_utilities(profile.a, *ctx.kargs, out)
    return float(out.sum())


def best_response_delta(
    ctx: GameContext, i: int, profile: StrategyProfile, kernels=None
) -> float:
    """Expected repercussion utility of transmitting minus sleeping."""
    k = kernels if kernels is not None else _default_kernels
    return float(k.br_delta(i, profile.a, *ctx.kargs))


def best_response(ctx: GameContext, i: int, profile: StrategyProfile, kernels=None) -> int:
    """Action maximizing expected repercussion utility; ties sleep."""
    return 1 if best_response_delta(ctx, i, profile, kernels) > TIE_TOL else 0
