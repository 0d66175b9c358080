"""Simplified path-loss radio links and belief-weighted secrecy capacity.

A link's SNR is A * d^-alpha * P / noise (distance clamped below at
`min_distance`) and its Shannon capacity is W * log2(1 + SNR) in bits/s.
The secrecy capacity of a sensor's uplink is the sink-link capacity minus
the capacity toward the nearest compromised neighbor, clamped at zero;
under an independent compromise belief p the exact expectation conditions
on which ordered neighbor is the nearest compromised one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .topology import NetworkGraph

# -90.2 dBm, the default receiver noise power in watts
DEFAULT_NOISE_VAR = 10.0 ** ((-90.2 - 30.0) / 10.0)


@dataclass(frozen=True)
class ChannelParams:
    path_loss_coeff: float = 1.0  # A
    path_loss_exp: float = 3.0  # alpha
    tx_power: float = 0.1  # watts
    noise_var: float = DEFAULT_NOISE_VAR  # watts
    bandwidth: float = 20e6  # hertz
    min_distance: float = 0.01  # near-field clamp, meters

    def __post_init__(self):
        for name in ("path_loss_coeff", "tx_power", "noise_var", "bandwidth", "min_distance"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be > 0")
        if self.path_loss_exp < 2:
            raise ConfigError(f"path_loss_exp must be >= 2, got {self.path_loss_exp}")


@dataclass(frozen=True)
class BeliefModel:
    """Per-sensor probability that any given neighbor is compromised."""

    p: np.ndarray  # (m,) in [0, 1]

    def __post_init__(self):
        if np.any(self.p < 0) or np.any(self.p > 1):
            raise ConfigError("compromise beliefs must lie in [0, 1]")

    @classmethod
    def uniform(cls, m: int, p_e: float) -> "BeliefModel":
        return cls(p=np.full(m, float(p_e)))


@dataclass(frozen=True)
class TypeAssignment:
    """Realized sensor types: 1 = compromised, 0 = uncompromised."""

    t: np.ndarray  # (m,) int8

    def __post_init__(self):
        if not np.all((self.t == 0) | (self.t == 1)):
            raise ConfigError("types must be 0 or 1")

    @property
    def compromised(self) -> np.ndarray:
        return np.flatnonzero(self.t == 1)


def snr(d, params: ChannelParams):
    """Received SNR at distance d (scalar or array), near-field clamped."""
    dd = np.maximum(d, params.min_distance)
    return params.path_loss_coeff * dd ** (-params.path_loss_exp) * params.tx_power / params.noise_var


def capacity(d, params: ChannelParams):
    """Shannon capacity W log2(1 + SNR) in bits/s; decreasing in distance."""
    return params.bandwidth * np.log2(1.0 + snr(d, params))


def _link_capacities(i: int, graph: NetworkGraph, params: ChannelParams):
    sink_cap = float(capacity(graph.deployment.sink_distance(i), params))
    neigh_cap = np.asarray(capacity(graph.ordered_distances(i), params), dtype=np.float64)
    return sink_cap, neigh_cap


def secrecy_capacity(i: int, indicators, graph: NetworkGraph, params: ChannelParams) -> float:
    """Uplink secrecy capacity of sensor i under compromise indicators.

    `indicators` is aligned with ordered_neighbors(i); the sum over
    neighbors telescopes to the capacity toward the first (nearest)
    indicated neighbor, so the result is [C_sink - C_first_indicated]+
    or C_sink when no neighbor is indicated.
    """
    indicators = np.asarray(indicators, dtype=bool)
    if indicators.shape[0] != graph.degree(i):
        raise ValueError(
            f"expected {graph.degree(i)} indicators for sensor {i}, got {indicators.shape[0]}"
        )
    sink_cap, neigh_cap = _link_capacities(i, graph, params)
    flagged = np.flatnonzero(indicators)
    if flagged.size == 0:
        return sink_cap
    return max(sink_cap - float(neigh_cap[flagged[0]]), 0.0)


def expected_secrecy_capacity(
    i: int, graph: NetworkGraph, beliefs: BeliefModel, params: ChannelParams
) -> float:
    """Exact expectation of the secrecy capacity under independent beliefs.

    Conditioning on the nearest compromised neighbor being the j-th
    ordered one (probability p (1-p)^(j-1)) makes the expectation a sum of
    clamped terms plus the no-compromise remainder (1-p)^deg * C_sink.
    """
    p = float(beliefs.p[i])
    sink_cap, neigh_cap = _link_capacities(i, graph, params)
    deg = neigh_cap.size
    if deg == 0:
        return sink_cap
    weights = p * (1.0 - p) ** np.arange(deg)
    clamped = np.maximum(sink_cap - neigh_cap, 0.0)
    return float(weights @ clamped + (1.0 - p) ** deg * sink_cap)
