"""Brute-force reference implementations for small instances.

Everything here favors literal enumeration over cleverness: exhaustive
equilibrium scans over all 2^m profiles, expectations summed over entire
type hypercubes, and randomized audits of the exact-potential identity.
These are the oracles the fast paths are tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import BeliefModel, ChannelParams, TypeAssignment
from .game import (
    GameContext,
    StrategyProfile,
    EnergyModel,
    _entropy_given_active,
    _repercussion_terms,
    best_response_delta,
    build_context,
    expected_potential,
    potential,
    realized_utility,
)
from .gaussfield import CorrelationParams
from .topology import build_graph, deploy_uniform, place_sinks

MAX_ENUM_SENSORS = 15  # 2^m profile enumeration cap
MAX_ENUM_TYPES = 20  # type-hypercube enumeration cap


@dataclass(frozen=True)
class OracleReport:
    equilibria: list[StrategyProfile]
    potential_maximizer: StrategyProfile
    identity_max_error: float


def _profile_from_code(code: int, m: int) -> np.ndarray:
    return np.array([(code >> i) & 1 for i in range(m)], dtype=np.int8)


def enumerate_equilibria(ctx: GameContext, tol: float = 1e-12, kernels=None) -> OracleReport:
    """Scan every profile for the equilibrium condition.

    Also locates the expected-potential maximizer (always an equilibrium
    in an exact potential game) and reports the identity audit error on
    a fixed sample.
    """
    m = ctx.m
    if m > MAX_ENUM_SENSORS:
        raise ValueError(f"profile enumeration needs m <= {MAX_ENUM_SENSORS}, got {m}")
    equilibria = []
    best_v = -np.inf
    best_profile = None
    for code in range(1 << m):
        actions = _profile_from_code(code, m)
        profile = StrategyProfile(a=actions)
        ok = True
        for i in range(m):
            delta = best_response_delta(ctx, i, profile, kernels)
            gain = delta if actions[i] == 0 else -delta
            if gain > tol:
                ok = False
                break
        if ok:
            equilibria.append(profile)
        v = expected_potential(ctx, profile, kernels=kernels)
        if v > best_v:
            best_v = v
            best_profile = profile
    err = audit_potential_identity(ctx, trials=min(200, 20 * m), seed=0)
    return OracleReport(
        equilibria=equilibria, potential_maximizer=best_profile, identity_max_error=err
    )


def _type_grid(n: int) -> np.ndarray:
    codes = np.arange(1 << n, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int8)


def _enum_expected_secrecy(ctx: GameContext, i: int, p: float) -> float:
    """Expectation of the realized secrecy capacity by type enumeration."""
    lo, hi = ctx.graph.indptr[i], ctx.graph.indptr[i + 1]
    caps = ctx.edge_capacity[lo:hi]
    sink = float(ctx.sink_capacity[i])
    n = caps.size
    if n == 0:
        return sink
    if n > MAX_ENUM_TYPES:
        raise ValueError(f"type enumeration needs |N_i| <= {MAX_ENUM_TYPES}, got {n}")
    grid = _type_grid(n)  # columns ordered like ordered_neighbors(i)
    weights = np.prod(np.where(grid == 1, p, 1.0 - p), axis=1)
    any_comp = grid.any(axis=1)
    first = np.argmax(grid, axis=1)
    values = np.where(any_comp, np.maximum(sink - caps[first], 0.0), sink)
    return float(weights @ values)


def _enum_expected_utility(ctx: GameContext, i: int, profile: StrategyProfile, p: float) -> float:
    d = _entropy_given_active(ctx, i, profile)
    sec = _enum_expected_secrecy(ctx, i, p)
    sign = 1.0 if profile.a[i] == 1 else -1.0
    return sign * (d * sec - float(ctx.effective_energy[i]))


def expected_value_by_enumeration(
    ctx: GameContext, i: int, profile: StrategyProfile, scope: str
) -> float:
    """Probability-weighted sum over whole type hypercubes.

    scope "secrecy" and "utility" enumerate the types of sensor i's
    neighborhood under its own belief; "repercussion" enumerates each
    expectation term of the neighbor sum over that term's neighborhood
    under the respective believer's probability.
    """
    p_i = float(ctx.beliefs.p[i])
    if scope == "secrecy":
        return _enum_expected_secrecy(ctx, i, p_i)
    if scope == "utility":
        return _enum_expected_utility(ctx, i, profile, p_i)
    if scope == "repercussion":
        u = _enum_expected_utility(ctx, i, profile, p_i)
        if profile.a[i] == 0:
            return u
        without_i = profile.with_action(i, 0)
        for j in ctx.graph.ordered_neighbors(i):
            p_j = float(ctx.beliefs.p[j])
            u += _enum_expected_utility(ctx, int(j), profile, p_j)
            u -= _enum_expected_utility(ctx, int(j), without_i, p_j)
        return u
    raise ValueError(f"unknown scope {scope!r}")


def enum_expected_potential(ctx: GameContext, profile: StrategyProfile) -> float:
    """Expected potential by enumerating the full type vector of all sensors.

    Requires the common independent prior; sums probability-weighted
    realized potentials over all 2^m type assignments.
    """
    m = ctx.m
    if m > MAX_ENUM_TYPES:
        raise ValueError(f"type enumeration needs m <= {MAX_ENUM_TYPES}, got {m}")
    p = float(ctx.beliefs.p[0])
    if not np.all(ctx.beliefs.p == p):
        raise ValueError("full type enumeration requires a common prior")
    grid = _type_grid(m)
    weights = np.prod(np.where(grid == 1, p, 1.0 - p), axis=1)
    total = 0.0
    for w, row in zip(weights, grid):
        total += w * potential(ctx, profile, TypeAssignment(t=row))
    return total


def audit_potential_identity(ctx: GameContext, trials: int, seed) -> float:
    """Max relative error of the exact-potential identity on random triples.

    Samples (profile, type vector, sensor), flips the sensor's action, and
    compares the potential change against the repercussion-utility change.
    Both differences are exact sums over their signed addends (utilities
    span ~1e9 while energy costs sit at 1e-4; a plain two-sum difference
    would bury small potential changes under cancellation noise).
    """
    rng = np.random.default_rng(seed)
    m = ctx.m
    worst = 0.0
    for _ in range(trials):
        profile = StrategyProfile(a=rng.integers(0, 2, m).astype(np.int8))
        types = TypeAssignment(t=rng.integers(0, 2, m).astype(np.int8))
        i = int(rng.integers(0, m))
        flipped = profile.with_action(i, 1 - int(profile.a[i]))
        fn = lambda c, j, p: realized_utility(c, j, p, types)
        dv = math.fsum(
            [realized_utility(ctx, j, profile, types) for j in range(m)]
            + [-realized_utility(ctx, j, flipped, types) for j in range(m)]
        )
        dq = math.fsum(
            _repercussion_terms(ctx, i, profile, fn)
            + [-t for t in _repercussion_terms(ctx, i, flipped, fn)]
        )
        err = abs(dv - dq) / max(abs(dv), 1e-30)
        if err > worst:
            worst = err
    return worst


def random_instance(
    seed,
    m_range: tuple[int, int] = (2, 10),
    side_range: tuple[float, float] = (3.0, 12.0),
    r_range: tuple[float, float] = (1.0, 5.0),
    lam_range: tuple[float, float] = (0.5, 2.0),
) -> GameContext:
    """Random small game built through the real deployment pipeline."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    side = float(rng.uniform(*side_range))
    r = float(rng.uniform(*r_range))
    lam = float(rng.uniform(*lam_range))
    p_e = float(rng.uniform(0.0, 1.0))
    dep = place_sinks(deploy_uniform(m, side, rng), "center")
    graph = build_graph(dep, r)
    return build_context(
        graph,
        CorrelationParams(lam=lam),
        ChannelParams(),
        BeliefModel.uniform(m, p_e),
        EnergyModel(),
    )
