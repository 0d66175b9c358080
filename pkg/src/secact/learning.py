"""Sequential best-response learning to a graphical Bayesian equilibrium.

One pass visits sensors in id order; each adopts its best response
against the newest strategy vector (later sensors see earlier flips in
the same pass). Every accepted flip is broadcast once and relayed once
per neighbor, so it costs 1 + degree messages. Learning stops at the
first pass with zero flips, or at max_passes with converged=False.

Because the repercussion game is an exact potential game, every accepted
flip raises the expected potential, which rules out cycling; the trace
is maintained incrementally from the per-flip gains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import TIE_TOL, GameContext, StrategyProfile, best_response_delta, expected_potential
from .kernels import active as _default_kernels


@dataclass(frozen=True)
class LearningOutcome:
    final_profile: StrategyProfile
    passes: int
    flips_per_pass: list[int]
    messages_sent: int
    expected_potential_trace: np.ndarray  # one value per accepted flip
    converged: bool


def run_learning(
    ctx: GameContext,
    initial: StrategyProfile,
    max_passes: int = 50,
    kernels=None,
) -> LearningOutcome:
    """Run best-response learning from the initial profile.

    When converged, the final profile satisfies the equilibrium condition
    for expected repercussion utilities (no sensor can gain more than the
    tie tolerance by flipping).
    """
    if max_passes < 1:
        raise ValueError(f"max_passes must be >= 1, got {max_passes}")
    k = kernels if kernels is not None else _default_kernels
    actions = initial.a.astype(np.int8).copy()
    base = expected_potential(ctx, StrategyProfile(a=actions), kernels=k)

    gains_buf = np.empty(ctx.m)
    flips_per_pass: list[int] = []
    all_gains: list[np.ndarray] = []
    messages = 0
    converged = False
    for _ in range(max_passes):
        n_flips, msg = k.sweep_pass(actions, *ctx.kargs, TIE_TOL, gains_buf)
        flips_per_pass.append(int(n_flips))
        messages += int(msg)
        if n_flips:
            all_gains.append(gains_buf[:n_flips].copy())
        else:
            converged = True
            break

    if all_gains:
        trace = base + np.cumsum(np.concatenate(all_gains))
    else:
        trace = np.empty(0)
    return LearningOutcome(
        final_profile=StrategyProfile(a=actions),
        passes=len(flips_per_pass),
        flips_per_pass=flips_per_pass,
        messages_sent=messages,
        expected_potential_trace=trace,
        converged=converged,
    )


def verify_gbne(
    ctx: GameContext, profile: StrategyProfile, tol: float = 1e-12, kernels=None
) -> tuple[bool, list[int]]:
    """Check the equilibrium condition; returns (ok, profitable deviators).

    A sensor is a profitable deviator when flipping its action raises its
    expected repercussion utility by more than `tol`.
    """
    deviators = []
    for i in range(ctx.m):
        delta = best_response_delta(ctx, i, profile, kernels)
        gain = delta if profile.a[i] == 0 else -delta
        if gain > tol:
            deviators.append(i)
    return (len(deviators) == 0, deviators)
