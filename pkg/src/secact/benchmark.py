"""Benchmark the numba kernels against the pure numpy/Python fallback.

Runs the same learning problem through both kernel sets, checks they
agree, and prints timings:

    python -m secact.benchmark --m 2000
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from .config import ExperimentConfig
from .game import StrategyProfile, expected_potential
from .harness import build_run_context
from .kernels import NUMBA_AVAILABLE, NUMBA_ENABLED, get_kernels
from .learning import run_learning


def _bench(fn, warmups=1, runs=3):
    for _ in range(warmups):
        fn()
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="secact kernel benchmark")
    parser.add_argument("--m", type=int, default=2000, help="sensor count")
    parser.add_argument("--p-e", type=float, default=0.1, dest="p_e")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--runs", type=int, default=3, help="timed repetitions")
    args = parser.parse_args(argv)

    config = ExperimentConfig(m=args.m, p_e=args.p_e, runs=1, master_seed=args.seed)
    ctx = build_run_context(config, np.random.SeedSequence(args.seed))
    initial = StrategyProfile.all_transmit(config.m)
    print(f"instance: m={args.m} p_e={args.p_e} seed={args.seed} "
          f"(numba available={NUMBA_AVAILABLE}, active path jitted={NUMBA_ENABLED})")

    pure = get_kernels(False)
    t_pure = _bench(lambda: run_learning(ctx, initial, kernels=pure), runs=args.runs)
    out_pure = run_learning(ctx, initial, kernels=pure)
    print(f"pure numpy : median {t_pure:.4f}s  passes={out_pure.passes} "
          f"activated={int(out_pure.final_profile.a.sum())}")

    if not NUMBA_AVAILABLE:
        print("numba not available; nothing to compare")
        return 0

    jit = get_kernels(True)
    run_learning(ctx, initial, kernels=jit)  # compile before timing
    t_jit = _bench(lambda: run_learning(ctx, initial, kernels=jit), runs=args.runs)
    out_jit = run_learning(ctx, initial, kernels=jit)
    print(f"numba jit  : median {t_jit:.4f}s  passes={out_jit.passes} "
          f"activated={int(out_jit.final_profile.a.sum())}")

    same_profile = np.array_equal(out_pure.final_profile.a, out_jit.final_profile.a)
    v_pure = expected_potential(ctx, out_pure.final_profile, kernels=pure)
    v_jit = expected_potential(ctx, out_jit.final_profile, kernels=jit)
    rel = abs(v_pure - v_jit) / max(abs(v_pure), 1e-30)
    print(f"agreement  : profiles equal={same_profile}  potential rel diff={rel:.2e}")
    print(f"speedup    : {t_pure / t_jit:.1f}x")
    if not same_profile or rel > 1e-9:
        print("MISMATCH between kernel paths")
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
