#!/usr/bin/env python3
"""Benchmark the compiled stepping kernel against the pure-Python fallback.

Runs the same workload on each available backend, checks the outputs agree
bit-for-bit, and reports per-step cost and the speedup.

Usage: python benchmarks/bench_backends.py [--t-end 300] [--steps-per-delay 200]
"""

import argparse
import time

import numpy as np

from twoqueue import (
    HistorySpec,
    IntegrationConfig,
    ModelParams,
    Perturbation,
    available_backends,
    integrate,
)

PARAMS = ModelParams(lam=10.0, mu=1.0, theta=1.0, alpha=0.0)
PERT = Perturbation(1.0, 1.0, 1.0, 1.0, 0.1)
HISTORY = HistorySpec(4.99, 5.01)


def run(backend, config, repeat):
    best = float("inf")
    trajectory = None
    for _ in range(repeat):
        start = time.perf_counter()
        trajectory = integrate(PARAMS, PERT, HISTORY, config, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, trajectory


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t-end", type=float, default=300.0)
    parser.add_argument("--delta", type=float, default=0.39)
    parser.add_argument("--steps-per-delay", type=int, default=200)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    config = IntegrationConfig(args.delta, args.t_end, args.steps_per_delay)
    steps = int(args.t_end / config.step)
    print(f"workload: {steps} RK4 steps (delta={args.delta}, t_end={args.t_end}, "
          f"steps_per_delay={args.steps_per_delay}), best of {args.repeat}")

    results = {}
    for backend in available_backends():
        elapsed, traj = run(backend, config, args.repeat)
        results[backend] = (elapsed, traj)
        print(f"  {backend:>8}: {elapsed * 1e3:8.1f} ms  ({elapsed / steps * 1e9:7.1f} ns/step)")

    if "compiled" in results and "python" in results:
        t_compiled, traj_c = results["compiled"]
        t_python, traj_p = results["python"]
        identical = np.array_equal(traj_c.q1_samples, traj_p.q1_samples) and np.array_equal(
            traj_c.q2_samples, traj_p.q2_samples
        )
        print(f"  speedup: {t_python / t_compiled:.1f}x  "
              f"(outputs bit-identical: {identical})")
        if not identical:
            raise SystemExit("backend outputs differ")
    else:
        print("  compiled core not built; only the fallback was timed")


if __name__ == "__main__":
    main()
