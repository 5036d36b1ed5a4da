"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--dim 3]

Inputs are synthetic (random unitaries, random index rows) so the sizes can
be pushed past anything the bundled models produce.  The first numba call
compiles; it is run once before timing and reported separately.
"""

import argparse
import time

import numpy as np

from posetcoh import _kernels
from posetcoh.cocycle import random_unitary
from posetcoh.poset import build_circle_poset


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--rows", type=int, default=50_000)
    ap.add_argument("--steps", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    values = np.stack([random_unitary(args.dim, rng) for _ in range(args.pairs)])
    chains = rng.integers(args.pairs, size=(args.rows, 3))
    simplices = rng.integers(args.pairs, size=(args.rows, 6))
    upper = rng.integers(args.pairs, size=args.steps)
    lower = rng.integers(args.pairs, size=args.steps)
    leq = build_circle_poset(40, 38).leq

    cases = {
        "chain_deviation": lambda nb: _kernels.chain_deviation(values, chains, use_numba=nb),
        "general_deviation": lambda nb: _kernels.general_deviation(values, simplices, use_numba=nb),
        "path_product": lambda nb: _kernels.path_product(values, upper, lower, use_numba=nb),
        "transitivity_violations": lambda nb: _kernels.transitivity_violations(leq, use_numba=nb),
    }

    print(f"numba available: {_kernels.HAVE_NUMBA}")
    print(f"{'kernel':<26}{'numpy s':>11}{'numba s':>11}{'compile s':>11}{'speedup':>10}{'max |diff|':>13}")
    for name, fn in cases.items():
        t_np, out_np = best_of(lambda: fn(False), args.repeat)
        if not _kernels.HAVE_NUMBA:
            print(f"{name:<26}{t_np:>11.4f}{'-':>11}{'-':>11}{'-':>10}{'-':>13}")
            continue
        t0 = time.perf_counter()
        fn(True)
        t_compile = time.perf_counter() - t0
        t_nb, out_nb = best_of(lambda: fn(True), args.repeat)
        diff = float(np.max(np.abs(np.asarray(out_np) - np.asarray(out_nb))))
        print(f"{name:<26}{t_np:>11.4f}{t_nb:>11.4f}{t_compile:>11.2f}{t_np / t_nb:>9.1f}x{diff:>13.2e}")


if __name__ == "__main__":
    main()
