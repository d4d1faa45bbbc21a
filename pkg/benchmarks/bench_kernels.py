#!/usr/bin/env python3
"""Benchmark the window-ambiguity scan backends against each other.

The scan enumerates |Q| x |alphabet|^k (state, window) rows; this script
times the compiled numba kernel, the vectorized numpy fallback and (on the
small cases) the plain-Python reference on identical inputs, and checks they
return identical verdicts while at it.

Usage:
    python3 benchmarks/bench_kernels.py            # full table, k up to 18
    python3 benchmarks/bench_kernels.py --kmax 14  # quicker
"""

from __future__ import annotations

import argparse
import os
import time

from qds import accessible_part, exists_kl, random_nfa
from qds.kernels import find_bad_row

PYTHON_CEILING = 12  # the reference scan is hopeless beyond ~2^12 windows


def time_backend(mode: str, a, k: int, l: int):
    os.environ["QDS_KERNEL"] = mode
    start = time.perf_counter()
    result = find_bad_row(a, k, l)
    return time.perf_counter() - start, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kmax", type=int, default=18)
    parser.add_argument("--states", type=int, default=5)
    parser.add_argument("--seed", type=int, default=int(os.environ.get("QDS_SEED", "7")))
    args = parser.parse_args()

    # a positive instance forces the full scan: no early witness exit
    a = accessible_part(random_nfa(args.seed, args.states, 2, 0.18, 0.5))
    while not (a.states and exists_kl(a).exists):
        args.seed += 1
        a = accessible_part(random_nfa(args.seed, args.states, 2, 0.18, 0.5))
    print(f"# seed={args.seed} states={len(a.states)} alphabet={len(a.alphabet)}")

    # warm the JIT once so the table times steady-state throughput
    time_backend("numba", a, 2, 2)

    print(f"{'k':>3} {'rows':>12} {'numba':>10} {'numpy':>10} {'python':>10} {'speedup':>8}")
    for k in range(2, args.kmax + 1, 2):
        rows = len(a.states) * len(a.alphabet) ** k
        t_nb, r_nb = time_backend("numba", a, k, k)
        t_np, r_np = time_backend("numpy", a, k, k)
        assert r_nb == r_np, f"backends disagree at k={k}"
        if k <= PYTHON_CEILING:
            t_py, r_py = time_backend("python", a, k, k)
            assert r_py == r_nb, f"reference disagrees at k={k}"
            py_col = f"{t_py:>9.3f}s"
        else:
            py_col = f"{'-':>10}"
        speedup = t_np / t_nb if t_nb > 0 else float("inf")
        print(
            f"{k:>3} {rows:>12} {t_nb:>9.3f}s {t_np:>9.3f}s {py_col} {speedup:>7.1f}x"
        )


if __name__ == "__main__":
    main()
