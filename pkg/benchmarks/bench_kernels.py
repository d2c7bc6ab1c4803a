"""Benchmark the hot table kernels: jit-compiled versus fallback.

Runs each workload twice in subprocesses, once with numba active and once
with ITERK_DISABLE_NUMBA=1, and prints both timings side by side.

    python benchmarks/bench_kernels.py            # compare both modes
    python benchmarks/bench_kernels.py --mode this  # time the current mode
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def workloads():
    from iterk import _kernels
    from iterk.tables import enumerate_ii_tables

    rng = np.random.default_rng(42)
    big = rng.integers(0, 8, size=8**5).astype(np.int64)

    def bench_table_perm():
        for _ in range(20):
            _kernels.table_perm(big, 8, 5)

    def bench_involution_scan():
        _kernels.involution_scan(7)

    def bench_ii_enumeration():
        list(enumerate_ii_tables(3, 3))

    def bench_cycle_sweep():
        _kernels.cycle_sweep(3, 2)

    return [
        ("table_perm m=8 k=5 x20", bench_table_perm),
        ("involution_scan m=7", bench_involution_scan),
        ("enumerate_ii m=3 k=3", bench_ii_enumeration),
        ("cycle_sweep m=3 k=2", bench_cycle_sweep),
    ]


def run_this_mode() -> dict:
    from iterk import _kernels

    _kernels.warmup()  # exclude compilation from the timings
    results = {}
    for name, fn in workloads():
        start = time.perf_counter()
        fn()
        results[name] = time.perf_counter() - start
    return {"numba": _kernels.NUMBA_ACTIVE, "timings": results}


def run_mode(disable_numba: bool) -> dict:
    env = dict(os.environ, ITERK_DISABLE_NUMBA="1" if disable_numba else "0")
    proc = subprocess.run(
        [sys.executable, __file__, "--mode", "this"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--mode", choices=["compare", "this"], default="compare")
    args = ap.parse_args()
    if args.mode == "this":
        print(json.dumps(run_this_mode()))
        return
    jit = run_mode(disable_numba=False)
    fallback = run_mode(disable_numba=True)
    if not jit["numba"]:
        print("note: numba unavailable; both columns use the fallback path")
    print(f"{'workload':<28} {'jit (s)':>10} {'fallback (s)':>13} {'speedup':>9}")
    for name in jit["timings"]:
        a, b = jit["timings"][name], fallback["timings"][name]
        print(f"{name:<28} {a:>10.4f} {b:>13.4f} {b / a:>8.1f}x")


if __name__ == "__main__":
    main()
