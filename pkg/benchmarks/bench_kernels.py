#!/usr/bin/env python3
"""Benchmark the hot kernels under the compiled (numba) and pure-Python
paths.

Run directly to get both columns; the script re-invokes itself with
GROUPRANK_NO_NUMBA=1 for the fallback measurements.  Pass --single to
measure only the current mode.
"""

import json
import os
import subprocess
import sys
import time

import numpy as np


def measure():
    from grouprank import _kernels as _k
    from grouprank.catalog import mathieu
    from grouprank.search import SearchConfig, dihedral_orders, scan

    m11 = mathieu(11)
    gens = np.stack([g.images for g in m11.generators]).astype(np.int64)
    prefix = np.empty(0, np.int64)
    results = {}

    # warm up compilation before timing
    _k.ch_build(gens, 64, prefix)
    elems = m11.element_matrix()
    scratch = np.empty(11, np.int64)

    reps = 300 if _k.USE_NUMBA else 10
    t0 = time.perf_counter()
    for _ in range(reps):
        ch, ok = _k.ch_build(gens, 64, prefix)
    results["chain build M11 (us)"] = (time.perf_counter() - t0) / reps * 1e6

    ch, _ = _k.ch_build(gens, 64, prefix)
    member = np.empty(elems.shape[0], np.bool_)
    reps = 20 if _k.USE_NUMBA else 1
    t0 = time.perf_counter()
    for _ in range(reps):
        _k.sift_batch(ch, elems, member)
    results["sift 7,920 elements (ms)"] = (
        (time.perf_counter() - t0) / reps * 1e3)

    orders = _k.orders_batch(elems)
    invs = np.ascontiguousarray(elems[orders == 2])
    sub, _ = _k.ch_build(invs[:3], 64, prefix)
    reps = 2000 if _k.USE_NUMBA else 20
    t0 = time.perf_counter()
    for _ in range(reps):
        _k.ch_extend_order(sub, elems[777], scratch)
    results["chain extend order (us)"] = (
        (time.perf_counter() - t0) / reps * 1e6)

    t0 = time.perf_counter()
    dihedral_orders(m11)
    results["dihedral orders M11 (ms)"] = (time.perf_counter() - t0) * 1e3

    # sweep-style workload: the size-6 scan is dominated by prefix skips and
    # occasional survivor tail sweeps, like the exhaustive negative control
    combos = 50_000 if _k.USE_NUMBA else 50
    cfg = SearchConfig(target_size=6, pool_order=2, max_certificates=0,
                       max_combinations=combos, progress_every=combos)
    t0 = time.perf_counter()
    scan(m11, cfg)
    results[f"size-6 scan of {combos} combinations (s)"] = (
        time.perf_counter() - t0)
    results["_combos"] = combos
    results["_mode"] = "numba" if _k.USE_NUMBA else "pure python"
    return results


def main():
    if "--single" in sys.argv or os.environ.get("_BENCH_CHILD"):
        print(json.dumps(measure()))
        return
    here = measure()
    env = dict(os.environ, GROUPRANK_NO_NUMBA="1", _BENCH_CHILD="1")
    proc = subprocess.run([sys.executable, __file__], env=env,
                          capture_output=True, text=True)
    if proc.returncode != 0:
        print(proc.stderr, file=sys.stderr)
        raise SystemExit("fallback benchmark failed")
    there = json.loads(proc.stdout.strip().splitlines()[-1])

    print(f"{'kernel':44} {'numba':>14} {'pure python':>14}")
    keys = [k for k in here if not k.startswith("_")]
    for key in keys:
        a = here[key]
        b = there.get(key)
        b_text = f"{b:14.3f}" if isinstance(b, (int, float)) else " " * 14
        print(f"{key:44} {a:14.3f} {b_text}")
    ca, cb = here["_combos"], there["_combos"]
    ra = here[f"size-6 scan of {ca} combinations (s)"] / ca
    rb = there[f"size-6 scan of {cb} combinations (s)"] / cb
    print(f"{'size-6 scan per combination (us)':44} "
          f"{ra * 1e6:14.3f} {rb * 1e6:14.3f}")


if __name__ == "__main__":
    main()
