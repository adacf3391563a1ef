#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the pure-Python
fallback on the three hot paths: commuting scans, power-identity scans,
and exhaustive closure checks.

Usage: python3 benchmarks/bench_kernels.py [--p 5] [--k 1] [--n 4]
       [--scan-size 4000] [--closure-size 2000]
"""

import argparse
import random
import time

import numpy as np

from usylow import kernels
from usylow.field import FieldSpec
from usylow.unitary import UnitaryParams, stream_sylow_batches, sylow_order


def collect_batch(params, limit):
    rows = []
    for batch in stream_sylow_batches(params):
        rows.append(batch)
        if sum(b.shape[0] for b in rows) >= limit:
            break
    return np.ascontiguousarray(np.concatenate(rows)[:limit])


def timeit(fn, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--scan-size", type=int, default=4000)
    ap.add_argument("--closure-size", type=int, default=1500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    params = UnitaryParams(args.p, args.k, args.n)
    F = params.field
    n = params.n
    rng = random.Random(args.seed)

    scan_batch = collect_batch(params, min(args.scan_size, sylow_order(params)))
    gens = np.ascontiguousarray(
        scan_batch[[rng.randrange(scan_batch.shape[0]) for _ in range(4)]]
    )
    closure_batch = collect_batch(
        params, min(args.closure_size, sylow_order(params))
    )
    keys = np.sort(kernels.subdiag_keys(closure_batch, n, F.s))

    impls = []
    for name in ("pure", "compiled"):
        try:
            impls.append((name, kernels.get_impl(name)))
        except ImportError:
            print(f"backend {name}: not built, skipping")

    results = {}
    for name, impl in impls:
        t_scan, mask = timeit(lambda: impl.scan_commuting(
            scan_batch, gens, n, F.mul_table, F.add_table, F.s))
        t_pow, powmask = timeit(lambda: impl.scan_power_identity(
            scan_batch, args.p, n, F.mul_table, F.add_table, F.s))
        t_clo, fail = timeit(lambda: impl.closure_check_unitri(
            closure_batch, keys, n, F.mul_table, F.add_table, F.s), repeat=1)
        results[name] = {
            "scan_commuting": (t_scan, int(mask.sum())),
            "scan_power_identity": (t_pow, int(powmask.sum())),
            "closure_check": (t_clo, int(fail)),
        }

    print(f"instance: p={args.p} q={params.q} n={n}; "
          f"scan batch {scan_batch.shape[0]}, "
          f"closure batch {closure_batch.shape[0]} "
          f"({closure_batch.shape[0] ** 2} pairs)")
    header = f"{'kernel':24s} " + "".join(f"{name:>12s}" for name, _ in impls)
    if len(results) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for kernel in ("scan_commuting", "scan_power_identity", "closure_check"):
        row = f"{kernel:24s} "
        vals = []
        for name, _ in impls:
            t, check = results[name][kernel]
            vals.append(t)
            row += f"{t * 1000:10.1f}ms"
        if len(vals) == 2:
            row += f"{vals[0] / vals[1]:9.1f}x"
        print(row)
    checks = {
        name: tuple(val[1] for _, val in sorted(res.items()))
        for name, res in results.items()
    }
    if len(set(checks.values())) > 1:
        raise SystemExit("BACKEND MISMATCH: " + repr(checks))
    print("backend results agree")


if __name__ == "__main__":
    main()
