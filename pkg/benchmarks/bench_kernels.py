#!/usr/bin/env python3
"""Benchmark the hot kernels in numba mode vs the pure-Python fallback.

Run directly for the current mode; pass --both to spawn a subprocess with
MURMUR_NO_NUMBA=1 and print a side-by-side comparison.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def bench():
    from murmur import _kernels as K
    from murmur import dirichlet, testfn, trace

    results = {}

    def timeit(name, fn, repeat=3):
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        results[name] = best

    # warm-up / compile
    spec = testfn.TestFunctionSpec(R=500.0, H=40.0, h=4.0)
    cache = dirichlet.LValueCache()
    trace.trace_minus_p(101, spec, cache)
    K.nu_scan(1, 100, 0.0, 2.0, K.sieve_primes(100), np.zeros(64))
    K.l_chi_one(5, 1e-6)

    timeit("l_chi_one x200 (|d|~1e5)",
           lambda: [K.l_chi_one(4 * d + 1, 1e-6)
                    for d in range(25000, 25200)])
    primes = K.sieve_primes(4000)
    z3 = np.concatenate(([0.0], 1.0 / np.arange(1, 64.0) ** 2))
    timeit("nu_scan q<2^17", lambda: K.nu_scan(1, 1 << 17, 0.0, 2.0, primes, z3))
    timeit("sieve_primes(10^7)", lambda: K.sieve_primes(10 ** 7))
    ps = [int(p) for p in K.sieve_primes(2000) if p > 1000]
    timeit("trace_minus_p x%d" % len(ps),
           lambda: [trace.trace_minus_p(p, spec, cache) for p in ps])
    us = np.linspace(-0.24, 0.24, 200000)
    ty, td = testfn.bump_tables("autocorr")
    timeit("g_many 2x10^5 points",
           lambda: K.g_many(us, spec.R, spec.H, spec.h, 0, ty, td))
    return results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--both", action="store_true",
                    help="also run the pure-Python fallback and compare")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    mine = bench()
    mode = "fallback" if os.environ.get("MURMUR_NO_NUMBA") else "numba"
    if args.json:
        print(json.dumps({"mode": mode, "results": mine}))
        return
    if not args.both:
        print("mode:", mode)
        for k, v in mine.items():
            print("  %-28s %8.4f s" % (k, v))
        return
    env = dict(os.environ, MURMUR_NO_NUMBA="1")
    out = subprocess.run([sys.executable, __file__, "--json"], env=env,
                         capture_output=True, text=True, check=True)
    other = json.loads(out.stdout)["results"]
    print("%-30s %12s %12s %8s" % ("kernel", "numba [s]", "python [s]", "ratio"))
    for k, v in mine.items():
        o = other.get(k, float("nan"))
        print("%-30s %12.4f %12.4f %7.1fx" % (k, v, o, o / v))


if __name__ == "__main__":
    main()
