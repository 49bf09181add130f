#!/usr/bin/env python3
"""Compiled vs numpy kernels on the three hot loops.

    python benchmarks/bench_kernels.py            # q up to 1e6
    python benchmarks/bench_kernels.py --quick    # smaller sizes
"""

import argparse
import time

import numpy as np

from goldbach_sieve import kernels
from goldbach_sieve.primes import SEGMENT_ODD_SLOTS, build_table


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    q_max = 200_000 if args.quick else 1_000_000
    sieve_hi = 10**7 if args.quick else 10**8
    resid_hi = 10_000 if args.quick else 40_000
    table = build_table(q_max)
    base = build_table(int(sieve_hi**0.5) + 1).odd_primes
    small = table.primes_upto(int(resid_hi**0.5))[1:]

    seg_lo = 10**12
    seg_base = build_table(10**6 + 1).odd_primes
    cases = [
        (f"sieve_odd [1, {sieve_hi:.0e}]", lambda m: m.sieve_odd(1, sieve_hi, base)),
        ("sieve_odd 2^20-slot segment at 1e12",
         lambda m: m.sieve_odd(seg_lo, seg_lo + 2 * SEGMENT_ODD_SLOTS, seg_base)),
        (f"pair_counts q in [4, {q_max:.0e}]", lambda m: m.pair_counts(table.primes, 4, q_max)),
        (f"residue_scan q in [4, {resid_hi:.0e}]",
         lambda m: m.residue_scan(4, resid_hi, small, table.bits)),
    ]
    backends = kernels.available_backends()
    names = [m.BACKEND for m in backends]
    print(f"{'kernel':<38}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for title, fn in cases:
        results, times = [], []
        for m in backends:
            t, out = best_of(lambda: fn(m), args.repeat)
            times.append(t)
            results.append(out)
        flat = [np.concatenate([np.ravel(x) for x in r]) if isinstance(r, tuple) else r
                for r in results]
        assert all(np.array_equal(flat[0], f) for f in flat), f"backends disagree on {title}"
        speed = f"{times[-1] / times[0]:.1f}x" if len(times) > 1 else "-"
        print(f"{title:<38}" + "".join(f"{t:>11.3f}s" for t in times) + f"{speed:>10}")


if __name__ == "__main__":
    main()
