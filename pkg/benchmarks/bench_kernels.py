"""Compiled vs numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import itertools
import time

import numpy as np

from l1gv import _fallback, kernels
from l1gv.oracle import PRIMES

try:
    from l1gv import _kernels
except ImportError:  # pragma: no cover
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases():
    q, n = 4, 6
    A = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)
    lab = (A == 0).sum(axis=1)
    yield ("pair_histogram Z4^6 x Z4^6",
           lambda impl: kernels.pair_histogram(A, lab, A, lab, n + 1, n + 1, n * (q - 1), impl=impl))
    rng = np.random.default_rng(0)
    p = PRIMES[0]
    Y = rng.integers(0, p, size=(41, 41, 81, 16), dtype=np.int64)

    def diag(impl):
        Z = Y.copy()
        impl.diag_accumulate(Z, p)
        return Z

    yield "diag_accumulate 41x41x81x16", diag
    yield "shift_accumulate 41x41x81x16 axis 0", lambda impl: impl.shift_accumulate(Y, p, 0)
    yield "shift_accumulate 41x41x81x16 axis 1", lambda impl: impl.shift_accumulate(Y, p, 1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    if _kernels is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'kernel':36s} {'compiled s':>11s} {'numpy s':>10s} {'speedup':>8s}")
    for name, fn in cases():
        tf, of = best_of(lambda: fn(_fallback), args.repeat)
        if _kernels is None:
            print(f"{name:36s} {'-':>11s} {tf:10.4f} {'-':>8s}")
            continue
        tc, oc = best_of(lambda: fn(_kernels), args.repeat)
        if not np.array_equal(np.asarray(oc), np.asarray(of)):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:36s} {tc:11.4f} {tf:10.4f} {tf / tc:7.1f}x")


if __name__ == "__main__":
    main()
