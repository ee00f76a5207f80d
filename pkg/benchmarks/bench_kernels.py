"""Compare the compiled and pure-numpy kernels.

Usage::

    python benchmarks/bench_kernels.py [--repeat 3]

Prints the best-of-N wall time for each kernel under both backends and
checks that the two agree.
"""

import argparse
import time

import numpy as np

from sensorpca import _kernels_py

try:
    from sensorpca import _kernels as _compiled
except ImportError:
    _compiled = None


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def correlation_like(n, rng):
    x = rng.standard_normal((4 * n, n)).cumsum(axis=1)
    x -= x.mean(axis=1, keepdims=True)
    x /= np.sqrt((x * x).mean(axis=1, keepdims=True))
    c = x.T @ x / x.shape[0]
    return 0.5 * (c + c.T)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--size", type=int, default=144)
    ap.add_argument("--readings", type=int, default=2_000_000)
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    a = correlation_like(args.size, rng)
    keys = rng.integers(0, 20_000, size=args.readings).astype(np.int64)
    values = rng.standard_normal(args.readings)

    cases = [
        (f"jacobi_eigh {args.size}x{args.size}", lambda m: m.jacobi_eigh(a)),
        (f"slot_sums {args.readings} readings", lambda m: m.slot_sums(keys, values, 20_000)),
    ]
    backends = [("python", _kernels_py)] + ([("cython", _compiled)] if _compiled else [])
    if not _compiled:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"{'kernel':<34}" + "".join(f"{name:>12}" for name, _ in backends) + ("     speedup" if _compiled else ""))
    for label, run in cases:
        times, outs = [], []
        for _, mod in backends:
            t, out = best_time(lambda: run(mod), args.repeat)
            times.append(t)
            outs.append(out)
        row = f"{label:<34}" + "".join(f"{t:>11.4f}s" for t in times)
        if _compiled:
            row += f"{times[0] / times[1]:>11.1f}x"
            diff = float(np.max(np.abs(np.sort(outs[0][0]) - np.sort(outs[1][0]))))
            row += f"   max |diff| {diff:.1e}"
        print(row)


if __name__ == "__main__":
    main()
