"""Timing comparison of the numba kernels against the pure-numpy fallback.

Usage:

    python benchmarks/bench_kernels.py [--repeats N] [--sizes 4 8 16] [--states 400]

Each backend gets one warmup call before timing so numba's one-time
compilation cost is not charged to the measurement; the table reports the
best of the repeated runs.
"""

import argparse
import math
import time

import numpy as np

from gatebounds import kernels


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return np.ascontiguousarray(a + a.conj().T)


def random_kraus(rng, d, k):
    a = rng.standard_normal((k * d, d)) + 1j * rng.standard_normal((k * d, d))
    q, _ = np.linalg.qr(a)
    return np.ascontiguousarray(q.reshape(k, d, d))


def best_time(fn, args, repeats):
    fn(*args)
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16])
    parser.add_argument("--states", type=int, default=400)
    args = parser.parse_args()

    backends = sorted(kernels._IMPLS)
    if "numba" not in backends:
        print("numba is unavailable; timing the numpy fallback only")
    rng = np.random.default_rng(7)

    cases = [(f"eigh n={n}", 0, (random_hermitian(rng, n), 1e-14, 60)) for n in args.sizes]
    d = 2
    raw = rng.standard_normal((args.states, d * d)) + 1j * rng.standard_normal((args.states, d * d))
    psis = np.ascontiguousarray(raw / np.linalg.norm(raw, axis=1, keepdims=True))
    cases.append(
        (
            f"pair_scan s={args.states}",
            1,
            (random_kraus(rng, d, 3), random_kraus(rng, d, 2), psis),
        )
    )

    width = max(len(name) for name, _, _ in cases)
    header = f"{'case':<{width}}" + "".join(f"  {b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    for name, slot, inputs in cases:
        times = {b: best_time(kernels._IMPLS[b][slot], inputs, args.repeats) for b in backends}
        line = f"{name:<{width}}" + "".join(f"  {times[b]:>11.3e}s" for b in backends)
        if len(times) == 2:
            line += f"  {times['numpy'] / times['numba']:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
