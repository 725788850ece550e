"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is timed on both backends with identical inputs; the table lists
the best-of-``repeat`` wall time and the normwise relative difference between
the two results.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from polydet import kernels


def _cases():
    h = 1.0 / 4096
    qmid = 1.0 + (np.arange(4096) + 0.5) * h
    lambdas = (np.arange(1, 2049) * np.pi) ** 2 + 1.0
    return [
        ("log_sin_weighted_sum n=1e4", lambda: kernels.log_sin_weighted_sum(10_000)),
        ("log_factorial_ratio n=1e4", lambda: kernels.log_factorial_ratio(10_000)),
        ("closed-form sweep n=10..2000", lambda: np.array(
            [kernels.log_sin_weighted_sum(n) + kernels.log_factorial_ratio(n) for n in range(10, 2001)])),
        ("shoot_dirichlet 4096 cells x 2048", lambda: kernels.shoot_dirichlet(qmid, h, lambdas)),
    ]


def _best(fn, repeat: int):
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only timing the Python kernels")
    print(f"{'kernel':36s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}{'rel diff':>12s}")
    for name, fn in _cases():
        times, outs = {}, {}
        for b in backends:
            with kernels.use_backend(b):
                times[b], outs[b] = _best(fn, args.repeat)
        row = f"{name:36s}" + "".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        if "cython" in times:
            ref = np.asarray(outs["python"])
            diff = np.max(np.abs(np.asarray(outs["cython"]) - ref)) / np.max(np.abs(ref))
            row += f"{times['python'] / times['cython']:9.2f}x{diff:12.1e}"
        print(row)


if __name__ == "__main__":
    main()
