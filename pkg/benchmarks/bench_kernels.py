"""Compare the compiled and pure-Python plant kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from detumble import available_backends
from detumble.harness import run_cell, run_matrix

CELL = ("6u", "two-stage", "under")


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    results = {}
    for backend in available_backends():
        single = best_of(lambda: run_cell(CELL, backend=backend), args.repeat)
        matrix = best_of(lambda: run_matrix(backend=backend), args.repeat)
        results[backend] = (single, matrix)
        print(f"{backend:>8}: one 20 s run {single * 1e3:8.1f} ms   full matrix {matrix:6.2f} s")
    if {"cython", "python"} <= set(results):
        c, p = results["cython"], results["python"]
        print(f" speedup: one run {p[0] / c[0]:.1f}x   matrix {p[1] / c[1]:.1f}x")
    else:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
