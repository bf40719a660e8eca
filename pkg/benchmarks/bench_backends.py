"""Benchmark the numba kernels against the pure NumPy fallback.

Runs the same exact solves under both backends (switched at runtime),
checks they return identical values, and reports median wall times.

    python benchmarks/bench_backends.py [--repeats N] [--seed S]
"""

import argparse
import math
import statistics
import time

import hyperdist as hd


def make_pair(nx, ny, order, seed):
    return (
        hd.random_network(nx, order, kind="proximity", seed=seed),
        hd.random_network(ny, order, kind="proximity", seed=seed + 1),
    )


def workloads(seed):
    """(name, callable) pairs; each callable returns the solved value."""
    out = []

    for nx, ny, order, mode in [
        (3, 3, 2, {"k": 2}),
        (4, 4, 2, {"k": 1}),
        (4, 4, 2, {"p": 2.0}),
        (4, 5, 1, {"k": 1}),
    ]:
        netx, nety = make_pair(nx, ny, order, seed)
        label = f"exhaustive {nx}x{ny} K={order} " + (
            f"k={mode['k']}" if "k" in mode else f"p={mode['p']:g}"
        )
        out.append(
            (label, lambda nx=netx, ny=nety, m=mode: hd.solve_exhaustive(nx, ny, **m)[0])
        )

    for nx, ny, order, mode in [
        (6, 6, 1, {"k": 1}),
        (7, 7, 1, {"k": 1}),
        (6, 6, 2, {"p": math.inf}),
    ]:
        netx, nety = make_pair(nx, ny, order, seed)
        label = f"bnb        {nx}x{ny} K={order} " + (
            f"k={mode['k']}" if "k" in mode else f"p={mode['p']:g}"
        )
        out.append(
            (
                label,
                lambda nx=netx, ny=nety, m=mode: hd.solve_branch_and_bound(
                    nx, ny, **m
                )[0],
            )
        )
    return out


def time_one(fn, repeats):
    times = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        times.append(time.perf_counter() - started)
    return statistics.median(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = hd.available_backends()
    if "numba" not in backends:
        raise SystemExit("numba backend unavailable; nothing to compare")

    jobs = workloads(args.seed)

    # warm both backends (numba loads/compiles on first use)
    for backend in backends:
        hd.set_backend(backend)
        for _, fn in jobs:
            fn()

    print(f"{'workload':<34}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, fn in jobs:
        results, timings = {}, {}
        for backend in ("numpy", "numba"):
            hd.set_backend(backend)
            results[backend] = fn()
            timings[backend] = time_one(fn, args.repeats)
        if results["numpy"] != results["numba"]:
            raise SystemExit(
                f"backend mismatch on {name}: "
                f"{results['numpy']!r} vs {results['numba']!r}"
            )
        ratio = timings["numpy"] / timings["numba"]
        print(
            f"{name:<34}"
            f"{timings['numpy'] * 1e3:>10.2f}ms"
            f"{timings['numba'] * 1e3:>10.2f}ms"
            f"{ratio:>9.1f}x"
        )
    print("values identical across backends for every workload")


if __name__ == "__main__":
    main()
