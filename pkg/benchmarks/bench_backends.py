"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 3] [--quick]

Each workload runs once per backend to warm up (numba compiles or loads its
cache), then ``--repeat`` timed runs; the best time is reported. Results of
the two backends are compared and a mismatch aborts the run.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from kdiophantine import count_tuples, find_witness, make_field, use_backend
from kdiophantine.curves import all_point_counts
from kdiophantine.tuples import cube_count, enumerate_array


def workloads(quick: bool):
    big = 229 if quick else 499
    return [
        (f"N3 count p={big}", lambda: count_tuples(3, 3, make_field(big), verify=False).brute_count),
        ("enumerate (3,5) p=101", lambda: enumerate_array(3, 5, make_field(101)).tobytes()),
        ("count (4,4) p=101", lambda: count_tuples(4, 4, make_field(101)).brute_count),
        ("point counts p=997", lambda: all_point_counts(make_field(997)).tobytes()),
        ("cube triples p=499", lambda: cube_count(make_field(499), verify=False).brute_count),
        ("witness (3,4) p=1048583", lambda: find_witness(3, 4, make_field(1048583)).tuple),
    ]


def best_of(fn, repeat: int):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--quick", action="store_true", help="smaller N3 workload")
    args = parser.parse_args()

    print(f"{'workload':<26}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for name, fn in workloads(args.quick):
        times, results = {}, {}
        for backend in ("numba", "numpy"):
            with use_backend(backend):
                fn()
                times[backend], results[backend] = best_of(fn, args.repeat)
        if results["numba"] != results["numpy"]:
            raise SystemExit(f"{name}: backends disagree")
        ratio = times["numpy"] / times["numba"] if times["numba"] else np.inf
        print(f"{name:<26}{times['numba']:>10.3f}{times['numpy']:>10.3f}{ratio:>8.1f}x")


if __name__ == "__main__":
    main()
