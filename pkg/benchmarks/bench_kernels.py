#!/usr/bin/env python3
"""Benchmark the compiled bit kernels against the numpy fallback.

Micro-benchmarks the three kernels, then times an end-to-end entropy
scan with each gather implementation patched into the hot call sites.

Usage: python benchmarks/bench_kernels.py [--words 2000000] [--repeat 5]
"""

import argparse
import time

import numpy as np

import entcut.analysis
import entcut.lattice
from entcut.kernels import BACKEND, available_backends
from entcut.lattice import make_geometry
from entcut.states import product_function
from entcut.tasks import gen_closed_loops


def best_of(repeat, fn, *args):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def micro(repeat, n_words):
    rng = np.random.default_rng(0)
    words = rng.integers(0, np.iinfo(np.uint64).max, size=n_words, dtype=np.uint64)
    positions = np.array([1, 3, 4, 9, 17, 22, 31, 40, 55, 63], dtype=np.int64)
    basis = rng.integers(0, 1 << 40, size=20, dtype=np.uint64)
    rows = []
    for name, impl in sorted(available_backends().items()):
        rows.append(
            (
                name,
                best_of(repeat, impl.gather_bits, words, positions),
                best_of(repeat, impl.popcount, words),
                best_of(repeat, impl.xor_span, basis),
            )
        )
    print(f"\nmicro-kernels ({n_words} words, 10 positions, 2**20 xor combinations)")
    print(f"{'backend':<10} {'gather_bits':>12} {'popcount':>12} {'xor_span':>12}")
    for name, g, p, x in rows:
        print(f"{name:<10} {g * 1e3:>10.2f}ms {p * 1e3:>10.2f}ms {x * 1e3:>10.2f}ms")


def end_to_end(repeat):
    geom = make_geometry(4, 4)
    rng = np.random.default_rng(1)
    product = product_function(geom, rng.normal(size=16))
    loops = gen_closed_loops(3, periodic=True)

    def scan_product():
        for m in range(1, 4):
            part = entcut.lattice.parse_cut(geom, f"cols<{m}")
            entcut.analysis.entanglement_entropy(product, part)

    def scan_loops():
        entcut.analysis.scan_cuts(loops, "vertical")

    print(f"\nend-to-end (gather patched per backend)")
    print(f"{'backend':<10} {'product 4x4':>14} {'loop scan k=3':>14}")
    original = entcut.lattice.gather_bits
    try:
        for name, impl in sorted(available_backends().items()):
            entcut.lattice.gather_bits = impl.gather_bits
            t_prod = best_of(repeat, scan_product)
            t_loop = best_of(repeat, scan_loops)
            print(f"{name:<10} {t_prod * 1e3:>12.2f}ms {t_loop * 1e3:>12.2f}ms")
    finally:
        entcut.lattice.gather_bits = original


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--words", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"active backend: {BACKEND}")
    if len(available_backends()) == 1:
        print("compiled backend unavailable; benchmarking the fallback only")
    micro(args.repeat, args.words)
    end_to_end(args.repeat)


if __name__ == "__main__":
    main()
