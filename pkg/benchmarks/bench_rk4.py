"""Compare the compiled and NumPy RK4 kernels on random symmetric graphs.

    python benchmarks/bench_rk4.py [--steps 10000] [--sizes 5 10 20 50 100]
"""
import argparse
import time

import numpy as np

from oscnet import _rk4_py, kernels
from oscnet.generators import random_graph
from oscnet.graph import laplacian_bundle


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=10_000)
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 50, 100])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    try:
        from oscnet._rk4 import rk4_advance as compiled
    except ImportError:
        compiled = None
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'n':>5} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9} {'max diff':>10}")
    for n in args.sizes:
        L = np.ascontiguousarray(laplacian_bundle(random_graph(n, seed=n)).L)
        rng = np.random.default_rng(0)
        X0 = np.ascontiguousarray(rng.standard_normal((n, 2)))
        V0 = np.ascontiguousarray(rng.standard_normal((n, 2)))
        h = 0.05 / np.sqrt(np.linalg.eigvalsh(L).max())

        def run(kernel):
            X, V = X0.copy(), V0.copy()
            kernel(L, X, V, h, args.steps)
            return X

        t_py = best_of(lambda: run(_rk4_py.rk4_advance), args.repeat)
        if compiled is None:
            print(f"{n:>5} {t_py:>12.4f} {'-':>12} {'-':>9} {'-':>10}")
            continue
        t_cy = best_of(lambda: run(compiled), args.repeat)
        diff = np.max(np.abs(run(compiled) - run(_rk4_py.rk4_advance)))
        print(f"{n:>5} {t_py:>12.4f} {t_cy:>12.4f} {t_py / t_cy:>8.1f}x {diff:>10.1e}")


if __name__ == "__main__":
    main()
