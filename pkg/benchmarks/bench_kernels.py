"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs each hot kernel on a range of graph sizes under both implementations and
reports per-call times plus an end-to-end solver comparison.  The selected
path for library users is controlled by the MARKETGRAPH_DISABLE_NUMBA
environment variable; this script imports both implementations directly, so a
single invocation covers both.

Usage: python benchmarks/bench_kernels.py [--sizes 30 100 200] [--repeat 200]
"""

import argparse
import time

import numpy as np

from marketgraph import _kernels
from marketgraph.operators import edge_count, edge_pairs


def time_call(fn, *args, repeat):
    fn(*args)  # warm up (and trigger JIT compilation)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def bench_kernels(p, repeat, rng):
    m = edge_count(p)
    ii, jj = edge_pairs(p)
    w = rng.uniform(0, 2, m)
    M = rng.standard_normal((p, p))
    M = (M + M.T) / 2
    y = rng.standard_normal(p)
    c0 = rng.standard_normal(m)
    X = rng.standard_normal((500, p))
    sq_diff = np.ascontiguousarray((X[:, ii] - X[:, jj]) ** 2)
    nu = 4.0
    scale = (p + nu) / X.shape[0]

    cases = [
        ("lap_matrix", (_kernels.lap_matrix, _kernels.lap_matrix_py), (w, ii, jj, p)),
        ("lap_adjoint", (_kernels.lap_adjoint, _kernels.lap_adjoint_py), (M, ii, jj)),
        ("degree_vector", (_kernels.degree_vector, _kernels.degree_vector_py), (w, ii, jj, p)),
        ("degree_adjoint", (_kernels.degree_adjoint, _kernels.degree_adjoint_py), (y, ii, jj)),
        ("mm_inner_gaussian", (_kernels.mm_inner_gaussian, _kernels.mm_inner_gaussian_py),
         (w, c0, 1.0, p, 5, 1e-8, ii, jj)),
        ("mm_inner_student", (_kernels.mm_inner_student, _kernels.mm_inner_student_py),
         (w, c0, sq_diff, nu, scale, 1.0, p, 5, 1e-8, ii, jj)),
    ]
    print(f"\np = {p} (m = {m})")
    print(f"  {'kernel':<20} {'selected':>12} {'numpy':>12} {'speedup':>9}")
    for name, (selected, fallback), args in cases:
        t_sel = time_call(selected, *args, repeat=repeat)
        t_py = time_call(fallback, *args, repeat=repeat)
        print(f"  {name:<20} {t_sel * 1e6:>10.1f}us {t_py * 1e6:>10.1f}us "
              f"{t_py / t_sel:>8.1f}x")


def bench_solver(p, rng):
    import marketgraph as mg

    g = mg.planted_k_component(p, 1, 0.3, seed=1)
    w = np.asarray(g.weights)
    L = np.asarray(mg.laplacian_op(g.weights))
    X = mg.sample_lgmrf(L, 2000, seed=2)
    Xc = X - X.mean(0)
    S = Xc.T @ Xc / X.shape[0]
    d = np.sqrt(np.diag(S))
    S = S / np.outer(d, d)
    t0 = time.perf_counter()
    est = mg.learn_connected_gaussian(S)
    dt = time.perf_counter() - t0
    print(f"\nconnected solve at p={p}: {dt:.2f}s, {est.iterations} iterations "
          f"({'numba' if _kernels.NUMBA_ENABLED else 'numpy'} path)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[30, 100, 200])
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args()

    if _kernels.NUMBA_ENABLED:
        print("numba path enabled; 'selected' columns are JIT-compiled kernels")
    else:
        print("numba unavailable or disabled via MARKETGRAPH_DISABLE_NUMBA; "
              "'selected' equals the numpy fallback")
    rng = np.random.default_rng(0)
    for p in args.sizes:
        bench_kernels(p, args.repeat, rng)
    bench_solver(max(args.sizes), rng)


if __name__ == "__main__":
    main()
