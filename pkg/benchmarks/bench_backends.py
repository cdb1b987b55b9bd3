"""Time the numba kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_backends.py [--n 2000] [--dim 50] [--repeats 5]

Imports both backend modules directly, so the LITATLAS_NUMBA env flag does
not matter here. The first numba call per kernel triggers JIT compilation
(or a cache load) and is excluded by the warmup pass.
"""

import argparse
import time

import numpy as np

from litatlas.accel import numba_backend, numpy_backend
from litatlas.tsne import conditional_affinities


def bench(fn, args, repeats):
    fn(*args)  # warmup: jit compile / cache load
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2000, help="number of points")
    parser.add_argument("--dim", type=int, default=50, help="input dimensionality")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    X = rng.normal(size=(args.n, args.dim))
    C = X[rng.choice(args.n, 20, replace=False)].copy()
    Y = rng.normal(size=(args.n, 2))

    P = conditional_affinities(X, perplexity=30.0, theta=0.5)
    Pd = P.toarray()
    D = numpy_backend.pairwise_sq_dists(X)
    np.fill_diagonal(D, np.inf)
    Dsel = np.sort(D, axis=1)[:, :90]

    cases = [
        ("pairwise_sq_dists", "pairwise_sq_dists", (X,)),
        ("perplexity_search", "perplexity_search", (Dsel, np.log(30.0), 1e-5, 100)),
        ("kmeans_assign", "kmeans_assign", (X, C)),
        ("tsne_grad_exact", "tsne_grad_exact", (Pd, Y)),
        ("bh_grad (theta=0.5)", "bh_grad", (P.indptr, P.indices, P.values, Y, 0.5)),
        ("kl_sparse", "kl_sparse", (P.indptr, P.indices, P.values, Y)),
    ]

    print(f"n={args.n} dim={args.dim} (best of {args.repeats})")
    print(f"{'kernel':<22} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for label, name, call_args in cases:
        t_np = bench(getattr(numpy_backend, name), call_args, args.repeats)
        t_nb = bench(getattr(numba_backend, name), call_args, args.repeats)
        print(f"{label:<22} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
