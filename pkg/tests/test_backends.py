"""Parity checks between the numba kernels and the pure-numpy fallback.

Both backends are imported directly, regardless of which one the package
selected, so the fallback stays covered even when numba is the default.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

from litatlas.accel import numba_backend as nb
from litatlas.accel import numpy_backend as npb
from litatlas.accel._quadtree import MAX_DEPTH, build_quadtree
from litatlas.sparse import CsrMatrix


@pytest.fixture(scope="module")
def rng():
    return np.random.default_rng(99)


@pytest.fixture(scope="module")
def sparse_fixture(rng):
    dense = rng.normal(size=(25, 40)) * (rng.random(size=(25, 40)) < 0.3)
    return dense, CsrMatrix.from_dense(dense)


def test_pairwise_sq_dists_parity(rng):
    X = rng.normal(size=(40, 7))
    a, b = npb.pairwise_sq_dists(X), nb.pairwise_sq_dists(X)
    assert np.allclose(a, b, atol=1e-12)
    # against the definition
    i, j = 3, 17
    assert a[i, j] == pytest.approx(((X[i] - X[j]) ** 2).sum(), rel=1e-12)


def test_csr_kernels_parity(sparse_fixture):
    dense, X = sparse_fixture
    args = (X.row_offsets, X.col_indices, X.values, X.n_cols)
    assert np.allclose(npb.csr_gram(*args), nb.csr_gram(*args), atol=1e-12)
    assert np.allclose(npb.csr_gram(*args), dense @ dense.T, atol=1e-12)
    assert np.allclose(npb.csr_ata(*args), nb.csr_ata(*args), atol=1e-12)
    assert np.allclose(npb.csr_ata(*args), dense.T @ dense, atol=1e-12)
    B = np.random.default_rng(1).normal(size=(X.n_cols, 6))
    pa = npb.csr_dot_dense(X.row_offsets, X.col_indices, X.values, B)
    pb = nb.csr_dot_dense(X.row_offsets, X.col_indices, X.values, B)
    assert np.allclose(pa, pb, atol=1e-12)
    assert np.allclose(pa, dense @ B, atol=1e-12)
    assert np.allclose(
        npb.csr_pairwise_sq_dists(*args), nb.csr_pairwise_sq_dists(*args), atol=1e-12
    )


def test_perplexity_search_parity(rng):
    D = npb.pairwise_sq_dists(rng.normal(size=(30, 5)))
    np.fill_diagonal(D, np.inf)
    Dsel = np.sort(D, axis=1)[:, :15]
    Pa, Ha = npb.perplexity_search(Dsel, np.log(5.0), 1e-5, 100)
    Pb, Hb = nb.perplexity_search(Dsel, np.log(5.0), 1e-5, 100)
    assert np.allclose(Pa, Pb, atol=1e-12)
    assert np.allclose(Ha, Hb, atol=1e-12)
    assert np.allclose(np.exp(Ha), 5.0, atol=1e-3)


def test_kmeans_kernels_parity(rng):
    X = rng.normal(size=(60, 4))
    C = X[rng.choice(60, 5, replace=False)]
    la, da = npb.kmeans_assign(X, C)
    lb, db = nb.kmeans_assign(X, C)
    assert np.array_equal(la, lb)
    assert np.allclose(da, db, atol=1e-12)
    Ca, ca = npb.kmeans_update(X, la, 5)
    Cb, cb = nb.kmeans_update(X, la, 5)
    assert np.array_equal(ca, cb)
    assert np.allclose(Ca, Cb, atol=1e-12)


def _toy_affinities(rng, n=50):
    from litatlas.tsne import conditional_affinities

    X = rng.normal(size=(n, 6))
    return conditional_affinities(X, perplexity=5.0, theta=0.5)


def test_tsne_gradient_kernels_parity(rng):
    P = _toy_affinities(rng)
    Y = np.random.default_rng(2).normal(size=(P.n, 2))
    Pd = P.toarray()
    assert np.allclose(npb.tsne_grad_exact(Pd, Y), nb.tsne_grad_exact(Pd, Y), atol=1e-12)
    assert npb.kl_exact(Pd, Y) == pytest.approx(nb.kl_exact(Pd, Y), rel=1e-12)
    ka = npb.kl_sparse(P.indptr, P.indices, P.values, Y)
    kb = nb.kl_sparse(P.indptr, P.indices, P.values, Y)
    assert ka == pytest.approx(kb, rel=1e-12)
    ga = npb.bh_grad(P.indptr, P.indices, P.values, Y, 0.5)
    gb = nb.bh_grad(P.indptr, P.indices, P.values, Y, 0.5)
    assert np.allclose(ga, gb, atol=1e-9)


def test_quadtree_structure(rng):
    Y = rng.normal(size=(100, 2))
    centers, half, children, count, com, leaf_point, point_leaf = build_quadtree(Y, MAX_DEPTH)
    assert count[0] == 100
    assert np.allclose(com[0], Y.mean(axis=0), atol=1e-12)
    # every point lands in a leaf that records it
    for p in range(100):
        leaf = point_leaf[p]
        assert leaf >= 0
        assert children[leaf, 0] == -1
    # internal node counts equal the sum of their children's counts
    for m in range(len(count)):
        if children[m, 0] != -1:
            assert count[m] == count[children[m]].sum()


def test_quadtree_handles_coincident_points():
    Y = np.zeros((5, 2))
    Y[3:] = 1.0  # two coincident groups
    centers, half, children, count, com, leaf_point, point_leaf = build_quadtree(Y, MAX_DEPTH)
    assert count[0] == 5
    rep, zpart = npb._bh_repulsion(
        (centers, half, children, count, com, leaf_point, point_leaf), Y, 0.5
    )
    assert np.all(np.isfinite(rep)) and np.all(np.isfinite(zpart))


def test_numba_jit_parity_with_python_quadtree(rng):
    Y = rng.normal(size=(64, 2))
    py_tree = build_quadtree(Y, MAX_DEPTH)
    jit_tree = nb.build_quadtree(Y, MAX_DEPTH)
    for a, b in zip(py_tree, jit_tree):
        assert np.array_equal(a, b)


def test_thread_count_does_not_change_results(rng):
    """Parallel kernels only write per-point slots and reduce sequentially,
    so results are bit-identical across thread counts (vacuous on 1-core
    hosts, meaningful elsewhere)."""
    import numba

    X = rng.normal(size=(200, 10))
    P = _toy_affinities(np.random.default_rng(5), n=100)
    Y = np.random.default_rng(6).normal(size=(100, 2))
    counts = sorted({1, min(2, numba.config.NUMBA_NUM_THREADS), numba.config.NUMBA_NUM_THREADS})
    results = []
    for t in counts:
        numba.set_num_threads(t)
        results.append(
            (
                nb.pairwise_sq_dists(X),
                nb.bh_grad(P.indptr, P.indices, P.values, Y, 0.5),
                nb.kmeans_assign(X, X[:7].copy())[1],
            )
        )
    numba.set_num_threads(1)
    for later in results[1:]:
        for a, b in zip(results[0], later):
            assert np.array_equal(a, b)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, LITATLAS_NUMBA="0")
    out = subprocess.run(
        [sys.executable, "-c", "from litatlas import accel; print(accel.BACKEND_NAME)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_numpy_backend_runs_small_pipeline_end_to_end(tmp_path):
    """The fallback path drives the whole numeric stack on a tiny problem."""
    script = """
import numpy as np
from litatlas import accel
assert accel.BACKEND_NAME == "numpy", accel.BACKEND_NAME
from litatlas.kmeans import kmeans_fit
from litatlas.pca import fit_pca, transform
from litatlas.tsne import TsneConfig, embed

rng = np.random.default_rng(0)
X = np.vstack([rng.normal(size=(12, 8)) + 6, rng.normal(size=(12, 8)) - 6])
model = fit_pca(X, 0.95)
X2 = transform(X, model)
km = kmeans_fit(X2, 2, seed=1)
assert len(set(km.labels[:12])) == 1 and len(set(km.labels[12:])) == 1
emb = embed(X, TsneConfig(perplexity=4, n_iter=300, theta=0.5, seed=2))
assert np.all(np.isfinite(emb.Y))
print("ok")
"""
    env = dict(os.environ, LITATLAS_NUMBA="0")
    out = subprocess.run(
        [sys.executable, "-c", script], capture_output=True, text=True, env=env, check=True
    )
    assert out.stdout.strip().endswith("ok")
