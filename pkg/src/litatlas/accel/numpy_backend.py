"""Pure-numpy kernel implementations.

Fallback path selected with LITATLAS_NUMBA=0 (or when numba is absent).
Everything is vectorized; sparse inputs are densified where that is the
simplest correct route, which is fine at desk scale but costs memory on
very large corpora — the numba backend is the production path there.
"""

from __future__ import annotations

import numpy as np

from litatlas.accel._quadtree import MAX_DEPTH, build_quadtree

_EPS = np.finfo(np.float64).tiny


def _csr_to_dense(offsets, indices, values, n_cols):
    n = len(offsets) - 1
    dense = np.zeros((n, n_cols))
    rows = np.repeat(np.arange(n), np.diff(offsets))
    dense[rows, indices] = values
    return dense


def pairwise_sq_dists(X):
    """Squared Euclidean distances between rows; diagonal zeroed."""
    sq = np.einsum("ij,ij->i", X, X)
    D = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(D, 0.0, out=D)
    np.fill_diagonal(D, 0.0)
    return D


def csr_gram(offsets, indices, values, n_cols):
    A = _csr_to_dense(offsets, indices, values, n_cols)
    return A @ A.T


def csr_ata(offsets, indices, values, n_cols):
    A = _csr_to_dense(offsets, indices, values, n_cols)
    return A.T @ A


def csr_dot_dense(offsets, indices, values, B):
    n = len(offsets) - 1
    out = np.zeros((n, B.shape[1]))
    rows = np.repeat(np.arange(n), np.diff(offsets))
    np.add.at(out, rows, values[:, None] * B[indices])
    return out


def csr_pairwise_sq_dists(offsets, indices, values, n_cols):
    G = csr_gram(offsets, indices, values, n_cols)
    sq = np.diag(G).copy()
    D = sq[:, None] + sq[None, :] - 2.0 * G
    np.maximum(D, 0.0, out=D)
    np.fill_diagonal(D, 0.0)
    return D


def perplexity_search(D, log_u, tol, max_steps):
    """Per-row Gaussian bandwidth calibration by bisection on entropy.

    D holds each row's candidate squared distances (self excluded by the
    caller). Returns row-normalized conditionals and achieved entropy in
    nats. Rows that reach `tol` stop moving; the loop exits when all have.
    """
    n = D.shape[0]
    Ds = D - D.min(axis=1, keepdims=True)
    beta = np.ones(n)
    bmin = np.full(n, -np.inf)
    bmax = np.full(n, np.inf)
    H = np.zeros(n)
    for _ in range(max_steps):
        W = np.exp(-Ds * beta[:, None])
        s = W.sum(axis=1)
        H = np.log(s) + beta * (Ds * W).sum(axis=1) / s
        diff = H - log_u
        if np.all(np.abs(diff) <= tol):
            break
        hi = diff > tol
        lo = diff < -tol
        bmin = np.where(hi, beta, bmin)
        bmax = np.where(lo, beta, bmax)
        up = np.where(np.isinf(bmax), beta * 2.0, 0.5 * (beta + bmax))
        down = np.where(np.isinf(bmin), beta * 0.5, 0.5 * (beta + bmin))
        beta = np.where(hi, up, np.where(lo, down, beta))
    W = np.exp(-Ds * beta[:, None])
    s = W.sum(axis=1)
    H = np.log(s) + beta * (Ds * W).sum(axis=1) / s
    return W / s[:, None], H


def kmeans_assign(X, C):
    sq_x = np.einsum("ij,ij->i", X, X)
    sq_c = np.einsum("ij,ij->i", C, C)
    D = sq_x[:, None] + sq_c[None, :] - 2.0 * (X @ C.T)
    np.maximum(D, 0.0, out=D)
    labels = D.argmin(axis=1).astype(np.int64)
    # the expanded form above picks the winner fast but carries rounding
    # (coincident points come out ~1e-16, not 0); recompute the chosen
    # distance from the definition
    diff = X - C[labels]
    return labels, np.einsum("ij,ij->i", diff, diff)


def kmeans_update(X, labels, k):
    d = X.shape[1]
    sums = np.zeros((k, d))
    np.add.at(sums, labels, X)
    counts = np.bincount(labels, minlength=k).astype(np.int64)
    C = np.zeros((k, d))
    nz = counts > 0
    C[nz] = sums[nz] / counts[nz, None]
    return C, counts


def _student_weights(Y):
    D = pairwise_sq_dists(Y)
    W = 1.0 / (1.0 + D)
    np.fill_diagonal(W, 0.0)
    return W


def tsne_grad_exact(P, Y):
    """Exact KL gradient: 4 * sum_j (p_ij - q_ij) w_ij (y_i - y_j)."""
    W = _student_weights(Y)
    Z = W.sum()
    M = (P - W / Z) * W
    grad = 4.0 * (M.sum(axis=1)[:, None] * Y - M @ Y)
    return grad


def kl_exact(P, Y):
    W = _student_weights(Y)
    Q = W / W.sum()
    mask = P > 0.0
    return float(np.sum(P[mask] * np.log(P[mask] / np.maximum(Q[mask], _EPS))))


def kl_sparse(indptr, indices, pvals, Y):
    """KL(P||Q) for sparse P with the exact normalizer Z."""
    Z = _student_weights(Y).sum()
    n = Y.shape[0]
    rows = np.repeat(np.arange(n), np.diff(indptr))
    d2 = ((Y[rows] - Y[indices]) ** 2).sum(axis=1)
    q = (1.0 / (1.0 + d2)) / Z
    mask = pvals > 0.0
    return float(np.sum(pvals[mask] * np.log(pvals[mask] / np.maximum(q[mask], _EPS))))


def _attr_sparse(indptr, indices, pvals, Y):
    n = Y.shape[0]
    rows = np.repeat(np.arange(n), np.diff(indptr))
    delta = Y[rows] - Y[indices]
    w = 1.0 / (1.0 + (delta**2).sum(axis=1))
    attr = np.zeros((n, 2))
    np.add.at(attr, rows, (pvals * w)[:, None] * delta)
    return attr


def _bh_repulsion(tree, Y, theta):
    """Frontier traversal: vectorized over points, looping over tree nodes."""
    centers, half, children, count, com, leaf_point, point_leaf = tree
    n = Y.shape[0]
    rep = np.zeros((n, 2))
    zpart = np.zeros(n)
    theta2 = theta * theta
    stack = [(0, np.arange(n))]
    while stack:
        node, pts = stack.pop()
        if count[node] == 0 or pts.size == 0:
            continue
        delta = Y[pts] - com[node]
        d2 = (delta**2).sum(axis=1)
        is_leaf = children[node, 0] == -1
        if is_leaf:
            acc = np.ones(pts.size, dtype=bool)
        else:
            side = 2.0 * half[node]
            acc = side * side < theta2 * d2
        if acc.any():
            apts = pts[acc]
            w = 1.0 / (1.0 + d2[acc])
            if is_leaf:
                cnt = count[node] - (point_leaf[apts] == node)
            else:
                cnt = np.full(apts.size, count[node], dtype=np.int64)
            zpart[apts] += cnt * w
            rep[apts] += (cnt * w * w)[:, None] * delta[acc]
        if not is_leaf and not acc.all():
            rej = pts[~acc]
            for c in range(4):
                stack.append((children[node, c], rej))
    return rep, zpart


def bh_grad(indptr, indices, pvals, Y, theta):
    """Barnes-Hut approximate KL gradient with cell-opening parameter theta."""
    tree = build_quadtree(Y, MAX_DEPTH)
    rep, zpart = _bh_repulsion(tree, Y, theta)
    Z = zpart.sum()
    attr = _attr_sparse(indptr, indices, pvals, Y)
    return 4.0 * (attr - rep / Z)
