"""Numba-jitted kernel implementations.

Default path when numba imports (disable with LITATLAS_NUMBA=0). Parallel
loops only ever write per-point slots; every cross-point reduction happens
afterwards in a fixed sequential order, so results do not depend on the
thread count. All kernels carry cache=True to amortize compilation.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from litatlas.accel import _quadtree

MAX_DEPTH = _quadtree.MAX_DEPTH

_build_quadtree = njit(cache=True)(_quadtree.build_quadtree)


def build_quadtree(Y, max_depth):
    return _build_quadtree(Y, max_depth)


@njit(cache=True, parallel=True)
def pairwise_sq_dists(X):
    n, d = X.shape
    D = np.empty((n, n))
    for i in prange(n):
        for j in range(n):
            s = 0.0
            for f in range(d):
                diff = X[i, f] - X[j, f]
                s += diff * diff
            D[i, j] = s
        D[i, i] = 0.0
    return D


@njit(cache=True, parallel=True)
def csr_gram(offsets, indices, values, n_cols):
    n = len(offsets) - 1
    G = np.empty((n, n))
    for i in prange(n):
        buf = np.zeros(n_cols)
        for e in range(offsets[i], offsets[i + 1]):
            buf[indices[e]] = values[e]
        for j in range(n):
            s = 0.0
            for e in range(offsets[j], offsets[j + 1]):
                s += values[e] * buf[indices[e]]
            G[i, j] = s
    return G


@njit(cache=True)
def csr_ata(offsets, indices, values, n_cols):
    A = np.zeros((n_cols, n_cols))
    for i in range(len(offsets) - 1):
        for e1 in range(offsets[i], offsets[i + 1]):
            c1 = indices[e1]
            v1 = values[e1]
            for e2 in range(offsets[i], offsets[i + 1]):
                A[c1, indices[e2]] += v1 * values[e2]
    return A


@njit(cache=True, parallel=True)
def csr_dot_dense(offsets, indices, values, B):
    n = len(offsets) - 1
    m = B.shape[1]
    out = np.zeros((n, m))
    for i in prange(n):
        for e in range(offsets[i], offsets[i + 1]):
            c = indices[e]
            v = values[e]
            for t in range(m):
                out[i, t] += v * B[c, t]
    return out


def csr_pairwise_sq_dists(offsets, indices, values, n_cols):
    G = csr_gram(offsets, indices, values, n_cols)
    sq = np.diag(G).copy()
    D = sq[:, None] + sq[None, :] - 2.0 * G
    np.maximum(D, 0.0, out=D)
    np.fill_diagonal(D, 0.0)
    return D


@njit(cache=True, parallel=True)
def perplexity_search(D, log_u, tol, max_steps):
    n, m = D.shape
    P = np.empty((n, m))
    H = np.empty(n)
    for i in prange(n):
        dmin = D[i, 0]
        for j in range(1, m):
            if D[i, j] < dmin:
                dmin = D[i, j]
        beta = 1.0
        bmin = -np.inf
        bmax = np.inf
        hi_val = 0.0
        for _ in range(max_steps):
            s = 0.0
            sd = 0.0
            for j in range(m):
                dd = D[i, j] - dmin
                w = np.exp(-beta * dd)
                P[i, j] = w
                s += w
                sd += dd * w
            hi_val = np.log(s) + beta * sd / s
            diff = hi_val - log_u
            if abs(diff) <= tol:
                break
            if diff > 0.0:
                bmin = beta
                beta = beta * 2.0 if bmax == np.inf else 0.5 * (beta + bmax)
            else:
                bmax = beta
                beta = beta * 0.5 if bmin == -np.inf else 0.5 * (beta + bmin)
        s = 0.0
        for j in range(m):
            s += P[i, j]
        for j in range(m):
            P[i, j] /= s
        H[i] = hi_val
    return P, H


@njit(cache=True, parallel=True)
def kmeans_assign(X, C):
    n, d = X.shape
    k = C.shape[0]
    labels = np.empty(n, np.int64)
    dist = np.empty(n)
    for i in prange(n):
        best = 0
        bd = np.inf
        for c in range(k):
            s = 0.0
            for f in range(d):
                diff = X[i, f] - C[c, f]
                s += diff * diff
            if s < bd:
                bd = s
                best = c
        labels[i] = best
        dist[i] = bd
    return labels, dist


@njit(cache=True)
def kmeans_update(X, labels, k):
    n, d = X.shape
    C = np.zeros((k, d))
    counts = np.zeros(k, np.int64)
    for i in range(n):
        c = labels[i]
        counts[c] += 1
        for f in range(d):
            C[c, f] += X[i, f]
    for c in range(k):
        if counts[c] > 0:
            for f in range(d):
                C[c, f] /= counts[c]
    return C, counts


@njit(cache=True, parallel=True)
def _z_partials(Y):
    n = Y.shape[0]
    zp = np.empty(n)
    for i in prange(n):
        s = 0.0
        for j in range(n):
            if j != i:
                dx = Y[i, 0] - Y[j, 0]
                dy = Y[i, 1] - Y[j, 1]
                s += 1.0 / (1.0 + dx * dx + dy * dy)
        zp[i] = s
    return zp


@njit(cache=True, parallel=True)
def _grad_exact(P, Y, Z):
    n = Y.shape[0]
    grad = np.empty((n, 2))
    for i in prange(n):
        g0 = 0.0
        g1 = 0.0
        for j in range(n):
            if j != i:
                dx = Y[i, 0] - Y[j, 0]
                dy = Y[i, 1] - Y[j, 1]
                w = 1.0 / (1.0 + dx * dx + dy * dy)
                m = (P[i, j] - w / Z) * w
                g0 += m * dx
                g1 += m * dy
        grad[i, 0] = 4.0 * g0
        grad[i, 1] = 4.0 * g1
    return grad


def tsne_grad_exact(P, Y):
    Z = float(np.sum(_z_partials(Y)))
    return _grad_exact(P, Y, Z)


@njit(cache=True)
def _kl_exact(P, Y, Z):
    n = Y.shape[0]
    kl = 0.0
    for i in range(n):
        for j in range(n):
            if j != i and P[i, j] > 0.0:
                dx = Y[i, 0] - Y[j, 0]
                dy = Y[i, 1] - Y[j, 1]
                q = (1.0 / (1.0 + dx * dx + dy * dy)) / Z
                kl += P[i, j] * np.log(P[i, j] / q)
    return kl


def kl_exact(P, Y):
    Z = float(np.sum(_z_partials(Y)))
    return float(_kl_exact(P, Y, Z))


@njit(cache=True)
def _kl_sparse(indptr, indices, pvals, Y, Z):
    n = Y.shape[0]
    kl = 0.0
    for i in range(n):
        for e in range(indptr[i], indptr[i + 1]):
            p = pvals[e]
            if p > 0.0:
                j = indices[e]
                dx = Y[i, 0] - Y[j, 0]
                dy = Y[i, 1] - Y[j, 1]
                q = (1.0 / (1.0 + dx * dx + dy * dy)) / Z
                kl += p * np.log(p / q)
    return kl


def kl_sparse(indptr, indices, pvals, Y):
    Z = float(np.sum(_z_partials(Y)))
    return float(_kl_sparse(indptr, indices, pvals, Y, Z))


@njit(cache=True, parallel=True)
def _attr_sparse(indptr, indices, pvals, Y):
    n = Y.shape[0]
    attr = np.zeros((n, 2))
    for i in prange(n):
        a0 = 0.0
        a1 = 0.0
        for e in range(indptr[i], indptr[i + 1]):
            j = indices[e]
            dx = Y[i, 0] - Y[j, 0]
            dy = Y[i, 1] - Y[j, 1]
            pw = pvals[e] / (1.0 + dx * dx + dy * dy)
            a0 += pw * dx
            a1 += pw * dy
        attr[i, 0] = a0
        attr[i, 1] = a1
    return attr


@njit(cache=True, parallel=True)
def _bh_repulsion(centers, half, children, count, com, leaf_point, point_leaf, Y, theta):
    n = Y.shape[0]
    rep = np.zeros((n, 2))
    zpart = np.zeros(n)
    theta2 = theta * theta
    for i in prange(n):
        stack = np.empty(512, np.int64)
        stack[0] = 0
        top = 1
        yi0 = Y[i, 0]
        yi1 = Y[i, 1]
        self_leaf = point_leaf[i]
        a0 = 0.0
        a1 = 0.0
        z = 0.0
        while top > 0:
            top -= 1
            node = stack[top]
            cnt = count[node]
            if cnt == 0:
                continue
            dx = yi0 - com[node, 0]
            dy = yi1 - com[node, 1]
            d2 = dx * dx + dy * dy
            is_leaf = children[node, 0] == -1
            side = 2.0 * half[node]
            if is_leaf or side * side < theta2 * d2:
                c = cnt
                if is_leaf and node == self_leaf:
                    c = cnt - 1
                if c > 0:
                    w = 1.0 / (1.0 + d2)
                    z += c * w
                    cw2 = c * w * w
                    a0 += cw2 * dx
                    a1 += cw2 * dy
            else:
                for kk in range(4):
                    stack[top] = children[node, kk]
                    top += 1
        rep[i, 0] = a0
        rep[i, 1] = a1
        zpart[i] = z
    return rep, zpart


def bh_grad(indptr, indices, pvals, Y, theta):
    centers, half, children, count, com, leaf_point, point_leaf = _build_quadtree(Y, MAX_DEPTH)
    rep, zpart = _bh_repulsion(
        centers, half, children, count, com, leaf_point, point_leaf, Y, theta
    )
    Z = float(np.sum(zpart))
    attr = _attr_sparse(indptr, indices, pvals, Y)
    return 4.0 * (attr - rep / Z)
