"""Independent reference implementations used to pin expected values.

Everything here deliberately avoids the library's own code paths: plain
definitions, exhaustive enumeration, and textbook formulas only.
"""

import itertools
import math
from collections import Counter

import numpy as np


def cov_eigendecomposition(X):
    """Eigenvalues/eigenvectors of the dense sample covariance matrix."""
    X = np.asarray(X, dtype=np.float64)
    Xc = X - X.mean(axis=0)
    C = (Xc.T @ Xc) / (X.shape[0] - 1)
    evals, evecs = np.linalg.eigh(C)
    return evals[::-1].copy(), evecs[:, ::-1].copy()


def brute_force_kmeans_inertia(X, k):
    """Optimal k-means inertia by enumerating every label assignment."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    best = math.inf
    for labels in itertools.product(range(k), repeat=n):
        total = 0.0
        for c in range(k):
            members = [i for i in range(n) if labels[i] == c]
            if not members:
                continue
            pts = X[members]
            centroid = pts.mean(axis=0)
            total += float(((pts - centroid) ** 2).sum())
        if total < best:
            best = total
    return best


def adjusted_rand_index(a, b):
    """ARI from the contingency table, exact integer combinatorics."""
    a = list(a)
    b = list(b)
    n = len(a)
    cont = Counter(zip(a, b))
    sum_comb = sum(math.comb(v, 2) for v in cont.values())
    sum_a = sum(math.comb(v, 2) for v in Counter(a).values())
    sum_b = sum(math.comb(v, 2) for v in Counter(b).values())
    total = math.comb(n, 2)
    expected = sum_a * sum_b / total
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        return 1.0
    return (sum_comb - expected) / (max_index - expected)


def chord_knee(ks, distortions):
    """Knee = max perpendicular distance to the endpoint chord (normalized)."""
    ks = [float(k) for k in ks]
    ds = [float(d) for d in distortions]
    kr = max(ks) - min(ks)
    dr = max(ds) - min(ds)
    if kr == 0 or dr == 0:
        return ks[0]
    xs = [(k - min(ks)) / kr for k in ks]
    ys = [(d - min(ds)) / dr for d in ds]
    x0, y0, x1, y1 = xs[0], ys[0], xs[-1], ys[-1]
    chord = math.hypot(x1 - x0, y1 - y0)
    best_i, best_dist = 0, -1.0
    for i, (x, y) in enumerate(zip(xs, ys)):
        dist = abs((x1 - x0) * (y0 - y) - (x0 - x) * (y1 - y0)) / chord
        if dist > best_dist:
            best_i, best_dist = i, dist
    return ks[best_i]


def kl_divergence_reference(P, Y):
    """Textbook KL(P||Q) with Student-t Q, written from the definition."""
    P = np.asarray(P, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    n = Y.shape[0]
    W = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                W[i, j] = 1.0 / (1.0 + ((Y[i] - Y[j]) ** 2).sum())
    Q = W / W.sum()
    kl = 0.0
    for i in range(n):
        for j in range(n):
            if P[i, j] > 0:
                kl += P[i, j] * math.log(P[i, j] / Q[i, j])
    return kl


def english_hit_rate(text, word_set):
    """Recompute the function-word hit rate from its definition."""
    tokens = []
    word = []
    for ch in text.lower() + " ":
        if ch.isalnum():
            word.append(ch)
        else:
            if word:
                tok = "".join(word)
                if len(tok) >= 2 and any(c.isalpha() for c in tok):
                    tokens.append(tok)
                word = []
    tokens = tokens[:2000]
    if not tokens:
        return 0.0
    return sum(1 for t in tokens if t in word_set) / len(tokens)
