"""Lloyd's k-means with k-means++ seeding, plus the elbow sweep.

kmeans_fit keeps the best of n_init runs. Convergence: total squared
centroid movement <= tol * mean per-feature variance of the data. An empty
cluster is reseeded at the point farthest from its (stale) centroid, so k
never shrinks. The per-iteration inertia trace of the winning run is kept
on the model; Lloyd guarantees it is non-increasing.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass

import numpy as np

from litatlas import accel

INIT_METHODS = ("k-means++", "random", "exhaustive")
_EXHAUSTIVE_MAX_N = 16


@dataclass
class KMeansModel:
    k: int
    centroids: np.ndarray  # (k, d)
    labels: np.ndarray  # (n,) int64
    inertia: float
    n_iter_run: int
    seed: int
    inertia_history: list[float]  # one entry per assignment step of the best run


@dataclass
class ElbowCurve:
    entries: list[tuple[int, float]]  # (k, distortion), k strictly increasing
    chosen_k: int


def _kmeanspp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.integers(n)
    d2 = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            # all remaining mass at distance zero: pick any unchosen point
            mask = np.ones(n, dtype=bool)
            mask[chosen[:c]] = False
            idx = int(rng.choice(np.nonzero(mask)[0]))
        chosen[c] = idx
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(axis=1))
    return X[chosen].copy()


def _random_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    return X[rng.choice(X.shape[0], size=k, replace=False)].copy()


def _lloyd(
    X: np.ndarray, centroids: np.ndarray, max_iter: int, tol_abs: float
) -> tuple[np.ndarray, np.ndarray, float, int, list[float]]:
    k = centroids.shape[0]
    history: list[float] = []
    n_iter = 0
    for _ in range(max_iter):
        n_iter += 1
        labels, d2 = accel.kmeans_assign(X, centroids)
        history.append(float(np.sum(d2)))
        new_centroids, counts = accel.kmeans_update(X, labels, k)
        for c in np.nonzero(counts == 0)[0]:
            far = ((X - centroids[c]) ** 2).sum(axis=1)
            new_centroids[c] = X[int(np.argmax(far))]
        shift = float(((new_centroids - centroids) ** 2).sum())
        centroids = new_centroids
        if shift <= tol_abs:
            break
    labels, d2 = accel.kmeans_assign(X, centroids)
    inertia = float(np.sum(d2))
    history.append(inertia)
    return centroids, labels, inertia, n_iter, history


def kmeans_fit(
    X: np.ndarray,
    k: int,
    seed: int = 0,
    n_init: int = 10,
    max_iter: int = 300,
    tol: float = 1e-4,
    init: str = "k-means++",
) -> KMeansModel:
    """Cluster rows of X into k groups; best (lowest inertia) of n_init runs.

    init "exhaustive" runs Lloyd from every k-subset of the points (small n
    only) and ignores n_init; it exists for optimality checks against brute
    force.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of points n={n}")
    if init not in INIT_METHODS:
        raise ValueError(f"unknown init {init!r}; expected one of {INIT_METHODS}")

    tol_abs = tol * float(X.var(axis=0).mean())

    if init == "exhaustive":
        if n > _EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive init is limited to n <= {_EXHAUSTIVE_MAX_N}")
        seeds = (X[list(combo)].copy() for combo in itertools.combinations(range(n), k))
    else:
        rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_init)]
        if init == "k-means++":
            seeds = (_kmeanspp_init(X, k, rng) for rng in rngs)
        else:
            seeds = (_random_init(X, k, rng) for rng in rngs)

    best = None
    for centroids0 in seeds:
        result = _lloyd(X, centroids0, max_iter, tol_abs)
        if best is None or result[2] < best[2]:
            best = result
    centroids, labels, inertia, n_iter, history = best
    return KMeansModel(
        k=k,
        centroids=centroids,
        labels=labels,
        inertia=inertia,
        n_iter_run=n_iter,
        seed=seed,
        inertia_history=history,
    )


def knee_index(ks: np.ndarray, distortions: np.ndarray) -> int:
    """Index of the knee: max perpendicular distance to the endpoint chord.

    Both axes are min-max normalized first so the rule is scale-free.
    """
    x = np.asarray(ks, dtype=np.float64)
    y = np.asarray(distortions, dtype=np.float64)
    xr = x.max() - x.min()
    yr = y.max() - y.min()
    if xr == 0 or yr == 0:
        return 0
    xn = (x - x.min()) / xr
    yn = (y - y.min()) / yr
    dx = xn[-1] - xn[0]
    dy = yn[-1] - yn[0]
    # |cross| / chord length = perpendicular distance
    dist = np.abs(dx * (yn[0] - yn) - (xn[0] - xn) * dy) / np.hypot(dx, dy)
    return int(np.argmax(dist))


def elbow_sweep(
    X: np.ndarray,
    k_min: int = 2,
    k_max: int = 40,
    step: int = 2,
    seed: int = 0,
    n_init: int = 10,
) -> ElbowCurve:
    """Run kmeans_fit over k_min..k_max and pick the knee of the distortion curve."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= k_min < k_max:
        raise ValueError(f"need 1 <= k_min < k_max, got k_min={k_min} k_max={k_max}")
    if k_max > n:
        raise ValueError(f"k_max={k_max} exceeds the number of points n={n}")
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    ks = list(range(k_min, k_max + 1, step))
    entries = [(k, kmeans_fit(X, k, seed=seed, n_init=n_init).inertia) for k in ks]
    idx = knee_index(np.array(ks), np.array([e[1] for e in entries]))
    return ElbowCurve(entries=entries, chosen_k=ks[idx])


def write_elbow_csv(curve: ElbowCurve, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "distortion"])
        for k, distortion in curve.entries:
            writer.writerow([k, repr(distortion)])
