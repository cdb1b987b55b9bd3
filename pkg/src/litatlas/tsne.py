"""t-SNE: project the tf-idf matrix to 2D for the atlas scatter.

Affinities: per-point Gaussian bandwidths calibrated by bisection so each
conditional distribution hits the requested perplexity, then symmetrized
p_ij = (p_j|i + p_i|j) / 2n. Optimization: gradient descent on KL(P||Q)
with Student-t low-dimensional affinities, early exaggeration, the
0.5 -> 0.8 momentum schedule and per-parameter gains. theta > 0 switches
the repulsive term to a Barnes-Hut quadtree and restricts conditionals to
the floor(3 * perplexity) nearest neighbors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from litatlas import accel
from litatlas.sparse import CsrMatrix

EXAGGERATION_ITERS = 250
MOMENTUM_SWITCH_ITER = 250
TRACE_EVERY = 50
PERPLEXITY_TOL = 1e-5  # entropy tolerance (nats) for the bandwidth search
PERPLEXITY_MAX_STEPS = 100
GAUSSIAN_INIT_STD = 1e-4
DUPLICATE_JITTER = 1e-6

INIT_METHODS = ("gaussian-1e-4", "pca-2d")


@dataclass
class TsneConfig:
    perplexity: float = 30.0
    n_iter: int = 1000
    early_exaggeration: float = 12.0
    learning_rate: float = 200.0
    momentum_early: float = 0.5
    momentum_late: float = 0.8
    theta: float = 0.5  # Barnes-Hut cell-opening parameter; 0 = exact
    seed: int = 0
    init: str = "gaussian-1e-4"

    def validate(self, n: int) -> None:
        if n < 4:
            raise ValueError(f"t-SNE needs at least 4 distinct points, got {n}")
        if self.perplexity <= 0:
            raise ValueError(f"perplexity must be positive, got {self.perplexity}")
        if self.perplexity >= (n - 1) / 3:
            raise ValueError(
                f"perplexity {self.perplexity} infeasible for n={n}; need perplexity < (n-1)/3"
            )
        if not 0.0 <= self.theta < 1.0:
            raise ValueError(f"theta must be in [0, 1), got {self.theta}")
        if self.n_iter < 1:
            raise ValueError("n_iter must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.early_exaggeration < 1.0:
            raise ValueError("early_exaggeration must be >= 1")
        if self.init not in INIT_METHODS:
            raise ValueError(f"unknown init {self.init!r}; expected one of {INIT_METHODS}")

    def to_dict(self) -> dict:
        return {
            "perplexity": self.perplexity,
            "n_iter": self.n_iter,
            "early_exaggeration": self.early_exaggeration,
            "learning_rate": self.learning_rate,
            "momentum_early": self.momentum_early,
            "momentum_late": self.momentum_late,
            "theta": self.theta,
            "seed": self.seed,
            "init": self.init,
        }


@dataclass
class AffinityMatrix:
    """Symmetric pairwise probabilities in CSR form; no self-loops, sums to 1."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray

    def toarray(self) -> np.ndarray:
        P = np.zeros((self.n, self.n))
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        P[rows, self.indices] = self.values
        return P

    def total(self) -> float:
        return float(self.values.sum())


@dataclass
class Embedding2D:
    Y: np.ndarray  # (n, 2)
    final_kl: float
    kl_trace: list[tuple[int, float]] = field(default_factory=list)  # (iteration, KL)


def _pairwise_sq(X) -> np.ndarray:
    if isinstance(X, CsrMatrix):
        return accel.csr_pairwise_sq_dists(X.row_offsets, X.col_indices, X.values, X.n_cols)
    return accel.pairwise_sq_dists(np.ascontiguousarray(X, dtype=np.float64))


def calibrated_conditionals(
    X, perplexity: float, theta: float = 0.5
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-point conditional distributions at the requested perplexity.

    Returns (neighbor_indices (n, m), conditionals (n, m), entropy_nats (n,)).
    Exact mode (theta == 0) uses all n-1 other points as candidates; theta > 0
    keeps the floor(3 * perplexity) nearest neighbors. Ties in the neighbor
    scan break on the smaller point index.
    """
    n = X.n_rows if isinstance(X, CsrMatrix) else X.shape[0]
    D = _pairwise_sq(X)
    np.fill_diagonal(D, np.inf)
    if theta > 0.0:
        m = min(n - 1, int(math.floor(3.0 * perplexity)))
    else:
        m = n - 1
    nbr = np.argsort(D, axis=1, kind="stable")[:, :m]
    Dsel = np.take_along_axis(D, nbr, axis=1)
    Pcond, H = accel.perplexity_search(
        Dsel, math.log(perplexity), PERPLEXITY_TOL, PERPLEXITY_MAX_STEPS
    )
    return nbr, Pcond, H


def conditional_affinities(X, perplexity: float, theta: float = 0.5) -> AffinityMatrix:
    """Symmetrized affinities p_ij = (p_j|i + p_i|j) / 2n as a CSR matrix."""
    n = X.n_rows if isinstance(X, CsrMatrix) else X.shape[0]
    nbr, Pcond, _ = calibrated_conditionals(X, perplexity, theta)
    m = nbr.shape[1]

    rows = np.repeat(np.arange(n, dtype=np.int64), m)
    cols = nbr.ravel().astype(np.int64)
    vals = Pcond.ravel() / (2.0 * n)
    all_r = np.concatenate([rows, cols])
    all_c = np.concatenate([cols, rows])
    all_v = np.concatenate([vals, vals])

    order = np.lexsort((all_c, all_r))
    r, c, v = all_r[order], all_c[order], all_v[order]
    is_start = np.ones(r.size, dtype=bool)
    is_start[1:] = (r[1:] != r[:-1]) | (c[1:] != c[:-1])
    starts = np.nonzero(is_start)[0]
    merged_v = np.add.reduceat(v, starts)
    merged_r = r[starts]
    merged_c = c[starts]

    keep = merged_v > 0.0
    merged_r, merged_c, merged_v = merged_r[keep], merged_c[keep], merged_v[keep]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, merged_r + 1, 1)
    np.cumsum(indptr, out=indptr)
    return AffinityMatrix(n=n, indptr=indptr, indices=merged_c, values=merged_v)


def _kl_now(P: AffinityMatrix, P_dense: np.ndarray | None, Y: np.ndarray) -> float:
    if P_dense is not None:
        return float(accel.kl_exact(P_dense, Y))
    return float(accel.kl_sparse(P.indptr, P.indices, P.values, Y))


def tsne_optimize(P: AffinityMatrix, config: TsneConfig, Y0: np.ndarray | None = None) -> Embedding2D:
    """Minimize KL(P||Q) from a seeded Gaussian (or provided) initialization.

    The KL trace is recorded every 50 iterations against the un-exaggerated
    P with the exact normalizer, so entries are comparable across phases.
    Raises RuntimeError on a non-finite gradient or when the final KL fails
    to improve on the end-of-exaggeration KL.
    """
    n = P.n
    exact = config.theta == 0.0
    rng = np.random.default_rng(config.seed)
    if Y0 is None:
        Y = rng.normal(0.0, GAUSSIAN_INIT_STD, size=(n, 2))
    else:
        Y = np.array(Y0, dtype=np.float64, copy=True)

    P_dense = P.toarray() if exact else None
    exag_vals = P.values * config.early_exaggeration
    exag_dense = P_dense * config.early_exaggeration if exact else None

    update = np.zeros((n, 2))
    gains = np.ones((n, 2))
    kl_trace: list[tuple[int, float]] = []
    kl_exag_end = None

    for it in range(config.n_iter):
        exaggerated = it < EXAGGERATION_ITERS
        if exact:
            grad = accel.tsne_grad_exact(exag_dense if exaggerated else P_dense, Y)
        else:
            grad = accel.bh_grad(
                P.indptr, P.indices, exag_vals if exaggerated else P.values, Y, config.theta
            )
        if not np.all(np.isfinite(grad)):
            bad = int(np.nonzero(~np.isfinite(grad).all(axis=1))[0][0])
            raise RuntimeError(f"non-finite t-SNE gradient at iteration {it}, point {bad}")

        dec = update * grad > 0.0  # moving with the gradient: shrink the gain
        gains[dec] *= 0.8
        gains[~dec] += 0.2
        np.clip(gains, 0.01, None, out=gains)
        momentum = config.momentum_early if it < MOMENTUM_SWITCH_ITER else config.momentum_late
        update = momentum * update - config.learning_rate * gains * grad
        Y += update
        Y -= Y.mean(axis=0)

        done = it + 1
        if done == EXAGGERATION_ITERS and config.n_iter > EXAGGERATION_ITERS:
            kl_exag_end = _kl_now(P, P_dense, Y)
        if done % TRACE_EVERY == 0 or done == config.n_iter:
            kl_trace.append((done, _kl_now(P, P_dense, Y)))

    final_kl = kl_trace[-1][1]
    if kl_exag_end is not None and not final_kl < kl_exag_end:
        raise RuntimeError(
            f"t-SNE failed to improve after exaggeration: final KL {final_kl:.6f} "
            f">= end-of-exaggeration KL {kl_exag_end:.6f}"
        )
    return Embedding2D(Y=Y, final_kl=final_kl, kl_trace=kl_trace)


def _row_keys(X) -> list[bytes]:
    if isinstance(X, CsrMatrix):
        keys = []
        for i in range(X.n_rows):
            cols, vals = X.row(i)
            keys.append(cols.tobytes() + vals.tobytes())
        return keys
    X = np.ascontiguousarray(X, dtype=np.float64)
    return [X[i].tobytes() for i in range(X.shape[0])]


def _collapse_duplicates(X) -> tuple[list[int], np.ndarray]:
    """First-occurrence representatives for exact duplicate rows."""
    first: dict[bytes, int] = {}
    reps: list[int] = []
    keys = _row_keys(X)
    inverse = np.empty(len(keys), dtype=np.int64)
    for i, key in enumerate(keys):
        if key not in first:
            first[key] = len(reps)
            reps.append(i)
        inverse[i] = first[key]
    return reps, inverse


def _take_rows(X, idx: list[int]):
    if isinstance(X, CsrMatrix):
        offsets = np.zeros(len(idx) + 1, dtype=np.int64)
        cols_list, vals_list = [], []
        for out_i, i in enumerate(idx):
            cols, vals = X.row(i)
            cols_list.append(cols)
            vals_list.append(vals)
            offsets[out_i + 1] = offsets[out_i] + cols.size
        return CsrMatrix(
            len(idx),
            X.n_cols,
            offsets,
            np.concatenate(cols_list) if cols_list else np.empty(0, np.int64),
            np.concatenate(vals_list) if vals_list else np.empty(0, np.float64),
        )
    return np.ascontiguousarray(X, dtype=np.float64)[idx]


def _pca_2d_init(X, rng: np.random.Generator) -> np.ndarray:
    from litatlas.pca import fit_pca, transform

    n = X.n_rows if isinstance(X, CsrMatrix) else X.shape[0]
    model = fit_pca(X, variance_target=1.0)
    Y0 = transform(X, model)[:, :2]
    if Y0.shape[1] < 2:  # rank-1 data: pad with noise so points can separate
        Y0 = np.hstack([Y0, rng.normal(0.0, GAUSSIAN_INIT_STD, size=(n, 1))])
    std = Y0[:, 0].std()
    if std > 0:
        Y0 = Y0 * (GAUSSIAN_INIT_STD / std)
    return Y0


def embed(X, config: TsneConfig) -> Embedding2D:
    """Full t-SNE of the rows of X (CsrMatrix or dense array).

    Exact duplicate rows are collapsed to one representative before the
    bandwidth search and re-expanded afterwards with a seeded 1e-6 jitter.
    """
    reps, inverse = _collapse_duplicates(X)
    n = inverse.shape[0]
    n_unique = len(reps)
    config.validate(n_unique)
    Xu = _take_rows(X, reps)

    P = conditional_affinities(Xu, config.perplexity, config.theta)
    rng = np.random.default_rng(config.seed)
    Y0 = _pca_2d_init(Xu, rng) if config.init == "pca-2d" else None
    emb = tsne_optimize(P, config, Y0)

    if n_unique == n:
        return emb
    Y = emb.Y[inverse]
    jitter_rng = np.random.default_rng(config.seed + 1)
    seen: set[int] = set()
    for i in range(n):
        group = int(inverse[i])
        if group in seen:
            Y[i] += jitter_rng.normal(0.0, DUPLICATE_JITTER, size=2)
        else:
            seen.add(group)
    return Embedding2D(Y=Y, final_kl=emb.final_kl, kl_trace=emb.kl_trace)
