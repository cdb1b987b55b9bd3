"""PCA keeping the minimal dimension count that preserves the variance target.

The fit never densifies the document-term matrix: it eigendecomposes the
implicitly-centered Gram matrix (n x n) when n <= V, else the scatter
matrix (V x V). Eigenvalues of either equal the squared singular values of
the centered data, so explained_variance_i = lambda_i / (n - 1) exactly as
a thin SVD would give.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from litatlas import accel
from litatlas.errors import DataError
from litatlas.sparse import CsrMatrix

_RANK_RTOL = 1e-12


@dataclass
class PcaModel:
    mean: np.ndarray  # (V,)
    components: np.ndarray  # (d, V), rows orthonormal
    explained_variance: np.ndarray  # (d,), non-increasing
    explained_variance_ratio: np.ndarray  # (d,), fraction of total variance
    n_samples: int
    variance_target: float

    @property
    def d(self) -> int:
        return self.components.shape[0]


def _as_parts(X) -> tuple[int, int, bool]:
    if isinstance(X, CsrMatrix):
        return X.n_rows, X.n_cols, True
    X = np.asarray(X)
    return X.shape[0], X.shape[1], False


def _col_mean(X, sparse: bool) -> np.ndarray:
    return X.col_means() if sparse else np.asarray(X, dtype=np.float64).mean(axis=0)


def _sq_sum(X, sparse: bool) -> float:
    if sparse:
        return float(X.values @ X.values)
    X = np.asarray(X, dtype=np.float64)
    return float(np.einsum("ij,ij->", X, X))


def _gram(X, sparse: bool) -> np.ndarray:
    if sparse:
        return accel.csr_gram(X.row_offsets, X.col_indices, X.values, X.n_cols)
    X = np.asarray(X, dtype=np.float64)
    return X @ X.T


def _scatter(X, sparse: bool) -> np.ndarray:
    if sparse:
        return accel.csr_ata(X.row_offsets, X.col_indices, X.values, X.n_cols)
    X = np.asarray(X, dtype=np.float64)
    return X.T @ X


def _dot_dense(X, B: np.ndarray, sparse: bool) -> np.ndarray:
    if sparse:
        return accel.csr_dot_dense(X.row_offsets, X.col_indices, X.values, B)
    return np.asarray(X, dtype=np.float64) @ B


def _tdot_dense(X, U: np.ndarray, sparse: bool) -> np.ndarray:
    """X^T @ U without densifying X."""
    if sparse:
        out = np.zeros((X.n_cols, U.shape[1]))
        rows = np.repeat(np.arange(X.n_rows), np.diff(X.row_offsets))
        np.add.at(out, X.col_indices, X.values[:, None] * U[rows])
        return out
    return np.asarray(X, dtype=np.float64).T @ U


def _fix_signs(components: np.ndarray) -> np.ndarray:
    """Make each component's largest-magnitude entry non-negative."""
    for row in components:
        j = np.argmax(np.abs(row))
        if row[j] < 0:
            row *= -1.0
    return components


def fit_pca(X, variance_target: float = 0.95) -> PcaModel:
    """Fit principal axes on X, keeping the smallest d reaching the target.

    The kept d satisfies cumulative explained_variance_ratio >= target while
    d-1 stays below it; variance_target=1.0 keeps the full rank. Raises
    DataError when the centered data has zero variance.
    """
    n, V, sparse = _as_parts(X)
    if n < 2:
        raise ValueError(f"PCA needs at least 2 rows, got {n}")
    if not 0.0 < variance_target <= 1.0:
        raise ValueError(f"variance_target must be in (0, 1], got {variance_target}")

    mean = _col_mean(X, sparse)
    # trace of the centered scatter = total variance * (n - 1)
    scatter_trace = _sq_sum(X, sparse) - n * float(mean @ mean)

    if n <= V:
        G = _gram(X, sparse)
        r = _dot_dense(X, mean[:, None], sparse).ravel()
        Gc = G - r[:, None] - r[None, :] + float(mean @ mean)
        evals, U = np.linalg.eigh(Gc)
    else:
        S = _scatter(X, sparse) - n * np.outer(mean, mean)
        evals, U = np.linalg.eigh(S)

    evals = evals[::-1].copy()
    U = U[:, ::-1]
    np.maximum(evals, 0.0, out=evals)

    if evals.size == 0 or evals[0] <= 0.0 or scatter_trace <= 0.0:
        raise DataError("PCA input has zero variance (all rows identical)")
    rank = int(np.sum(evals > evals[0] * _RANK_RTOL))

    total_var = scatter_trace / (n - 1)
    explained = evals[:rank] / (n - 1)
    ratios = explained / total_var
    cum = np.cumsum(ratios)
    reached = np.nonzero(cum >= variance_target)[0]
    d = int(reached[0]) + 1 if reached.size else rank

    if n <= V:
        # recover right singular vectors: v_j = Xc^T u_j / s_j
        Ud = U[:, :d]
        comps = _tdot_dense(X, Ud, sparse) - np.outer(mean, Ud.sum(axis=0))
        comps = (comps / np.sqrt(evals[:d])).T
    else:
        comps = U[:, :d].T.copy()

    return PcaModel(
        mean=mean,
        components=_fix_signs(np.ascontiguousarray(comps)),
        explained_variance=explained[:d],
        explained_variance_ratio=ratios[:d],
        n_samples=n,
        variance_target=variance_target,
    )


def transform(X, model: PcaModel) -> np.ndarray:
    """Project X onto the principal axes: (X - mean) @ components^T."""
    n, V, sparse = _as_parts(X)
    if V != model.mean.shape[0]:
        raise ValueError(f"X has {V} columns, model expects {model.mean.shape[0]}")
    proj = _dot_dense(X, model.components.T, sparse)
    return proj - model.mean @ model.components.T
