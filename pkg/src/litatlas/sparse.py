"""Compressed-row sparse matrix used for the document-term matrix X1."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class CsrMatrix:
    n_rows: int
    n_cols: int
    row_offsets: np.ndarray  # int64, length n_rows + 1
    col_indices: np.ndarray  # int64, length nnz, strictly increasing within a row
    values: np.ndarray  # float64, length nnz

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return int(self.row_offsets[-1])

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.row_offsets[i], self.row_offsets[i + 1]
        return self.col_indices[lo:hi], self.values[lo:hi]

    def toarray(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols))
        for i in range(self.n_rows):
            cols, vals = self.row(i)
            dense[i, cols] = vals
        return dense

    def row_norms(self) -> np.ndarray:
        """Euclidean norm of each row."""
        sq = np.zeros(self.n_rows)
        v2 = self.values * self.values
        for i in range(self.n_rows):
            lo, hi = self.row_offsets[i], self.row_offsets[i + 1]
            sq[i] = v2[lo:hi].sum()
        return np.sqrt(sq)

    def col_means(self) -> np.ndarray:
        """Mean of each column over all rows (zeros included)."""
        sums = np.zeros(self.n_cols)
        np.add.at(sums, self.col_indices, self.values)
        return sums / self.n_rows

    def validate(self) -> None:
        """Check structural invariants; raises ValueError on violation."""
        if self.row_offsets.shape != (self.n_rows + 1,):
            raise ValueError("row_offsets length must be n_rows + 1")
        if self.row_offsets[0] != 0 or self.row_offsets[-1] != len(self.col_indices):
            raise ValueError("row_offsets must start at 0 and end at nnz")
        if np.any(np.diff(self.row_offsets) < 0):
            raise ValueError("row_offsets must be non-decreasing")
        if len(self.col_indices) != len(self.values):
            raise ValueError("col_indices and values length mismatch")
        for i in range(self.n_rows):
            cols, _ = self.row(i)
            if cols.size and (cols[0] < 0 or cols[-1] >= self.n_cols):
                raise ValueError(f"row {i}: column index out of range")
            if np.any(np.diff(cols) <= 0):
                raise ValueError(f"row {i}: column indices not strictly increasing")

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "CsrMatrix":
        dense = np.asarray(dense, dtype=np.float64)
        n_rows, n_cols = dense.shape
        offsets = np.zeros(n_rows + 1, dtype=np.int64)
        cols_list, vals_list = [], []
        for i in range(n_rows):
            nz = np.nonzero(dense[i])[0]
            cols_list.append(nz.astype(np.int64))
            vals_list.append(dense[i, nz])
            offsets[i + 1] = offsets[i] + nz.size
        col_indices = np.concatenate(cols_list) if cols_list else np.empty(0, np.int64)
        values = np.concatenate(vals_list) if vals_list else np.empty(0, np.float64)
        return cls(n_rows, n_cols, offsets, col_indices, values)
