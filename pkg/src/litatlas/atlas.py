"""Merge documents, 2D coordinates and cluster labels into the atlas JSON.

The file is the contract with the viewer: schema_version "1", deterministic
field order, UTF-8, coordinates rounded to 6 significant digits. Writing is
a pure function of the data, so serialize -> parse -> serialize is
bit-identical.
"""

from __future__ import annotations

import json

import numpy as np

from litatlas.errors import DataError
from litatlas.ingest import DocumentRecord
from litatlas.sparse import CsrMatrix
from litatlas.vectorize import Vocabulary

SCHEMA_VERSION = "1"
TOP_TERMS = 10
MAX_AUTHORS = 3


def cluster_top_terms(
    X1: CsrMatrix,
    labels: np.ndarray,
    vocab: Vocabulary,
    top_n: int = TOP_TERMS,
    n_clusters: int | None = None,
) -> list[list[str]]:
    """Describe each cluster by the top terms of its mean tf-idf vector.

    Terms are ranked by mean weight descending, ties lexicographic; only
    terms with positive mean are listed. Empty clusters get empty lists.
    """
    labels = np.asarray(labels)
    if labels.shape[0] != X1.n_rows:
        raise ValueError("labels length must match the number of matrix rows")
    k = n_clusters if n_clusters is not None else (int(labels.max()) + 1 if labels.size else 0)
    out = []
    rows = np.repeat(np.arange(X1.n_rows), np.diff(X1.row_offsets))
    for c in range(k):
        members = labels == c
        size = int(members.sum())
        if size == 0:
            out.append([])
            continue
        sums = np.zeros(X1.n_cols)
        mask = members[rows]
        np.add.at(sums, X1.col_indices[mask], X1.values[mask])
        means = sums / size
        nz = np.nonzero(means > 0)[0]
        ranked = sorted(nz, key=lambda t: (-means[t], vocab.terms[t]))
        out.append([vocab.terms[t] for t in ranked[:top_n]])
    return out


def _round6(x: float) -> float:
    return float(f"{float(x):.6g}")


def _author_line(authors: list[str]) -> str:
    shown = ", ".join(authors[:MAX_AUTHORS])
    if len(authors) > MAX_AUTHORS:
        shown += " et al."
    return shown


def build_atlas(
    records: list[DocumentRecord],
    Y: np.ndarray,
    labels: np.ndarray,
    top_terms: list[list[str]],
    provenance: dict,
) -> dict:
    """Assemble the atlas structure from aligned (same ordering) inputs."""
    n = len(records)
    if Y.shape[0] != n or len(labels) != n:
        raise ValueError("records, coordinates and labels must have equal lengths")
    if not np.all(np.isfinite(Y)):
        raise DataError("non-finite coordinates cannot be exported")
    if n and int(np.max(labels)) >= len(top_terms):
        raise ValueError("top_terms must cover every cluster id present in labels")
    points = []
    for rec, (x, y), cluster in zip(records, Y, labels):
        points.append(
            {
                "id": rec.doc_id,
                "title": rec.title,
                "authors": _author_line(rec.authors),
                "journal": rec.journal,
                "url": rec.url,
                "x": _round6(x),
                "y": _round6(y),
                "cluster": int(cluster),
            }
        )
    sizes = np.bincount(np.asarray(labels, dtype=np.int64), minlength=len(top_terms))
    clusters = [
        {"id": c, "size": int(sizes[c]), "top_terms": list(top_terms[c])}
        for c in range(len(top_terms))
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "points": points,
        "clusters": clusters,
        "provenance": provenance,
    }


def write_atlas(atlas: dict, path: str) -> None:
    """Serialize deterministically (insertion order, compact separators)."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(atlas, fh, ensure_ascii=False, separators=(",", ":"))
            fh.write("\n")
    except OSError as exc:
        raise DataError(f"cannot write atlas to {path}: {exc}") from exc


def read_atlas(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            atlas = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read atlas from {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not valid JSON: {exc}") from exc
    if atlas.get("schema_version") != SCHEMA_VERSION:
        raise DataError(
            f"unsupported atlas schema_version {atlas.get('schema_version')!r}; "
            f"expected {SCHEMA_VERSION!r}"
        )
    return atlas
