"""Vocabulary with a frequency cap and the tf-idf matrix X1.

tf-idf variant: raw-count tf, smoothed idf ln((1+N)/(1+df)) + 1, rows scaled
to unit Euclidean norm. Empty rows stay zero. Output is deterministic.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from litatlas.errors import DataError
from litatlas.sparse import CsrMatrix
from litatlas.textnorm import TokenizedDocument

MAX_FEATURES = 4096  # 2^12


@dataclass
class Vocabulary:
    terms: list[str]  # index -> term, lexicographically ordered
    term_to_index: dict[str, int]
    document_frequency: np.ndarray  # int64 per index
    corpus_frequency: np.ndarray  # int64 per index

    def __len__(self) -> int:
        return len(self.terms)


def build_vocabulary(docs: list[TokenizedDocument], max_features: int = MAX_FEATURES) -> Vocabulary:
    """Select the top `max_features` terms by total corpus frequency.

    Ties at the cap break lexicographically (smaller term wins); the kept
    terms get dense indices assigned in lexicographic order.
    """
    if not docs:
        raise DataError("cannot build a vocabulary from an empty corpus")
    cf: Counter = Counter()
    df: Counter = Counter()
    for doc in docs:
        cf.update(doc.tokens)
        df.update(set(doc.tokens))
    if not cf:
        raise DataError("all documents are empty; vocabulary would be empty")
    ranked = sorted(cf, key=lambda t: (-cf[t], t))
    kept = sorted(ranked[:max_features])
    term_to_index = {t: i for i, t in enumerate(kept)}
    return Vocabulary(
        terms=kept,
        term_to_index=term_to_index,
        document_frequency=np.array([df[t] for t in kept], dtype=np.int64),
        corpus_frequency=np.array([cf[t] for t in kept], dtype=np.int64),
    )


def tfidf(docs: list[TokenizedDocument], vocab: Vocabulary) -> CsrMatrix:
    """Build the l2-normalized tf-idf matrix, one row per document."""
    n_docs = len(docs)
    idf = np.log((1.0 + n_docs) / (1.0 + vocab.document_frequency)) + 1.0
    t2i = vocab.term_to_index

    offsets = np.zeros(n_docs + 1, dtype=np.int64)
    cols_list, vals_list = [], []
    for i, doc in enumerate(docs):
        counts = Counter(t2i[t] for t in doc.tokens if t in t2i)
        cols = np.array(sorted(counts), dtype=np.int64)
        vals = np.array([counts[c] for c in cols], dtype=np.float64) * idf[cols]
        norm = math.sqrt(float(vals @ vals))
        if norm > 0.0:
            vals /= norm
        cols_list.append(cols)
        vals_list.append(vals)
        offsets[i + 1] = offsets[i] + cols.size

    col_indices = np.concatenate(cols_list) if cols_list else np.empty(0, np.int64)
    values = np.concatenate(vals_list) if vals_list else np.empty(0, np.float64)
    return CsrMatrix(n_docs, len(vocab), offsets, col_indices, values)
