import math

import numpy as np
import pytest

from litatlas.errors import DataError
from litatlas.textnorm import TokenizedDocument
from litatlas.vectorize import build_vocabulary, tfidf


def _doc(doc_id, tokens):
    return TokenizedDocument(doc_id=doc_id, tokens=tokens)


class TestBuildVocabulary:
    def test_frequency_ranking_with_cap(self):
        docs = [_doc("a", ["virus"] * 10 + ["cell"] * 7 + ["bat"] * 3)]
        vocab = build_vocabulary(docs, max_features=2)
        assert vocab.term_to_index == {"cell": 0, "virus": 1}
        assert list(vocab.corpus_frequency) == [7, 10]

    def test_cap_not_binding_keeps_all(self):
        docs = [_doc("a", ["x", "y", "z"])]
        vocab = build_vocabulary(docs, max_features=10)
        assert vocab.terms == ["x", "y", "z"]

    def test_tie_at_cap_prefers_lexicographically_smaller(self):
        docs = [_doc("a", ["zebra", "apple", "mango"])]  # all frequency 1
        vocab = build_vocabulary(docs, max_features=2)
        assert vocab.terms == ["apple", "mango"]

    def test_indices_dense_and_lexicographic(self):
        docs = [_doc("a", ["delta", "beta", "alpha", "delta"])]
        vocab = build_vocabulary(docs)
        assert vocab.terms == sorted(vocab.terms)
        assert [vocab.term_to_index[t] for t in vocab.terms] == list(range(len(vocab)))

    def test_document_frequency(self):
        docs = [_doc("a", ["x", "x", "y"]), _doc("b", ["x"])]
        vocab = build_vocabulary(docs)
        assert vocab.document_frequency[vocab.term_to_index["x"]] == 2
        assert vocab.document_frequency[vocab.term_to_index["y"]] == 1

    def test_all_empty_docs_error(self):
        with pytest.raises(DataError):
            build_vocabulary([_doc("a", []), _doc("b", [])])

    def test_no_docs_error(self):
        with pytest.raises(DataError):
            build_vocabulary([])


class TestTfidf:
    def test_single_document_fixture(self):
        # one doc, counts (2, 1) over terms (virus, cell): idf = ln(2/2)+1 = 1,
        # row = (2, 1)/sqrt(5) in term order cell->1, virus->2s index
        docs = [_doc("a", ["virus", "virus", "cell"])]
        vocab = build_vocabulary(docs)
        X = tfidf(docs, vocab)
        i_cell, i_virus = vocab.term_to_index["cell"], vocab.term_to_index["virus"]
        row = X.toarray()[0]
        assert row[i_virus] == pytest.approx(2 / math.sqrt(5), abs=1e-9)
        assert row[i_cell] == pytest.approx(1 / math.sqrt(5), abs=1e-9)

    def test_out_of_vocabulary_doc_gives_zero_row(self):
        docs = [_doc("a", ["virus"]), _doc("b", ["unseen"])]
        vocab = build_vocabulary([docs[0]])
        X = tfidf(docs, vocab)
        assert X.row(1)[0].size == 0
        assert np.all(X.toarray()[1] == 0.0)

    def test_term_in_every_doc_has_idf_one(self):
        # 3 docs all containing "base": idf = ln(4/4)+1 = 1. A doc holding only
        # that term gets the normalized value 1.0 exactly.
        docs = [_doc("a", ["base"]), _doc("b", ["base"]), _doc("c", ["base"])]
        vocab = build_vocabulary(docs)
        X = tfidf(docs, vocab)
        assert np.allclose(X.toarray(), 1.0)

    def test_hand_computed_two_docs(self):
        # doc a: x:2, y:1; doc b: x:1. N=2, df(x)=2, df(y)=1.
        # idf(x) = ln(3/3)+1 = 1; idf(y) = ln(3/2)+1.
        docs = [_doc("a", ["x", "x", "y"]), _doc("b", ["x"])]
        vocab = build_vocabulary(docs)
        X = tfidf(docs, vocab).toarray()
        idf_y = math.log(3 / 2) + 1
        raw = np.array([2.0, 1.0 * idf_y])
        expected_a = raw / np.linalg.norm(raw)
        ix, iy = vocab.term_to_index["x"], vocab.term_to_index["y"]
        assert X[0, ix] == pytest.approx(expected_a[0], abs=1e-9)
        assert X[0, iy] == pytest.approx(expected_a[1], abs=1e-9)
        assert X[1, ix] == pytest.approx(1.0, abs=1e-9)

    def _random_docs(self, seed, n_docs=30):
        rng = np.random.default_rng(seed)
        words = [f"w{i}" for i in range(50)]
        docs = []
        for i in range(n_docs):
            length = int(rng.integers(0, 40))
            docs.append(_doc(f"d{i}", [words[j] for j in rng.integers(0, 50, size=length)]))
        return docs

    def test_nonempty_rows_unit_norm(self):
        docs = self._random_docs(1)
        vocab = build_vocabulary(docs)
        X = tfidf(docs, vocab)
        norms = X.row_norms()
        for i in range(X.n_rows):
            if X.row(i)[0].size:
                assert abs(norms[i] - 1.0) <= 1e-9
            else:
                assert norms[i] == 0.0

    def test_entry_nonzero_iff_term_present_and_in_vocab(self):
        docs = self._random_docs(2)
        vocab = build_vocabulary(docs, max_features=20)
        X = tfidf(docs, vocab)
        dense = X.toarray()
        for i, doc in enumerate(docs):
            present = {vocab.term_to_index[t] for t in doc.tokens if t in vocab.term_to_index}
            assert set(np.nonzero(dense[i])[0]) == present

    def test_doubling_body_leaves_row_unchanged(self):
        docs = self._random_docs(3, n_docs=10)
        vocab = build_vocabulary(docs)
        X1 = tfidf(docs, vocab)
        doubled = [_doc(d.doc_id, d.tokens * 2) for d in docs]
        X2 = tfidf(doubled, vocab)
        assert np.allclose(X1.toarray(), X2.toarray(), atol=1e-12)

    def test_bit_identical_across_runs(self):
        docs = self._random_docs(4)
        vocab = build_vocabulary(docs)
        a, b = tfidf(docs, vocab), tfidf(docs, vocab)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.col_indices, b.col_indices)
        assert np.array_equal(a.row_offsets, b.row_offsets)

    def test_csr_structure_valid(self):
        docs = self._random_docs(5)
        vocab = build_vocabulary(docs, max_features=25)
        X = tfidf(docs, vocab)
        X.validate()  # strictly increasing col indices per row, offsets sane
        assert np.all(X.values >= 0)
