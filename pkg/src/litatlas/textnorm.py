"""Tokenization and stopword removal.

Rule-based tokenizer: split on whitespace/punctuation, lowercase, keep
tokens that are at least two characters long and contain a letter.
Hyphenated terms split into their parts ("sars-cov" -> "sars", "cov").
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from litatlas._english import DEFAULT_DOMAIN_STOPWORDS, FUNCTION_WORDS
from litatlas.errors import DataError
from litatlas.ingest import DocumentRecord

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass
class TokenizedDocument:
    doc_id: str
    tokens: list[str]


@dataclass
class Stoplist:
    """Built-in English function words plus a domain-specific word list."""

    base_words: frozenset[str] = FUNCTION_WORDS
    domain_words: frozenset[str] = DEFAULT_DOMAIN_STOPWORDS

    def __post_init__(self):
        # keep the two sets disjoint; base wins on overlap
        self.domain_words = frozenset(self.domain_words) - self.base_words
        self.all_words = self.base_words | self.domain_words

    def __contains__(self, token: str) -> bool:
        return token in self.all_words


def load_stoplist(path: str | None = None) -> Stoplist:
    """Build a Stoplist; `path` replaces the default domain words.

    File format: UTF-8, one lowercase word per line, '#' starts a comment.
    """
    if path is None:
        return Stoplist()
    words = set()
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                word = line.split("#", 1)[0].strip().lower()
                if word:
                    words.add(word)
    except OSError as exc:
        raise DataError(f"cannot read stoplist file {path}: {exc}") from exc
    return Stoplist(domain_words=frozenset(words))


def tokenize(text: str) -> list[str]:
    """Split on whitespace/punctuation, lowercase, apply length/letter filters.

    Drops tokens shorter than two characters, tokens with no alphabetic
    character, and therefore all pure numbers.
    """
    out = []
    for m in _TOKEN_RE.finditer(text.lower()):
        tok = m.group()
        if len(tok) >= 2 and any(c.isalpha() for c in tok):
            out.append(tok)
    return out


def remove_stopwords(tokens: list[str], stoplist: Stoplist) -> list[str]:
    """Drop tokens found in the stoplist, preserving the order of survivors."""
    words = stoplist.all_words
    return [t for t in tokens if t not in words]


def tokenize_corpus(
    records: list[DocumentRecord], stoplist: Stoplist | None = None
) -> list[TokenizedDocument]:
    """Tokenize each record's body text and remove stopwords."""
    if stoplist is None:
        stoplist = Stoplist()
    words = stoplist.all_words
    docs = []
    for rec in records:
        toks = [t for t in tokenize(rec.body_text) if t not in words]
        docs.append(TokenizedDocument(doc_id=rec.doc_id, tokens=toks))
    return docs
