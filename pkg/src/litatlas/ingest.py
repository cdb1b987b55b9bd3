"""Load raw paper records and reduce them to the clean corpus.

Filters run in a fixed order: deduplicate, drop abstract-only papers, drop
non-English papers. All filters preserve the relative order of survivors.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from dataclasses import dataclass, field

from litatlas._english import FUNCTION_WORDS
from litatlas.errors import DataError

logger = logging.getLogger("litatlas.ingest")

INPUT_FORMATS = ("jsonl", "json-array", "csv")

# Tokens for language scoring: runs of word characters, lowercased, at least
# two chars, containing a letter. Mirrors textnorm.tokenize.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

ENGLISH_THRESHOLD = 0.20
LANG_SAMPLE_TOKENS = 2000


@dataclass
class DocumentRecord:
    doc_id: str
    title: str = ""
    abstract: str = ""
    body_text: str = ""
    authors: list[str] = field(default_factory=list)
    journal: str = ""
    url: str = ""
    source_file: str = ""


@dataclass
class CorpusStats:
    """Record counts after each cleaning step; non-increasing in pipeline order."""

    n_raw: int
    n_after_dedup: int
    n_after_abstract_filter: int
    n_after_language_filter: int

    def to_dict(self) -> dict:
        return {
            "n_raw": self.n_raw,
            "n_after_dedup": self.n_after_dedup,
            "n_after_abstract_filter": self.n_after_abstract_filter,
            "n_after_language_filter": self.n_after_language_filter,
        }


def _coerce_record(obj: object, source: str, where: str) -> DocumentRecord | None:
    """Build a DocumentRecord from one parsed input object, or None + warning."""
    if not isinstance(obj, dict):
        logger.warning("%s %s: record is not an object, skipped", source, where)
        return None
    doc_id = obj.get("doc_id")
    if doc_id is None or str(doc_id).strip() == "":
        logger.warning("%s %s: missing doc_id, skipped", source, where)
        return None
    if "body_text" not in obj or obj["body_text"] is None:
        logger.warning("%s %s: missing body_text field, skipped", source, where)
        return None
    authors = obj.get("authors") or []
    if isinstance(authors, str):
        authors = [a.strip() for a in authors.split(";") if a.strip()]
    return DocumentRecord(
        doc_id=str(doc_id),
        title=str(obj.get("title") or ""),
        abstract=str(obj.get("abstract") or ""),
        body_text=str(obj["body_text"]),
        authors=[str(a) for a in authors],
        journal=str(obj.get("journal") or ""),
        url=str(obj.get("url") or ""),
        source_file=source,
    )


def _load_jsonl(path: str) -> list[DocumentRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                logger.warning("%s line %d: malformed JSON (%s), skipped", path, lineno, exc.msg)
                continue
            rec = _coerce_record(obj, path, f"line {lineno}")
            if rec is not None:
                records.append(rec)
    return records


def _load_json_array(path: str) -> list[DocumentRecord]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise DataError(f"{path}: expected a top-level JSON array")
    records = []
    for i, obj in enumerate(data):
        rec = _coerce_record(obj, path, f"record {i}")
        if rec is not None:
            records.append(rec)
    return records


def _load_csv(path: str) -> list[DocumentRecord]:
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for rowno, row in enumerate(reader, start=2):  # header is line 1
            rec = _coerce_record(row, path, f"line {rowno}")
            if rec is not None:
                records.append(rec)
    return records


_LOADERS = {"jsonl": _load_jsonl, "json-array": _load_json_array, "csv": _load_csv}


def load_corpus(paths: list[str], format: str = "jsonl") -> list[DocumentRecord]:
    """Load records from `paths`, skipping malformed rows with a warning.

    A file that cannot be read at all is fatal (DataError naming the path).
    In CSV files the `authors` column is a semicolon-separated list.
    """
    if format not in _LOADERS:
        raise DataError(f"unknown input format {format!r}; expected one of {INPUT_FORMATS}")
    loader = _LOADERS[format]
    records: list[DocumentRecord] = []
    for path in paths:
        try:
            records.extend(loader(path))
        except OSError as exc:
            raise DataError(f"cannot read input file {path}: {exc}") from exc
    return records


def _text_key(record: DocumentRecord) -> str:
    joined = f"{record.title} {record.abstract}".lower()
    return " ".join(joined.split())


def deduplicate(records: list[DocumentRecord]) -> list[DocumentRecord]:
    """Keep the first occurrence of each duplicate group.

    Two records are duplicates when their doc_ids match or when their
    normalized (lowercased, whitespace-collapsed) title+abstract texts match.
    Records with no title and no abstract are never matched on the text key.
    """
    seen_ids: set[str] = set()
    seen_text: set[str] = set()
    kept = []
    for rec in records:
        key = _text_key(rec)
        if rec.doc_id in seen_ids or (key and key in seen_text):
            continue
        seen_ids.add(rec.doc_id)
        if key:
            seen_text.add(key)
        kept.append(rec)
    return kept


def filter_abstract_only(records: list[DocumentRecord]) -> list[DocumentRecord]:
    """Drop records whose body text is empty or whitespace."""
    return [r for r in records if r.body_text.strip()]


def detect_language(text: str, threshold: float = ENGLISH_THRESHOLD) -> tuple[str, float]:
    """Classify text as "en" or "other" by English function-word hit rate.

    The rate is measured over the first 2000 tokens; the returned confidence
    is the hit rate itself. Raises DataError on empty/whitespace input.
    """
    if not text or not text.strip():
        raise DataError("cannot detect language of empty text")
    tokens = []
    for m in _TOKEN_RE.finditer(text.lower()):
        tok = m.group()
        if len(tok) >= 2 and any(c.isalpha() for c in tok):
            tokens.append(tok)
            if len(tokens) >= LANG_SAMPLE_TOKENS:
                break
    if not tokens:
        return "other", 0.0
    rate = sum(1 for t in tokens if t in FUNCTION_WORDS) / len(tokens)
    return ("en" if rate >= threshold else "other"), rate


def filter_non_english(
    records: list[DocumentRecord], threshold: float = ENGLISH_THRESHOLD
) -> list[DocumentRecord]:
    kept = []
    for rec in records:
        code, _ = detect_language(rec.body_text, threshold)
        if code == "en":
            kept.append(rec)
    return kept


def clean_corpus(
    records: list[DocumentRecord], english_threshold: float = ENGLISH_THRESHOLD
) -> tuple[list[DocumentRecord], CorpusStats]:
    """Run dedup, abstract-only and language filters; return survivors + counts."""
    n_raw = len(records)
    records = deduplicate(records)
    n_dedup = len(records)
    records = filter_abstract_only(records)
    n_abstract = len(records)
    records = filter_non_english(records, english_threshold)
    stats = CorpusStats(n_raw, n_dedup, n_abstract, len(records))
    return records, stats
