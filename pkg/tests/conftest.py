import json
import sys
import os

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return str(path)


ENGLISH_BODY = (
    "The virus spreads through the population and the infection rate rises "
    "when people gather in closed spaces. We measured the viral load of each "
    "patient and found that it was higher in the first week of the illness. "
    "These results suggest that early isolation of patients is an effective "
    "way to slow the outbreak and to protect the most vulnerable people."
)

SPANISH_BODY = (
    "El virus se propaga por la poblacion y la tasa de infeccion aumenta "
    "cuando las personas se reunen en espacios cerrados. Medimos la carga "
    "viral de cada paciente y encontramos que era mayor durante la primera "
    "semana de la enfermedad. Estos resultados sugieren que el aislamiento "
    "temprano de los pacientes es una forma eficaz de frenar el brote."
)


def make_record(doc_id, body=ENGLISH_BODY, **overrides):
    row = {
        "doc_id": doc_id,
        "title": f"Paper {doc_id}",
        "abstract": f"Abstract of {doc_id}",
        "body_text": body,
        "authors": ["Ada Author", "Ben Writer"],
        "journal": "J. Tests",
        "url": f"https://example.org/{doc_id}",
    }
    row.update(overrides)
    return row


GLUE_WORDS = ["the", "of", "and", "in", "to", "is", "that", "for", "with", "as"]


def planted_corpus_rows(n_docs=500, n_topics=5, tokens_per_doc=200, background_rate=0.10, seed=123):
    """Synthetic corpus with disjoint topic vocabularies and shared background.

    English function words are interleaved as glue so the language filter
    keeps the documents; the stoplist removes them before vectorization.
    Returns (rows, true_topic_labels).
    """
    rng = np.random.default_rng(seed)
    topics = [[f"topic{t}term{i}" for i in range(40)] for t in range(n_topics)]
    background = [f"shared{i}" for i in range(30)]
    rows, truth = [], []
    for d in range(n_docs):
        t = d % n_topics
        truth.append(t)
        toks = []
        for _ in range(tokens_per_doc):
            toks.append(GLUE_WORDS[rng.integers(len(GLUE_WORDS))])
            if rng.random() < background_rate:
                toks.append(background[rng.integers(len(background))])
            else:
                toks.append(topics[t][rng.integers(len(topics[t]))])
        rows.append(
            make_record(f"doc{d:04d}", body=" ".join(toks), title=f"Study {d:04d}")
        )
    return rows, truth


def blob_data(seed, n_blobs=20, per_blob=50, dim=10, radius=9.0, min_sep=10.0):
    """Well-separated unit-variance Gaussian blobs; centers on a sphere so
    pairwise separations stay comparable (all >= min_sep sigma)."""
    rng = np.random.default_rng(seed)
    centers = []
    while len(centers) < n_blobs:
        v = rng.normal(size=dim)
        cand = radius * v / np.linalg.norm(v)
        if all(np.linalg.norm(cand - c) >= min_sep for c in centers):
            centers.append(cand)
    X = np.vstack([c + rng.normal(size=(per_blob, dim)) for c in centers])
    labels = np.repeat(np.arange(n_blobs), per_blob)
    return X, labels


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one pass/fail line per acceptance criterion."""
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if "test_acceptance.py" in getattr(rep, "nodeid", ""):
                name = rep.nodeid.split("::")[-1]
                lines.append((name, status))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(lines):
            mark = "PASS" if status == "passed" else "FAIL"
            terminalreporter.write_line(f"[{mark}] {name}")
