"""Stage runners with cached intermediates.

Each stage writes its artifact into the output directory together with the
hash of the config fields it depends on; loading a predecessor cache checks
that hash and rejects stale files. Running stages one by one therefore
yields byte-identical results to `atlas all` under the same config.
"""

from __future__ import annotations

import json
import logging
import os

import numpy as np

from litatlas import accel, atlas, kmeans, pca, tsne, vectorize
from litatlas.config import PipelineConfig, config_hash, stage_hash
from litatlas.errors import ConfigError, DataError
from litatlas.ingest import CorpusStats, DocumentRecord, clean_corpus, load_corpus
from litatlas.sparse import CsrMatrix
from litatlas.textnorm import load_stoplist, tokenize_corpus

logger = logging.getLogger("litatlas.pipeline")

FILES = {
    "corpus": "corpus.jsonl",
    "stats": "corpus_stats.json",
    "x1": "x1.npz",
    "pca": "pca.npz",
    "elbow_csv": "elbow.csv",
    "elbow": "elbow.json",
    "kmeans": "kmeans.npz",
    "embedding": "embedding.npz",
    "atlas": "atlas.json",
}

_RECORD_KEYS = ("doc_id", "title", "abstract", "body_text", "authors", "journal", "url", "source_file")


def _path(cfg: PipelineConfig, name: str) -> str:
    return os.path.join(cfg.out_dir, FILES[name])


def _require(cfg: PipelineConfig, name: str, stage: str) -> str:
    path = _path(cfg, name)
    if not os.path.exists(path):
        raise DataError(f"missing cache for stage '{stage}'; run `atlas {stage}` first")
    return path


def _check_hash(found: str, cfg: PipelineConfig, stage: str) -> None:
    if found != stage_hash(cfg, stage):
        raise DataError(
            f"stale cache for stage '{stage}' (config changed); re-run `atlas {stage}`"
        )


def _save_npz(cfg: PipelineConfig, name: str, stage: str, **arrays) -> None:
    np.savez(_path(cfg, name), stage_hash=np.array(stage_hash(cfg, stage)), **arrays)


def _load_npz(cfg: PipelineConfig, name: str, stage: str) -> dict:
    path = _require(cfg, name, stage)
    with np.load(path) as data:
        out = {key: data[key] for key in data.files}
    _check_hash(str(out["stage_hash"]), cfg, stage)
    return out


def run_ingest(cfg: PipelineConfig) -> CorpusStats:
    os.makedirs(cfg.out_dir, exist_ok=True)
    records = load_corpus(cfg.input_paths, cfg.input_format)
    records, stats = clean_corpus(records, cfg.english_threshold)
    if not records:
        raise DataError("no records survived corpus cleaning")
    with open(_path(cfg, "corpus"), "w", encoding="utf-8") as fh:
        for rec in records:
            row = {key: getattr(rec, key) for key in _RECORD_KEYS}
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    payload = stats.to_dict() | {"stage_hash": stage_hash(cfg, "ingest")}
    with open(_path(cfg, "stats"), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    logger.info(
        "ingest: %d raw -> %d after cleaning", stats.n_raw, stats.n_after_language_filter
    )
    return stats


def _load_corpus_cache(cfg: PipelineConfig) -> tuple[list[DocumentRecord], dict]:
    stats_path = _require(cfg, "stats", "ingest")
    with open(stats_path, encoding="utf-8") as fh:
        payload = json.load(fh)
    _check_hash(payload.get("stage_hash", ""), cfg, "ingest")
    corpus_path = _require(cfg, "corpus", "ingest")
    records = []
    with open(corpus_path, encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            records.append(DocumentRecord(**row))
    stats = {key: value for key, value in payload.items() if key != "stage_hash"}
    return records, stats


def run_vectorize(cfg: PipelineConfig) -> None:
    records, _ = _load_corpus_cache(cfg)
    stoplist = load_stoplist(cfg.stoplist_path)
    docs = tokenize_corpus(records, stoplist)
    vocab = vectorize.build_vocabulary(docs, cfg.max_features)
    X1 = vectorize.tfidf(docs, vocab)
    _save_npz(
        cfg,
        "x1",
        "vectorize",
        row_offsets=X1.row_offsets,
        col_indices=X1.col_indices,
        values=X1.values,
        shape=np.array([X1.n_rows, X1.n_cols], dtype=np.int64),
        terms=np.array(vocab.terms),
        document_frequency=vocab.document_frequency,
        corpus_frequency=vocab.corpus_frequency,
        doc_ids=np.array([d.doc_id for d in docs]),
    )
    logger.info("vectorize: %d docs x %d terms, %d nonzeros", X1.n_rows, X1.n_cols, X1.nnz)


def _load_x1(cfg: PipelineConfig) -> tuple[CsrMatrix, vectorize.Vocabulary, list[str]]:
    data = _load_npz(cfg, "x1", "vectorize")
    n_rows, n_cols = (int(v) for v in data["shape"])
    X1 = CsrMatrix(n_rows, n_cols, data["row_offsets"], data["col_indices"], data["values"])
    terms = [str(t) for t in data["terms"]]
    vocab = vectorize.Vocabulary(
        terms=terms,
        term_to_index={t: i for i, t in enumerate(terms)},
        document_frequency=data["document_frequency"],
        corpus_frequency=data["corpus_frequency"],
    )
    return X1, vocab, [str(d) for d in data["doc_ids"]]


def run_reduce(cfg: PipelineConfig) -> None:
    X1, _, _ = _load_x1(cfg)
    model = pca.fit_pca(X1, cfg.variance_target)
    X2 = pca.transform(X1, model)
    _save_npz(
        cfg,
        "pca",
        "reduce",
        mean=model.mean,
        components=model.components,
        explained_variance=model.explained_variance,
        explained_variance_ratio=model.explained_variance_ratio,
        n_samples=np.int64(model.n_samples),
        variance_target=np.float64(model.variance_target),
        x2=X2,
    )
    logger.info(
        "reduce: kept d=%d components (%.4f of variance)",
        model.d,
        float(model.explained_variance_ratio.sum()),
    )


def _load_x2(cfg: PipelineConfig) -> np.ndarray:
    return _load_npz(cfg, "pca", "reduce")["x2"]


def run_elbow(cfg: PipelineConfig) -> kmeans.ElbowCurve:
    X2 = _load_x2(cfg)
    n = X2.shape[0]
    if cfg.k_max > n:
        raise ConfigError(
            f"elbow range k_max={cfg.k_max} exceeds corpus size n={n}; "
            "lower k_max or set an explicit --k"
        )
    curve = kmeans.elbow_sweep(
        X2, cfg.k_min, cfg.k_max, cfg.k_step, seed=cfg.stage_seed("elbow"), n_init=cfg.n_init
    )
    kmeans.write_elbow_csv(curve, _path(cfg, "elbow_csv"))
    payload = {"chosen_k": curve.chosen_k, "stage_hash": stage_hash(cfg, "elbow")}
    with open(_path(cfg, "elbow"), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    logger.info("elbow: chose k=%d over k=%d..%d", curve.chosen_k, cfg.k_min, cfg.k_max)
    return curve


def _resolve_k(cfg: PipelineConfig) -> int:
    if cfg.k is not None:
        return cfg.k
    path = _require(cfg, "elbow", "elbow")
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    _check_hash(payload.get("stage_hash", ""), cfg, "elbow")
    return int(payload["chosen_k"])


def run_cluster(cfg: PipelineConfig) -> None:
    X2 = _load_x2(cfg)
    k = _resolve_k(cfg)
    if k > X2.shape[0]:
        raise ConfigError(f"k={k} exceeds corpus size n={X2.shape[0]}")
    model = kmeans.kmeans_fit(
        X2, k, seed=cfg.stage_seed("cluster"), n_init=cfg.n_init
    )
    _save_npz(
        cfg,
        "kmeans",
        "cluster",
        centroids=model.centroids,
        labels=model.labels,
        inertia=np.float64(model.inertia),
        k=np.int64(model.k),
        n_iter_run=np.int64(model.n_iter_run),
    )
    logger.info("cluster: k=%d, inertia %.6g (%d iterations)", k, model.inertia, model.n_iter_run)


def run_embed(cfg: PipelineConfig) -> None:
    X1, _, _ = _load_x1(cfg)
    tcfg = tsne.TsneConfig(**(cfg.tsne.to_dict() | {"seed": cfg.stage_seed("tsne")}))
    X_in = X1
    if cfg.tsne_pre_reduce is not None:
        # speed-over-fidelity deviation: embed a PCA reduction of X1
        logger.warning(
            "embed: pre-reducing X1 to %d dims before t-SNE (deviates from the "
            "faithful raw tf-idf embedding)",
            cfg.tsne_pre_reduce,
        )
        pre = pca.fit_pca(X1, variance_target=1.0)
        keep = min(cfg.tsne_pre_reduce, pre.d)
        pre.components = pre.components[:keep]
        X_in = pca.transform(X1, pre)
    emb = tsne.embed(X_in, tcfg)
    trace = np.array(emb.kl_trace, dtype=np.float64).reshape(-1, 2)
    _save_npz(
        cfg,
        "embedding",
        "embed",
        y=emb.Y,
        final_kl=np.float64(emb.final_kl),
        trace_iters=trace[:, 0].astype(np.int64),
        trace_kl=trace[:, 1],
        tsne_config=np.array(json.dumps(tcfg.to_dict())),
        pre_reduce=np.array(json.dumps(cfg.tsne_pre_reduce)),
    )
    logger.info("embed: %d points, final KL %.4f", emb.Y.shape[0], emb.final_kl)


def run_export(cfg: PipelineConfig) -> str:
    records, stats = _load_corpus_cache(cfg)
    X1, vocab, doc_ids = _load_x1(cfg)
    if [r.doc_id for r in records] != doc_ids:
        raise DataError("corpus and vectorize caches disagree; re-run `atlas vectorize`")
    kdata = _load_npz(cfg, "kmeans", "cluster")
    edata = _load_npz(cfg, "embedding", "embed")
    labels = kdata["labels"]
    Y = edata["y"]
    if labels.shape[0] != len(records) or Y.shape[0] != len(records):
        raise DataError("cache row counts disagree; re-run the mismatched stages")
    k = int(kdata["k"])
    top_terms = atlas.cluster_top_terms(X1, labels, vocab, n_clusters=k)
    provenance = {
        "config_hash": config_hash(cfg),
        "corpus_stats": stats,
        "chosen_k": k,
        "final_kl": float(edata["final_kl"]),
    }
    doc = atlas.build_atlas(records, Y, labels, top_terms, provenance)
    out = _path(cfg, "atlas")
    atlas.write_atlas(doc, out)
    logger.info("export: wrote %s (%d points, %d clusters)", out, len(records), k)
    return out


_STAGES = {
    "ingest": run_ingest,
    "vectorize": run_vectorize,
    "reduce": run_reduce,
    "elbow": run_elbow,
    "cluster": run_cluster,
    "embed": run_embed,
    "export": run_export,
}


def run_stage(name: str, cfg: PipelineConfig):
    cfg.validate()
    accel.set_num_threads(cfg.threads)
    os.makedirs(cfg.out_dir, exist_ok=True)
    return _STAGES[name](cfg)


def run_all(cfg: PipelineConfig) -> str:
    cfg.validate()
    accel.set_num_threads(cfg.threads)
    os.makedirs(cfg.out_dir, exist_ok=True)
    run_ingest(cfg)
    run_vectorize(cfg)
    run_reduce(cfg)
    if cfg.k is None:
        run_elbow(cfg)
    run_cluster(cfg)
    run_embed(cfg)
    return run_export(cfg)
