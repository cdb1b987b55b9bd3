"""Pipeline configuration: file loading, validation, hashing, seed fan-out.

Every cache file carries the hash of the config fields its stage depends
on, so a parameter change invalidates exactly the affected stages. The
output directory and thread count are execution knobs, not pipeline
parameters, and never enter a hash. The stoplist file is hashed by content.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields

from litatlas.errors import ConfigError, DataError
from litatlas.ingest import INPUT_FORMATS
from litatlas.tsne import TsneConfig

# fixed offsets fanning the global seed out to the seeded stages
SEED_OFFSETS = {"elbow": 101, "cluster": 211, "tsne": 307}

STAGES = ("ingest", "vectorize", "reduce", "elbow", "cluster", "embed", "export")


@dataclass
class PipelineConfig:
    input_paths: list[str] = field(default_factory=list)
    input_format: str = "jsonl"
    stoplist_path: str | None = None
    english_threshold: float = 0.20
    max_features: int = 4096
    variance_target: float = 0.95
    k: int | None = None  # override; when unset, the elbow picks k
    k_min: int = 2
    k_max: int = 40
    k_step: int = 2
    n_init: int = 10
    tsne: TsneConfig = field(default_factory=TsneConfig)
    # deviation switch: embed a PCA-reduced X1 (this many dims) instead of
    # raw tf-idf rows; off by default, trades fidelity for speed
    tsne_pre_reduce: int | None = None
    seed: int = 0
    out_dir: str = "atlas_out"
    threads: int = 1

    def validate(self) -> None:
        if not self.input_paths:
            raise ConfigError("config needs at least one input path")
        if self.input_format not in INPUT_FORMATS:
            raise ConfigError(
                f"input_format must be one of {INPUT_FORMATS}, got {self.input_format!r}"
            )
        if not 0.0 <= self.english_threshold <= 1.0:
            raise ConfigError("english_threshold must be in [0, 1]")
        if self.max_features < 1:
            raise ConfigError("max_features must be >= 1")
        if not 0.0 < self.variance_target <= 1.0:
            raise ConfigError("variance_target must be in (0, 1]")
        if self.k is not None and self.k < 1:
            raise ConfigError("k override must be >= 1")
        if not 1 <= self.k_min < self.k_max:
            raise ConfigError("need 1 <= k_min < k_max")
        if self.k_step < 1:
            raise ConfigError("k_step must be >= 1")
        if self.n_init < 1:
            raise ConfigError("n_init must be >= 1")
        if self.tsne_pre_reduce is not None and self.tsne_pre_reduce < 2:
            raise ConfigError("tsne_pre_reduce must be >= 2 when set")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.tsne.perplexity <= 0 or not 0.0 <= self.tsne.theta < 1.0:
            raise ConfigError("tsne: perplexity must be > 0 and theta in [0, 1)")
        if self.tsne.n_iter < 1 or self.tsne.learning_rate <= 0:
            raise ConfigError("tsne: n_iter must be >= 1 and learning_rate > 0")
        if self.tsne.init not in ("gaussian-1e-4", "pca-2d"):
            raise ConfigError(f"tsne: unknown init {self.tsne.init!r}")

    def stage_seed(self, stage: str) -> int:
        return self.seed + SEED_OFFSETS[stage]

    def to_dict(self) -> dict:
        return {
            "input_paths": list(self.input_paths),
            "input_format": self.input_format,
            "stoplist_path": self.stoplist_path,
            "english_threshold": self.english_threshold,
            "max_features": self.max_features,
            "variance_target": self.variance_target,
            "k": self.k,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "k_step": self.k_step,
            "n_init": self.n_init,
            "tsne": self.tsne.to_dict(),
            "tsne_pre_reduce": self.tsne_pre_reduce,
            "seed": self.seed,
            "out_dir": self.out_dir,
            "threads": self.threads,
        }


_TSNE_KEYS = {f.name for f in fields(TsneConfig)}
_CONFIG_KEYS = {f.name for f in fields(PipelineConfig)}


def config_from_dict(data: dict) -> PipelineConfig:
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    data = dict(data)
    tsne_data = data.pop("tsne", {})
    if not isinstance(tsne_data, dict):
        raise ConfigError("config key 'tsne' must be a table/object")
    unknown = set(tsne_data) - _TSNE_KEYS
    if unknown:
        raise ConfigError(f"unknown tsne config keys: {sorted(unknown)}")
    if "seed" in tsne_data:
        raise ConfigError("tsne.seed is not configurable; it derives from the global seed")
    try:
        cfg = PipelineConfig(tsne=TsneConfig(**tsne_data), **data)
    except TypeError as exc:
        raise ConfigError(f"bad config: {exc}") from exc
    return cfg


def load_config(path: str) -> PipelineConfig:
    """Read a TOML or JSON config file (chosen by extension)."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if path.endswith(".toml"):
        try:
            import tomllib  # py311+
        except ImportError:
            import tomli as tomllib
        try:
            data = tomllib.loads(raw.decode("utf-8"))
        except Exception as exc:
            raise ConfigError(f"{path} is not valid TOML: {exc}") from exc
    elif path.endswith(".json"):
        try:
            data = json.loads(raw.decode("utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    else:
        raise ConfigError(f"config file must end in .toml or .json: {path}")
    return config_from_dict(data)


def _stoplist_digest(cfg: PipelineConfig) -> str:
    if cfg.stoplist_path is None:
        return "builtin"
    try:
        with open(cfg.stoplist_path, "rb") as fh:
            return hashlib.sha256(fh.read()).hexdigest()
    except OSError as exc:
        raise DataError(f"cannot read stoplist file {cfg.stoplist_path}: {exc}") from exc


def _hash_params(params: dict) -> str:
    canon = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _stage_params(cfg: PipelineConfig, stage: str) -> dict:
    ingest = {
        "input_paths": list(cfg.input_paths),
        "input_format": cfg.input_format,
        "english_threshold": cfg.english_threshold,
    }
    if stage == "ingest":
        return ingest
    vectorize = ingest | {
        "stoplist": _stoplist_digest(cfg),
        "max_features": cfg.max_features,
    }
    if stage == "vectorize":
        return vectorize
    reduce_ = vectorize | {"variance_target": cfg.variance_target}
    if stage == "reduce":
        return reduce_
    if stage == "elbow":
        return reduce_ | {
            "k_min": cfg.k_min,
            "k_max": cfg.k_max,
            "k_step": cfg.k_step,
            "n_init": cfg.n_init,
            "seed": cfg.seed,
        }
    if stage == "cluster":
        return reduce_ | {
            "k": cfg.k,
            "k_min": cfg.k_min,
            "k_max": cfg.k_max,
            "k_step": cfg.k_step,
            "n_init": cfg.n_init,
            "seed": cfg.seed,
        }
    tsne_params = cfg.tsne.to_dict()
    del tsne_params["seed"]  # effective t-SNE seed derives from the global seed
    if stage == "embed":
        return vectorize | {
            "tsne": tsne_params,
            "tsne_pre_reduce": cfg.tsne_pre_reduce,
            "seed": cfg.seed,
        }
    if stage == "export":
        return _stage_params(cfg, "cluster") | {
            "tsne": tsne_params,
            "tsne_pre_reduce": cfg.tsne_pre_reduce,
        }
    raise ValueError(f"unknown stage {stage!r}")


def stage_hash(cfg: PipelineConfig, stage: str) -> str:
    return _hash_params(_stage_params(cfg, stage))


def config_hash(cfg: PipelineConfig) -> str:
    """Hash of every pipeline parameter (out_dir and threads excluded)."""
    return stage_hash(cfg, "export")
