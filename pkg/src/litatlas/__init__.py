"""litatlas: organize a paper corpus into a labeled 2D atlas.

Pipeline: ingest -> tokenize -> tf-idf (X1) -> PCA at 95% variance (X2)
-> k-means labels (elbow-selected k) -> t-SNE 2D embedding (Y) -> atlas JSON.
"""

from litatlas.errors import AtlasError, ConfigError, DataError

__version__ = "0.1.0"

__all__ = ["AtlasError", "ConfigError", "DataError", "__version__"]
