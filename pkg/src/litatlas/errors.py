"""Exception types mapped to CLI exit codes (1 config, 2 data, 3 internal)."""


class AtlasError(Exception):
    """Base class for all litatlas errors."""


class ConfigError(AtlasError):
    """Invalid configuration or usage. CLI exit code 1."""


class DataError(AtlasError):
    """Bad or missing input data, unreadable files, stale caches. CLI exit code 2."""
