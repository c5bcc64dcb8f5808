"""Conditional random field named-entity tagger for Bulgarian-style BIO corpora."""

from bgner._core import (
    ConfigError,
    DataError,
    RunConfig,
    Tagger,
    build_mi_table,
    evaluate,
    load,
    spans,
    train,
)

__version__ = "1.0.0"

__all__ = [
    "ConfigError",
    "DataError",
    "RunConfig",
    "Tagger",
    "build_mi_table",
    "evaluate",
    "load",
    "spans",
    "train",
]
