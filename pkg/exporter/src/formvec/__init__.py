"""formvec: per-form mean-pooled contextual embeddings for CoNLL-U corpora."""

__version__ = "0.1.0"

from .exporter import ExportConfig, ExportStats, LayerChoice, TokenizationMismatch, export
from .reader import read_sentences

__all__ = [
    "ExportConfig",
    "ExportStats",
    "LayerChoice",
    "TokenizationMismatch",
    "export",
    "read_sentences",
]
