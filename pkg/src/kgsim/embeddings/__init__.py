"""Node embeddings: trained graph models, ingested text vectors, cosine."""

from .table import EmbeddingTable, cosine, ingest_vectors, export_vectors
from .text import HashedVectorProvider, build_text_table, lexicalize
from .training import (
    TrainConfig,
    complex_score,
    hits_at_k,
    random_table,
    train_complex,
    train_transe,
)

__all__ = [
    "EmbeddingTable",
    "HashedVectorProvider",
    "TrainConfig",
    "build_text_table",
    "complex_score",
    "cosine",
    "export_vectors",
    "hits_at_k",
    "ingest_vectors",
    "lexicalize",
    "random_table",
    "train_complex",
    "train_transe",
]
