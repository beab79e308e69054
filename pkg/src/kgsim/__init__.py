"""kgsim: knowledge-graph node similarity and top-K neighbor retrieval.

Four pairwise similarity algorithms over an edge-list graph: taxonomic
class similarity (IDF-weighted shared is-a parents), TransE and ComplEx
graph embeddings, and text-vector cosine over lexicalized nodes. A kNN
index, a REST service and a CLI sit on top.
"""

from .errors import (
    ConfigError,
    KgsimError,
    NotFoundError,
    ParseError,
    UndefinedSimilarityError,
)
from .graph import EdgeRecord, GraphStore, NodeMeta
from .taxonomy import TaxonomyConfig, TaxonomyIndex, build_taxonomy, class_similarity, shared_parents
from .embeddings import (
    EmbeddingTable,
    HashedVectorProvider,
    TrainConfig,
    build_text_table,
    cosine,
    export_vectors,
    ingest_vectors,
    lexicalize,
    train_complex,
    train_transe,
)
from .knn import KnnIndex, NeighborHit, build_index, nearest_neighbors

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "EdgeRecord",
    "EmbeddingTable",
    "GraphStore",
    "HashedVectorProvider",
    "KgsimError",
    "KnnIndex",
    "NeighborHit",
    "NodeMeta",
    "NotFoundError",
    "ParseError",
    "TaxonomyConfig",
    "TaxonomyIndex",
    "TrainConfig",
    "UndefinedSimilarityError",
    "build_index",
    "build_taxonomy",
    "build_text_table",
    "class_similarity",
    "cosine",
    "export_vectors",
    "ingest_vectors",
    "lexicalize",
    "nearest_neighbors",
    "shared_parents",
    "train_complex",
    "train_transe",
]
