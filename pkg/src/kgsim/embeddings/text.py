"""Lexicalized node sentences and pluggable sentence-vector providers.

A vector provider turns a sentence into a fixed-dimension vector. Real
deployments ingest vectors produced by an external language model; the
built-in provider hashes tokens into signed buckets so the whole pipeline
runs with no model at all.
"""

from __future__ import annotations

import hashlib

import numpy as np

from ..graph import GraphStore, METADATA_PROPERTIES, tokenize
from .table import EmbeddingTable


def lexicalize(store: GraphStore, node: str) -> str:
    """Render a node's label, description and outgoing edges as a sentence.

    Ids stand in verbatim wherever a label is missing; a node the graph
    knows nothing about renders as its bare id.
    """
    meta = store.meta.get(node)
    label = meta.label if meta and meta.label else node
    edges = store.outgoing_edges(node)
    if meta is None and not edges:
        return node

    head = label
    if meta and meta.description:
        head += f", {meta.description}"
    parts = [head + "."]
    for edge in edges:
        if edge.property in METADATA_PROPERTIES:
            continue
        prop_label = store.label_of(edge.property) or edge.property
        object_label = store.label_of(edge.node2) or edge.node2
        parts.append(f"{label} {prop_label} {object_label}.")
    return " ".join(parts)


class HashedVectorProvider:
    """Signed hashed bag-of-tokens sentence vectors, L2-normalized.

    Deterministic across processes (token hashes come from md5, not the
    per-process string hash).
    """

    def __init__(self, dim: int = 64):
        self.dim = dim

    def vector(self, sentence: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        for token in tokenize(sentence):
            digest = hashlib.md5(token.encode("utf-8")).digest()
            bucket = int.from_bytes(digest[:4], "little") % self.dim
            sign = 1.0 if digest[4] & 1 else -1.0
            vec[bucket] += sign
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            # Empty or fully cancelled sentence: fall back to a constant
            # direction so cosine stays defined.
            vec[0] = 1.0
            return vec
        return vec / norm


def build_text_table(
    store: GraphStore, provider: HashedVectorProvider | None = None
) -> EmbeddingTable:
    """Lexicalize every node in the store and embed it with the provider."""
    provider = provider or HashedVectorProvider()
    table = EmbeddingTable(kind="text", dim=provider.dim)
    for node in sorted(store.node_ids()):
        table.vectors[node] = provider.vector(lexicalize(store, node))
    return table
