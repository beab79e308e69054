"""Dense per-node vector tables with text-file round-trip and cosine."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import NotFoundError, ParseError, UndefinedSimilarityError

KINDS = ("transe", "complex", "text")


@dataclass
class EmbeddingTable:
    """node-id -> vector map plus relation vectors for trained models.

    ``dim`` counts model dimensions; for kind="complex" the stored vector
    holds 2*dim reals laid out [re_0..re_{d-1}, im_0..im_{d-1}].
    """

    kind: str
    dim: int
    vectors: dict[str, np.ndarray] = field(default_factory=dict)
    relations: dict[str, np.ndarray] = field(default_factory=dict)
    epoch_losses: list[float] = field(default_factory=list)
    norm: str = "L2"  # TransE distance norm; ignored by other kinds

    @property
    def storage_dim(self) -> int:
        return 2 * self.dim if self.kind == "complex" else self.dim

    def vector(self, node: str) -> np.ndarray:
        try:
            return self.vectors[node]
        except KeyError:
            raise NotFoundError(f"node {node!r} has no {self.kind} vector") from None

    def __contains__(self, node: str) -> bool:
        return node in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


def cosine(table: EmbeddingTable, a: str, b: str) -> float:
    """Cosine similarity of the stored vectors of a and b, in [-1, 1]."""
    u = table.vector(a)
    v = table.vector(b)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        zero = a if nu == 0.0 else b
        raise UndefinedSimilarityError(f"node {zero!r} has a zero vector")
    if a == b:
        return 1.0
    value = float(np.dot(u, v) / (nu * nv))
    return max(-1.0, min(1.0, value))


def ingest_vectors(path: str, kind: str) -> EmbeddingTable:
    """Load a tab-separated vector file (node_id then floats, no header).

    The first line fixes the dimension; later lines must match it and
    node ids must be unique.
    """
    if kind not in KINDS:
        raise ParseError(f"unknown embedding kind {kind!r}", 0)
    vectors: dict[str, np.ndarray] = {}
    width: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) < 2:
                raise ParseError("expected a node id and at least one float", lineno)
            node_id = cols[0]
            try:
                values = [float(c) for c in cols[1:]]
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            if width is None:
                width = len(values)
                if kind == "complex" and width % 2 != 0:
                    raise ParseError(
                        "complex tables need an even number of components", lineno
                    )
            elif len(values) != width:
                raise ParseError(
                    f"expected {width} components, got {len(values)}", lineno
                )
            if node_id in vectors:
                raise ParseError(f"duplicate node id {node_id!r}", lineno)
            vectors[node_id] = np.asarray(values, dtype=np.float64)
    if width is None:
        raise ParseError("vector file is empty", 1)
    dim = width // 2 if kind == "complex" else width
    return EmbeddingTable(kind=kind, dim=dim, vectors=vectors)


def export_vectors(table: EmbeddingTable, path: str) -> None:
    """Write node vectors in the ingest format; floats round-trip exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        for node_id, vec in table.vectors.items():
            floats = "\t".join(repr(float(x)) for x in vec)
            fh.write(f"{node_id}\t{floats}\n")


def export_relations(table: EmbeddingTable, path: str) -> None:
    """Write relation vectors in the same format (trained tables only)."""
    with open(path, "w", encoding="utf-8") as fh:
        for rel_id, vec in table.relations.items():
            floats = "\t".join(repr(float(x)) for x in vec)
            fh.write(f"{rel_id}\t{floats}\n")


def norms_near_unit(table: EmbeddingTable, tol: float = 1e-6) -> bool:
    """True when every node vector has L2 norm within tol of 1."""
    return all(
        math.isclose(float(np.linalg.norm(v)), 1.0, abs_tol=tol)
        for v in table.vectors.values()
    )
