"""Top-K nearest-neighbor retrieval over an embedding table.

Exact mode scans all vectors; partitioned mode is an inverted-file index:
seeded k-means places centroids, every vector joins its nearest centroid's
partition, and queries scan only the `probes` closest partitions. Scores
are distances (smaller = more similar): euclidean L2 or cosine distance
(1 - cosine similarity).
"""

from __future__ import annotations

import json
import pickle
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NotFoundError
from .embeddings.table import EmbeddingTable

METRICS = ("euclidean", "cosine")
_KMEANS_ITERATIONS = 25


@dataclass
class NeighborHit:
    """One retrieved neighbor: node id, distance, display label."""

    qnode: str
    score: float
    label: str = ""


class KnnIndex:
    def __init__(
        self,
        metric: str,
        ids: list[str],
        matrix: np.ndarray,
        labels: dict[str, str],
        centroids: np.ndarray | None = None,
        partitions: list[list[int]] | None = None,
        probes: int = 1,
    ):
        self.metric = metric
        self.ids = ids
        self.matrix = matrix
        self.labels = labels
        self.centroids = centroids
        self.partitions = partitions
        self.probes = probes
        self._row_of = {node: i for i, node in enumerate(ids)}

    @property
    def mode(self) -> str:
        return "exact" if self.centroids is None else "partitioned"

    def save(self, path: str) -> None:
        payload = {
            "metric": self.metric,
            "ids": self.ids,
            "matrix": self.matrix,
            "labels": dict(sorted(self.labels.items())),
            "centroids": self.centroids,
            "partitions": self.partitions,
            "probes": self.probes,
        }
        with open(path, "wb") as fh:
            pickle.dump(payload, fh, protocol=4)

    @classmethod
    def load(cls, path: str) -> "KnnIndex":
        with open(path, "rb") as fh:
            p = pickle.load(fh)
        return cls(
            p["metric"], p["ids"], p["matrix"], p["labels"],
            p["centroids"], p["partitions"], p["probes"],
        )


def _distances(metric: str, matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    if metric == "euclidean":
        return np.linalg.norm(matrix - query[None, :], axis=1)
    # Cosine distance; vectors were normalized at build time.
    return 1.0 - matrix @ query


def _kmeans(matrix, n_partitions, seed):
    rng = np.random.default_rng(seed)
    n = len(matrix)
    centroids = matrix[rng.choice(n, size=n_partitions, replace=False)].copy()
    assign = np.zeros(n, dtype=np.int64)
    for _ in range(_KMEANS_ITERATIONS):
        d2 = ((matrix[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)
        dist_to_own = d2[np.arange(n), assign]
        for c in range(n_partitions):
            members = assign == c
            if members.any():
                centroids[c] = matrix[members].mean(axis=0)
            else:
                # Re-seed an empty cluster from the farthest point.
                far = int(dist_to_own.argmax())
                centroids[c] = matrix[far]
                assign[far] = c
                dist_to_own[far] = 0.0
    return centroids, assign


def build_index(
    table: EmbeddingTable,
    metric: str = "euclidean",
    mode: str = "exact",
    n_partitions: int = 8,
    seed: int = 42,
    probes: int = 1,
    labels: dict[str, str] | None = None,
) -> KnnIndex:
    """Index a table for neighbor queries; deterministic for a given seed."""
    if metric not in METRICS:
        raise ConfigError(f"unknown metric {metric!r}")
    if len(table) == 0:
        raise ConfigError("cannot index an empty table")
    ids = list(table.vectors)
    matrix = np.stack([table.vectors[n] for n in ids]).astype(np.float64)
    if metric == "cosine":
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        if (norms == 0.0).any():
            raise ConfigError("cosine index requires non-zero vectors")
        matrix = matrix / norms
    label_map = {n: (labels or {}).get(n, "") for n in ids}

    if mode == "exact":
        return KnnIndex(metric, ids, matrix, label_map)
    if mode != "partitioned":
        raise ConfigError(f"unknown mode {mode!r}")
    if n_partitions < 1 or n_partitions > len(ids):
        raise ConfigError("n_partitions must be in [1, node count]")
    if probes < 1 or probes > n_partitions:
        raise ConfigError("probes must be in [1, n_partitions]")
    centroids, assign = _kmeans(matrix, n_partitions, seed)
    partitions = [np.flatnonzero(assign == c).tolist() for c in range(n_partitions)]
    return KnnIndex(metric, ids, matrix, label_map, centroids, partitions, probes)


def nearest_neighbors(
    index: KnnIndex, qnode: str, k: int, probes: int | None = None
) -> list[NeighborHit]:
    """k closest nodes to qnode, ascending distance, the query excluded.

    Ties break by node id; fewer than k hits come back when the table is
    small. `probes` overrides the index default (partitioned mode).
    """
    if k < 1:
        raise ConfigError("k must be >= 1")
    row = index._row_of.get(qnode)
    if row is None:
        raise NotFoundError(f"node {qnode!r} is not indexed")
    query = index.matrix[row]

    if index.mode == "exact":
        candidates = range(len(index.ids))
        dists = _distances(index.metric, index.matrix, query)
    else:
        n_probe = index.probes if probes is None else probes
        if n_probe < 1 or n_probe > len(index.partitions):
            raise ConfigError("probes must be in [1, n_partitions]")
        cd = np.linalg.norm(index.centroids - query[None, :], axis=1)
        probe_order = np.argsort(cd, kind="stable")[:n_probe]
        candidates = [
            i for c in probe_order for i in index.partitions[int(c)]
        ]
        dists = _distances(index.metric, index.matrix[candidates], query)

    scored = sorted(
        (
            (float(d), index.ids[i])
            for i, d in zip(candidates, dists)
            if index.ids[i] != qnode
        ),
        key=lambda p: (p[0], p[1]),
    )
    return [
        NeighborHit(qnode=n, score=d, label=index.labels.get(n, ""))
        for d, n in scored[:k]
    ]


def hits_to_json(hits: list[NeighborHit]) -> str:
    """Canonical JSON for neighbor hits; the service and CLI share it so
    their outputs are byte-identical."""
    payload = [
        {"qnode": h.qnode, "score": h.score, "label": h.label} for h in hits
    ]
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))
