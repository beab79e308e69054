"""REST service for similarity comparison, neighbor retrieval and search.

All indices are loaded (or built from the graph) once at startup and never
mutated afterwards, so request handling needs no locks. Every endpoint is
a GET and returns JSON; errors use {"error": "<message>"} with 400/404.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import (
    ConfigError,
    KgsimError,
    NotFoundError,
    UndefinedSimilarityError,
)
from .graph import GraphStore
from .taxonomy import TaxonomyIndex, build_taxonomy, class_similarity, shared_parents
from .embeddings import EmbeddingTable, cosine, ingest_vectors
from .knn import KnnIndex, build_index, hits_to_json, nearest_neighbors

ALGORITHMS = ("class", "transe", "complex", "text")
PORT_ENV_VAR = "KGSIM_PORT"


@dataclass
class ServiceConfig:
    graph: str = ""
    taxonomy: str = ""  # optional snapshot; built from the graph when empty
    transe_vectors: str = ""
    complex_vectors: str = ""
    text_vectors: str = ""
    knn_index: str = ""  # optional snapshot for the default neighbors table
    host: str = "127.0.0.1"
    port: int = 8080
    default_k: int = 5
    metric: str = "euclidean"
    algorithms: tuple[str, ...] = ALGORITHMS
    static_dir: str = ""

    def __post_init__(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ConfigError("port must be in [1, 65535]")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {alg!r}")


def load_config(path: str) -> ServiceConfig:
    """Parse the `key = value` config file format."""
    values: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"expected 'key = value', got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key in ("port", "default_k"):
                values[key] = int(value)
            elif key == "algorithms":
                values[key] = tuple(a.strip() for a in value.split(",") if a.strip())
            else:
                values[key] = value
    unknown = set(values) - set(ServiceConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return ServiceConfig(**values)  # type: ignore[arg-type]


@dataclass
class ServiceContext:
    """Everything a request handler reads; immutable after startup."""

    config: ServiceConfig
    store: GraphStore
    taxonomy: TaxonomyIndex
    tables: dict[str, EmbeddingTable] = field(default_factory=dict)
    indices: dict[str, KnnIndex] = field(default_factory=dict)


def build_context(config: ServiceConfig) -> ServiceContext:
    """Load the graph and artifacts named in the config; build what's missing."""
    if not config.graph:
        raise ConfigError("config needs a graph file")
    store = GraphStore()
    store.ingest_edges(config.graph)
    store.freeze()

    if config.taxonomy and os.path.exists(config.taxonomy):
        taxonomy = TaxonomyIndex.load(config.taxonomy)
    else:
        taxonomy = build_taxonomy(store)

    tables: dict[str, EmbeddingTable] = {}
    for kind, path in (
        ("transe", config.transe_vectors),
        ("complex", config.complex_vectors),
        ("text", config.text_vectors),
    ):
        if path:
            tables[kind] = ingest_vectors(path, kind)

    labels = {n: store.label_of(n) for n in store.node_ids()}
    indices: dict[str, KnnIndex] = {}
    for kind, table in tables.items():
        if kind == "complex" and config.knn_index and os.path.exists(config.knn_index):
            indices[kind] = KnnIndex.load(config.knn_index)
        else:
            indices[kind] = build_index(
                table, metric=config.metric, mode="exact", labels=labels
            )
    return ServiceContext(config, store, taxonomy, tables, indices)


def similarity_report(ctx: ServiceContext, q1: str, q2: str, explain: bool) -> dict:
    scores: dict[str, float | None] = {}
    for alg in ctx.config.algorithms:
        if alg == "class":
            scores[alg] = class_similarity(ctx.taxonomy, q1, q2)
        elif alg in ctx.tables:
            table = ctx.tables[alg]
            if q1 in table and q2 in table:
                try:
                    scores[alg] = cosine(table, q1, q2)
                except UndefinedSimilarityError:
                    scores[alg] = None
            else:
                scores[alg] = None
    report = {
        "qnode1": q1,
        "qnode2": q2,
        "scores": scores,
        "labels": {
            q1: ctx.store.label_of(q1),
            q2: ctx.store.label_of(q2),
        },
    }
    if explain:
        report["shared_parents"] = [
            {"qnode": c, "label": ctx.store.label_of(c), "idf": idf}
            for c, idf in shared_parents(ctx.taxonomy, q1, q2)
        ]
    return report


def create_app(ctx: ServiceContext) -> FastAPI:
    app = FastAPI(title="kgsim", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )

    def error(status: int, message: str) -> JSONResponse:
        return JSONResponse({"error": message}, status_code=status)

    @app.exception_handler(KgsimError)
    async def _kgsim_error(_request: Request, exc: KgsimError):
        status = 404 if isinstance(exc, NotFoundError) else 400
        return error(status, str(exc))

    @app.get("/similarity")
    def similarity(request: Request):
        q1 = request.query_params.get("q1")
        q2_params = request.query_params.getlist("q2")
        q2_ids = [x for p in q2_params for x in p.split(",") if x]
        if not q1 or not q2_ids:
            return error(400, "q1 and at least one q2 are required")
        if not ctx.store.has_node(q1):
            return error(404, f"unknown node {q1!r}")
        explain = request.query_params.get("explain") == "1"
        return [similarity_report(ctx, q1, q2, explain) for q2 in q2_ids]

    @app.get("/nearest-neighbors")
    def neighbors(request: Request):
        qnode = request.query_params.get("qnode")
        if not qnode:
            return error(400, "qnode is required")
        raw_k = request.query_params.get("k")
        try:
            k = int(raw_k) if raw_k is not None else ctx.config.default_k
        except ValueError:
            return error(400, f"k must be an integer, got {raw_k!r}")
        if k <= 0:
            return error(400, "k must be >= 1")
        table = request.query_params.get("table", "complex")
        index = ctx.indices.get(table)
        if index is None:
            return error(400, f"no index loaded for table {table!r}")
        hits = nearest_neighbors(index, qnode, k)
        return Response(hits_to_json(hits), media_type="application/json")

    @app.get("/search")
    def search(request: Request):
        query = request.query_params.get("q", "")
        try:
            limit = int(request.query_params.get("limit", "10"))
        except ValueError:
            return error(400, "limit must be an integer")
        if limit < 1:
            return error(400, "limit must be >= 1")
        if not query.strip():
            return JSONResponse([])
        results = ctx.store.search_labels(query, limit)
        return [
            {
                "qnode": node_id,
                "label": label,
                "description": (ctx.store.meta[node_id].description or ""),
            }
            for node_id, label, _ in results
        ]

    if ctx.config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ctx.config.static_dir, html=True))
    return app


def serve(config: ServiceConfig) -> None:
    """Build the context, then listen; loading finishes before accepting."""
    import uvicorn

    ctx = build_context(config)
    app = create_app(ctx)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
