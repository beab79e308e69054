"""Batch driver: ingest graphs, build artifacts, run queries, serve.

Exit codes: 0 success, 1 usage error, 2 data error. Query verbs print
tab-separated rows by default and the service's JSON with --json; the
neighbors JSON output is byte-identical to GET /nearest-neighbors.

Artifacts live in a flat output directory:
    out/taxonomy.bin           is-a closure + idf snapshot
    out/transe.tsv(.rel.tsv)   entity (relation) vectors, text format
    out/complex.tsv(.rel.tsv)  same for ComplEx
    out/text.tsv               text vectors
    out/knn_<kind>.bin         kNN index snapshot
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import KgsimError, NotFoundError
from .graph import GraphStore
from .taxonomy import TaxonomyConfig, TaxonomyIndex, build_taxonomy
from .embeddings import (
    HashedVectorProvider,
    TrainConfig,
    build_text_table,
    export_vectors,
    ingest_vectors,
    lexicalize,
    train_complex,
    train_transe,
)
from .embeddings.table import export_relations
from .knn import KnnIndex, build_index, hits_to_json, nearest_neighbors
from .service import (
    PORT_ENV_VAR,
    ServiceConfig,
    build_context,
    load_config,
    serve,
    similarity_report,
)

_COMPACT = {"ensure_ascii": False, "separators": (",", ":")}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad usage; the CLI contract wants 1."""

    def error(self, message):
        raise UsageError(message)


def _load_store(path: str) -> GraphStore:
    store = GraphStore()
    store.ingest_edges(path)
    return store.freeze()


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--margin", type=float, default=1.0)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--norm", choices=["L1", "L2"], default="L2")


def _build_parser() -> _Parser:
    parser = _Parser(prog="kgsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("ingest", help="load an edge file and report the row count")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("build-taxonomy", help="build and save the is-a closure")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--subclass-prop", default="P279")
    p.add_argument("--instance-prop", default="P31")

    p = sub.add_parser("train", help="train graph embeddings")
    p.add_argument("--graph", required=True)
    p.add_argument("--model", choices=["transe", "complex"], required=True)
    p.add_argument("--out", required=True, help="output directory")
    _add_train_flags(p)

    p = sub.add_parser("lexicalize", help="render nodes as sentences")
    p.add_argument("--graph", required=True)
    p.add_argument("--node")
    p.add_argument("--all", action="store_true")
    p.add_argument("--embed-out", help="write hashed text vectors for all nodes")
    p.add_argument("--dim", type=int, default=64)

    p = sub.add_parser("ingest-vectors", help="validate and store a vector file")
    p.add_argument("--path", required=True)
    p.add_argument("--kind", choices=["transe", "complex", "text"], required=True)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("build-index", help="build and save a kNN index")
    p.add_argument("--vectors", required=True)
    p.add_argument("--kind", choices=["transe", "complex", "text"], required=True)
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--graph", help="resolve labels from this edge file")
    p.add_argument("--metric", choices=["euclidean", "cosine"], default="euclidean")
    p.add_argument("--mode", choices=["exact", "partitioned"], default="exact")
    p.add_argument("--partitions", type=int, default=8)
    p.add_argument("--probes", type=int, default=1)
    p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("similarity", help="score node pairs")
    p.add_argument("--graph", required=True)
    p.add_argument("--q1", required=True)
    p.add_argument("--q2", required=True, help="comma-separated secondary ids")
    p.add_argument("--taxonomy", default="")
    p.add_argument("--transe", default="")
    p.add_argument("--complex", dest="complex_", default="")
    p.add_argument("--text", default="")
    p.add_argument("--explain", action="store_true")
    _add_format_flags(p)

    p = sub.add_parser("neighbors", help="top-k nearest neighbors")
    p.add_argument("--index", required=True, help="kNN index snapshot")
    p.add_argument("--qnode", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--probes", type=int)
    _add_format_flags(p)

    p = sub.add_parser("search", help="free-text label search")
    p.add_argument("--graph", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--limit", type=int, default=10)
    _add_format_flags(p)

    p = sub.add_parser("serve", help="run the REST service")
    p.add_argument("--config", required=True)
    p.add_argument("--port", type=int)

    return parser


def _add_format_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.add_argument("--json", dest="json_flag", action="store_true")


def _format(args) -> str:
    return "json" if getattr(args, "json_flag", False) else args.format


def _cmd_ingest(args) -> int:
    store = _load_store(args.graph)
    print(len(store.edges))
    return 0


def _cmd_build_taxonomy(args) -> int:
    store = _load_store(args.graph)
    config = TaxonomyConfig(args.subclass_prop, args.instance_prop)
    index = build_taxonomy(store, config)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "taxonomy.bin")
    index.save(path)
    print(f"{path}\tnodes={index.n_nodes}\tclasses={len(index.idf)}")
    return 0


def _cmd_train(args) -> int:
    store = _load_store(args.graph)
    config = TrainConfig(
        dim=args.dim,
        epochs=args.epochs,
        learning_rate=args.lr,
        margin=args.margin,
        negatives=args.negatives,
        batch_size=args.batch,
        seed=args.seed,
        norm=args.norm,
    )
    trainer = train_transe if args.model == "transe" else train_complex
    table = trainer(store, config)
    os.makedirs(args.out, exist_ok=True)
    vec_path = os.path.join(args.out, f"{args.model}.tsv")
    rel_path = os.path.join(args.out, f"{args.model}.rel.tsv")
    export_vectors(table, vec_path)
    export_relations(table, rel_path)
    print(f"{vec_path}\tepochs={config.epochs}\tfinal_loss={table.epoch_losses[-1]}")
    return 0


def _cmd_lexicalize(args) -> int:
    store = _load_store(args.graph)
    if args.node:
        print(lexicalize(store, args.node))
    elif args.all:
        for node in sorted(store.node_ids()):
            print(f"{node}\t{lexicalize(store, node)}")
    if args.embed_out:
        table = build_text_table(store, HashedVectorProvider(args.dim))
        export_vectors(table, args.embed_out)
        print(f"{args.embed_out}\tnodes={len(table)}\tdim={table.dim}")
    elif not args.node and not args.all:
        raise UsageError("lexicalize needs --node, --all or --embed-out")
    return 0


def _cmd_ingest_vectors(args) -> int:
    table = ingest_vectors(args.path, args.kind)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"{args.kind}.tsv")
    export_vectors(table, path)
    print(f"{path}\tnodes={len(table)}\tdim={table.dim}")
    return 0


def _cmd_build_index(args) -> int:
    table = ingest_vectors(args.vectors, args.kind)
    labels = None
    if args.graph:
        store = _load_store(args.graph)
        labels = {n: store.label_of(n) for n in store.node_ids()}
    index = build_index(
        table,
        metric=args.metric,
        mode=args.mode,
        n_partitions=args.partitions,
        seed=args.seed,
        probes=args.probes,
        labels=labels,
    )
    index.save(args.out)
    print(f"{args.out}\tnodes={len(index.ids)}\tmode={index.mode}")
    return 0


def _cmd_similarity(args) -> int:
    config = ServiceConfig(
        graph=args.graph,
        taxonomy=args.taxonomy,
        transe_vectors=args.transe,
        complex_vectors=args.complex_,
        text_vectors=args.text,
    )
    ctx = build_context(config)
    q2_ids = [x for x in args.q2.split(",") if x]
    if not ctx.store.has_node(args.q1):
        raise NotFoundError(f"unknown node {args.q1!r}")
    reports = [similarity_report(ctx, args.q1, q2, args.explain) for q2 in q2_ids]
    if _format(args) == "json":
        print(json.dumps(reports, **_COMPACT))
    else:
        for rep in reports:
            cells = [rep["qnode2"]] + [
                f"{alg}={'null' if v is None else v}"
                for alg, v in rep["scores"].items()
            ]
            print("\t".join(cells))
    return 0


def _cmd_neighbors(args) -> int:
    index = KnnIndex.load(args.index)
    hits = nearest_neighbors(index, args.qnode, args.k, probes=args.probes)
    if _format(args) == "json":
        print(hits_to_json(hits))
    else:
        for h in hits:
            print(f"{h.qnode}\t{h.score}\t{h.label}")
    return 0


def _cmd_search(args) -> int:
    store = _load_store(args.graph)
    results = store.search_labels(args.q, args.limit)
    if _format(args) == "json":
        payload = [
            {
                "qnode": node_id,
                "label": label,
                "description": store.meta[node_id].description or "",
            }
            for node_id, label, _ in results
        ]
        print(json.dumps(payload, **_COMPACT))
    else:
        for node_id, label, score in results:
            print(f"{node_id}\t{label}\t{score}")
    return 0


def _cmd_serve(args) -> int:
    config = load_config(args.config)
    port = config.port
    if PORT_ENV_VAR in os.environ:
        port = int(os.environ[PORT_ENV_VAR])
    if args.port is not None:
        port = args.port
    config = ServiceConfig(**{**config.__dict__, "port": port})
    serve(config)
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "build-taxonomy": _cmd_build_taxonomy,
    "train": _cmd_train,
    "lexicalize": _cmd_lexicalize,
    "ingest-vectors": _cmd_ingest_vectors,
    "build-index": _cmd_build_index,
    "similarity": _cmd_similarity,
    "neighbors": _cmd_neighbors,
    "search": _cmd_search,
    "serve": _cmd_serve,
}


def run(argv: list[str]) -> int:
    """Parse and execute one command; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.verb](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (KgsimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
