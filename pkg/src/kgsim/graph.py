"""Edge-list graph store with node metadata and free-text label search.

The store ingests tab-separated edge files where structural statements and
node metadata share one format: rows whose property is ``label``, ``alias``
or ``description`` populate NodeMeta instead of the structural edge indexes
(they are still counted and kept as edges). After ingestion the store is
frozen and becomes safe for unlimited concurrent readers.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass, field

from .errors import ConfigError, ParseError

HEADER = "node1\tlabel\tnode2"

#: Properties that carry node metadata rather than graph structure.
METADATA_PROPERTIES = frozenset({"label", "alias", "description"})

_TOKEN_RE = re.compile(r"\w+")
_LANG_TAG_RE = re.compile(r"@[A-Za-z][A-Za-z0-9-]*$")


def tokenize(text: str) -> list[str]:
    """Case-folded word tokens, split on whitespace/punctuation."""
    return _TOKEN_RE.findall(text.casefold())


def strip_literal(value: str) -> str:
    """Strip surrounding quotes and a trailing language tag from a literal."""
    value = _LANG_TAG_RE.sub("", value)
    if len(value) >= 2 and value[0] == value[-1] and value[0] in ("'", '"'):
        value = value[1:-1]
    return value


@dataclass
class EdgeRecord:
    """One (node1, property, node2) statement."""

    node1: str
    property: str
    node2: str


@dataclass
class NodeMeta:
    """Display metadata for one node."""

    id: str
    label: str | None = None
    aliases: list[str] = field(default_factory=list)
    description: str | None = None


class GraphStore:
    """Append-only edge store with subject and label-token indexes.

    Single-writer while building; call :meth:`freeze` once ingestion is
    done, after which any number of threads may query concurrently.
    """

    def __init__(self) -> None:
        self.edges: list[EdgeRecord] = []
        self.meta: dict[str, NodeMeta] = {}
        self._by_subject: dict[str, list[int]] = {}
        self._node_ids: set[str] = set()
        self._postings: dict[str, set[str]] = {}
        self._sorted_tokens: list[str] = []
        self._frozen = False

    # -- build phase ----------------------------------------------------

    def ingest_edges(self, path: str) -> int:
        """Load a tab-separated edge file; returns the number of edge rows.

        Metadata rows (label/alias/description) also update NodeMeta;
        re-ingesting the same file duplicates edges (they are facts) but
        leaves NodeMeta unchanged (labels are keyed by node).
        """
        if self._frozen:
            raise ConfigError("store is frozen; no ingestion after freeze")
        count = 0
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n").rstrip("\r")
                if lineno == 1:
                    if line != HEADER:
                        raise ParseError(
                            f"expected header {HEADER!r}, got {line!r}", lineno
                        )
                    continue
                if not line or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) != 3:
                    raise ParseError(f"expected 3 columns, got {len(cols)}", lineno)
                node1, prop, node2 = cols
                if not node1 or not prop or not node2:
                    raise ParseError("empty column", lineno)
                self._add_edge(node1, prop, node2)
                count += 1
        return count

    def add_edges(self, rows) -> int:
        """Programmatic ingestion of (node1, property, node2) rows."""
        if self._frozen:
            raise ConfigError("store is frozen; no ingestion after freeze")
        count = 0
        for node1, prop, node2 in rows:
            if not node1 or not prop or not node2:
                raise ConfigError("edge fields must be non-empty")
            self._add_edge(node1, prop, node2)
            count += 1
        return count

    def _add_edge(self, node1: str, prop: str, node2: str) -> None:
        self._node_ids.add(node1)
        if prop in METADATA_PROPERTIES:
            value = strip_literal(node2)
            meta = self.meta.setdefault(node1, NodeMeta(id=node1))
            if prop == "label":
                meta.label = value
            elif prop == "description":
                meta.description = value
            else:
                folded = {a.casefold() for a in meta.aliases}
                if value.casefold() not in folded:
                    meta.aliases.append(value)
            self.edges.append(EdgeRecord(node1, prop, value))
        else:
            self._node_ids.add(node2)
            self.edges.append(EdgeRecord(node1, prop, node2))
        self._by_subject.setdefault(node1, []).append(len(self.edges) - 1)

    def freeze(self) -> "GraphStore":
        """End the build phase and build the search index. Returns self."""
        if self._frozen:
            return self
        for node_id, meta in self.meta.items():
            texts = ([meta.label] if meta.label else []) + meta.aliases
            for text in texts:
                for token in tokenize(text):
                    self._postings.setdefault(token, set()).add(node_id)
        self._sorted_tokens = sorted(self._postings)
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # -- read phase -----------------------------------------------------

    def node_ids(self) -> set[str]:
        """All node ids seen as a subject or as a structural object."""
        return set(self._node_ids)

    def has_node(self, node: str) -> bool:
        return node in self._node_ids

    def label_of(self, node: str) -> str:
        """Display label for a node; empty string when unknown."""
        meta = self.meta.get(node)
        return meta.label if meta and meta.label else ""

    def outgoing_edges(self, node: str) -> list[EdgeRecord]:
        """All edges with node1 = node, in ingestion order."""
        return [self.edges[i] for i in self._by_subject.get(node, [])]

    def search_labels(self, query: str, limit: int) -> list[tuple[str, str, int]]:
        """Rank nodes whose label/alias tokens prefix-match every query token.

        Returns (node-id, label, exact-token-match count) tuples ordered by
        exact matches desc, label length asc, node-id asc.
        """
        if limit < 1:
            raise ConfigError("limit must be >= 1")
        if not self._frozen:
            raise ConfigError("freeze the store before searching")
        query_tokens = tokenize(query)
        if not query_tokens:
            return []

        candidates: set[str] | None = None
        for qt in query_tokens:
            matched: set[str] = set()
            i = bisect_left(self._sorted_tokens, qt)
            while i < len(self._sorted_tokens) and self._sorted_tokens[i].startswith(qt):
                matched |= self._postings[self._sorted_tokens[i]]
                i += 1
            candidates = matched if candidates is None else candidates & matched
            if not candidates:
                return []

        assert candidates is not None
        ranked = []
        for node_id in candidates:
            meta = self.meta[node_id]
            node_tokens = set()
            for text in ([meta.label] if meta.label else []) + meta.aliases:
                node_tokens.update(tokenize(text))
            exact = sum(1 for qt in query_tokens if qt in node_tokens)
            label = meta.label or ""
            ranked.append((node_id, label, exact))
        ranked.sort(key=lambda r: (-r[2], len(r[1]), r[0]))
        return ranked[:limit]
