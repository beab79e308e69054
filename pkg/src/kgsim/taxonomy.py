"""Is-a closure over subclass-of/instance-of edges and class-based similarity.

Every node gets the reflexive-transitive set of classes reachable through
subclass-of or instance-of steps. A node counts as a class (and hence as its
own parent) when it takes part in a subclass edge on either side or is the
target of an instance edge; plain instances are not their own parents.
Subclass/instance cycles are collapsed into strongly connected components so
all cycle members share one parent set. Each class c gets
idf(c) = ln(N / ext(c)) where ext(c) is the number of nodes whose closure
contains c and N is the total node count.
"""

from __future__ import annotations

import math
import pickle
from dataclasses import dataclass

from .errors import ConfigError
from .graph import GraphStore


@dataclass(frozen=True)
class TaxonomyConfig:
    subclass_property: str = "P279"
    instance_property: str = "P31"

    def __post_init__(self) -> None:
        if not self.subclass_property or not self.instance_property:
            raise ConfigError("property ids must be non-empty")
        if self.subclass_property == self.instance_property:
            raise ConfigError("subclass and instance properties must differ")


class TaxonomyIndex:
    """Frozen closure/ext/idf tables produced by :func:`build_taxonomy`."""

    def __init__(
        self,
        parents: dict[str, frozenset[str]],
        ext: dict[str, int],
        idf: dict[str, float],
        n_nodes: int,
    ):
        self._parents = parents
        self.ext = ext
        self.idf = idf
        self.n_nodes = n_nodes

    def parents(self, node: str) -> frozenset[str]:
        """Reflexive-transitive is-a closure; empty for unknown nodes."""
        return self._parents.get(node, frozenset())

    # Persistence uses sorted lists so the byte stream never depends on
    # set iteration order (which varies with the process hash seed).
    def save(self, path: str) -> None:
        payload = {
            "parents": {k: sorted(v) for k, v in sorted(self._parents.items())},
            "ext": dict(sorted(self.ext.items())),
            "idf": dict(sorted(self.idf.items())),
            "n_nodes": self.n_nodes,
        }
        with open(path, "wb") as fh:
            pickle.dump(payload, fh, protocol=4)

    @classmethod
    def load(cls, path: str) -> "TaxonomyIndex":
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
        return cls(
            {k: frozenset(v) for k, v in payload["parents"].items()},
            payload["ext"],
            payload["idf"],
            payload["n_nodes"],
        )


def _strongly_connected_components(
    nodes: list[str], succ: dict[str, list[str]]
) -> list[list[str]]:
    """Iterative Tarjan; components are returned in reverse topological
    order (every edge leaving a component points to an earlier one)."""
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, edge_i = work.pop()
            if edge_i == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            targets = succ.get(node, [])
            advanced = False
            for i in range(edge_i, len(targets)):
                t = targets[i]
                if t not in index:
                    work.append((node, i + 1))
                    work.append((t, 0))
                    advanced = True
                    break
                if t in on_stack:
                    lowlink[node] = min(lowlink[node], index[t])
            if advanced:
                continue
            if lowlink[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
    return components


def build_taxonomy(
    store: GraphStore, config: TaxonomyConfig | None = None
) -> TaxonomyIndex:
    """Compute parent closures, class extensions and idf weights."""
    if not store.frozen:
        raise ConfigError("store must be frozen before building the taxonomy")
    config = config or TaxonomyConfig()
    isa_props = {config.subclass_property, config.instance_property}

    succ: dict[str, list[str]] = {}
    classes: set[str] = set()
    self_loops: set[str] = set()
    for edge in store.edges:
        if edge.property not in isa_props:
            continue
        succ.setdefault(edge.node1, []).append(edge.node2)
        classes.add(edge.node2)
        if edge.property == config.subclass_property:
            classes.add(edge.node1)
        if edge.node1 == edge.node2:
            self_loops.add(edge.node1)

    all_nodes = sorted(store.node_ids() | set(succ))
    components = _strongly_connected_components(all_nodes, succ)

    scc_of: dict[str, int] = {}
    for ci, members in enumerate(components):
        for m in members:
            scc_of[m] = ci

    # Reverse topological order means successors are already resolved.
    reach: list[frozenset[str]] = []
    for ci, members in enumerate(components):
        out: set[str] = set()
        for m in members:
            for t in succ.get(m, []):
                ti = scc_of[t]
                if ti != ci:
                    out.update(components[ti])
                    out.update(reach[ti])
        cyclic = len(members) > 1 or any(m in self_loops for m in members)
        if cyclic:
            out.update(members)
        reach.append(frozenset(out))

    parents: dict[str, frozenset[str]] = {}
    for node in all_nodes:
        closure = reach[scc_of[node]]
        if node in classes and node not in closure:
            closure = closure | {node}
        if closure:
            parents[node] = closure

    n_nodes = len(store.node_ids())
    ext: dict[str, int] = {}
    for closure in parents.values():
        for c in closure:
            ext[c] = ext.get(c, 0) + 1
    idf = {c: math.log(n_nodes / e) for c, e in ext.items()}
    return TaxonomyIndex(parents, ext, idf, n_nodes)


def class_similarity(index: TaxonomyIndex, a: str, b: str) -> float:
    """IDF-weighted Jaccard over the two parent closures, in [0, 1]."""
    pa, pb = index.parents(a), index.parents(b)
    if not pa or not pb:
        return 0.0
    # Sum in sorted order: float addition is order-sensitive at the last
    # ulp, and symmetry must hold exactly.
    num = sum(index.idf[c] for c in sorted(pa & pb))
    den = sum(index.idf[c] for c in sorted(pa | pb))
    if den == 0.0:
        return 0.0
    return num / den


def shared_parents(index: TaxonomyIndex, a: str, b: str) -> list[tuple[str, float]]:
    """Common is-a parents with their idf weights, idf desc then id asc."""
    common = index.parents(a) & index.parents(b)
    return sorted(((c, index.idf[c]) for c in common), key=lambda p: (-p[1], p[0]))
