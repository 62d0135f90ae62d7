"""MaxCut instances: parsing, validation and per-edge local structure.

Graphs are simple and undirected. The level-1 expectation of an edge depends
only on three integers, collected in :class:`EdgeLocalEnv`::

    d  number of neighbours of u other than v
    e  number of neighbours of v other than u
    f  number of triangles through the edge (common neighbours)
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .errors import EdgeNotFoundError, GraphError, GraphParseError

__all__ = [
    "Graph",
    "EdgeLocalEnv",
    "parse_graph",
    "parse_graph_json",
    "read_graph",
    "load_graph",
    "edge_local_env",
    "classify_edges",
    "ring_graph",
    "complete_graph",
    "erdos_renyi_graph",
]


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.n_vertices < 0:
            raise GraphError("n_vertices must be non-negative")
        canon = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if min(u, v) < 0 or max(u, v) >= self.n_vertices:
                raise GraphError(f"edge ({u}, {v}) has endpoint outside 0..{self.n_vertices - 1}")
            canon.append((min(u, v), max(u, v)))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise GraphError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n_vertices: int | None = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if n_vertices is None:
            n_vertices = 1 + max((max(e) for e in edges), default=-1)
        return cls(n_vertices, tuple(edges))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n_vertices and v in self.neighbors[u]

    def to_dict(self) -> dict:
        return {"n": self.n_vertices, "edges": [list(e) for e in self.edges]}

    def cut_value(self, bits) -> int:
        """Number of edges whose endpoints get different bits."""
        return sum(1 for u, v in self.edges if bits[u] != bits[v])


class EdgeLocalEnv(NamedTuple):
    d: int
    e: int
    f: int

    def canonical(self) -> "EdgeLocalEnv":
        return self if self.d <= self.e else EdgeLocalEnv(self.e, self.d, self.f)


_HEADER = re.compile(r"^n\s*=\s*(\d+)$")


def parse_graph(text: str) -> Graph:
    """Parse the plain edge-list format.

    An optional ``n=<int>`` header may appear as the first non-blank,
    non-comment line. Each following line holds two vertex ids. ``#`` starts
    a comment.
    """
    declared = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if first:
            first = False
            m = _HEADER.match(line)
            if m:
                declared = int(m.group(1))
                continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphParseError(f"expected two vertex ids, got {raw.strip()!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno, kind="self_loop")
        if declared is not None and max(u, v) >= declared:
            raise GraphParseError(
                f"vertex id {max(u, v)} not below declared n={declared}", lineno, kind="vertex_range"
            )
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(
                f"duplicate edge {key} (first at line {seen[key]})", lineno, kind="duplicate"
            )
        seen[key] = lineno
        edges.append(key)
    n = declared if declared is not None else 1 + max((v for _, v in edges), default=-1)
    return Graph(n, tuple(edges))


def parse_graph_json(text: str) -> Graph:
    """Parse ``{"n": ..., "edges": [[u, v], ...]}``.

    Errors name the 1-based position in the ``edges`` array as the line.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(str(exc), exc.lineno) from None
    if not isinstance(doc, dict) or "edges" not in doc:
        raise GraphParseError("document needs an 'edges' field")
    declared = doc.get("n")
    if declared is not None and (not isinstance(declared, int) or declared < 0):
        raise GraphParseError("'n' must be a non-negative integer")
    seen: dict[tuple[int, int], int] = {}
    for i, item in enumerate(doc["edges"], start=1):
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(x, int) and x >= 0 for x in item)
        ):
            raise GraphParseError(f"edge entry {item!r} is not a pair of vertex ids", i)
        u, v = item
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", i, kind="self_loop")
        if declared is not None and max(u, v) >= declared:
            raise GraphParseError(
                f"vertex id {max(u, v)} not below declared n={declared}", i, kind="vertex_range"
            )
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge {key}", i, kind="duplicate")
        seen[key] = i
    return Graph.from_edges(seen, declared)


def read_graph(text: str) -> Graph:
    """Auto-detect the document kind by its first non-blank character."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_graph_json(text)
    return parse_graph(text)


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return read_graph(fh.read())


def edge_local_env(g: Graph, edge: tuple[int, int]) -> EdgeLocalEnv:
    u, v = edge
    if not g.has_edge(u, v):
        raise EdgeNotFoundError(f"edge ({u}, {v}) not in graph")
    nu, nv = g.neighbors[u], g.neighbors[v]
    return EdgeLocalEnv(len(nu) - 1, len(nv) - 1, len(nu & nv))


def classify_edges(g: Graph) -> dict[EdgeLocalEnv, int]:
    """Group edges by their (d, e, f) class, keyed with d <= e.

    Returns a dict ordered by class key.
    """
    counts = Counter(edge_local_env(g, edge).canonical() for edge in g.edges)
    return dict(sorted(counts.items()))


def ring_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a simple ring needs at least 3 vertices")
    return Graph(n, tuple((j, (j + 1) % n) for j in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def erdos_renyi_graph(n: int, prob: float, seed=None) -> Graph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < prob
    return Graph(n, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))
