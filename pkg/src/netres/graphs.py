"""Finite directed graphs over non-negative integer labels.

Graphs are immutable values: a frozen node set plus a frozen set of ordered
edge pairs. Self-loops are rejected and every edge endpoint must be a node.
The empty graph is representable; metric and acceptance layers reject it.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import EmptyGraph, NodeAbsent, TooLarge

MAX_LABEL = 2**32 - 1

# Canonical forms are only computed up to this many nodes; isomorphism
# checks at larger sizes are refused rather than silently degraded.
ISO_CAP = 12

Edge = tuple[int, int]


def _check_label(v: object) -> int:
    if not isinstance(v, int) or isinstance(v, bool) or v < 0 or v > MAX_LABEL:
        raise ValueError(f"node label must be an integer in [0, {MAX_LABEL}]: {v!r}")
    return v


@dataclass(frozen=True)
class Graph:
    nodes: frozenset[int] = field(default_factory=frozenset)
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for v in self.nodes:
            _check_label(v)
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"edge must be a pair: {e!r}")
            v, w = e
            if v == w:
                raise ValueError(f"self-loop not allowed: {e!r}")
            if v not in self.nodes or w not in self.nodes:
                raise ValueError(f"edge endpoint not a node: {e!r}")

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], nodes: Iterable[int] = ()) -> "Graph":
        es = frozenset((int(v), int(w)) for v, w in edges)
        ns = frozenset(int(v) for v in nodes) | {v for e in es for v in e}
        return cls(ns, es)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def node_list(self) -> list[int]:
        return sorted(self.nodes)

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def has_edge(self, v: int, w: int) -> bool:
        return (v, w) in self.edges

    def out_neighbors(self, v: int) -> list[int]:
        if v not in self.nodes:
            raise NodeAbsent(f"node {v} not in graph")
        return sorted(w for (x, w) in self.edges if x == v)

    def in_neighbors(self, v: int) -> list[int]:
        if v not in self.nodes:
            raise NodeAbsent(f"node {v} not in graph")
        return sorted(w for (w, x) in self.edges if x == v)

    def out_adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.nodes}
        for v, w in self.edges:
            adj[v].append(w)
        for v in adj:
            adj[v].sort()
        return adj

    def in_adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.nodes}
        for v, w in self.edges:
            adj[w].append(v)
        for v in adj:
            adj[v].sort()
        return adj


def degrees(g: Graph, v: int) -> tuple[int, int, Fraction]:
    """(in-degree, out-degree, total degree); total is the half-sum."""
    if v not in g.nodes:
        raise NodeAbsent(f"node {v} not in graph")
    din = sum(1 for (_, w) in g.edges if w == v)
    dout = sum(1 for (x, _) in g.edges if x == v)
    return din, dout, Fraction(din + dout, 2)


def is_undirected(g: Graph) -> bool:
    return all((w, v) in g.edges for (v, w) in g.edges)


def undirected_closure(g: Graph) -> Graph:
    es = set(g.edges)
    es.update((w, v) for (v, w) in g.edges)
    return Graph(g.nodes, frozenset(es))


def connectivity(g: Graph) -> tuple[bool, bool]:
    """(weakly connected, strongly connected)."""
    if g.n == 0:
        raise EmptyGraph("connectivity of the empty graph is undefined")
    if g.n == 1:
        return True, True
    start = min(g.nodes)
    closure = undirected_closure(g)
    weak = len(out_component(closure, start)) == g.n
    if not weak:
        return False, False
    forward = len(out_component(g, start)) == g.n
    if not forward:
        return True, False
    rev = Graph(g.nodes, frozenset((w, v) for (v, w) in g.edges))
    backward = len(out_component(rev, start)) == g.n
    return True, forward and backward


@dataclass(frozen=True)
class PathMatrix:
    """All-pairs shortest path lengths; unreachable pairs are math.inf."""

    order: tuple[int, ...]
    rows: tuple[tuple[float, ...], ...]

    def length(self, v: int, w: int) -> float:
        i = self.order.index(v)
        j = self.order.index(w)
        return self.rows[i][j]

    def index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}


def _bfs_lengths(adj: dict[int, list[int]], src: int, order: list[int]) -> list[float]:
    dist = {src: 0}
    q = deque([src])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return [dist.get(v, math.inf) for v in order]


def shortest_paths(g: Graph) -> PathMatrix:
    order = g.node_list()
    adj = g.out_adjacency()
    rows = tuple(tuple(_bfs_lengths(adj, v, order)) for v in order)
    return PathMatrix(tuple(order), rows)


def out_component(g: Graph, v: int) -> frozenset[int]:
    if v not in g.nodes:
        raise NodeAbsent(f"node {v} not in graph")
    adj = g.out_adjacency()
    seen = {v}
    q = deque([v])
    while q:
        x = q.popleft()
        for w in adj[x]:
            if w not in seen:
                seen.add(w)
                q.append(w)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# Canonical forms (individualization-refinement, small graphs only)
# ---------------------------------------------------------------------------


def _refine(n: int, out_adj: list[list[int]], in_adj: list[list[int]], colors: list[int]) -> list[int]:
    while True:
        sigs = []
        for i in range(n):
            sigs.append(
                (
                    colors[i],
                    tuple(sorted(colors[j] for j in out_adj[i])),
                    tuple(sorted(colors[j] for j in in_adj[i])),
                )
            )
        ranking = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _cells(colors: list[int]) -> list[list[int]]:
    by_color: dict[int, list[int]] = {}
    for i, c in enumerate(colors):
        by_color.setdefault(c, []).append(i)
    return [by_color[c] for c in sorted(by_color)]


def _homogeneous(cells: list[list[int]], adj_bits: list[int]) -> bool:
    # A partition is homogeneous when between (and within) every pair of
    # cells either all possible edges exist or none do; then any within-cell
    # ordering produces the same adjacency matrix.
    for a in cells:
        for b in cells:
            count = 0
            for i in a:
                for j in b:
                    if i != j and (adj_bits[i] >> j) & 1:
                        count += 1
            full = len(a) * len(b) - (len(a) if a is b else 0)
            if count != 0 and count != full:
                return False
    return True


def _matrix_bytes(n: int, adj_bits: list[int], order: list[int]) -> bytes:
    pos = {v: k for k, v in enumerate(order)}
    out = bytearray([n])
    for v in order:
        row = 0
        for w in order:
            if v != w and (adj_bits[v] >> w) & 1:
                row |= 1 << pos[w]
        out.extend(row.to_bytes(2, "big"))
    return bytes(out)


def canonical_form(g: Graph, cap: int = ISO_CAP) -> bytes:
    """Isomorphism-invariant byte string; equal iff the graphs are isomorphic."""
    n = g.n
    if n > cap:
        raise TooLarge(f"canonical form capped at {cap} nodes, got {n}")
    order = g.node_list()
    idx = {v: i for i, v in enumerate(order)}
    out_adj: list[list[int]] = [[] for _ in range(n)]
    in_adj: list[list[int]] = [[] for _ in range(n)]
    adj_bits = [0] * n
    for v, w in g.edges:
        i, j = idx[v], idx[w]
        out_adj[i].append(j)
        in_adj[j].append(i)
        adj_bits[i] |= 1 << j

    if n == 0:
        return b"\x00"

    init = [(len(out_adj[i]), len(in_adj[i])) for i in range(n)]
    ranking = {s: r for r, s in enumerate(sorted(set(init)))}
    colors = _refine(n, out_adj, in_adj, [ranking[s] for s in init])

    best: bytes | None = None

    def descend(colors: list[int]) -> None:
        nonlocal best
        cells = _cells(colors)
        if _homogeneous(cells, adj_bits):
            ordering = [i for cell in cells for i in cell]
            cand = _matrix_bytes(n, adj_bits, ordering)
            if best is None or cand < best:
                best = cand
            return
        target = next(c for c in cells if len(c) > 1)
        for i in target:
            sigs = [(colors[j], 1 if j == i else 0) for j in range(n)]
            rk = {s: r for r, s in enumerate(sorted(set(sigs)))}
            descend(_refine(n, out_adj, in_adj, [rk[s] for s in sigs]))

    descend(colors)
    assert best is not None
    return best


def isomorphic(a: Graph, b: Graph, cap: int = ISO_CAP) -> bool:
    if a.n != b.n or len(a.edges) != len(b.edges):
        return False
    return canonical_form(a, cap) == canonical_form(b, cap)


# ---------------------------------------------------------------------------
# Canonical families
# ---------------------------------------------------------------------------


def edgeless(n: int) -> Graph:
    return Graph(frozenset(range(n)))


def directed_star(n: int) -> Graph:
    """Hub 0 with edges hub -> satellite only."""
    return Graph.from_edges(((0, k) for k in range(1, n)), nodes=range(n))


def reversed_star(n: int) -> Graph:
    """All satellites point at node 0."""
    return Graph.from_edges(((k, 0) for k in range(1, n)), nodes=range(n))


def directed_line(n: int) -> Graph:
    return Graph.from_edges(((k, k + 1) for k in range(n - 1)), nodes=range(n))


def undirected_line(n: int) -> Graph:
    es = []
    for k in range(n - 1):
        es += [(k, k + 1), (k + 1, k)]
    return Graph.from_edges(es, nodes=range(n))


def undirected_star(n: int) -> Graph:
    es = []
    for k in range(1, n):
        es += [(0, k), (k, 0)]
    return Graph.from_edges(es, nodes=range(n))


def bidirectional_ring(n: int) -> Graph:
    es = []
    for k in range(n):
        es += [(k, (k + 1) % n), ((k + 1) % n, k)]
    return Graph.from_edges(es, nodes=range(n))


def complete_graph(n: int) -> Graph:
    es = [(v, w) for v in range(n) for w in range(n) if v != w]
    return Graph.from_edges(es, nodes=range(n))


def all_digraphs(labels: Iterable[int]) -> Iterator[Graph]:
    """Every labeled digraph on exactly the given node labels."""
    ns = sorted(labels)
    pairs = [(v, w) for v in ns for w in ns if v != w]
    for mask in range(1 << len(pairs)):
        es = frozenset(p for k, p in enumerate(pairs) if (mask >> k) & 1)
        yield Graph(frozenset(ns), es)


def all_undirected_graphs(labels: Iterable[int]) -> Iterator[Graph]:
    ns = sorted(labels)
    pairs = [(v, w) for i, v in enumerate(ns) for w in ns[i + 1 :]]
    for mask in range(1 << len(pairs)):
        es = set()
        for k, (v, w) in enumerate(pairs):
            if (mask >> k) & 1:
                es.add((v, w))
                es.add((w, v))
        yield Graph(frozenset(ns), frozenset(es))
