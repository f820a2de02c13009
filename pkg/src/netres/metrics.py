"""Graph quantities used by acceptance controls.

Degree moments, variances, closeness and betweenness are exact Fractions so
threshold comparisons never suffer float noise. Communicability and spectral
radius are floating point with explicit tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import DirectedUnsupported, EmptyGraph, NodeAbsent, TooSmall
from .graphs import Graph, degrees, is_undirected, shortest_paths


class Side(str, Enum):
    IN = "in"
    OUT = "out"
    TOTAL = "total"


class CentralityKind(str, Enum):
    DEG_IN = "deg_in"
    DEG_OUT = "deg_out"
    CLOSE_IN = "close_in"
    CLOSE_OUT = "close_out"
    BETWEENNESS = "betweenness"
    TOTAL_DEG = "total_deg"
    CLOSE_TOTAL = "close_total"


_TOTAL_KINDS = {CentralityKind.TOTAL_DEG, CentralityKind.CLOSE_TOTAL}


def _degree(g: Graph, v: int, side: Side) -> Fraction:
    din, dout, dtot = degrees(g, v)
    if side == Side.IN:
        return Fraction(din)
    if side == Side.OUT:
        return Fraction(dout)
    return dtot


def degree_moment(g: Graph, side: Side, n: int = 1) -> Fraction:
    """n-th moment of the chosen degree distribution, exact."""
    if g.n == 0:
        raise EmptyGraph("degree moment of the empty graph is undefined")
    if n < 1:
        raise ValueError("moment order must be >= 1")
    total = sum(_degree(g, v, side) ** n for v in g.nodes)
    return Fraction(total, g.n)


def average_degree(g: Graph) -> Fraction:
    if g.n == 0:
        raise EmptyGraph("average degree of the empty graph is undefined")
    return Fraction(len(g.edges), g.n)


def degree_variance(g: Graph, side: Side) -> Fraction:
    m1 = degree_moment(g, side, 1)
    m2 = degree_moment(g, side, 2)
    return m2 - m1 * m1


def pair_inverse_distance_sum(g: Graph) -> Fraction:
    """Sum of 1/l over ordered node pairs, with 1/inf = 0."""
    pm = shortest_paths(g)
    total = Fraction(0)
    n = len(pm.order)
    for i in range(n):
        row = pm.rows[i]
        for j in range(n):
            if i != j and row[j] != math.inf:
                total += Fraction(1, int(row[j]))
    return total


def graph_efficiency(g: Graph) -> Fraction:
    """Average inverse shortest-path length over ordered pairs, in [0, 1]."""
    if g.n < 2:
        raise TooSmall("graph efficiency needs at least 2 nodes")
    return pair_inverse_distance_sum(g) / (g.n * (g.n - 1))


# ---------------------------------------------------------------------------
# Communicability: entries of exp(A), scaled truncated series with a
# rigorous remainder bound.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommunicabilityMatrix:
    order: tuple[int, ...]
    entries: np.ndarray
    tolerance: float

    def entry(self, v: int, w: int) -> float:
        i = self.order.index(v)
        j = self.order.index(w)
        return float(self.entries[i, j])

    def total(self) -> float:
        return float(self.entries.sum())


def _series_exp(b: np.ndarray, terms: int) -> np.ndarray:
    n = b.shape[0]
    acc = np.eye(n)
    term = np.eye(n)
    for k in range(1, terms + 1):
        term = term @ b / k
        acc = acc + term
    return acc


def _truncation_plan(norm_a: float, tol: float) -> tuple[int, int, float]:
    """Pick (scaling power s, series length m) with a proven final bound."""
    s = 0
    while norm_a / (2**s) > 1.0:
        s += 1
    nb = norm_a / (2**s)
    for m in range(4, 120):
        # tail of the exponential series: sum_{k>m} nb^k/k! bounded by a
        # geometric majorant since nb <= 1
        tail = nb ** (m + 1) / math.factorial(m + 1) * (m + 2) / (m + 2 - nb)
        err = tail
        for k in range(s):
            err = 2 * math.exp(nb * 2**k) * err + err * err
        if err <= tol:
            return s, m, err
    raise ArithmeticError("no truncation satisfies the tolerance")


def communicability(g: Graph, tol: float = 1e-12) -> CommunicabilityMatrix:
    if g.n == 0:
        raise EmptyGraph("communicability of the empty graph is undefined")
    order = tuple(g.node_list())
    idx = {v: i for i, v in enumerate(order)}
    a = np.zeros((g.n, g.n))
    for v, w in g.edges:
        a[idx[v], idx[w]] = 1.0
    norm_a = float(np.abs(a).sum(axis=0).max()) if g.edges else 0.0
    if norm_a == 0.0:
        return CommunicabilityMatrix(order, np.eye(g.n), 0.0)
    s, m, err = _truncation_plan(norm_a, tol)
    e = _series_exp(a / (2**s), m)
    for _ in range(s):
        e = e @ e
    return CommunicabilityMatrix(order, e, err)


def avg_communicability(g: Graph, tol: float = 1e-12) -> float:
    if g.n == 0:
        raise EmptyGraph("average communicability of the empty graph is undefined")
    cm = communicability(g, tol)
    return cm.total() / (g.n * g.n)


# ---------------------------------------------------------------------------
# Centralities
# ---------------------------------------------------------------------------


def _closeness(g: Graph, v: int, incoming: bool) -> Fraction:
    if g.n == 1:
        return Fraction(0)
    pm = shortest_paths(g)
    i = pm.order.index(v)
    total = Fraction(0)
    for j in range(g.n):
        if j == i:
            continue
        l = pm.rows[j][i] if incoming else pm.rows[i][j]
        if l != math.inf:
            total += Fraction(1, int(l))
    return total / (g.n - 1)


def _path_counts(g: Graph) -> tuple[tuple[int, ...], list[list[float]], list[list[int]]]:
    """BFS distances and shortest-path counts from every source."""
    order = tuple(g.node_list())
    idx = {v: i for i, v in enumerate(order)}
    adj = [[idx[w] for w in g.out_neighbors(v)] for v in order]
    n = len(order)
    dist = [[math.inf] * n for _ in range(n)]
    count = [[0] * n for _ in range(n)]
    for src in range(n):
        dist[src][src] = 0
        count[src][src] = 1
        frontier = [src]
        d = 0
        while frontier:
            nxt: list[int] = []
            for v in frontier:
                for w in adj[v]:
                    if dist[src][w] == math.inf:
                        dist[src][w] = d + 1
                        nxt.append(w)
                    if dist[src][w] == d + 1:
                        count[src][w] += count[src][v]
            frontier = sorted(set(nxt))
            d += 1
    return order, dist, count


def betweenness(g: Graph, v: int) -> Fraction:
    """Pair dependency of v: sum over node pairs of the fraction of shortest
    paths through v, counting each unordered pair once (0/0 = 0)."""
    if v not in g.nodes:
        raise NodeAbsent(f"node {v} not in graph")
    order, dist, count = _path_counts(g)
    i = order.index(v)
    n = len(order)
    total = Fraction(0)
    for u in range(n):
        if u == i:
            continue
        for w in range(n):
            if w == i or w == u:
                continue
            if count[u][w] == 0:
                continue
            if dist[u][i] + dist[i][w] == dist[u][w]:
                through = count[u][i] * count[i][w]
                total += Fraction(through, count[u][w])
    return total / 2


def centrality(g: Graph, kind: CentralityKind, v: int) -> Fraction:
    if v not in g.nodes:
        raise NodeAbsent(f"node {v} not in graph")
    if kind in _TOTAL_KINDS and not is_undirected(g):
        raise DirectedUnsupported(f"{kind.value} centrality needs an undirected graph")
    if kind == CentralityKind.DEG_IN:
        return _degree(g, v, Side.IN)
    if kind == CentralityKind.DEG_OUT:
        return _degree(g, v, Side.OUT)
    if kind == CentralityKind.TOTAL_DEG:
        return _degree(g, v, Side.TOTAL)
    if kind == CentralityKind.CLOSE_IN:
        return _closeness(g, v, incoming=True)
    if kind == CentralityKind.CLOSE_OUT:
        return _closeness(g, v, incoming=False)
    if kind == CentralityKind.CLOSE_TOTAL:
        return (_closeness(g, v, True) + _closeness(g, v, False)) / 2
    return betweenness(g, v)


def max_centrality(g: Graph, kind: CentralityKind) -> Fraction:
    if g.n == 0:
        raise EmptyGraph("maximal centrality of the empty graph is undefined")
    return max(centrality(g, kind, v) for v in g.nodes)


# ---------------------------------------------------------------------------
# Undirected-only controls
# ---------------------------------------------------------------------------


def epidemic_ratio(g: Graph) -> Fraction:
    """Second over first degree moment; 0 on edgeless graphs."""
    if g.n == 0:
        raise EmptyGraph("epidemic ratio of the empty graph is undefined")
    if not is_undirected(g):
        raise DirectedUnsupported("epidemic ratio needs an undirected graph")
    m1 = degree_moment(g, Side.IN, 1)
    if m1 == 0:
        return Fraction(0)
    return degree_moment(g, Side.IN, 2) / m1


def spectral_radius(g: Graph) -> float:
    """Largest adjacency eigenvalue of an undirected graph (tolerance 1e-9)."""
    if not is_undirected(g):
        raise DirectedUnsupported("spectral radius needs an undirected graph")
    if g.n == 0:
        return 0.0
    order = g.node_list()
    idx = {v: i for i, v in enumerate(order)}
    a = np.zeros((g.n, g.n))
    for v, w in g.edges:
        a[idx[v], idx[w]] = 1.0
    ev = np.linalg.eigvalsh(a)
    return max(float(ev[-1]), 0.0)
