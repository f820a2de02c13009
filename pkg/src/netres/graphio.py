"""Reading and writing graphs, plus the persistent workspace.

Two on-disk forms. Text: a `directed`/`undirected` header, then one `u v`
edge or `node u` line per row, `#` comments allowed. JSON: an object with
"directed", "nodes" and "edges". Serialization is canonical (sorted nodes and
edges, undirected edges stored once with the smaller endpoint first), so
parse(serialize(g)) returns g bit-exactly.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field

from .errors import (
    BadConfig,
    DanglingEdge,
    DuplicateEdgeWarning,
    Malformed,
    SelfLoop,
)
from .graphs import Graph, is_undirected
from .interventions import Intervention, apply_strategy, step_from_json, step_to_json


def _intish(token: str, line: int, col: int) -> int:
    if not token.isdigit():
        raise Malformed(f"expected a non-negative integer, got {token!r}", line, col)
    return int(token)


def _parse_text(text: str) -> Graph:
    directed: bool | None = None
    nodes: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        tokens = line.split()
        col = line.index(tokens[0]) + 1
        if directed is None:
            if tokens == ["directed"]:
                directed = True
            elif tokens == ["undirected"]:
                directed = False
            else:
                raise Malformed("expected a 'directed' or 'undirected' header", lineno, col)
            continue
        if tokens[0] == "node":
            if len(tokens) != 2:
                raise Malformed("expected 'node <label>'", lineno, col)
            nodes.add(_intish(tokens[1], lineno, line.index(tokens[1]) + 1))
            continue
        if len(tokens) != 2:
            raise Malformed("expected '<from> <to>' or 'node <label>'", lineno, col)
        v = _intish(tokens[0], lineno, col)
        w = _intish(tokens[1], lineno, line.index(tokens[1], col) + 1)
        if v == w:
            raise SelfLoop(f"self-loop {v} -> {w}", lineno, col)
        pair = {(v, w)} if directed else {(v, w), (w, v)}
        if pair & edges:
            warnings.warn(f"duplicate edge {v} {w} at line {lineno}", DuplicateEdgeWarning)
        edges |= pair
        nodes |= {v, w}
    if directed is None:
        raise Malformed("empty graph file: missing header", 1, 1)
    return Graph(frozenset(nodes), frozenset(edges))


def graph_from_json(obj) -> Graph:
    if not isinstance(obj, dict):
        raise Malformed("graph JSON must be an object", 1, 1)
    for key in ("directed", "nodes", "edges"):
        if key not in obj:
            raise Malformed(f"graph JSON is missing {key!r}", 1, 1)
    directed = obj["directed"]
    if not isinstance(directed, bool):
        raise Malformed("'directed' must be true or false", 1, 1)
    if not isinstance(obj["nodes"], list) or not isinstance(obj["edges"], list):
        raise Malformed("'nodes' and 'edges' must be arrays", 1, 1)
    nodes: set[int] = set()
    for v in obj["nodes"]:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise Malformed(f"bad node label {v!r}", 1, 1)
        nodes.add(v)
    edges: set[tuple[int, int]] = set()
    for e in obj["edges"]:
        if not (isinstance(e, list) and len(e) == 2):
            raise Malformed(f"bad edge entry {e!r}", 1, 1)
        v, w = e
        for x in (v, w):
            if isinstance(x, bool) or not isinstance(x, int):
                raise Malformed(f"bad edge entry {e!r}", 1, 1)
        if v == w:
            raise SelfLoop(f"self-loop {v} -> {w}", 1, 1)
        if v not in nodes or w not in nodes:
            raise DanglingEdge(f"edge ({v},{w}) uses an undeclared node", 1, 1)
        pair = {(v, w)} if directed else {(v, w), (w, v)}
        if pair & edges:
            warnings.warn(f"duplicate edge {v} {w}", DuplicateEdgeWarning)
        edges |= pair
    return Graph(frozenset(nodes), frozenset(edges))


def parse_graph(data: str | bytes) -> Graph:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise Malformed(f"not valid UTF-8: {exc}", 1, 1) from None
    stripped = data.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise Malformed(f"bad JSON: {exc.msg}", exc.lineno, exc.colno) from None
        return graph_from_json(obj)
    return _parse_text(data)


def graph_to_json(g: Graph) -> dict:
    undirected = is_undirected(g) and bool(g.edges)
    if undirected:
        edges = sorted((v, w) for v, w in g.edges if v < w)
    else:
        edges = sorted(g.edges)
    return {
        "directed": not undirected,
        "nodes": sorted(g.nodes),
        "edges": [list(e) for e in edges],
    }


def serialize_graph(g: Graph, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(graph_to_json(g), sort_keys=True, separators=(",", ":")) + "\n"
    if fmt != "text":
        raise BadConfig(f"unknown graph format {fmt!r}")
    undirected = is_undirected(g) and bool(g.edges)
    lines = ["undirected" if undirected else "directed"]
    if undirected:
        lines += [f"{v} {w}" for v, w in sorted(g.edges) if v < w]
    else:
        lines += [f"{v} {w}" for v, w in sorted(g.edges)]
    covered = {v for e in g.edges for v in e}
    lines += [f"node {v}" for v in sorted(g.nodes - covered)]
    return "\n".join(lines) + "\n"


def graph_hash(g: Graph) -> str:
    return hashlib.sha256(serialize_graph(g, "json").encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Workspace
# ---------------------------------------------------------------------------


@dataclass
class GraphEntry:
    """A stored graph: the original upload plus every applied step, in order.

    Replaying ``history`` from ``base`` always reproduces ``current``; the
    workspace refuses to load a file for which that fails.
    """

    base: Graph
    history: list[Intervention] = field(default_factory=list)
    current: Graph = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.current is None:
            self.current = apply_strategy(self.history, self.base)

    def push(self, step: Intervention) -> Graph:
        self.history.append(step)
        self.current = apply_strategy([step], self.current)
        return self.current

    def pop(self) -> Intervention:
        step = self.history.pop()
        self.current = apply_strategy(self.history, self.base)
        return step

    def to_json(self) -> dict:
        return {
            "base": graph_to_json(self.base),
            "history": [step_to_json(k) for k in self.history],
        }


@dataclass
class Workspace:
    graphs: dict[str, GraphEntry] = field(default_factory=dict)
    presets: dict[str, dict] = field(default_factory=dict)

    def add_graph(self, g: Graph, gid: str | None = None) -> str:
        if gid is None:
            used = self.graphs.keys()
            i = 1
            while f"g{i}" in used:
                i += 1
            gid = f"g{i}"
        self.graphs[gid] = GraphEntry(g)
        return gid

    def to_json(self) -> dict:
        return {
            "graphs": {gid: entry.to_json() for gid, entry in sorted(self.graphs.items())},
            "presets": dict(sorted(self.presets.items())),
        }

    @classmethod
    def from_json(cls, obj) -> "Workspace":
        if not isinstance(obj, dict):
            raise BadConfig("workspace must be a JSON object")
        ws = cls()
        graphs = obj.get("graphs", {})
        if not isinstance(graphs, dict):
            raise BadConfig("workspace 'graphs' must be an object")
        for gid, entry in graphs.items():
            if not isinstance(entry, dict) or "base" not in entry:
                raise BadConfig(f"workspace graph {gid!r} needs a 'base'")
            base = graph_from_json(entry["base"])
            history = [step_from_json(s) for s in entry.get("history", [])]
            ws.graphs[str(gid)] = GraphEntry(base, history)
        presets = obj.get("presets", {})
        if not isinstance(presets, dict):
            raise BadConfig("workspace 'presets' must be an object")
        ws.presets = {str(k): v for k, v in presets.items()}
        return ws

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Workspace":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BadConfig(f"bad workspace JSON: {exc.msg}") from None
        return cls.from_json(obj)
