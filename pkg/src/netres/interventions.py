"""Network interventions: single manipulations, strategies, reachable sets.

Every intervention is a plain data value with total application semantics:
whenever its firing condition fails the input graph is returned unchanged.
Only structurally invalid values (a self-loop edge, an asymmetric rewire set
for the symmetric split) are construction errors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .errors import MalformedIntervention
from .graphs import Edge, Graph, canonical_form

# ---------------------------------------------------------------------------
# Intervention values
# ---------------------------------------------------------------------------


def _pair(v: int, w: int, *, distinct: bool) -> tuple[int, int]:
    v, w = int(v), int(w)
    if distinct and v == w:
        raise MalformedIntervention(f"endpoints must differ: ({v}, {w})")
    return v, w


@dataclass(frozen=True)
class Identity:
    def describe(self) -> str:
        return "identity"


@dataclass(frozen=True)
class EdgeDel:
    v: int
    w: int

    def describe(self) -> str:
        return f"edge_del {self.v} {self.w}"


@dataclass(frozen=True)
class EdgeAdd:
    v: int
    w: int

    def __post_init__(self):
        _pair(self.v, self.w, distinct=True)

    def describe(self) -> str:
        return f"edge_add {self.v} {self.w}"


@dataclass(frozen=True)
class NodeDel:
    v: int

    def describe(self) -> str:
        return f"node_del {self.v}"


@dataclass(frozen=True)
class NodeAdd:
    v: int

    def describe(self) -> str:
        return f"node_add {self.v}"


@dataclass(frozen=True)
class Isolate:
    within: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "within", frozenset(int(v) for v in self.within))

    def describe(self) -> str:
        return "isolate {" + ",".join(str(v) for v in sorted(self.within)) + "}"


@dataclass(frozen=True)
class EdgeShift:
    src: Edge
    dst: Edge

    def __post_init__(self):
        object.__setattr__(self, "src", _pair(*self.src, distinct=True))
        object.__setattr__(self, "dst", _pair(*self.dst, distinct=True))

    def describe(self) -> str:
        return f"edge_shift ({self.src[0]},{self.src[1]}) ({self.dst[0]},{self.dst[1]})"


def _edge_set(edges: Iterable[Edge]) -> frozenset[Edge]:
    out = set()
    for e in edges:
        out.add(_pair(*e, distinct=True))
    return frozenset(out)


def _edges_repr(edges: frozenset[Edge]) -> str:
    return "[" + ",".join(f"({v},{w})" for v, w in sorted(edges)) + "]"


@dataclass(frozen=True)
class NodeSplit:
    """Rewire the edges of ``rewired`` incident to ``node`` onto ``new``."""

    rewired: frozenset[Edge]
    node: int
    new: int

    def __post_init__(self):
        object.__setattr__(self, "rewired", _edge_set(self.rewired))

    def describe(self) -> str:
        return f"node_split v={self.node} new={self.new} edges={_edges_repr(self.rewired)}"


@dataclass(frozen=True)
class USplit:
    rewired: frozenset[Edge]
    node: int
    new: int

    def __post_init__(self):
        rew = _edge_set(self.rewired)
        for v, w in rew:
            if (w, v) not in rew:
                raise MalformedIntervention("symmetric split needs a symmetric rewire set")
        object.__setattr__(self, "rewired", rew)

    def describe(self) -> str:
        return f"usplit v={self.node} new={self.new} edges={_edges_repr(self.rewired)}"


@dataclass(frozen=True)
class NodeMerge:
    node: int
    merged: int

    def __post_init__(self):
        if self.node == self.merged:
            raise MalformedIntervention("merge endpoints must differ")

    def describe(self) -> str:
        return f"node_merge {self.node} {self.merged}"


@dataclass(frozen=True)
class NodeCopy:
    node: int
    new: int

    def __post_init__(self):
        if self.node == self.new:
            raise MalformedIntervention("copy target must be a different label")

    def describe(self) -> str:
        return f"node_copy v={self.node} new={self.new}"


@dataclass(frozen=True)
class UEdgeDel:
    v: int
    w: int

    def __post_init__(self):
        _pair(self.v, self.w, distinct=True)

    def describe(self) -> str:
        return f"uedge_del {self.v} {self.w}"


@dataclass(frozen=True)
class UEdgeAdd:
    v: int
    w: int

    def __post_init__(self):
        _pair(self.v, self.w, distinct=True)

    def describe(self) -> str:
        return f"uedge_add {self.v} {self.w}"


@dataclass(frozen=True)
class UEdgeShift:
    src: frozenset[int]
    dst: frozenset[int]

    def __post_init__(self):
        src = frozenset(int(v) for v in self.src)
        dst = frozenset(int(v) for v in self.dst)
        if len(src) != 2 or len(dst) != 2:
            raise MalformedIntervention("full-edge shift needs two node pairs")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)

    def describe(self) -> str:
        a, b = sorted(self.src)
        c, d = sorted(self.dst)
        return f"uedge_shift {{{a},{b}}} {{{c},{d}}}"


@dataclass(frozen=True)
class Kelmans:
    v: int
    u: int

    def __post_init__(self):
        if self.v == self.u:
            raise MalformedIntervention("kelmans endpoints must differ")

    def describe(self) -> str:
        return f"kelmans {self.v} {self.u}"


Intervention = Union[
    Identity,
    EdgeDel,
    EdgeAdd,
    NodeDel,
    NodeAdd,
    Isolate,
    EdgeShift,
    NodeSplit,
    USplit,
    NodeMerge,
    NodeCopy,
    UEdgeDel,
    UEdgeAdd,
    UEdgeShift,
    Kelmans,
]

Strategy = Sequence[Intervention]

KINDS = {
    Identity: "identity",
    EdgeDel: "edge_del",
    EdgeAdd: "edge_add",
    NodeDel: "node_del",
    NodeAdd: "node_add",
    Isolate: "isolate",
    EdgeShift: "edge_shift",
    NodeSplit: "node_split",
    USplit: "usplit",
    NodeMerge: "node_merge",
    NodeCopy: "node_copy",
    UEdgeDel: "uedge_del",
    UEdgeAdd: "uedge_add",
    UEdgeShift: "uedge_shift",
    Kelmans: "kelmans",
}

BY_KIND = {name: cls for cls, name in KINDS.items()}


def kind_of(k: Intervention) -> str:
    return KINDS[type(k)]


# ---------------------------------------------------------------------------
# Application semantics
# ---------------------------------------------------------------------------


def _apply_edge_del(k: EdgeDel, g: Graph) -> Graph:
    if (k.v, k.w) not in g.edges:
        return g
    return Graph(g.nodes, g.edges - {(k.v, k.w)})


def _apply_edge_add(k: EdgeAdd, g: Graph) -> Graph:
    if k.v not in g.nodes or k.w not in g.nodes or (k.v, k.w) in g.edges:
        return g
    return Graph(g.nodes, g.edges | {(k.v, k.w)})


def _apply_node_del(k: NodeDel, g: Graph) -> Graph:
    if k.v not in g.nodes:
        return g
    keep = g.nodes - {k.v}
    return Graph(keep, frozenset(e for e in g.edges if k.v not in e))


def _apply_node_add(k: NodeAdd, g: Graph) -> Graph:
    if k.v in g.nodes:
        return g
    return Graph(g.nodes | {k.v}, g.edges)


def _apply_isolate(k: Isolate, g: Graph) -> Graph:
    w = k.within
    keep = frozenset(e for e in g.edges if not ((e[0] in w) ^ (e[1] in w)))
    if keep == g.edges:
        return g
    return Graph(g.nodes, keep)


def _apply_edge_shift(k: EdgeShift, g: Graph) -> Graph:
    q, r = k.dst
    if k.src not in g.edges or q not in g.nodes or r not in g.nodes or k.dst in g.edges:
        return g
    return Graph(g.nodes, (g.edges - {k.src}) | {k.dst})


def _apply_split(k: NodeSplit | USplit, g: Graph) -> Graph:
    if k.new in g.nodes:
        return g
    v, new = k.node, k.new
    moved_out = {(v, w) for (x, w) in k.rewired if x == v and (v, w) in g.edges}
    moved_in = {(w, v) for (w, x) in k.rewired if x == v and (w, v) in g.edges}
    edges = set(g.edges) - moved_out - moved_in
    edges.update((new, w) for (_, w) in moved_out)
    edges.update((w, new) for (w, _) in moved_in)
    return Graph(g.nodes | {new}, frozenset(edges))


def _apply_merge(k: NodeMerge, g: Graph) -> Graph:
    v, m = k.node, k.merged
    if v not in g.nodes or m not in g.nodes:
        return g
    edges = set()
    for a, b in g.edges:
        a2 = v if a == m else a
        b2 = v if b == m else b
        if a2 != b2:
            edges.add((a2, b2))
    return Graph(g.nodes - {m}, frozenset(edges))


def _apply_copy(k: NodeCopy, g: Graph) -> Graph:
    if k.node not in g.nodes or k.new in g.nodes:
        return g
    edges = set(g.edges)
    edges.update((u, k.new) for (u, x) in g.edges if x == k.node)
    edges.update((k.new, u) for (x, u) in g.edges if x == k.node)
    return Graph(g.nodes | {k.new}, frozenset(edges))


def _apply_uedge_del(k: UEdgeDel, g: Graph) -> Graph:
    drop = {(k.v, k.w), (k.w, k.v)} & g.edges
    if not drop:
        return g
    return Graph(g.nodes, g.edges - drop)


def _apply_uedge_add(k: UEdgeAdd, g: Graph) -> Graph:
    if k.v not in g.nodes or k.w not in g.nodes:
        return g
    add = {(k.v, k.w), (k.w, k.v)} - g.edges
    if not add:
        return g
    return Graph(g.nodes, g.edges | add)


def _apply_uedge_shift(k: UEdgeShift, g: Graph) -> Graph:
    a, b = sorted(k.src)
    c, d = sorted(k.dst)
    full_src = {(a, b), (b, a)}
    full_dst = {(c, d), (d, c)}
    if not full_src <= g.edges:
        return g
    if c not in g.nodes or d not in g.nodes or (full_dst & g.edges):
        return g
    return Graph(g.nodes, (g.edges - full_src) | full_dst)


def _apply_kelmans(k: Kelmans, g: Graph) -> Graph:
    v, u = k.v, k.u
    if v not in g.nodes or u not in g.nodes:
        return g
    edges = set(g.edges)
    for w in list(g.nodes):
        if w in (v, u):
            continue
        full = {(v, w), (w, v)}
        if full <= edges and not ({(u, w), (w, u)} & edges):
            edges -= full
            edges |= {(u, w), (w, u)}
    if edges == g.edges:
        return g
    return Graph(g.nodes, frozenset(edges))


_APPLY: dict[type, Callable] = {
    Identity: lambda k, g: g,
    EdgeDel: _apply_edge_del,
    EdgeAdd: _apply_edge_add,
    NodeDel: _apply_node_del,
    NodeAdd: _apply_node_add,
    Isolate: _apply_isolate,
    EdgeShift: _apply_edge_shift,
    NodeSplit: _apply_split,
    USplit: _apply_split,
    NodeMerge: _apply_merge,
    NodeCopy: _apply_copy,
    UEdgeDel: _apply_uedge_del,
    UEdgeAdd: _apply_uedge_add,
    UEdgeShift: _apply_uedge_shift,
    Kelmans: _apply_kelmans,
}


def apply(k: Intervention, g: Graph) -> Graph:
    """Apply one intervention; no-op conditions return the input graph."""
    return _APPLY[type(k)](k, g)


def is_effective(k: Intervention, g: Graph) -> bool:
    return apply(k, g) != g


def apply_strategy(steps: Strategy, g: Graph) -> Graph:
    for k in steps:
        g = apply(k, g)
    return g


def describe_strategy(steps: Strategy) -> str:
    return "\n".join(k.describe() for k in steps)


def sort_key(k: Intervention) -> tuple:
    """Deterministic total order used for move generation and tie-breaks."""
    name = kind_of(k)
    if isinstance(k, Identity):
        return (name,)
    if isinstance(k, (EdgeDel, EdgeAdd, UEdgeDel, UEdgeAdd)):
        return (name, k.v, k.w)
    if isinstance(k, (NodeDel, NodeAdd)):
        return (name, k.v)
    if isinstance(k, Isolate):
        return (name, tuple(sorted(k.within)))
    if isinstance(k, EdgeShift):
        return (name, k.src, k.dst)
    if isinstance(k, (NodeSplit, USplit)):
        return (name, k.node, k.new, tuple(sorted(k.rewired)))
    if isinstance(k, NodeMerge):
        return (name, k.node, k.merged)
    if isinstance(k, NodeCopy):
        return (name, k.node, k.new)
    if isinstance(k, UEdgeShift):
        return (name, tuple(sorted(k.src)), tuple(sorted(k.dst)))
    return (name, k.v, k.u)


# ---------------------------------------------------------------------------
# Text round-trip (one step per line)
# ---------------------------------------------------------------------------

_EDGES_RE = re.compile(r"\((\d+),(\d+)\)")


def _parse_edges(text: str) -> frozenset[Edge]:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise MalformedIntervention(f"bad edge list: {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return frozenset()
    found = _EDGES_RE.findall(inner)
    if _EDGES_RE.sub("", inner).strip(", ") != "":
        raise MalformedIntervention(f"bad edge list: {text!r}")
    return frozenset((int(a), int(b)) for a, b in found)


def parse_step(line: str) -> Intervention:
    text = line.strip()
    parts = text.split()
    if not parts:
        raise MalformedIntervention("empty step")
    name = parts[0]
    rest = parts[1:]
    try:
        if name == "identity" and not rest:
            return Identity()
        if name in ("edge_del", "edge_add", "uedge_del", "uedge_add") and len(rest) == 2:
            return BY_KIND[name](int(rest[0]), int(rest[1]))
        if name in ("node_del", "node_add") and len(rest) == 1:
            return BY_KIND[name](int(rest[0]))
        if name == "isolate" and len(rest) == 1:
            body = rest[0]
            if not (body.startswith("{") and body.endswith("}")):
                raise MalformedIntervention(f"bad node set: {body!r}")
            inner = body[1:-1]
            items = [s for s in inner.split(",") if s.strip()]
            return Isolate(frozenset(int(s) for s in items))
        if name == "edge_shift" and len(rest) == 2:
            pairs = [_EDGES_RE.fullmatch(p) for p in rest]
            if not all(pairs):
                raise MalformedIntervention(f"bad shift: {text!r}")
            (a, b), (c, d) = [(int(m.group(1)), int(m.group(2))) for m in pairs]
            return EdgeShift((a, b), (c, d))
        if name == "uedge_shift" and len(rest) == 2:
            sets = []
            for p in rest:
                if not (p.startswith("{") and p.endswith("}")):
                    raise MalformedIntervention(f"bad shift: {text!r}")
                sets.append(frozenset(int(s) for s in p[1:-1].split(",")))
            return UEdgeShift(sets[0], sets[1])
        if name in ("node_split", "usplit"):
            kv = dict(p.split("=", 1) for p in rest)
            return BY_KIND[name](_parse_edges(kv["edges"]), int(kv["v"]), int(kv["new"]))
        if name == "node_copy":
            kv = dict(p.split("=", 1) for p in rest)
            return NodeCopy(int(kv["v"]), int(kv["new"]))
        if name == "node_merge" and len(rest) == 2:
            return NodeMerge(int(rest[0]), int(rest[1]))
        if name == "kelmans" and len(rest) == 2:
            return Kelmans(int(rest[0]), int(rest[1]))
    except MalformedIntervention:
        raise
    except (ValueError, KeyError) as exc:
        raise MalformedIntervention(f"cannot parse step {text!r}: {exc}") from exc
    raise MalformedIntervention(f"unknown step {text!r}")


def parse_strategy(text: str) -> list[Intervention]:
    steps = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            steps.append(parse_step(line))
    return steps


# JSON forms mirror the text forms field by field.


def step_to_json(k: Intervention) -> dict:
    name = kind_of(k)
    if isinstance(k, Identity):
        return {"kind": name}
    if isinstance(k, (EdgeDel, EdgeAdd, UEdgeDel, UEdgeAdd)):
        return {"kind": name, "v": k.v, "w": k.w}
    if isinstance(k, (NodeDel, NodeAdd)):
        return {"kind": name, "v": k.v}
    if isinstance(k, Isolate):
        return {"kind": name, "within": sorted(k.within)}
    if isinstance(k, EdgeShift):
        return {"kind": name, "src": list(k.src), "dst": list(k.dst)}
    if isinstance(k, (NodeSplit, USplit)):
        return {"kind": name, "v": k.node, "new": k.new, "edges": [list(e) for e in sorted(k.rewired)]}
    if isinstance(k, NodeMerge):
        return {"kind": name, "v": k.node, "merged": k.merged}
    if isinstance(k, NodeCopy):
        return {"kind": name, "v": k.node, "new": k.new}
    if isinstance(k, UEdgeShift):
        return {"kind": name, "src": sorted(k.src), "dst": sorted(k.dst)}
    return {"kind": name, "v": k.v, "u": k.u}


def step_from_json(obj: dict) -> Intervention:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise MalformedIntervention(f"bad intervention object: {obj!r}")
    name = obj["kind"]
    try:
        if name == "identity":
            return Identity()
        if name in ("edge_del", "edge_add", "uedge_del", "uedge_add"):
            return BY_KIND[name](int(obj["v"]), int(obj["w"]))
        if name in ("node_del", "node_add"):
            return BY_KIND[name](int(obj["v"]))
        if name == "isolate":
            return Isolate(frozenset(int(v) for v in obj["within"]))
        if name == "edge_shift":
            return EdgeShift(tuple(obj["src"]), tuple(obj["dst"]))
        if name == "uedge_shift":
            return UEdgeShift(frozenset(obj["src"]), frozenset(obj["dst"]))
        if name in ("node_split", "usplit"):
            edges = frozenset((int(a), int(b)) for a, b in obj["edges"])
            return BY_KIND[name](edges, int(obj["v"]), int(obj["new"]))
        if name == "node_merge":
            return NodeMerge(int(obj["v"]), int(obj["merged"]))
        if name == "node_copy":
            return NodeCopy(int(obj["v"]), int(obj["new"]))
        if name == "kelmans":
            return Kelmans(int(obj["v"]), int(obj["u"]))
    except MalformedIntervention:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedIntervention(f"cannot parse intervention {obj!r}: {exc}") from exc
    raise MalformedIntervention(f"unknown intervention kind {name!r}")


# ---------------------------------------------------------------------------
# Intervention sets and reachability
# ---------------------------------------------------------------------------


def fresh_label(g: Graph) -> int:
    v = 0
    while v in g.nodes:
        v += 1
    return v


@dataclass(frozen=True)
class InterventionSet:
    """An admissible family: named generator kinds plus optional explicit values.

    ``label_pool`` supplies labels for node-creating moves; when empty the
    smallest unused label is drawn. ``within`` restricts edge endpoints.
    """

    kinds: frozenset[str] = field(default_factory=frozenset)
    explicit: tuple[Intervention, ...] = ()
    label_pool: tuple[int, ...] = ()
    within: frozenset[int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kinds", frozenset(self.kinds))
        unknown = self.kinds - set(BY_KIND)
        if unknown:
            raise MalformedIntervention(f"unknown intervention kinds: {sorted(unknown)}")

    def contains(self, k: Intervention) -> bool:
        if k in self.explicit:
            return True
        if kind_of(k) not in self.kinds:
            return False
        if self.within is not None:
            touched = _touched_nodes(k)
            if not touched <= self.within:
                return False
        return True

    def _new_labels(self, g: Graph) -> list[int]:
        pool = [v for v in self.label_pool if v not in g.nodes]
        return pool if pool else [fresh_label(g)]

    def moves(self, g: Graph) -> list[Intervention]:
        """Deterministically ordered candidate moves for the given graph."""
        ns = sorted(g.nodes if self.within is None else g.nodes & self.within)
        out: list[Intervention] = list(self.explicit)
        ks = self.kinds
        if "edge_del" in ks:
            out.extend(EdgeDel(v, w) for v, w in sorted(g.edges) if self._edge_ok(v, w))
        if "edge_add" in ks:
            out.extend(
                EdgeAdd(v, w)
                for v in ns
                for w in ns
                if v != w and (v, w) not in g.edges
            )
        if "node_del" in ks:
            out.extend(NodeDel(v) for v in ns)
        if "node_add" in ks:
            out.extend(NodeAdd(v) for v in self._new_labels(g))
        if "isolate" in ks:
            out.extend(Isolate(frozenset({v})) for v in ns)
        if "edge_shift" in ks:
            for v, w in sorted(g.edges):
                if not self._edge_ok(v, w):
                    continue
                for q in ns:
                    for r in ns:
                        if q != r and (q, r) not in g.edges:
                            out.append(EdgeShift((v, w), (q, r)))
        if "node_split" in ks:
            for v in ns:
                incident = sorted(e for e in g.edges if v in e)
                for new in self._new_labels(g):
                    for mask in range(1 << len(incident)):
                        rew = frozenset(e for t, e in enumerate(incident) if (mask >> t) & 1)
                        out.append(NodeSplit(rew, v, new))
        if "usplit" in ks:
            for v in ns:
                partners = sorted(
                    w for w in g.nodes if (v, w) in g.edges and (w, v) in g.edges
                )
                for new in self._new_labels(g):
                    for mask in range(1 << len(partners)):
                        chosen = [w for t, w in enumerate(partners) if (mask >> t) & 1]
                        rew = frozenset(
                            e for w in chosen for e in ((v, w), (w, v))
                        )
                        out.append(USplit(rew, v, new))
        if "node_merge" in ks:
            out.extend(NodeMerge(v, m) for v in ns for m in ns if v != m)
        if "node_copy" in ks:
            out.extend(NodeCopy(v, new) for v in ns for new in self._new_labels(g))
        if "uedge_del" in ks:
            out.extend(
                UEdgeDel(v, w)
                for v, w in sorted(g.edges)
                if v < w and (w, v) in g.edges and self._edge_ok(v, w)
            )
        if "uedge_add" in ks:
            out.extend(
                UEdgeAdd(v, w)
                for i, v in enumerate(ns)
                for w in ns[i + 1 :]
                if not {(v, w), (w, v)} <= g.edges
            )
        if "uedge_shift" in ks:
            fulls = sorted((v, w) for v, w in g.edges if v < w and (w, v) in g.edges)
            empties = [
                (q, r)
                for i, q in enumerate(ns)
                for r in ns[i + 1 :]
                if not ({(q, r), (r, q)} & g.edges)
            ]
            for v, w in fulls:
                if not self._edge_ok(v, w):
                    continue
                for q, r in empties:
                    out.append(UEdgeShift(frozenset({v, w}), frozenset({q, r})))
        if "kelmans" in ks:
            out.extend(Kelmans(v, u) for v in ns for u in ns if v != u)
        if "identity" in ks:
            out.append(Identity())
        seen = set()
        uniq = []
        for k in sorted(out, key=sort_key):
            if k not in seen:
                seen.add(k)
                uniq.append(k)
        return uniq

    def _edge_ok(self, v: int, w: int) -> bool:
        return self.within is None or (v in self.within and w in self.within)


def _touched_nodes(k: Intervention) -> frozenset[int]:
    j = step_to_json(k)
    vals: set[int] = set()
    for key in ("v", "w", "u", "new", "merged"):
        if key in j:
            vals.add(j[key])
    for key in ("within", "src", "dst"):
        if key in j:
            vals.update(j[key])
    if "edges" in j:
        vals.update(v for e in j["edges"] for v in e)
    return frozenset(vals)


def iset(*kinds: str, **kw) -> InterventionSet:
    return InterventionSet(kinds=frozenset(kinds), **kw)


def iset_to_json(family: InterventionSet) -> dict:
    out: dict = {"kinds": sorted(family.kinds)}
    if family.explicit:
        out["explicit"] = [step_to_json(k) for k in family.explicit]
    if family.label_pool:
        out["label_pool"] = list(family.label_pool)
    if family.within is not None:
        out["within"] = sorted(family.within)
    return out


def iset_from_json(obj) -> InterventionSet:
    if isinstance(obj, str):
        obj = {"kinds": [s for s in obj.split(",") if s]}
    if isinstance(obj, list):
        obj = {"kinds": obj}
    if not isinstance(obj, dict):
        raise MalformedIntervention(f"bad intervention family: {obj!r}")
    kinds = obj.get("kinds", [])
    if not isinstance(kinds, list) or not all(isinstance(s, str) for s in kinds):
        raise MalformedIntervention("family kinds must be a list of names")
    explicit = tuple(step_from_json(e) for e in obj.get("explicit", []))
    pool = tuple(int(v) for v in obj.get("label_pool", []))
    within = obj.get("within")
    return InterventionSet(
        kinds=frozenset(kinds),
        explicit=explicit,
        label_pool=pool,
        within=None if within is None else frozenset(int(v) for v in within),
    )


@dataclass(frozen=True)
class ReachResult:
    graphs: tuple[Graph, ...]
    complete: bool


def reachable_set(
    g: Graph,
    family: InterventionSet,
    max_depth: int,
    max_states: int = 100_000,
    dedup: str = "canonical",
) -> ReachResult:
    """BFS closure of strategy applications up to depth, including g itself."""
    if dedup not in ("canonical", "labeled"):
        raise ValueError("dedup must be 'canonical' or 'labeled'")

    def key(x: Graph):
        return canonical_form(x) if dedup == "canonical" else x

    seen = {key(g)}
    out = [g]
    frontier = [g]
    complete = True
    for _ in range(max_depth):
        if not frontier:
            break
        nxt = []
        for state in frontier:
            for k in family.moves(state):
                h = apply(k, state)
                if h == state:
                    continue
                kh = key(h)
                if kh in seen:
                    continue
                if len(out) >= max_states:
                    complete = False
                    break
                seen.add(kh)
                out.append(h)
                nxt.append(h)
            if not complete:
                break
        if not complete:
            break
        frontier = nxt
    # complete refers to the state budget only; bounded depth is part of
    # the question being asked, not a truncation
    return ReachResult(tuple(out), complete)


# ---------------------------------------------------------------------------
# Evidence-level checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReverseCounterexample:
    graph: Graph
    forward: tuple[Intervention, ...]
    backward: tuple[Intervention, ...]


@dataclass(frozen=True)
class ReverseVerdict:
    ok: bool
    counterexample: ReverseCounterexample | None = None


def check_not_partially_self_reverse(
    family: InterventionSet,
    samples: Iterable[Graph],
    depth: int = 3,
    max_states: int = 2000,
) -> ReverseVerdict:
    """Search for strategies a, k with k(a(G)) = G while a(G) != G."""
    for g in samples:
        frontier: list[tuple[Graph, tuple[Intervention, ...]]] = [(g, ())]
        seen = {g}
        reached: list[tuple[Graph, tuple[Intervention, ...]]] = []
        for _ in range(depth):
            nxt = []
            for state, path in frontier:
                for k in family.moves(state):
                    h = apply(k, state)
                    if h == state or h in seen:
                        continue
                    seen.add(h)
                    nxt.append((h, path + (k,)))
                    if len(seen) > max_states:
                        break
                if len(seen) > max_states:
                    break
            reached.extend(nxt)
            frontier = nxt
        for h, path in reached:
            back = _find_path(h, g, family, depth, max_states)
            if back is not None:
                return ReverseVerdict(False, ReverseCounterexample(g, path, back))
    return ReverseVerdict(True)


def _find_path(
    src: Graph, dst: Graph, family: InterventionSet, depth: int, max_states: int
) -> tuple[Intervention, ...] | None:
    frontier: list[tuple[Graph, tuple[Intervention, ...]]] = [(src, ())]
    seen = {src}
    for _ in range(depth):
        nxt = []
        for state, path in frontier:
            for k in family.moves(state):
                h = apply(k, state)
                if h == dst:
                    return path + (k,)
                if h == state or h in seen or len(seen) > max_states:
                    continue
                seen.add(h)
                nxt.append((h, path + (k,)))
        frontier = nxt
    return None
