import json
import random
import warnings

import pytest

from netres.errors import (
    BadConfig,
    DanglingEdge,
    DuplicateEdgeWarning,
    Malformed,
    SelfLoop,
)
from netres.graphio import (
    GraphEntry,
    Workspace,
    graph_from_json,
    graph_hash,
    graph_to_json,
    parse_graph,
    serialize_graph,
)
from netres.graphs import Graph, directed_star, edgeless, undirected_line
from netres.interventions import EdgeAdd, EdgeDel, NodeSplit


def random_graph(rng, n):
    nodes = frozenset(range(n))
    edges = frozenset(
        (v, w) for v in range(n) for w in range(n) if v != w and rng.random() < 0.4
    )
    return Graph(nodes, edges)


# --- text parsing ---------------------------------------------------------


def test_parse_directed_edge():
    assert parse_graph("directed\n0 1\n") == Graph(frozenset({0, 1}), frozenset({(0, 1)}))


def test_parse_undirected_expands():
    g = parse_graph("undirected\n0 1\n")
    assert g.edges == frozenset({(0, 1), (1, 0)})


def test_parse_self_loop_rejected():
    with pytest.raises(SelfLoop) as exc:
        parse_graph("directed\n0 0\n")
    assert exc.value.line == 2


def test_parse_isolated_nodes_and_comments():
    text = "# a remark\ndirected\n0 1  # inline\nnode 7\n\nnode 2\n"
    g = parse_graph(text)
    assert g.nodes == frozenset({0, 1, 2, 7})
    assert g.edges == frozenset({(0, 1)})


def test_parse_bytes():
    assert parse_graph(b"directed\n0 1\n") == parse_graph("directed\n0 1\n")


def test_parse_bad_utf8():
    with pytest.raises(Malformed):
        parse_graph(b"\xff\xfe")


def test_parse_missing_header_position():
    with pytest.raises(Malformed) as exc:
        parse_graph("0 1\n")
    assert (exc.value.line, exc.value.col) == (1, 1)


def test_parse_bad_token_position():
    with pytest.raises(Malformed) as exc:
        parse_graph("directed\n0 x\n")
    assert exc.value.line == 2
    assert exc.value.col == 3


def test_parse_bad_node_line():
    with pytest.raises(Malformed) as exc:
        parse_graph("directed\nnode\n")
    assert exc.value.line == 2


def test_parse_arity_error():
    with pytest.raises(Malformed):
        parse_graph("directed\n0 1 2\n")


def test_parse_empty_input():
    with pytest.raises(Malformed):
        parse_graph("   \n# only comments\n")


def test_parse_duplicate_edge_warns():
    with pytest.warns(DuplicateEdgeWarning):
        g = parse_graph("directed\n0 1\n0 1\n")
    assert g.edges == frozenset({(0, 1)})


def test_parse_reversed_duplicate_in_undirected_warns():
    with pytest.warns(DuplicateEdgeWarning):
        g = parse_graph("undirected\n0 1\n1 0\n")
    assert g.edges == frozenset({(0, 1), (1, 0)})


def test_reversed_edge_in_directed_is_fine():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        g = parse_graph("directed\n0 1\n1 0\n")
    assert len(g.edges) == 2


# --- JSON parsing -----------------------------------------------------------


def test_parse_json_string():
    g = parse_graph('{"directed": true, "nodes": [0, 1, 5], "edges": [[0, 1]]}')
    assert g == Graph(frozenset({0, 1, 5}), frozenset({(0, 1)}))


def test_parse_json_undirected_expands():
    g = parse_graph('{"directed": false, "nodes": [0, 1], "edges": [[0, 1]]}')
    assert g.edges == frozenset({(0, 1), (1, 0)})


def test_parse_json_syntax_error_position():
    with pytest.raises(Malformed) as exc:
        parse_graph('{"directed": true,}')
    assert exc.value.line == 1
    assert exc.value.col > 1


@pytest.mark.parametrize(
    "obj",
    [
        [],
        {"nodes": [0], "edges": []},
        {"directed": 1, "nodes": [0], "edges": []},
        {"directed": True, "nodes": 0, "edges": []},
        {"directed": True, "nodes": [-1], "edges": []},
        {"directed": True, "nodes": [True], "edges": []},
        {"directed": True, "nodes": [0, 1], "edges": [[0]]},
        {"directed": True, "nodes": [0, 1], "edges": [[0, "1"]]},
    ],
)
def test_json_validation(obj):
    with pytest.raises(Malformed):
        graph_from_json(obj)


def test_json_dangling_edge():
    with pytest.raises(DanglingEdge):
        graph_from_json({"directed": True, "nodes": [0], "edges": [[0, 1]]})


def test_json_self_loop():
    with pytest.raises(SelfLoop):
        graph_from_json({"directed": True, "nodes": [0], "edges": [[0, 0]]})


def test_json_duplicate_warns():
    with pytest.warns(DuplicateEdgeWarning):
        graph_from_json({"directed": False, "nodes": [0, 1], "edges": [[0, 1], [1, 0]]})


# --- serialization -----------------------------------------------------------


def test_serialize_directed_text(star4):
    assert serialize_graph(star4) == "directed\n0 1\n0 2\n0 3\n"


def test_serialize_undirected_once_per_pair():
    text = serialize_graph(undirected_line(3))
    assert text == "undirected\n0 1\n1 2\n"


def test_serialize_isolated_nodes():
    g = Graph(frozenset({0, 1, 9}), frozenset({(0, 1)}))
    assert serialize_graph(g) == "directed\n0 1\nnode 9\n"


def test_serialize_edgeless_defaults_to_directed():
    assert serialize_graph(edgeless(2)) == "directed\nnode 0\nnode 1\n"


def test_serialize_json_canonical(star4):
    line = serialize_graph(star4, "json")
    assert line.endswith("\n")
    assert json.loads(line) == {
        "directed": True,
        "nodes": [0, 1, 2, 3],
        "edges": [[0, 1], [0, 2], [0, 3]],
    }


def test_serialize_unknown_format(star4):
    with pytest.raises(BadConfig):
        serialize_graph(star4, "dot")


def test_round_trip_bit_exact():
    rng = random.Random(11)
    for _ in range(60):
        g = random_graph(rng, rng.randint(0, 6))
        for fmt in ("text", "json"):
            text = serialize_graph(g, fmt)
            assert parse_graph(text) == g
            # canonical: a second pass changes nothing
            assert serialize_graph(parse_graph(text), fmt) == text


def test_round_trip_undirected():
    rng = random.Random(12)
    for _ in range(40):
        base = random_graph(rng, rng.randint(1, 6))
        g = Graph(base.nodes, base.edges | frozenset((w, v) for v, w in base.edges))
        text = serialize_graph(g)
        if g.edges:
            assert text.startswith("undirected")
        assert parse_graph(text) == g


def test_graph_json_round_trip(star4):
    assert graph_from_json(graph_to_json(star4)) == star4


# --- hashing ---------------------------------------------------------------


def test_graph_hash_shape(star4):
    h = graph_hash(star4)
    assert len(h) == 16
    assert int(h, 16) >= 0


def test_graph_hash_distinguishes():
    assert graph_hash(directed_star(4)) != graph_hash(edgeless(4))


def test_graph_hash_ignores_construction_order():
    a = Graph(frozenset([2, 0, 1]), frozenset([(1, 2), (0, 1)]))
    b = Graph(frozenset([0, 1, 2]), frozenset([(0, 1), (1, 2)]))
    assert graph_hash(a) == graph_hash(b)


# --- workspace ----------------------------------------------------------------


def test_entry_replay(star4):
    entry = GraphEntry(star4)
    assert entry.current == star4
    entry.push(EdgeDel(0, 1))
    entry.push(EdgeAdd(2, 3))
    assert entry.current == Graph(star4.nodes, frozenset({(0, 2), (0, 3), (2, 3)}))
    popped = entry.pop()
    assert popped == EdgeAdd(2, 3)
    assert entry.current == Graph(star4.nodes, frozenset({(0, 2), (0, 3)}))
    entry.pop()
    assert entry.current == star4


def test_entry_rebuilds_current_from_history(star4):
    entry = GraphEntry(star4, [EdgeDel(0, 1)])
    assert entry.current == Graph(star4.nodes, frozenset({(0, 2), (0, 3)}))


def test_workspace_ids(star4):
    ws = Workspace()
    assert ws.add_graph(star4) == "g1"
    assert ws.add_graph(edgeless(2)) == "g2"
    ws.add_graph(edgeless(1), gid="mine")
    assert ws.add_graph(star4) == "g3"
    assert set(ws.graphs) == {"g1", "g2", "g3", "mine"}


def test_workspace_round_trip(star4):
    ws = Workspace()
    gid = ws.add_graph(star4)
    ws.graphs[gid].push(EdgeDel(0, 3))
    ws.graphs[gid].push(NodeSplit(frozenset({(0, 1)}), 0, 9))
    ws.presets["p"] = {"acceptance": {"q": "max_deg_out", "schedule": "1"}}
    clone = Workspace.loads(ws.dumps())
    assert clone.graphs.keys() == ws.graphs.keys()
    assert clone.graphs[gid].base == star4
    assert clone.graphs[gid].history == ws.graphs[gid].history
    assert clone.graphs[gid].current == ws.graphs[gid].current
    assert clone.presets == ws.presets


def test_workspace_dumps_stable(star4):
    ws = Workspace()
    ws.add_graph(star4)
    assert ws.dumps() == Workspace.loads(ws.dumps()).dumps()


@pytest.mark.parametrize(
    "obj",
    [
        [],
        {"graphs": []},
        {"graphs": {"g1": {}}},
        {"graphs": {}, "presets": []},
    ],
)
def test_workspace_validation(obj):
    with pytest.raises(BadConfig):
        Workspace.from_json(obj)


def test_workspace_loads_bad_json():
    with pytest.raises(BadConfig):
        Workspace.loads("{nope")
