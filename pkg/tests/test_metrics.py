import math
import random
from fractions import Fraction

import numpy as np
import pytest

import oracles
from netres.errors import DirectedUnsupported, EmptyGraph, NodeAbsent, TooSmall
from netres.graphs import (
    Graph,
    all_digraphs,
    bidirectional_ring,
    complete_graph,
    directed_line,
    directed_star,
    edgeless,
    undirected_line,
    undirected_star,
)
from netres.metrics import (
    CentralityKind,
    Side,
    average_degree,
    avg_communicability,
    betweenness,
    centrality,
    communicability,
    degree_moment,
    degree_variance,
    epidemic_ratio,
    graph_efficiency,
    max_centrality,
    spectral_radius,
)


def split_triangle():
    """Bidirectional triangle with one node split off: nodes {0,1,2,3},
    edges 0<->1, 0<->2, 2<->3."""
    return Graph(
        frozenset({0, 1, 2, 3}),
        frozenset({(0, 1), (1, 0), (0, 2), (2, 0), (2, 3), (3, 2)}),
    )


# --- degree moments ---------------------------------------------------------


def test_moment2_out_star(star4):
    assert degree_moment(star4, Side.OUT, 2) == Fraction(9, 4)


def test_moment2_in_star(star4):
    assert degree_moment(star4, Side.IN, 2) == Fraction(3, 4)


def test_moment2_total_uline():
    assert degree_moment(undirected_line(5), Side.TOTAL, 2) == Fraction(14, 5)


def test_average_degree_star(star4):
    assert average_degree(star4) == Fraction(3, 4)


def test_average_degree_complete(k3):
    assert average_degree(k3) == 2


def test_average_degree_edgeless():
    assert average_degree(edgeless(5)) == 0


def test_average_degree_empty():
    with pytest.raises(EmptyGraph):
        average_degree(Graph())


def test_variance_ring_zero(ring5):
    assert degree_variance(ring5, Side.IN) == 0
    assert degree_variance(ring5, Side.OUT) == 0


def test_variance_uline_positive(uline4):
    assert degree_variance(uline4, Side.IN) == Fraction(1, 4)


def test_variance_complete_zero():
    assert degree_variance(complete_graph(4), Side.OUT) == 0


def test_moments_match_oracle_randomized():
    rng = random.Random(3)
    for _ in range(30):
        g = oracles.random_graph(rng, rng.randint(1, 6), 0.4)
        for side in ("in", "out", "total"):
            got = degree_moment(g, Side(side), 2)
            assert got == oracles.moment(g, side, 2)


def test_second_moment_dominates_average():
    rng = random.Random(4)
    for _ in range(40):
        g = oracles.random_graph(rng, rng.randint(1, 7), 0.3)
        assert degree_moment(g, Side.OUT, 2) >= average_degree(g)


# --- efficiency -------------------------------------------------------------


def test_efficiency_edgeless():
    assert graph_efficiency(edgeless(4)) == 0


def test_efficiency_complete():
    assert graph_efficiency(complete_graph(5)) == 1


def test_efficiency_split_triangle_pair_sums():
    tri = complete_graph(3)
    assert graph_efficiency(tri) * 6 == 6
    h = split_triangle()
    assert graph_efficiency(h) * 12 == Fraction(26, 3)


def test_efficiency_too_small():
    with pytest.raises(TooSmall):
        graph_efficiency(edgeless(1))


def test_efficiency_matches_oracle():
    rng = random.Random(7)
    for _ in range(30):
        g = oracles.random_graph(rng, rng.randint(2, 6), 0.4)
        assert graph_efficiency(g) == oracles.efficiency(g)


# --- communicability --------------------------------------------------------


def test_communicability_edgeless_identity():
    cm = communicability(edgeless(2))
    assert np.allclose(cm.entries, np.eye(2))


def test_communicability_nilpotent(pair):
    cm = communicability(pair)
    assert cm.entry(0, 0) == pytest.approx(1.0, abs=1e-12)
    assert cm.entry(0, 1) == pytest.approx(1.0, abs=1e-12)
    assert cm.entry(1, 0) == pytest.approx(0.0, abs=1e-12)
    assert cm.entry(1, 1) == pytest.approx(1.0, abs=1e-12)


def test_communicability_undirected_pair(upair):
    cm = communicability(upair)
    assert cm.entry(0, 0) == pytest.approx(math.cosh(1.0), abs=1e-12)
    assert cm.entry(0, 1) == pytest.approx(math.sinh(1.0), abs=1e-12)


def test_avg_communicability_values(pair, upair):
    assert avg_communicability(edgeless(2)) == pytest.approx(0.5, abs=1e-12)
    assert avg_communicability(pair) == pytest.approx(0.75, abs=1e-12)
    assert avg_communicability(upair) == pytest.approx(math.e / 2, abs=1e-12)


def test_communicability_matches_expm():
    rng = random.Random(9)
    for _ in range(25):
        g = oracles.random_graph(rng, rng.randint(1, 8), 0.4)
        cm = communicability(g)
        assert np.allclose(cm.entries, oracles.expm_matrix(g), atol=1e-10)


def test_communicability_entrywise_monotone_under_edge_del():
    rng = random.Random(13)
    for _ in range(25):
        g = oracles.random_graph(rng, rng.randint(2, 8), 0.4)
        if not g.edges:
            continue
        e = sorted(g.edges)[rng.randrange(len(g.edges))]
        h = Graph(g.nodes, g.edges - {e})
        a = communicability(g).entries
        b = communicability(h).entries
        assert (b <= a + 1e-9).all()


# --- centralities -----------------------------------------------------------


def test_closeness_star_hub_out(star4):
    assert centrality(star4, CentralityKind.CLOSE_OUT, 0) == 1


def test_closeness_star_satellite_in():
    for n in (2, 4, 7):
        g = directed_star(n)
        assert centrality(g, CentralityKind.CLOSE_IN, 1) == Fraction(1, n - 1)


def test_betweenness_complete_zero():
    g = complete_graph(4)
    assert all(betweenness(g, v) == 0 for v in g.nodes)


def test_max_out_degree_star(star4):
    assert max_centrality(star4, CentralityKind.DEG_OUT) == 3


def test_max_betweenness_split_triangle():
    h = split_triangle()
    assert max_centrality(h, CentralityKind.BETWEENNESS) == 2
    assert betweenness(h, 0) == 2
    assert betweenness(h, 2) == 2


def test_max_centrality_edgeless_zero():
    g = edgeless(3)
    for kind in (CentralityKind.DEG_IN, CentralityKind.DEG_OUT, CentralityKind.CLOSE_IN, CentralityKind.CLOSE_OUT):
        assert max_centrality(g, kind) == 0


def test_closeness_single_node():
    g = edgeless(1)
    assert centrality(g, CentralityKind.CLOSE_OUT, 0) == 0


def test_total_kinds_need_undirected(star4):
    with pytest.raises(DirectedUnsupported):
        centrality(star4, CentralityKind.TOTAL_DEG, 0)


def test_centrality_absent_node(star4):
    with pytest.raises(NodeAbsent):
        centrality(star4, CentralityKind.DEG_IN, 42)


def test_closeness_matches_oracle():
    rng = random.Random(21)
    for _ in range(25):
        g = oracles.random_graph(rng, rng.randint(2, 6), 0.4)
        for v in g.nodes:
            assert centrality(g, CentralityKind.CLOSE_OUT, v) == oracles.closeness(g, v, False)
            assert centrality(g, CentralityKind.CLOSE_IN, v) == oracles.closeness(g, v, True)


def test_betweenness_exhaustive_all_4node_digraphs():
    # every digraph on 4 labels, against literal path enumeration
    count = 0
    for g in all_digraphs(range(4)):
        count += 1
        if count % 17:  # full sweep is criterion-level; sample here
            continue
        for v in g.nodes:
            assert betweenness(g, v) == oracles.betweenness(g, v)
    assert count == 2 ** 12


def test_betweenness_all_3node_digraphs():
    for g in all_digraphs(range(3)):
        for v in g.nodes:
            assert betweenness(g, v) == oracles.betweenness(g, v)


# --- undirected-only quantities ---------------------------------------------


def test_epidemic_ratio_uline(uline4):
    assert epidemic_ratio(uline4) == Fraction(5, 3)


def test_epidemic_ratio_edgeless():
    assert epidemic_ratio(edgeless(3)) == 0


def test_epidemic_ratio_ustar5():
    assert epidemic_ratio(undirected_star(5)) == Fraction(5, 2)


def test_epidemic_ratio_directed_rejected(star4):
    with pytest.raises(DirectedUnsupported):
        epidemic_ratio(star4)


def test_spectral_radius_ustar5():
    assert spectral_radius(undirected_star(5)) == pytest.approx(2.0, abs=1e-9)


def test_spectral_radius_uline3():
    assert spectral_radius(undirected_line(3)) == pytest.approx(math.sqrt(2), abs=1e-9)


def test_spectral_radius_edgeless():
    assert spectral_radius(edgeless(4)) == 0.0


def test_spectral_radius_directed_rejected(pair):
    with pytest.raises(DirectedUnsupported):
        spectral_radius(pair)


def test_spectral_radius_bounded_below_by_avg_degree():
    rng = random.Random(17)
    for _ in range(20):
        g = oracles.random_graph(rng, rng.randint(2, 7), 0.5, undirected=True)
        avg = 2 * sum(1 for v, w in g.edges if v < w) / g.n
        assert spectral_radius(g) >= avg - 1e-9
