"""Degree-class regularization, spider comparison and the heavy/light matching claims."""

from fractions import Fraction

import networkx as nx
import pytest

from conftest import seeded_bipartite, uneven_bipartite
from densesub.core.counting import count_hst, list_t_matchings
from densesub.core.errors import (HypothesisError, MissingBipartitionError, PreconditionError,
                                  RegularizationError)
from densesub.core.graph import Graph, generate
from densesub.core.oracles import naive_link_sides
from densesub.core.regularization import (WeightLabel, classify_heavy_light, claim_bounds_check,
                                          degree_class_select, load_regularization, regularize,
                                          spider_vs_h1t_report, sqrt2_ratio_bound_holds, threshold)


def cycle_with_sides(n):
    edges = [(v, (v + 1) % n) for v in range(n)]
    return Graph.from_edges(n, edges, (range(0, n, 2), range(1, n, 2)))


def test_threshold_constants():
    assert threshold(0) == 0
    assert threshold(1) == Fraction(1, 2)
    assert threshold(8) == 1
    assert threshold(9) == Fraction(128, 81)
    with pytest.raises(PreconditionError):
        threshold(-1)


def test_sqrt2_ratio_bounds_hold_over_the_sweep():
    for i in range(2, 201):
        assert sqrt2_ratio_bound_holds(2, 5, i)
        assert sqrt2_ratio_bound_holds(4, 328, i)
    assert not sqrt2_ratio_bound_holds(2, 4, 6)
    assert not sqrt2_ratio_bound_holds(2, 0, 6)


def test_complete_bipartite_floors_to_nothing():
    G = generate("complete_bipartite", {"a": 16, "b": 16})
    selection = degree_class_select(G, "A", G.e)
    assert selection.index == 9
    assert selection.vertices == ()
    assert selection.class_size == 16
    with pytest.raises(RegularizationError):
        regularize(G)


def test_low_degree_class_is_selected():
    # A 0..3 reach six B vertices, the rest of A is complete to B
    edges = [(x, 32 + y) for x in range(4) for y in range(6)]
    edges += [(x, 32 + y) for x in range(4, 32) for y in range(28)]
    G = Graph.from_edges(60, edges, (range(32), range(32, 60)))
    selection = degree_class_select(G, "A", G.e)
    assert selection.index == 4
    assert selection.vertices == (0, 1)
    assert selection.class_size == 4


def test_degree_class_select_checks_its_inputs():
    G = generate("complete_bipartite", {"a": 2, "b": 2})
    with pytest.raises(PreconditionError):
        degree_class_select(G, "C", 4)
    with pytest.raises(RegularizationError):
        degree_class_select(G, "A", 0)
    with pytest.raises(MissingBipartitionError):
        degree_class_select(generate("cycle", {"n": 4}), "A", 4)


def test_regularize_needs_edges():
    with pytest.raises(PreconditionError):
        regularize(Graph.from_edges(4, [], (range(2), range(2, 4))))


@pytest.mark.parametrize("seed", range(1, 51))
def test_regularization_on_dense_bipartite_graphs(seed):
    G = seeded_bipartite(1024, 1024, 0.5 if seed % 2 else 0.9, seed)
    result = regularize(G)
    assert len(result.a_prime) == 1024 // 2 ** result.i
    assert len(result.b_prime) == 1024 // 2 ** result.j
    assert result.e_prime * 64 * result.i ** 2 * result.j ** 2 >= G.e
    assert result.audit(G) == []

    a_low, a_high = (threshold(k) * Fraction(G.e, 1024) for k in (result.i - 1, result.i))
    assert all(a_low <= G.degree(v) < a_high for v in result.a_prime)
    a_mask = sum(1 << v for v in result.a_prime)
    b_low, b_high = (threshold(k) * result.b_base / 1024 for k in (result.j - 1, result.j))
    assert all(b_low <= (G.bits[v] & a_mask).bit_count() < b_high for v in result.b_prime)


def test_regularization_text_and_subgraph_layout():
    G = uneven_bipartite(0)
    result = regularize(G)
    assert result.g_prime.side_a == frozenset(range(16))
    assert result.g_prime.labels[:16] == result.a_prime
    summary, graph = load_regularization(result.to_text())
    assert summary == (5, 9, 16, 1, 1)
    assert (graph.n, graph.e) == (17, 1)


def test_audit_reports_a_forged_result():
    G = uneven_bipartite(1)
    result = regularize(G)
    forged = type(result)(result.i, result.j, result.a_prime[:-1], result.b_prime,
                          result.g_prime, result.e_prime + 1, result.degree_caps, result.e,
                          result.intermediate_e, result.side_sizes)
    problems = forged.audit(G)
    assert "a_prime_size" in problems
    assert "edge_recount" in problems


@pytest.mark.parametrize("text", ["", "5 9 16\n", "1 1 1 1 5\n2 1\n0 1\n"])
def test_load_regularization_errors(text):
    with pytest.raises(RegularizationError):
        load_regularization(text)


def test_spider_report_on_an_edgeless_graph():
    report = spider_vs_h1t_report(Graph.from_edges(4, [], (range(2), range(2, 4))), 2, 1)
    assert (report.h1t_incidences, report.spiders) == (0, 0)
    assert report.ratio is None
    assert not report.hypothesis_met
    assert report.holds


def test_spider_report_on_k88():
    report = spider_vs_h1t_report(generate("complete_bipartite", {"a": 8, "b": 8}), 2, 1)
    assert report.h1t_incidences == 56448
    assert report.spiders == 18816
    assert report.ratio == 3
    assert not report.hypothesis_met
    with pytest.raises(PreconditionError):
        spider_vs_h1t_report(generate("complete_bipartite", {"a": 2, "b": 2}), 1, 1)


def test_matchings_of_c4_are_light():
    labelled = classify_heavy_light(generate("complete_bipartite", {"a": 2, "b": 2}), 1)
    assert len(labelled) == 4
    assert all(w.label is WeightLabel.LIGHT and w.link_edges == 1 for w in labelled)


def test_star_edges_have_empty_links():
    labelled = classify_heavy_light(generate("complete_bipartite", {"a": 1, "b": 5}), 1)
    assert [w.link_edges for w in labelled] == [0] * 5


def test_cube_labels_match_a_recount():
    cube = generate("hypercube_q3")
    graph = cube.to_networkx()
    for w in classify_heavy_light(cube, 2):
        x_side, y_side = naive_link_sides(cube, w.matching)
        count = sum(1 for x in x_side for y in y_side if graph.has_edge(x, y))
        assert w.link_edges == count
        assert (w.label is WeightLabel.HEAVY) == (count > 16)


@pytest.mark.parametrize("G", [
    cycle_with_sides(6),
    cycle_with_sides(8),
    generate("complete_bipartite", {"a": 2, "b": 3}),
], ids=["c6", "c8", "k23"])
def test_claims_hold_on_h22_free_graphs(G):
    report = claim_bounds_check(G, 2)
    assert report.passes
    assert report.anchors_checked == len(list_t_matchings(G, 1))


def test_claims_hold_on_the_heawood_graph():
    heawood = nx.heawood_graph()
    for node, side in nx.bipartite.color(heawood).items():
        heawood.nodes[node]["side"] = side
    G = Graph.from_networkx(heawood, bipartition_attr="side")
    assert claim_bounds_check(G, 2).passes


@pytest.mark.parametrize("seed", range(25))
def test_claims_hold_on_sparse_random_graphs(seed):
    G = seeded_bipartite(6, 6, 0.35, seed)
    if count_hst(G, 2, 2):
        pytest.skip("sample contains H_{2,2}")
    report = claim_bounds_check(G, 2)
    assert report.passes


def test_claims_refuse_graphs_with_h22():
    with pytest.raises(HypothesisError):
        claim_bounds_check(generate("hypercube_q3"), 2)
    with pytest.raises(PreconditionError):
        claim_bounds_check(cycle_with_sides(6), 1)
