"""Structured counters, bound evaluators and link-graph identities."""

from fractions import Fraction
from math import comb

import pytest

from conftest import seeded_bipartite, seeded_gnp
from densesub.core.counting import (biclique_constant, binomial_floor_check, cherry_c4_checks,
                                    count_bicliques, count_cherries_and_c4,
                                    count_h1t, count_hst, count_htt_incidences,
                                    count_matchings_in, count_spiders, count_stars,
                                    count_t_matchings, find_biclique, h1t_bound_check,
                                    htt_bound_check, htt_constant, is_biclique_free,
                                    link_graph, link_identities, matching_bound_checks)
from densesub.core.errors import CapExceededError, MissingBipartitionError, PreconditionError
from densesub.core.goodness import build_aux
from densesub.core.graph import Graph, generate, h_st


def k(a, b):
    return generate("complete_bipartite", {"a": a, "b": b})


def test_closed_form_constants():
    assert biclique_constant(2) == Fraction(1, 8)
    assert htt_constant(1) == Fraction(1, 2 ** 10 * 1)
    assert htt_constant(2) == Fraction(1, 2 ** 29 * 8)


def test_binomial_floor_check():
    assert binomial_floor_check(10, 3)
    assert binomial_floor_check(4, 2)
    with pytest.raises(PreconditionError):
        binomial_floor_check(3, 2)


def test_stars():
    assert count_stars(generate("complete", {"n": 4}), 2) == 12
    assert count_stars(generate("star", {"k": 5}), 3) == comb(5, 3)


def test_bicliques_in_k25_meet_the_bound():
    report = count_bicliques(generate("complete", {"n": 25}), 2)
    assert report.count == 37950
    assert report.bound_value == 2592
    assert report.hypotheses_met
    assert report.holds


@pytest.mark.parametrize("G, t, expected", [
    (k(3, 3), 2, 9),
    (k(2, 2), 2, 1),
    (k(2, 2), 1, 4),
    (generate("path", {"n": 4}), 2, 0),
])
def test_biclique_examples(G, t, expected):
    assert count_bicliques(G, t).count == expected


@pytest.mark.parametrize("seed", range(10))
def test_near_complete_graphs_meet_the_biclique_bound(seed):
    G = seeded_gnp(25, 0.93, seed)
    if G.e < 250:
        pytest.skip("below the edge threshold")
    report = count_bicliques(G, 2)
    assert report.hypotheses_met
    assert report.count >= Fraction(G.e ** 4, 8 * 25 ** 4)


def test_biclique_cap_is_enforced():
    with pytest.raises(CapExceededError) as info:
        count_bicliques(generate("complete", {"n": 30}), 3, cap=100)
    assert info.value.cap == 100
    assert info.value.required == comb(30, 3)


def test_find_biclique():
    left, right = find_biclique(k(3, 15), 3, 15)
    assert left == (0, 1, 2)
    assert len(right) == 15
    assert is_biclique_free(k(3, 3), 2, 4)
    assert find_biclique(k(3, 3), 2, 3) is not None


def test_matching_counts():
    assert count_t_matchings(k(3, 3), 3).count == 6
    assert count_t_matchings(k(3, 3), 4).count == 0
    assert count_matchings_in([(0, 1), (2, 3), (1, 2)], 2) == 1


def test_matching_count_requires_positive_t():
    with pytest.raises(PreconditionError):
        count_t_matchings(k(2, 2), 0)


@pytest.mark.parametrize("seed", range(100))
@pytest.mark.parametrize("t", [2, 3])
def test_sparse_graphs_meet_the_matching_bounds(seed, t):
    G = generate("gnm", {"n": 120, "m": 150}, seed)
    count = count_t_matchings(G, t).count
    weak, strong = matching_bound_checks(G, t, count)
    assert weak.holds
    assert strong.holds


def test_matching_bound_hypotheses_can_be_met():
    G = generate("gnm", {"n": 120, "m": 150}, 0)
    weak, _ = matching_bound_checks(G, 2, count_t_matchings(G, 2).count)
    assert weak.hypotheses_met


def test_cherries_and_c4_examples():
    assert tuple(count_cherries_and_c4(k(2, 2))) == (2, 2, 1)
    assert tuple(count_cherries_and_c4(k(2, 3))) == (6, 3, 3)
    with pytest.raises(MissingBipartitionError):
        count_cherries_and_c4(generate("cycle", {"n": 4}))


@pytest.mark.parametrize("seed", range(50))
def test_cherry_and_c4_inequalities(seed):
    m = 90 + seed % 11
    G = generate("bipartite_gnm", {"a": 10, "b": 10, "m": m}, seed)
    checks = cherry_c4_checks(G)
    assert len(checks) == 5
    for check in checks:
        assert check.hypotheses_met
        assert check.holds, check.name


def test_link_graph_of_a_k33_edge():
    link = link_graph(k(3, 3), (0, 3))
    assert link.x_side == frozenset({1, 2})
    assert link.y_side == frozenset({4, 5})
    assert link.edge_count == 4
    assert link.vertex_count == 4


@pytest.mark.parametrize("seed", range(20))
def test_link_identities(seed):
    identities = link_identities(seeded_bipartite(5, 6, 0.5, seed))
    assert identities.holds
    assert identities.sum_vertices == identities.twice_cherries
    assert identities.sum_edges == identities.four_c4


def test_h1t_in_c4_and_k88():
    found = count_h1t(k(2, 2), 1)
    assert found.incidence_count == 4
    assert found.copy_count == 1
    assert count_h1t(k(8, 8), 2).incidence_count == 64 * 882


def test_h1t_bound_hypothesis_is_out_of_reach_at_desk_scale():
    G = k(6, 6)
    check = h1t_bound_check(G, 2, count_h1t(G, 2).incidence_count)
    assert not check.hypotheses_met
    assert check.holds


def test_htt_incidences_are_twice_the_aux_edges():
    cube = generate("hypercube_q3")
    incidences = count_htt_incidences(cube, 2)
    assert incidences > 0
    assert incidences == 2 * build_aux(cube, 2, "htt_aux").graph.e
    check = htt_bound_check(cube, 2, 1, incidences)
    assert check.value == Fraction(incidences, 2)


@pytest.mark.parametrize("G, t, expected", [
    (generate("path", {"n": 3}), 1, 1),
    (generate("complete", {"n": 3}), 1, 3),
    (generate("cycle", {"n": 4}), 1, 4),
    (k(8, 8), 2, 18816),
])
def test_spider_examples(G, t, expected):
    assert count_spiders(G, t) == expected


def test_hst_examples():
    assert count_hst(h_st(2, 2), 2, 2) == 1
    assert count_hst(generate("cycle", {"n": 4}), 1, 1) == 1
    assert count_hst(generate("cycle", {"n": 6}), 2, 2) == 0


def test_hst_vertex_cap():
    with pytest.raises(CapExceededError):
        count_hst(generate("complete", {"n": 10}), 2, 2, cap_vertices=8)


def test_empty_graph_counts():
    G = Graph.from_edges(5, [])
    assert count_bicliques(G, 2).count == 0
    assert count_t_matchings(G, 1).count == 0
    assert count_spiders(G, 2) == 0
