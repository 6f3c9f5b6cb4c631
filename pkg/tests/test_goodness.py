"""Auxiliary graphs and the layered goodness classification."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs, seeded_gnp
from densesub.core.errors import CapExceededError, PreconditionError
from densesub.core.goodness import (build_aux, classify_goodness, good_structures,
                                    goodness_mass_check, recount_goodness)
from densesub.core.graph import Graph, generate
from densesub.core.oracles import naive_goodness


def k10_with_pendant():
    K = generate("complete", {"n": 10})
    return Graph.from_edges(11, list(K.edges) + [(0, 10)])


def test_pendant_is_the_only_bad_vertex():
    table = classify_goodness(k10_with_pendant(), 1)
    assert set(range(11)) - table.good_set(1) == {10}
    assert table.threshold == Fraction(92, 33)


def test_level_zero_is_everything():
    table = classify_goodness(generate("cycle", {"n": 5}), 2)
    assert table.good_set(0) == frozenset(range(5))
    assert table.is_good(3, 0)


def test_regular_graph_is_good_everywhere():
    table = classify_goodness(generate("cycle", {"n": 6}), 3)
    assert all(level == frozenset(range(6)) for level in table.levels)
    assert table.bad_degree_sums == (0, 0, 0)


def test_depth_must_be_positive():
    with pytest.raises(PreconditionError):
        classify_goodness(generate("cycle", {"n": 4}), 0)


@pytest.mark.parametrize("seed", range(500))
def test_mass_and_induction_bounds(seed):
    n = 5 + seed % 26
    G = seeded_gnp(n, [0.1, 0.3, 0.6][seed % 3], seed)
    for h in (1, 2, 3):
        table = classify_goodness(G, h)
        mass = goodness_mass_check(G, h)
        assert table.is_nested()
        assert table.induction_holds()
        assert mass.passes
        assert 3 * mass.bad_sum <= 2 * G.e
        assert 3 * mass.good_sum >= 4 * G.e


@given(graphs(min_n=1, max_n=9), st.integers(1, 3))
@settings(max_examples=100, deadline=None)
def test_classification_matches_the_definition(G, h):
    assert list(classify_goodness(G, h).levels) == naive_goodness(G, h)


@given(graphs(max_n=9), st.integers(1, 3))
@settings(max_examples=100, deadline=None)
def test_recount_agrees_with_the_sweep(G, h):
    assert recount_goodness(G, h) == [set(level) for level in classify_goodness(G, h).levels]


def test_recount_needs_a_positive_depth():
    with pytest.raises(PreconditionError):
        recount_goodness(generate("cycle", {"n": 4}), 0)


def test_biclique_aux_of_k33():
    aux = build_aux(generate("complete_bipartite", {"a": 3, "b": 3}), 2, "biclique_aux")
    assert len(aux.structures) == 15
    # pairs inside one side see the three pairs of the other side
    assert aux.graph.e == 9
    assert aux.avg_degree == Fraction(18, 15)


def test_htt_aux_of_the_cube_has_edges():
    aux = build_aux(generate("hypercube_q3"), 2, "htt_aux")
    assert aux.graph.e > 0
    assert all(len(M) == 2 for M in aux.structures)


def test_aux_cap_and_kind_checks():
    with pytest.raises(CapExceededError):
        build_aux(generate("complete", {"n": 20}), 3, "biclique_aux", cap=100)
    with pytest.raises(PreconditionError):
        build_aux(generate("complete", {"n": 4}), 2, "nonsense")


def test_good_structures_levels():
    G = generate("complete_bipartite", {"a": 3, "b": 3})
    every = good_structures(G, 2, 2, 0, "biclique_aux")
    top = good_structures(G, 2, 2, 2, "biclique_aux")
    assert len(every) == 15
    assert set(top) <= set(every)
    assert (0, 1) in top and (0, 3) not in top


def test_goodness_csv_rows():
    aux = build_aux(generate("complete_bipartite", {"a": 2, "b": 2}), 1, "biclique_aux")
    table = classify_goodness(aux, 1)
    rows = table.to_csv_rows(aux.structures)
    assert table.csv_columns() == ["vertex_index", "structure_members", "good_1"]
    assert rows[0] == [0, "0", 1]
