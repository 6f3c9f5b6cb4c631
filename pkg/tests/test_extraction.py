"""Layered extraction, collision leaves and certificate checking."""

import pytest

from conftest import seeded_gnp
from densesub.core.errors import CertificateFormatError, PreconditionError, SelectionError
from densesub.core.extraction import (BfsTree, Certificate, FailureReason, certify,
                                      closest_common_ancestor, even_collision_threshold, extract,
                                      odd_collision_threshold, select_collision_leaves, shortcut_q)
from densesub.core.graph import Graph, generate


def k(a, b):
    return generate("complete_bipartite", {"a": a, "b": b})


def test_thresholds():
    assert even_collision_threshold(2) == 6
    assert odd_collision_threshold(1) >= 67
    assert shortcut_q(2) == 15


def test_even_extraction_certifies_k12_12():
    G = k(12, 12)
    outcomes = [extract(G, 2, 2, 2, "even", seed=seed, collision=3) for seed in range(1, 11)]
    certified = [o for o in outcomes if o.outcome == "certified"]
    assert certified
    for outcome in certified:
        report = outcome.report
        assert report.passed
        assert report.measured.min_degree >= 4
        assert report.measured.radius <= 2
        assert report.order < 12
        assert certify(G, outcome.certificate).passed


def test_odd_mode_takes_the_biclique_shortcut():
    G = k(3, 15)
    outcome = extract(G, 2, 1, 1, "odd")
    assert outcome.stats.shortcut_used
    assert outcome.certificate.order == 18
    assert outcome.report.measured.avg_degree == 5
    assert outcome.report.measured.radius == 2


def test_edgeless_graph_has_no_top_structure():
    outcome = extract(Graph.from_edges(6, []), 2, 2, 1, "even")
    assert outcome.failure is FailureReason.NO_TOP_GOOD_STRUCTURE
    assert outcome.outcome == "no_top_good_structure"


def test_caps_are_reported_as_a_failure():
    outcome = extract(generate("complete", {"n": 20}), 3, 2, 1, "even", cap=100)
    assert outcome.failure is FailureReason.CAPS_EXCEEDED


def test_unreachable_theta_is_a_split_failure():
    outcome = extract(k(12, 12), 2, 2, 1000, "even", max_split_attempts=2)
    assert outcome.failure is FailureReason.SPLIT_FAILED
    assert outcome.stats.split_attempts == 2
    assert len(outcome.stats.split_diagnostics) == 2


@pytest.mark.parametrize("t, r, mode", [(1, 2, "even"), (2, 0, "even"), (1, 1, "sideways")])
def test_extract_rejects_bad_parameters(t, r, mode):
    with pytest.raises(PreconditionError):
        extract(k(3, 3), t, r, 1, mode)


def test_certify_a_hand_written_biclique():
    G = k(4, 4)
    assert certify(G, Certificate("even", 2, 2, tuple(range(8)))).passed
    report = certify(G, Certificate("even", 2, 1, tuple(range(8))))
    assert report.failures == ("radius",)


def test_certify_checks_the_odd_rules():
    report = certify(k(3, 15), Certificate("odd", 2, 1, tuple(range(18))))
    assert report.passed
    report = certify(k(2, 2), Certificate("odd", 2, 1, (0, 1, 2, 3)))
    assert "avg_degree" in report.failures


def test_certify_rejects_foreign_vertices_and_empty_sets():
    with pytest.raises(PreconditionError):
        certify(k(2, 2), Certificate("even", 2, 2, (0, 9)))
    assert certify(k(2, 2), Certificate("even", 2, 2, ())).failures == ("empty",)


def test_tampered_certificate_fails_the_witness_check():
    G = k(4, 4)
    honest = Certificate("even", 2, 2, tuple(range(8)), (((0, 1), (4, 5)), ((2, 3), (6, 7))))
    assert certify(G, honest).passed
    tampered = Certificate("even", 2, 2, tuple(range(7)), honest.arcs)
    assert "witness_vertices" in certify(G, tampered).failures


def test_witness_arc_must_be_complete():
    G = generate("cycle", {"n": 6})
    c = Certificate("even", 1, 3, (0, 1, 2), (((0,), (2,)),))
    assert "witness_arc" in certify(G, c).failures


def test_certificate_text_round_trip():
    c = Certificate("even", 2, 2, (0, 1, 3, 4), (((0, 1), (3, 4)),))
    parsed = Certificate.from_text(c.to_text())
    assert (parsed.mode, parsed.t, parsed.r) == ("even", 2, 2)
    assert parsed.vertices == c.vertices
    assert parsed.arcs == c.arcs


@pytest.mark.parametrize("text", [
    "even 2 2\n",
    "sideways 2 2\n0 1\n",
    "even 2 2\n0 0 1\n",
    "even 2 2\n0 1\n0,1\n",
    "# densesub 7.0.0 generator pcg64/1\neven 2 2\n0 1\n",
])
def test_certificate_parse_errors(text):
    with pytest.raises(CertificateFormatError):
        Certificate.from_text(text)


def test_closest_common_ancestor():
    tree = BfsTree(0, parent={1: 0, 2: 0, 3: 1, 4: 1}, depth={0: 0, 1: 1, 2: 1, 3: 2, 4: 2})
    assert closest_common_ancestor(tree, [3, 4]) == 1
    assert closest_common_ancestor(tree, [3, 2]) == 0
    assert closest_common_ancestor(tree, [4]) == 4
    with pytest.raises(PreconditionError):
        closest_common_ancestor(tree, [])
    with pytest.raises(PreconditionError):
        closest_common_ancestor(tree, [9])


def test_even_leaf_selection():
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert select_collision_leaves(pairs, 2, "even") == [(0, 1), (0, 2), (0, 3)]
    with pytest.raises(SelectionError):
        select_collision_leaves(pairs[:5], 2, "even")


def test_relaxed_even_leaf_selection_pads_to_t_plus_one():
    chosen = select_collision_leaves([(0, 1), (2, 3), (0, 2)], 2, "even", strict=False)
    assert len(chosen) == 3
    assert len(set().union(*chosen)) >= 4


def test_odd_leaf_selection_needs_a_host():
    with pytest.raises(PreconditionError):
        select_collision_leaves([((0, 3),), ((1, 4),)], 1, "odd", strict=False)
    chosen = select_collision_leaves([((0, 3),), ((1, 4),), ((2, 5),)], 1, "odd",
                                     host=k(3, 3), strict=False)
    assert len(chosen) == 3


@pytest.mark.parametrize("seed", range(100))
def test_dense_random_graphs_never_yield_a_bad_certificate(seed):
    n = 12 + seed % 19
    G = seeded_gnp(n, [0.7, 0.8, 0.9][seed % 3], seed)
    outcome = extract(G, 2, 1 + seed % 2, 1, "even", seed=seed, max_split_attempts=5,
                      collision=3)
    if outcome.certificate is None:
        assert isinstance(outcome.failure, FailureReason)
        assert outcome.report is None
    else:
        report = certify(G, outcome.certificate)
        assert report.passed
        assert report.measured.min_degree >= 4
        assert report.measured.radius <= outcome.certificate.r


def matching_chain_certificate(r=2):
    arcs = tuple(((((a, a + 4),), ((a + 1, a + 5),))) for a in range(3))
    return Certificate("odd", 1, r, tuple(range(8)), arcs)


def test_odd_witness_arcs_on_k44():
    report = certify(k(4, 4), matching_chain_certificate())
    assert report.passed
    assert report.measured.avg_degree == 4


def test_odd_witness_arc_needs_every_cross_edge():
    edges = [e for e in k(4, 4).edges if set(e) != {1, 4}]
    G = Graph.from_edges(8, edges, (range(4), range(4, 8)))
    report = certify(G, matching_chain_certificate())
    assert "witness_arc" in report.failures
    assert "avg_degree" not in report.failures


def test_odd_witness_arcs_must_share_a_kind():
    c = Certificate("odd", 1, 2, tuple(range(8)), ((((0, 4),), (1, 5)),))
    assert "witness_arc" in certify(k(4, 4), c).failures


def test_odd_extraction_reaches_leaf_assembly():
    G = k(5, 5)
    outcomes = [extract(G, 1, 2, 1, "odd", seed=seed, collision=2) for seed in range(5)]
    assert not any(o.stats.shortcut_used for o in outcomes)
    assert any(o.stats.collision_multiplicities for o in outcomes)
    for outcome in outcomes:
        if outcome.certificate is None:
            assert isinstance(outcome.failure, FailureReason)
        else:
            assert certify(G, outcome.certificate).passed
            assert all(len(p) == 1 and len(c) == 1 for p, c in outcome.certificate.arcs)
