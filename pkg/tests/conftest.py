"""Shared fixtures and Hypothesis strategies for the DenseSub suite."""

import os

import pytest
from hypothesis import strategies as st

from densesub.core.graph import Graph, generate, make_rng


@st.composite
def graphs(draw, min_n=0, max_n=8):
    """Arbitrary simple graphs on at most max_n vertices."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def bipartite_graphs(draw, max_side=5, min_side=1):
    """Bipartite graphs with side A = 0..a-1 declared."""
    a = draw(st.integers(min_value=min_side, max_value=max_side))
    b = draw(st.integers(min_value=min_side, max_value=max_side))
    pairs = [(x, a + y) for x in range(a) for y in range(b)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True))
    return Graph.from_edges(a + b, chosen, (range(a), range(a, a + b)))


def seeded_gnp(n, p, seed):
    return generate("gnp", {"n": n, "p": p}, seed)


def seeded_bipartite(a, b, p, seed):
    return generate("bipartite_gnp", {"a": a, "b": b, "p": p}, seed)


def uneven_bipartite(seed, side=512, heavy=340, light=60):
    """Lower half of A has `heavy` random neighbors in B, upper half `light`."""
    rng = make_rng(seed)
    edges = []
    for x in range(side):
        degree = heavy if x < side // 2 else light
        for y in rng.choice(side, size=degree, replace=False):
            edges.append((x, side + int(y)))
    return Graph.from_edges(2 * side, edges, (range(side), range(side, 2 * side)))


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Run inside a scratch directory so config and log files stay contained."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("DN_THREADS", raising=False)
    return tmp_path


@pytest.fixture
def k12_12_path(tmp_path):
    from densesub.core.graph import dump_graph

    path = os.path.join(tmp_path, "k12_12.txt")
    with open(path, "w", encoding="ascii") as f:
        f.write(dump_graph(generate("complete_bipartite", {"a": 12, "b": 12})))
    return path
