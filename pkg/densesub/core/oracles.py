"""
DenseSub - Reference Oracles
============================

Slow, obviously-correct recomputations of every counter and classifier.
They use plain nested loops over networkx graphs and VF2 matching, and share
no code with the fast implementations they cross-check.
"""

from fractions import Fraction
from itertools import combinations

import networkx as nx
from networkx.algorithms import isomorphism

from .graph import INFINITY, h_st


def naive_common_neighborhood(G, S):
    graph = G.to_networkx()
    return frozenset(v for v in graph.nodes if all(graph.has_edge(u, v) for u in S))


def naive_degree_stats(G):
    graph = G.to_networkx()
    degrees = [d for _, d in graph.degree()]
    radius = nx.radius(graph) if nx.is_connected(graph) else INFINITY
    return min(degrees), Fraction(2 * graph.number_of_edges(), graph.number_of_nodes()), radius


def naive_count_stars(G, t):
    graph = G.to_networkx()
    return sum(1 for v in graph.nodes for _ in combinations(sorted(graph[v]), t))


def naive_count_bicliques(G, t):
    graph = G.to_networkx()
    count = 0
    for S, T in combinations(list(combinations(sorted(graph.nodes), t)), 2):
        if set(S) & set(T):
            continue
        if all(graph.has_edge(u, v) for u in S for v in T):
            count += 1
    return count


def naive_count_t_matchings(G, t):
    edges = list(G.to_networkx().edges())
    return sum(1 for chosen in combinations(edges, t)
               if len({v for e in chosen for v in e}) == 2 * t)


def naive_cherries_and_c4(G):
    graph = G.to_networkx()
    side_a, side_b = G.bipartition
    w_a = sum(1 for x in side_a for _ in combinations(sorted(graph[x]), 2))
    w_b = sum(1 for x in side_b for _ in combinations(sorted(graph[x]), 2))
    c4 = 0
    for a1, a2 in combinations(sorted(side_a), 2):
        for b1, b2 in combinations(sorted(side_b), 2):
            if all(graph.has_edge(a, b) for a in (a1, a2) for b in (b1, b2)):
                c4 += 1
    return w_a, w_b, c4


def naive_link_sides(G, anchor_edges):
    graph = G.to_networkx()
    side_a = G.bipartition[0]
    covered = {v for e in anchor_edges for v in e}
    in_a = [v for v in covered if v in side_a]
    in_b = [v for v in covered if v not in side_a]
    x_side = {v for v in graph.nodes if v not in covered and all(graph.has_edge(v, b) for b in in_b)}
    y_side = {v for v in graph.nodes if v not in covered and all(graph.has_edge(v, a) for a in in_a)}
    return x_side, y_side


def _naive_link_matchings(G, anchor_edges, t):
    graph = G.to_networkx()
    x_side, y_side = naive_link_sides(G, anchor_edges)
    edges = [(x, y) for x in x_side for y in y_side if graph.has_edge(x, y)]
    return sum(1 for chosen in combinations(edges, t)
               if len({v for e in chosen for v in e}) == 2 * t)


def naive_h1t_incidences(G, t):
    return sum(_naive_link_matchings(G, [e], t) for e in G.to_networkx().edges())


def naive_htt_incidences(G, t):
    edges = list(G.to_networkx().edges())
    total = 0
    for chosen in combinations(edges, t):
        if len({v for e in chosen for v in e}) == 2 * t:
            total += _naive_link_matchings(G, chosen, t)
    return total


def naive_copies(G, pattern):
    """Subgraph copies of a networkx pattern via VF2 monomorphisms / automorphisms."""
    host = G.to_networkx()
    embeddings = sum(1 for _ in isomorphism.GraphMatcher(host, pattern).subgraph_monomorphisms_iter())
    automorphisms = sum(1 for _ in isomorphism.GraphMatcher(pattern, pattern).isomorphisms_iter())
    return embeddings // automorphisms


def spider_pattern(t):
    pattern = nx.Graph()
    for j in range(1, t + 1):
        pattern.add_edge(0, j)
        pattern.add_edge(j, t + j)
    return pattern


def naive_count_spiders(G, t):
    return naive_copies(G, spider_pattern(t))


def naive_count_hst(G, s, t):
    return naive_copies(G, h_st(s, t).to_networkx())


def naive_h1t_copies(G, t):
    return naive_count_hst(G, 1, t)


def naive_has_biclique(G, p, q):
    graph = G.to_networkx()
    nodes = sorted(graph.nodes)
    for P in combinations(nodes, p):
        common = [v for v in nodes if all(graph.has_edge(u, v) for u in P)]
        if len(common) >= q:
            return True
    return False


def naive_goodness(G, h):
    """Level sets A_1..A_h straight from the recursive definition."""
    graph = G.to_networkx()
    n = graph.number_of_nodes()
    avg = Fraction(2 * graph.number_of_edges(), n) if n else Fraction(0)
    threshold = avg / 3 ** h
    levels = [{v for v in graph.nodes if graph.degree(v) >= threshold}]
    for _ in range(2, h + 1):
        prev = levels[-1]
        levels.append({v for v in levels[0]
                       if 2 * sum(1 for u in graph[v] if u in prev) >= graph.degree(v)})
    return levels


def naive_max_matching_size(edges):
    """Largest set of pairwise disjoint edges of a small hypergraph."""
    edges = [frozenset(e) for e in edges]
    best = 0
    for size in range(1, len(edges) + 1):
        if not any(sum(len(e) for e in chosen) == len(frozenset().union(*chosen))
                   for chosen in combinations(edges, size)):
            break
        best = size
    return best

