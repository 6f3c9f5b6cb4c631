"""
DenseSub - Structure Counters
=============================

Exact counters for stars, bicliques, t-matchings, cherries and four-cycles,
H_{1,t} / H_{s,t} copies and t-spiders, together with the closed-form lower
bounds they are checked against. Every count is an unbounded Python integer
and every bound an exact Fraction.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import NamedTuple

from .errors import CapExceededError, GraphError, PreconditionError
from .graph import Graph, common_bits, h_st, induced_subgraph, iter_bits, mask_of
from ..constants import CAP_BICLIQUE_SETS, CAP_HST_VERTICES, CAP_MATCHINGS


@dataclass(frozen=True)
class CountReport:
    """One counted structure with the lower bound evaluated on the same input."""

    structure: str
    t: int
    n: int
    m: int
    count: int
    bound_value: Fraction | None
    hypotheses_met: bool

    @property
    def holds(self) -> bool:
        return not self.hypotheses_met or self.count >= self.bound_value

    def to_csv_row(self):
        num = den = None
        if self.bound_value is not None:
            num, den = self.bound_value.numerator, self.bound_value.denominator
        return [self.structure, self.t, self.n, self.m, self.count, num, den,
                int(self.hypotheses_met)]


@dataclass(frozen=True)
class InequalityCheck:
    """value >= bound, asserted only when hypotheses_met."""

    name: str
    value: Fraction
    bound: Fraction | None
    hypotheses_met: bool

    @property
    def holds(self) -> bool:
        return not self.hypotheses_met or self.value >= self.bound


class CherryCount(NamedTuple):
    w_a: int
    w_b: int
    c4: int


class H1tCount(NamedTuple):
    copy_count: int
    incidence_count: int


class LinkIdentities(NamedTuple):
    sum_vertices: int
    twice_cherries: int
    sum_edges: int
    four_c4: int

    @property
    def holds(self) -> bool:
        return self.sum_vertices == self.twice_cherries and self.sum_edges == self.four_c4


@dataclass(frozen=True)
class LinkGraph:
    """
    Link graph of an anchor matching M in a bipartite host.

    x_side = N*(V(M) in B) minus V(M), a subset of A; y_side = N*(V(M) in A)
    minus V(M), a subset of B. `graph` is the host induced on x_side + y_side,
    its labels pointing back to host ids.
    """

    host: Graph
    anchor: tuple
    x_side: frozenset
    y_side: frozenset
    graph: Graph

    @property
    def vertex_count(self) -> int:
        return len(self.x_side) + len(self.y_side)

    @property
    def edge_count(self) -> int:
        return self.graph.e


# Constants -----------------------------------------------------------------

def biclique_constant(t: int) -> Fraction:
    """c_t = 2^(t^2 - t - 3) / (t!)^2."""
    return Fraction(2) ** (t * t - t - 3) / factorial(t) ** 2


def htt_constant(t: int) -> Fraction:
    """c'_t = 1 / (2^(5t^2 + 4t + 1) (t!)^(t+1))."""
    return Fraction(1, 2 ** (5 * t * t + 4 * t + 1) * factorial(t) ** (t + 1))


def binomial_floor_check(x: int, m: int) -> bool:
    """C(x, m) >= x^m / (2 m!) for x >= m^2, in integer arithmetic."""
    if m < 1 or x < m * m:
        raise PreconditionError(f"binomial floor needs x >= m^2 >= 1, got x={x}, m={m}")
    return comb(x, m) * 2 * factorial(m) >= x ** m


def _require_t(t):
    if t < 1:
        raise PreconditionError(f"t must be at least 1, got {t}")


# Stars and bicliques ---------------------------------------------------------

def count_stars(G: Graph, t: int) -> int:
    _require_t(t)
    return sum(comb(d, t) for d in G.degrees)


def _iter_tsets_with_common(G: Graph, t: int, candidates=None):
    """Yield (t-set, common-neighborhood mask) in lexicographic order."""
    pool = list(range(G.n)) if candidates is None else sorted(candidates)
    full = (1 << G.n) - 1

    def extend(start, chosen, mask):
        if len(chosen) == t:
            yield tuple(chosen), mask
            return
        for k in range(start, len(pool) - (t - len(chosen)) + 1):
            v = pool[k]
            chosen.append(v)
            yield from extend(k + 1, chosen, mask & G.bits[v])
            chosen.pop()

    yield from extend(0, [], full)


def count_bicliques(G: Graph, t: int, cap: int = CAP_BICLIQUE_SETS) -> CountReport:
    """
    Unordered pairs {S, T} of disjoint t-sets spanning a complete K_{t,t}.

    Each pair is seen twice in sum over S of C(d*(S), t), once from each side.
    """
    _require_t(t)
    if comb(G.n, t) > cap:
        raise CapExceededError("t-sets for biclique counting", comb(G.n, t), cap)
    ordered = sum(comb(mask.bit_count(), t) for _, mask in _iter_tsets_with_common(G, t))
    count = ordered // 2

    n, E = G.n, G.e
    bound, met = None, False
    if n > 0:
        bound = biclique_constant(t) * Fraction(E ** (t * t), n ** (2 * t * t - 2 * t))
        met = E ** t >= t ** t * n ** (2 * t - 1) and n >= t * t
    return CountReport("biclique_tt", t, n, E, count, bound, met)


def find_biclique(G: Graph, p: int, q: int, cap: int = CAP_BICLIQUE_SETS):
    """First (P, Q) with |P| = p, |Q| = q, P complete to Q; None if absent."""
    if p < 1 or q < 1:
        raise PreconditionError("biclique sides must be at least 1")
    candidates = [v for v in range(G.n) if G.degrees[v] >= q]
    if comb(len(candidates), p) > cap:
        raise CapExceededError("p-sets for biclique search", comb(len(candidates), p), cap)
    for tset, mask in _iter_tsets_with_common(G, p, candidates):
        if mask.bit_count() >= q:
            members = list(iter_bits(mask))[:q]
            return tset, tuple(members)
    return None


def is_biclique_free(G: Graph, p: int, q: int, cap: int = CAP_BICLIQUE_SETS) -> bool:
    return find_biclique(G, p, q, cap) is None


# Matchings -------------------------------------------------------------------

def count_matchings_in(edges, t: int) -> int:
    """
    Number of t-matchings among `edges`.

    Recurses over edges in sorted order; the last edge is counted in one step
    from per-vertex incident-edge indices instead of being enumerated.
    """
    if t == 0:
        return 1
    edges = sorted(edges)
    m = len(edges)
    if t > m:
        return 0
    incident = defaultdict(list)
    position = {}
    for k, (u, v) in enumerate(edges):
        incident[u].append(k)
        incident[v].append(k)
        position[(u, v)] = k

    def free_after(i, used):
        total = m - i - 1
        for v in used:
            total -= len(incident[v]) - bisect_right(incident[v], i)
        for u, v in combinations(sorted(used), 2):
            k = position.get((u, v))
            if k is not None and k > i:
                total += 1
        return total

    def extend(start, used, remaining):
        if remaining == 1:
            return free_after(start - 1, used)
        total = 0
        for k in range(start, m - remaining + 1):
            u, v = edges[k]
            if u in used or v in used:
                continue
            total += extend(k + 1, used | {u, v}, remaining - 1)
        return total

    return extend(0, frozenset(), t)


def iter_matchings_in(edges, t: int):
    """Yield every t-matching among `edges` as a canonical tuple of edges."""
    edges = sorted(edges)

    def extend(start, chosen, used):
        if len(chosen) == t:
            yield tuple(chosen)
            return
        for k in range(start, len(edges) - (t - len(chosen)) + 1):
            u, v = edges[k]
            if u in used or v in used:
                continue
            chosen.append((u, v))
            yield from extend(k + 1, chosen, used | {u, v})
            chosen.pop()

    if t >= 1:
        yield from extend(0, [], frozenset())


def list_t_matchings(G: Graph, t: int, cap: int = CAP_MATCHINGS) -> list:
    _require_t(t)
    total = count_matchings_in(G.sorted_edges, t)
    if total > cap:
        raise CapExceededError(f"{t}-matchings", total, cap)
    return list(iter_matchings_in(G.sorted_edges, t))


def count_t_matchings(G: Graph, t: int) -> CountReport:
    """t-matching count; the bound is E^t/(2 t!) when E >= 4 Delta t^2, else E^t/(2^t t!)."""
    _require_t(t)
    count = count_matchings_in(G.sorted_edges, t)
    weak, strong = matching_bound_checks(G, t, count)
    best = strong if strong.hypotheses_met else weak
    return CountReport("t_matching", t, G.n, G.e, count, best.bound, best.hypotheses_met)


def matching_bound_checks(G: Graph, t: int, count: int):
    E, delta = G.e, G.max_degree
    weak = InequalityCheck("matchings_weak", Fraction(count),
                           Fraction(E ** t, 2 ** t * factorial(t)), E >= 4 * delta * t)
    strong = InequalityCheck("matchings_strong", Fraction(count),
                             Fraction(E ** t, 2 * factorial(t)), E >= 4 * delta * t * t)
    return weak, strong


# Cherries and four-cycles ----------------------------------------------------

def count_cherries_and_c4(G: Graph) -> CherryCount:
    """K_{1,2}'s centered in A and in B, and the exact C4 count."""
    G.require_bipartition()
    side_a, side_b = G.bipartition
    w_a = sum(comb(G.degrees[v], 2) for v in side_a)
    w_b = sum(comb(G.degrees[v], 2) for v in side_b)
    # every C4 has exactly one pair of opposite vertices on each side
    side = sorted(side_b if len(side_b) <= len(side_a) else side_a)
    c4 = sum(comb((G.bits[u] & G.bits[v]).bit_count(), 2) for u, v in combinations(side, 2))
    return CherryCount(w_a, w_b, c4)


def count_c4(G: Graph) -> int:
    """C4 copies in any simple graph; each is seen from both diagonals."""
    total = sum(comb((G.bits[u] & G.bits[v]).bit_count(), 2)
                for u, v in combinations(range(G.n), 2))
    return total // 2


def cherry_c4_checks(G: Graph, cherries: CherryCount | None = None) -> list:
    """The five cherry / C4 lower bounds, guarded by E >= n^(3/2)."""
    cherries = cherries or count_cherries_and_c4(G)
    a, b = len(G.side_a), len(G.side_b)
    E, n = G.e, G.n
    met = E * E >= n ** 3 and a > 0 and b > 0
    w_a, w_b, s = (Fraction(x) for x in cherries)

    def ratio(num, den):
        return Fraction(num, den) if den else None

    return [
        InequalityCheck("cherry_A", w_a, ratio(E * E, 4 * a), met),
        InequalityCheck("cherry_B", w_b, ratio(E * E, 4 * b), met),
        InequalityCheck("c4_from_cherry_A", s, w_a ** 2 / (2 * b * b) if b else None, met),
        InequalityCheck("c4_from_cherry_B", s, w_b ** 2 / (2 * a * a) if a else None, met),
        InequalityCheck("c4_from_edges", s, ratio(E ** 4, 32 * a * a * b * b), met),
    ]


# Link graphs -----------------------------------------------------------------

def _anchor_edges(anchor):
    if anchor and isinstance(anchor[0], int):
        return ((anchor[0], anchor[1]),)
    return tuple(tuple(edge) for edge in anchor)


def link_masks(G: Graph, anchor) -> tuple:
    """(X mask, Y mask, anchor vertex mask) for an edge or matching anchor."""
    G.require_bipartition()
    edges = _anchor_edges(anchor)
    if not edges:
        raise PreconditionError("link graph needs a non-empty anchor")
    covered = 0
    in_a, in_b = [], []
    for u, v in edges:
        if not G.has_edge(u, v):
            raise GraphError(f"anchor edge ({u}, {v}) is not in the host graph")
        if covered >> u & 1 or covered >> v & 1:
            raise GraphError(f"anchor edge ({u}, {v}) overlaps another anchor edge")
        covered |= (1 << u) | (1 << v)
        a, b = (u, v) if u in G.side_a else (v, u)
        in_a.append(a)
        in_b.append(b)
    x_mask = common_bits(G, in_b) & ~covered
    y_mask = common_bits(G, in_a) & ~covered
    return x_mask, y_mask, covered


def link_edges(G: Graph, x_mask: int, y_mask: int) -> list:
    edges = []
    for x in iter_bits(x_mask):
        for y in iter_bits(G.bits[x] & y_mask):
            edges.append((x, y) if x < y else (y, x))
    edges.sort()
    return edges


def link_edge_count(G: Graph, x_mask: int, y_mask: int) -> int:
    return sum((G.bits[x] & y_mask).bit_count() for x in iter_bits(x_mask))


def link_graph(G: Graph, anchor) -> LinkGraph:
    x_mask, y_mask, _ = link_masks(G, anchor)
    sub = induced_subgraph(G, iter_bits(x_mask | y_mask))
    return LinkGraph(G, _anchor_edges(anchor), frozenset(iter_bits(x_mask)),
                     frozenset(iter_bits(y_mask)), sub)


def link_identities(G: Graph) -> LinkIdentities:
    """Sum of V_e equals 2W and sum of E_e equals 4S over all edges e."""
    cherries = count_cherries_and_c4(G)
    sum_v = sum_e = 0
    for u, v in G.sorted_edges:
        x_mask, y_mask, _ = link_masks(G, (u, v))
        sum_v += x_mask.bit_count() + y_mask.bit_count()
        sum_e += link_edge_count(G, x_mask, y_mask)
    return LinkIdentities(sum_v, 2 * (cherries.w_a + cherries.w_b), sum_e, 4 * cherries.c4)


# H_{1,t} and H_{t,t} ---------------------------------------------------------

def count_h1t(G: Graph, t: int, cap: int = CAP_MATCHINGS) -> H1tCount:
    """
    Incidences (edge e, t-matching of the link graph G_e) and distinct copies.

    A copy is identified by its edge set: e, the matching N, and the spokes
    joining each endpoint of e to the matched vertices on the other side.
    """
    _require_t(t)
    G.require_bipartition()
    incidences = 0
    per_edge = []
    for u, v in G.sorted_edges:
        a, b = (u, v) if u in G.side_a else (v, u)
        x_mask, y_mask, _ = link_masks(G, (u, v))
        edges = link_edges(G, x_mask, y_mask)
        found = count_matchings_in(edges, t)
        incidences += found
        per_edge.append((a, b, edges))
    if incidences > cap:
        raise CapExceededError("H_{1,t} incidences", incidences, cap)

    copies = set()
    for a, b, edges in per_edge:
        for matching in iter_matchings_in(edges, t):
            pattern = {(min(a, b), max(a, b))}
            for x, y in matching:
                pattern.add((x, y))
                for w in (x, y):
                    hub = a if w in G.side_b else b
                    pattern.add((min(hub, w), max(hub, w)))
            copies.add(frozenset(pattern))
    return H1tCount(len(copies), incidences)


def h1t_bound_check(G: Graph, t: int, incidences: int) -> InequalityCheck:
    a, b = len(G.side_a), len(G.side_b)
    E, n = G.e, G.n
    bound, met = None, False
    if a and b:
        bound = Fraction(E ** (3 * t + 1),
                         2 ** (5 * t + 2) * factorial(t) * a ** (2 * t) * b ** (2 * t))
        met = E * E >= 32 * t * n ** 3
    return InequalityCheck("h1t_incidences", Fraction(incidences), bound, met)


def count_htt_incidences(G: Graph, t: int, cap: int = CAP_MATCHINGS) -> int:
    """Pairs (M, N): M a t-matching of G, N a t-matching of its link graph."""
    total = 0
    for matching in list_t_matchings(G, t, cap):
        x_mask, y_mask, _ = link_masks(G, matching)
        total += count_matchings_in(link_edges(G, x_mask, y_mask), t)
    return total


def htt_bound_check(G: Graph, t: int, q: int, incidences: int | None = None,
                    cap: int = CAP_MATCHINGS) -> InequalityCheck:
    """Half the incidence count against c'_t E^(2t^2+2t) / n^(4t^2)."""
    G.require_bipartition()
    if incidences is None:
        incidences = count_htt_incidences(G, t, cap)
    E, n = G.e, G.n
    bound, met = None, False
    if n:
        bound = htt_constant(t) * Fraction(E ** (2 * t * t + 2 * t), n ** (4 * t * t))
        met = (E ** (2 * t + 1) >= (12 * q * t) ** (2 * t + 1) * n ** (4 * t)
               and is_biclique_free(G, t + 1, q))
    return InequalityCheck("htt_copies", Fraction(incidences, 2), bound, met)


# Spiders ---------------------------------------------------------------------

def _count_distinct_reps(choices, used):
    if not choices:
        return 1
    head, rest = choices[0], choices[1:]
    return sum(_count_distinct_reps(rest, used | (1 << v))
               for v in iter_bits(head & ~used))


def count_spiders(G: Graph, t: int) -> int:
    """
    Copies of the t-spider (t paths of length 2 sharing an endpoint).

    For t = 1 the spider is a path on three vertices and both ends serve as
    center, so the raw total is halved.
    """
    _require_t(t)
    total = 0
    for center in range(G.n):
        for mids in combinations(G.adjacency[center], t):
            blocked = (1 << center) | mask_of(mids)
            choices = sorted((G.bits[m] & ~blocked for m in mids), key=int.bit_count)
            total += _count_distinct_reps(choices, 0)
    return total // 2 if t == 1 else total


# General pattern copies --------------------------------------------------------

def _search_order(pattern: Graph) -> list:
    order, seen = [], set()
    for root in sorted(range(pattern.n), key=lambda v: (-pattern.degrees[v], v)):
        if root in seen:
            continue
        queue = [root]
        seen.add(root)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in pattern.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def count_embeddings(pattern: Graph, host: Graph) -> int:
    """Injective edge-preserving maps pattern -> host (monomorphisms)."""
    if pattern.n > host.n:
        return 0
    order = _search_order(pattern)
    position = {v: k for k, v in enumerate(order)}
    earlier = [[position[w] for w in pattern.adjacency[v] if position[w] < k]
               for k, v in enumerate(order)]
    need = [pattern.degrees[v] for v in order]
    eligible = [mask_of(x for x in range(host.n) if host.degrees[x] >= d) for d in need]
    image = [0] * len(order)

    def extend(k, used):
        if k == len(order):
            return 1
        candidates = eligible[k] & ~used
        for j in earlier[k]:
            candidates &= host.bits[image[j]]
        total = 0
        for x in iter_bits(candidates):
            image[k] = x
            total += extend(k + 1, used | (1 << x))
        return total

    return extend(0, 0)


def automorphism_count(pattern: Graph) -> int:
    return count_embeddings(pattern, pattern)


def count_hst(G: Graph, s: int, t: int, cap_vertices: int = CAP_HST_VERTICES) -> int:
    """Copies of H_{s,t} as subgraphs of G (not necessarily induced)."""
    if s < 1 or t < 1:
        raise PreconditionError("H_{s,t} needs s, t >= 1")
    if s == 1 and t == 1:
        return count_c4(G)
    if G.n > cap_vertices:
        raise CapExceededError(f"host order for H_{{{s},{t}}} enumeration", G.n, cap_vertices)
    pattern = h_st(s, t)
    return count_embeddings(pattern, G) // automorphism_count(pattern)
