"""
DenseSub - Auxiliary Graphs and Goodness
========================================

Materializes the biclique and H_{t,t} auxiliary graphs over t-sets and
t-matchings, and classifies vertices by the layered goodness recursion:
level 1 needs degree at least D/3^h, level i additionally needs at least half
of the neighbors to be good at level i-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import NamedTuple

from .counting import iter_matchings_in, link_edges, link_masks, list_t_matchings
from .errors import CapExceededError, PreconditionError
from .graph import Graph, encode_structure, iter_bits
from ..constants import CAP_AUX

AUX_KINDS = ("biclique_aux", "htt_aux")


@dataclass(frozen=True)
class AuxGraph:
    """
    Args:
        kind (str): 'biclique_aux' or 'htt_aux'
        host (Graph): the graph the structures live in
        t (int): structure size
        structures (tuple): t-sets or t-matchings, canonical order
        graph (Graph): adjacency over structure indices
    """

    kind: str
    host: Graph
    t: int
    structures: tuple
    graph: Graph

    @cached_property
    def index(self) -> dict:
        return {s: k for k, s in enumerate(self.structures)}

    @property
    def avg_degree(self) -> Fraction:
        if not self.structures:
            return Fraction(0)
        return Fraction(2 * self.graph.e, len(self.structures))


def _require_kind(kind):
    if kind not in AUX_KINDS:
        raise PreconditionError(f"unknown auxiliary graph kind '{kind}'")


def build_aux(G: Graph, t: int, kind: str, cap: int = CAP_AUX) -> AuxGraph:
    """Fully materialize the auxiliary graph; raises CapExceededError past `cap` vertices."""
    _require_kind(kind)
    if t < 1:
        raise PreconditionError("t must be at least 1")

    if kind == "biclique_aux":
        if comb(G.n, t) > cap:
            raise CapExceededError("t-sets in the biclique auxiliary graph", comb(G.n, t), cap)
        structures = tuple(combinations(range(G.n), t))
        index = {s: k for k, s in enumerate(structures)}
        edges = []
        for i, S in enumerate(structures):
            mask = (1 << G.n) - 1
            for v in S:
                mask &= G.bits[v]
            for T in combinations(iter_bits(mask), t):
                j = index[T]
                if i < j:
                    edges.append((i, j))
    else:
        G.require_bipartition()
        structures = tuple(list_t_matchings(G, t, cap))
        index = {s: k for k, s in enumerate(structures)}
        edges = []
        for i, M in enumerate(structures):
            x_mask, y_mask, _ = link_masks(G, M)
            for N in iter_matchings_in(link_edges(G, x_mask, y_mask), t):
                j = index[N]
                if i < j:
                    edges.append((i, j))

    return AuxGraph(kind, G, t, structures, Graph.from_edges(len(structures), edges))


@dataclass(frozen=True)
class GoodnessTable:
    """
    Level sets A_1 ⊇ ... ⊇ A_h of one graph.

    Args:
        h (int): depth of the recursion
        levels (tuple): frozensets A_1..A_h of good vertices
        threshold (Fraction): D / 3^h
        bad_degree_sums (tuple): s_i = sum of degrees outside A_i, i = 1..h
        e (int): edge count of the classified graph
        n (int): vertex count of the classified graph
    """

    h: int
    levels: tuple
    threshold: Fraction
    bad_degree_sums: tuple
    e: int
    n: int

    def is_good(self, v: int, i: int) -> bool:
        """Level 0 is every vertex."""
        if i == 0:
            return 0 <= v < self.n
        return v in self.levels[i - 1]

    def good_set(self, i: int) -> frozenset:
        if i == 0:
            return frozenset(range(self.n))
        return self.levels[i - 1]

    def is_nested(self) -> bool:
        return all(self.levels[k] <= self.levels[k - 1] for k in range(1, self.h))

    def induction_holds(self) -> bool:
        """s_i <= 2e / 3^(h-i+1) for every level i."""
        return all(s * 3 ** (self.h - i + 1) <= 2 * self.e
                   for i, s in enumerate(self.bad_degree_sums, 1))

    def to_csv_rows(self, structures=None):
        rows = []
        for v in range(self.n):
            members = encode_structure(structures[v]) if structures is not None else str(v)
            rows.append([v, members] + [int(v in level) for level in self.levels])
        return rows

    def csv_columns(self):
        return ["vertex_index", "structure_members"] + [f"good_{i}" for i in range(1, self.h + 1)]


def _as_graph(H):
    return H.graph if isinstance(H, AuxGraph) else H


def classify_goodness(H, h: int) -> GoodnessTable:
    """Level-by-level sweep; level i reads only level i-1."""
    if h < 1:
        raise PreconditionError("goodness depth h must be at least 1")
    graph = _as_graph(H)
    n, e = graph.n, graph.e
    threshold = Fraction(2 * e, n * 3 ** h) if n else Fraction(0)
    degrees = graph.degrees

    # d(v) >= 2e / (n 3^h), cross-multiplied
    first = frozenset(v for v in range(n) if degrees[v] * 3 ** h * n >= 2 * e)
    levels = [first]
    prev_mask = sum(1 << v for v in first)
    for _ in range(2, h + 1):
        current = frozenset(v for v in first
                            if 2 * (graph.bits[v] & prev_mask).bit_count() >= degrees[v])
        levels.append(current)
        prev_mask = sum(1 << v for v in current)

    total = 2 * e
    bad_sums = tuple(total - sum(degrees[v] for v in level) for level in levels)
    return GoodnessTable(h, tuple(levels), threshold, bad_sums, e, n)


def good_structures(G: Graph, t: int, h: int, i: int, kind: str, cap: int = CAP_AUX) -> list:
    """Structures whose auxiliary vertex is good at level i; level 0 is all of them."""
    if not 0 <= i <= h:
        raise PreconditionError(f"level {i} outside 0..{h}")
    aux = build_aux(G, t, kind, cap)
    if i == 0:
        return list(aux.structures)
    table = classify_goodness(aux, h)
    return [aux.structures[k] for k in sorted(table.good_set(i))]


class MassCheck(NamedTuple):
    bad_sum: int
    good_sum: int
    passes: bool


def goodness_mass_check(H, h: int) -> MassCheck:
    """Degree mass outside A_h is at most 2e/3 and inside at least 4e/3."""
    table = classify_goodness(H, h)
    bad = table.bad_degree_sums[-1]
    good = 2 * table.e - bad
    return MassCheck(bad, good, 3 * bad <= 2 * table.e and 3 * good >= 4 * table.e)


def recount_goodness(H, h: int) -> list:
    """
    Level sets recomputed vertex by vertex from neighbor lists.

    Shares no state with classify_goodness; split validation uses it to
    re-derive the levels a recorded family claims.
    """
    if h < 1:
        raise PreconditionError("goodness depth h must be at least 1")
    graph = _as_graph(H)
    n = graph.n
    if n == 0:
        return [set() for _ in range(h)]
    threshold = Fraction(2 * graph.e, n) / 3 ** h
    levels = [{v for v in range(n) if graph.degrees[v] >= threshold}]
    for _ in range(2, h + 1):
        previous = levels[-1]
        levels.append({v for v in levels[0]
                       if 2 * sum(1 for u in graph.adjacency[v] if u in previous)
                       >= graph.degrees[v]})
    return levels
