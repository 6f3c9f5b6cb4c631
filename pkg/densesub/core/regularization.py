"""
DenseSub - Degree-Class Regularization
======================================

Two-step selection of degree-homogeneous classes A' and B' of a bipartite
graph, plus the heavy/light t-matching bookkeeping used on the resulting
subgraph. All thresholds are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial

from .counting import (count_h1t, count_hst, count_htt_incidences, count_spiders,
                       iter_matchings_in, link_edge_count, link_edges, link_masks,
                       list_t_matchings)
from .errors import HypothesisError, PreconditionError, RegularizationError
from .graph import Graph, dump_graph, iter_bits, load_graph, mask_of
from ..constants import CAP_HST_VERTICES, CAP_MATCHINGS


def threshold(i: int) -> Fraction:
    """r_0 = 0 and r_i = 2^(i-2) / i^2."""
    if i < 0:
        raise PreconditionError("threshold index must be non-negative")
    if i == 0:
        return Fraction(0)
    return Fraction(2 ** i, 4 * i * i)


def sqrt2_ratio_bound_holds(power: int, bound, i: int) -> bool:
    """i^power / 2^(i/2) < bound, decided by squaring both sides."""
    bound = Fraction(bound)
    if bound <= 0:
        return False
    return Fraction(i ** (2 * power)) < bound * bound * 2 ** i


@dataclass(frozen=True)
class ClassSelection:
    """
    Args:
        index (int): the selected class index, at least 2
        vertices (tuple): the lowest-id floor(|side| / 2^index) members of the class
        class_size (int): size of the whole class
        side_size (int): size of the side the class was cut from
    """

    index: int
    vertices: tuple
    class_size: int
    side_size: int


def degree_class_select(G: Graph, side: str, base_edges, opposite=None) -> ClassSelection:
    """
    Pick the smallest class index i >= 2 whose class holds at least |side|/2^i
    vertices.

    Degrees are measured towards `opposite` (a vertex collection of the other
    side, all of it by default). Class i holds the vertices whose degree lies
    in [r_{i-1} base / |side|, r_i base / |side|). r_i stays below r_1 for
    2 <= i <= 6, so the windows are not a partition and a vertex may sit in
    several classes.
    """
    G.require_bipartition()
    if side not in ("A", "B"):
        raise PreconditionError(f"side must be 'A' or 'B', not {side!r}")
    members = sorted(G.side_a if side == "A" else G.side_b)
    if not members:
        raise RegularizationError(f"side {side} is empty")
    base = Fraction(base_edges)
    if base <= 0:
        raise RegularizationError("class thresholds need a positive edge base")

    other = G.side_b if side == "A" else G.side_a
    target = mask_of(other if opposite is None else opposite)
    size = len(members)

    # windows compared as d |side| against r_i base
    values = {v: (G.bits[v] & target).bit_count() * size for v in members}
    top = max(values.values())
    i = 2
    # r_i increases from i = 3 on
    while i <= 4 or threshold(i - 1) * base <= top:
        low, high = threshold(i - 1) * base, threshold(i) * base
        found = [v for v in members if low <= values[v] < high]
        if len(found) * 2 ** i >= size:
            return ClassSelection(i, tuple(found[: size // 2 ** i]), len(found), size)
        i += 1
    raise RegularizationError(f"no degree class on side {side} reaches |side|/2^i")


@dataclass(frozen=True)
class RegularizationResult:
    """
    Args:
        i (int): class index chosen on side A
        j (int): class index chosen on side B
        a_prime (tuple): selected A vertices, ids in the input graph
        b_prime (tuple): selected B vertices, ids in the input graph
        g_prime (Graph): the induced subgraph, A' first, labels into the input graph
        e_prime (int): edge count of g_prime
        degree_caps (tuple): (r_i E / |A|, r_j E / (8 i^2 |B|))
        e (int): edge count of the input graph
        intermediate_e (int): edges between A' and B
        side_sizes (tuple): (|A|, |B|) of the input graph
    """

    i: int
    j: int
    a_prime: tuple
    b_prime: tuple
    g_prime: Graph
    e_prime: int
    degree_caps: tuple
    e: int = 0
    intermediate_e: int = 0
    side_sizes: tuple = (0, 0)

    @property
    def b_base(self) -> Fraction:
        return Fraction(self.e, 8 * self.i * self.i)

    def audit(self, G: Graph) -> list:
        """Re-derive every invariant from G; returns the violations found."""
        problems = []
        size_a, size_b = len(G.side_a), len(G.side_b)
        if len(self.a_prime) != size_a // 2 ** self.i:
            problems.append("a_prime_size")
        if len(self.b_prime) != size_b // 2 ** self.j:
            problems.append("b_prime_size")
        if self.e_prime * 64 * self.i ** 2 * self.j ** 2 < G.e:
            problems.append("edge_mass")

        a_low = threshold(self.i - 1) * Fraction(G.e, size_a)
        a_high = threshold(self.i) * Fraction(G.e, size_a)
        for v in self.a_prime:
            if not a_low <= G.degree(v) < a_high:
                problems.append(f"a_window:{v}")

        a_mask = mask_of(self.a_prime)
        b_low = threshold(self.j - 1) * self.b_base / size_b
        b_high = threshold(self.j) * self.b_base / size_b
        for v in self.b_prime:
            if not b_low <= (G.bits[v] & a_mask).bit_count() < b_high:
                problems.append(f"b_window:{v}")

        recount = sum((G.bits[v] & a_mask).bit_count() for v in self.b_prime)
        if recount != self.e_prime or self.g_prime.e != self.e_prime:
            problems.append("edge_recount")
        return problems

    def to_text(self) -> str:
        first = f"{self.i} {self.j} {len(self.a_prime)} {len(self.b_prime)} {self.e_prime}\n"
        return first + dump_graph(self.g_prime)


def load_regularization(text: str):
    """Parse `i j |A'| |B'| E'` and the edge list that follows it."""
    lines = text.splitlines()
    rows = [(no, line) for no, line in enumerate(lines, 1) if line.strip()]
    if not rows:
        raise RegularizationError("empty regularization file")
    no, first = rows[0]
    try:
        i, j, a, b, e_prime = (int(part) for part in first.split())
    except ValueError as exc:
        raise RegularizationError(f"line {no}: expected `i j |A'| |B'| E'`") from exc
    graph = load_graph("\n".join(lines[no:]))
    if graph.n != a + b or graph.e != e_prime:
        raise RegularizationError("summary line disagrees with the edge list")
    return (i, j, a, b, e_prime), graph


def _ordered_subgraph(G: Graph, a_part, b_part) -> Graph:
    order = list(a_part) + list(b_part)
    index = {v: k for k, v in enumerate(order)}
    b_mask = mask_of(b_part)
    edges = [(index[u], index[v]) for u in a_part for v in iter_bits(G.bits[u] & b_mask)]
    bipartition = (range(len(a_part)), range(len(a_part), len(order)))
    return Graph.from_edges(len(order), edges, bipartition, labels=order)


def regularize(G: Graph) -> RegularizationResult:
    G.require_bipartition()
    E = G.e
    if E < 1:
        raise PreconditionError("regularization needs at least one edge")

    first = degree_class_select(G, "A", E)
    if not first.vertices:
        raise RegularizationError(
            f"class A_{first.index} floors to an empty selection for |A|={first.side_size}")
    i = first.index
    a_mask = mask_of(first.vertices)
    intermediate = sum((G.bits[v] & a_mask).bit_count() for v in G.side_b)

    second = degree_class_select(G, "B", Fraction(E, 8 * i * i), opposite=first.vertices)
    if not second.vertices:
        raise RegularizationError(
            f"class B_{second.index} floors to an empty selection for |B|={second.side_size}")
    j = second.index

    g_prime = _ordered_subgraph(G, first.vertices, second.vertices)
    size_a, size_b = len(G.side_a), len(G.side_b)
    caps = (threshold(i) * Fraction(E, size_a),
            threshold(j) * Fraction(E, 8 * i * i * size_b))
    result = RegularizationResult(i, j, first.vertices, second.vertices, g_prime, g_prime.e,
                                  caps, E, intermediate, (size_a, size_b))
    if g_prime.e * 64 * i * i * j * j < E:
        raise RegularizationError(
            f"selected subgraph has {g_prime.e} edges, below E/(64 i^2 j^2) for E={E}, i={i}, j={j}")
    problems = result.audit(G)
    if problems:
        raise RegularizationError(f"regularization invariants failed: {', '.join(problems)}")
    return result


# Spiders against H_{1,t} -------------------------------------------------------

@dataclass(frozen=True)
class SpiderReport:
    t: int
    constant: Fraction
    h1t_incidences: int
    spiders: int
    ratio: Fraction | None
    hypothesis_met: bool

    @property
    def holds(self) -> bool:
        """Vacuous unless the edge hypothesis is met."""
        return not self.hypothesis_met or self.h1t_incidences >= self.constant * self.spiders


def spider_vs_h1t_report(result, t: int, C, cap: int = CAP_MATCHINGS) -> SpiderReport:
    """
    h_{1,t}(G') against C times the spider count of G'.

    The edge hypothesis E >= 2^27 (C t!)^(1/(t+1)) n^((2t+1)/(t+1)) is tested
    after raising both sides to the power t+1.
    """
    graph = result.g_prime if isinstance(result, RegularizationResult) else result
    if t < 2:
        raise PreconditionError("spider comparison needs t >= 2")
    C = Fraction(C)
    incidences = count_h1t(graph, t, cap).incidence_count
    spiders = count_spiders(graph, t)
    ratio = Fraction(incidences, spiders) if spiders else None
    E, n = graph.e, graph.n
    met = (E > 0 and C > 0 and
           Fraction(E) ** (t + 1) >= 2 ** (27 * (t + 1)) * C * factorial(t) * n ** (2 * t + 1))
    return SpiderReport(t, C, incidences, spiders, ratio, met)


# Heavy and light matchings -----------------------------------------------------

class WeightLabel(Enum):
    HEAVY = "heavy"
    LIGHT = "light"


@dataclass(frozen=True)
class MatchingWeightClass:
    matching: tuple
    link_edges: int
    label: WeightLabel


def _weight_limit(t):
    return 4 * t * t


def classify_heavy_light(G: Graph, t: int, cap: int = CAP_MATCHINGS) -> list:
    """Label every t-matching by the edge count of its link graph."""
    G.require_bipartition()
    limit = _weight_limit(t)
    labelled = []
    for matching in list_t_matchings(G, t, cap):
        x_mask, y_mask, _ = link_masks(G, matching)
        count = link_edge_count(G, x_mask, y_mask)
        label = WeightLabel.HEAVY if count > limit else WeightLabel.LIGHT
        labelled.append(MatchingWeightClass(matching, count, label))
    return labelled


@dataclass(frozen=True)
class ClaimViolation:
    claim: str
    anchor: tuple
    count: int
    bound: Fraction


@dataclass(frozen=True)
class ClaimReport:
    """
    Args:
        t (int): matching size
        anchors_checked (int): (t-1)-matchings examined for the heavy bound
        good_anchors (int): anchors with E'_M > 4 t^3 V'_M, checked for the light bound
        violations (tuple): ClaimViolation records, empty when both bounds hold
    """

    t: int
    anchors_checked: int
    good_anchors: int
    violations: tuple

    @property
    def passes(self) -> bool:
        return not self.violations


def _is_htt_free(G: Graph, t: int, cap: int, cap_vertices: int) -> bool:
    if G.n <= cap_vertices:
        return count_hst(G, t, t, cap_vertices) == 0
    # every copy is an (M, N) incidence with N in the link graph of M
    return count_htt_incidences(G, t, cap) == 0


def claim_bounds_check(G: Graph, t: int, cap: int = CAP_MATCHINGS,
                       cap_vertices: int = CAP_HST_VERTICES) -> ClaimReport:
    """
    For every (t-1)-matching M: heavy t-matchings inside the link graph G'_M
    are at most (t-1)/(t-2)! E'_M^(t-1) V'_M, and when M is good the light
    ones are at least E'_M^t / (4 t!).
    """
    G.require_bipartition()
    if t < 2:
        raise PreconditionError("claim bounds need t >= 2")
    if not _is_htt_free(G, t, cap, cap_vertices):
        raise HypothesisError(f"graph contains H_{{{t},{t}}}")

    labels = {w.matching: w.label for w in classify_heavy_light(G, t, cap)}
    anchors = list_t_matchings(G, t - 1, cap)

    violations = []
    good = 0
    for anchor in anchors:
        x_mask, y_mask, _ = link_masks(G, anchor)
        edges = link_edges(G, x_mask, y_mask)
        e_m = len(edges)
        v_m = x_mask.bit_count() + y_mask.bit_count()
        heavy = light = 0
        for inside in iter_matchings_in(edges, t):
            if labels[inside] is WeightLabel.HEAVY:
                heavy += 1
            else:
                light += 1

        heavy_bound = Fraction(t - 1, factorial(t - 2)) * e_m ** (t - 1) * v_m
        if heavy > heavy_bound:
            violations.append(ClaimViolation("heavy", anchor, heavy, heavy_bound))
        if e_m > 4 * t ** 3 * v_m:
            good += 1
            light_bound = Fraction(e_m ** t, 4 * factorial(t))
            if light < light_bound:
                violations.append(ClaimViolation("light", anchor, light, light_bound))
    return ClaimReport(t, len(anchors), good, tuple(violations))
