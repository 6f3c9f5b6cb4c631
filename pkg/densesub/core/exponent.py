"""
DenseSub - Random Deletion Exponent
===================================

Brute-force evaluation of the exponents gamma and c of a finite forbidden
family, plus materialization of "small dense" families from the graph atlas.
"""

from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .errors import CapExceededError, PreconditionError
from .graph import Graph, induced_subgraph, iter_bits
from ..constants import CAP_ATLAS_VERTICES, CAP_EXPONENT_VERTICES


@dataclass(frozen=True)
class FamilyExponent:
    """
    Args:
        gamma (Fraction): max over members of min (n(H)-2)/(e(H)-1), e(H) >= 2
        c_exponent (Fraction): max over members of min n(H)/e(H), e(H) >= 1
        witness (Graph): the subgraph attaining gamma, labels into its member
        member_index (int): position of the member attaining gamma
    """

    gamma: Fraction
    c_exponent: Fraction
    witness: Graph
    member_index: int

    @property
    def lower_bound_exponent(self) -> Fraction:
        return 2 - self.gamma


def _edges_inside(G: Graph, mask: int) -> int:
    return sum((G.bits[v] & mask).bit_count() for v in iter_bits(mask)) // 2


def _member_exponents(G: Graph):
    # Adding edges on a fixed vertex set only lowers both ratios, so induced
    # subgraphs are enough.
    best_gamma, best_mask, best_c = None, 0, None
    for mask in range(1, 1 << G.n):
        e = _edges_inside(G, mask)
        if e < 1:
            continue
        size = mask.bit_count()
        ratio_c = Fraction(size, e)
        if best_c is None or ratio_c < best_c:
            best_c = ratio_c
        if e >= 2:
            ratio = Fraction(size - 2, e - 1)
            if best_gamma is None or ratio < best_gamma:
                best_gamma, best_mask = ratio, mask
    return best_gamma, best_mask, best_c


def erdos_renyi_exponent(family) -> FamilyExponent:
    family = list(family)
    if not family:
        raise PreconditionError("exponent of an empty family is undefined")
    best = None
    c_exponent = None
    for index, member in enumerate(family):
        if member.n > CAP_EXPONENT_VERTICES:
            raise CapExceededError("family member order", member.n, CAP_EXPONENT_VERTICES)
        if member.e < 2:
            raise PreconditionError(f"family member {index} has fewer than 2 edges")
        gamma, mask, c_value = _member_exponents(member)
        if best is None or gamma > best[0]:
            best = (gamma, mask, index)
        if c_exponent is None or c_value > c_exponent:
            c_exponent = c_value
    gamma, mask, index = best
    witness = induced_subgraph(family[index], iter_bits(mask))
    return FamilyExponent(gamma, c_exponent, witness, index)


def materialize_family(d, m: int) -> list:
    """Graphs (up to isomorphism) on at most m vertices with average degree >= d."""
    if m > CAP_ATLAS_VERTICES:
        raise CapExceededError("atlas order", m, CAP_ATLAS_VERTICES)
    d = Fraction(d)
    members = []
    for graph in nx.graph_atlas_g():
        n = graph.number_of_nodes()
        if n == 0 or n > m:
            continue
        if graph.number_of_edges() >= 2 and 2 * graph.number_of_edges() >= d * n:
            members.append(Graph.from_networkx(graph))
    return members


def proposition_exponent(d, m: int) -> Fraction:
    """(m - 2) / (d m / 2 - 1)."""
    d = Fraction(d)
    denominator = d * m / 2 - 1
    if denominator <= 0:
        raise PreconditionError("d m / 2 must exceed 1")
    return Fraction(m - 2) / denominator
