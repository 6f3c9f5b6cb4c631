"""
DenseSub - Extraction
=====================

Grows a breadth-first out-tree through layers of good structures, one color
class per layer, until some structure is reached from enough distinct
parents. The parents, their closest common ancestor and the collision vertex
span a small dense subgraph G*, which is certified by direct measurement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from math import comb, factorial

from .counting import find_biclique
from .errors import (
    CapExceededError,
    CertificateFormatError,
    PreconditionError,
    SelectionError,
    SplitExhaustedError,
)
from .file_utils import check_artifact_header, strip_comments
from .graph import (
    DegreeStats,
    Graph,
    bipartite_half,
    decode_structure,
    degree_stats,
    encode_structure,
    induced_subgraph,
    is_matching_structure,
    structure_vertices,
)
from .splitting import SplitContext, prepare_split, spanning_selection, split_with_retries
from ..constants import ARTIFACT_HEADER, CAP_AUX

MODES = ("even", "odd")


class FailureReason(Enum):
    NO_TOP_GOOD_STRUCTURE = "no_top_good_structure"
    SPLIT_FAILED = "split_failed"
    CASE2_EXHAUSTED = "case2_exhausted"
    CAPS_EXCEEDED = "caps_exceeded"


def even_collision_threshold(t: int) -> int:
    return comb(2 * t, t)


def odd_collision_threshold(t: int) -> int:
    return factorial(t) * math.ceil((3 * math.e) ** (2 * t))


def shortcut_q(t: int) -> int:
    """Right side of the K_{t+1,q} that certifies odd mode immediately."""
    return 2 * t * t + 3 * t + 1


# Digraph and tree ------------------------------------------------------------

@dataclass(frozen=True)
class LayeredDigraph:
    """
    Args:
        root (int): auxiliary index of the top structure
        layers (tuple): layer k lists the auxiliary indices allowed at depth k
        arcs (dict): x -> out-neighbors in the next layer (the recorded family)
        colors (tuple): class used by each layer, root first
    """

    root: int
    layers: tuple
    arcs: dict
    colors: tuple


@dataclass
class BfsTree:
    root: int
    parent: dict = field(default_factory=dict)
    depth: dict = field(default_factory=dict)
    layers: list = field(default_factory=list)

    def __contains__(self, x):
        return x in self.depth

    def path_from_root(self, x: int) -> list:
        path = [x]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path


def closest_common_ancestor(T: BfsTree, leaves) -> int:
    """Deepest vertex lying on every root-to-leaf path."""
    leaves = list(leaves)
    if not leaves:
        raise PreconditionError("closest common ancestor needs at least one leaf")
    for leaf in leaves:
        if leaf not in T:
            raise PreconditionError(f"vertex {leaf} is not in the tree")
    paths = [T.path_from_root(leaf) for leaf in leaves]
    ancestor = T.root
    for column in zip(*paths):
        if any(x != column[0] for x in column):
            break
        ancestor = column[0]
    return ancestor


def build_layered_digraph(context: SplitContext, validation, partition, r: int) -> LayeredDigraph:
    """Layer 0 is the top structure; layer k >= 1 holds (r, r-k)-good structures of one class."""
    root = validation.monochromatic_top
    colors = [validation.top_color] + [c for c in range(1, r + 1) if c != validation.top_color]
    structures = context.aux.structures

    def inside(k, color):
        return all(partition.color_of[v] == color for v in structure_vertices(structures[k]))

    layers = [frozenset([root]), frozenset(validation.record(root, r, colors[0]).family)]
    for k in range(2, r + 1):
        layers.append(frozenset(j for j in context.table.good_set(r - k) if inside(j, colors[k - 1])))
    arcs = {}
    for k in range(r):
        for x in sorted(layers[k]):
            record = validation.record(x, r - k, colors[k])
            arcs[x] = record.family if record is not None else ()
    return LayeredDigraph(root, tuple(layers), arcs, tuple(colors))


# Certificates ------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """
    Extraction result; `measured` is informational and never trusted by certify.

    Args:
        mode (str): 'even' or 'odd'
        t (int), r (int): run parameters
        vertices (tuple): vertex ids of G* in the host
        arcs (tuple): witness arcs (parent structure, child structure)
        measured (DegreeStats | None): statistics recorded at creation
    """

    mode: str
    t: int
    r: int
    vertices: tuple
    arcs: tuple = ()
    measured: DegreeStats | None = None

    @property
    def order(self) -> int:
        return len(self.vertices)

    def to_text(self) -> str:
        lines = [ARTIFACT_HEADER, f"{self.mode} {self.t} {self.r}",
                 " ".join(str(v) for v in self.vertices)]
        if self.measured is not None:
            m = self.measured
            lines.insert(1, f"# measured min_degree {m.min_degree} avg_degree {m.avg_degree} "
                            f"radius {m.radius} order {self.order}")
        lines.extend(f"{encode_structure(p)} {encode_structure(c)}" for p, c in self.arcs)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Certificate":
        check_artifact_header(text.splitlines(), CertificateFormatError)
        rows = strip_comments(text)
        if len(rows) < 2:
            raise CertificateFormatError("certificate needs a 'mode t r' line and a vertex line")
        head_no, head = rows[0]
        parts = head.split()
        if len(parts) != 3 or parts[0] not in MODES:
            raise CertificateFormatError(f"line {head_no}: expected 'mode t r'")
        try:
            t, r = int(parts[1]), int(parts[2])
            vertices = tuple(sorted(int(v) for v in rows[1][1].split()))
            arcs = []
            for no, line in rows[2:]:
                pair = line.split()
                if len(pair) != 2:
                    raise CertificateFormatError(f"line {no}: expected 'parent child'")
                arcs.append((decode_structure(pair[0]), decode_structure(pair[1])))
        except (ValueError, PreconditionError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from exc
        if len(set(vertices)) != len(vertices):
            raise CertificateFormatError("repeated vertex id in certificate")
        return cls(parts[0], t, r, vertices, tuple(arcs))


@dataclass(frozen=True)
class CertifyReport:
    mode: str
    passed: bool
    measured: DegreeStats | None
    order: int
    failures: tuple

    def summary(self) -> str:
        if self.measured is None:
            return f"order {self.order}"
        m = self.measured
        return (f"order {self.order} min_degree {m.min_degree} "
                f"avg_degree {m.avg_degree} radius {m.radius}")


def _arc_is_complete(G: Graph, left, right) -> bool:
    if set(left) & set(right):
        return False
    return all(G.has_edge(u, v) for u in left for v in right)


def _arc_is_htt(G: Graph, first, second) -> bool:
    """Some orientation of both matchings makes them the two parts of an H_{t,t}."""
    if set(structure_vertices(first)) & set(structure_vertices(second)):
        return False
    if any(not G.has_edge(u, v) for u, v in first + second):
        return False
    for flips in product((False, True), repeat=len(first)):
        a_side = [v if f else u for (u, v), f in zip(first, flips)]
        b_side = [u if f else v for (u, v), f in zip(first, flips)]
        ok = True
        for x, y in second:
            if all(G.has_edge(x, b) for b in b_side) and all(G.has_edge(y, a) for a in a_side):
                continue
            if all(G.has_edge(y, b) for b in b_side) and all(G.has_edge(x, a) for a in a_side):
                continue
            ok = False
            break
        if ok:
            return True
    return False


def certify(G: Graph, c: Certificate) -> CertifyReport:
    """Recompute G*, its degrees, radius and order; check the witness arcs."""
    if c.mode not in MODES:
        raise PreconditionError(f"unknown certificate mode '{c.mode}'")
    for v in c.vertices:
        if not 0 <= v < G.n:
            raise PreconditionError(f"certificate vertex {v} is not a vertex of the host")

    failures = []
    order = len(set(c.vertices))
    if order == 0:
        return CertifyReport(c.mode, False, None, 0, ("empty",))
    stats = degree_stats(induced_subgraph(G, c.vertices))
    t, r = c.t, c.r

    if c.mode == "even":
        if stats.min_degree < 2 * t:
            failures.append("min_degree")
        if not stats.radius <= r:
            failures.append("radius")
        if not order < r * t * t + r * t:
            failures.append("order")
    else:
        if stats.avg_degree < 2 * t + 1:
            failures.append("avg_degree")
        if not stats.radius <= r + 1:
            failures.append("radius")
        if not order <= r * (4 * t * t + 2 * t):
            failures.append("order")

    if c.arcs:
        named = set()
        for parent, child in c.arcs:
            named.update(structure_vertices(parent))
            named.update(structure_vertices(child))
            if is_matching_structure(parent) and is_matching_structure(child):
                valid = _arc_is_htt(G, parent, child)
            elif not is_matching_structure(parent) and not is_matching_structure(child):
                valid = _arc_is_complete(G, parent, child)
            else:
                valid = False
            if not valid:
                failures.append("witness_arc")
                break
        if named != set(c.vertices):
            failures.append("witness_vertices")

    return CertifyReport(c.mode, not failures, stats, order, tuple(failures))


# Collision leaves --------------------------------------------------------------

def _pad(chosen, pool, size):
    picked = list(chosen)
    for item in pool:
        if len(picked) >= size:
            break
        if item not in picked:
            picked.append(item)
    return picked


def select_collision_leaves(parents, t: int, mode: str, host: Graph | None = None,
                            strict: bool = True) -> list:
    """
    Even: t+1 parent t-sets whose union has at least 2t vertices.
    Odd: 2t+1 parent matchings whose A-sides (or B-sides) cover at least 3t vertices.

    strict=False accepts fewer parents than the default collision threshold.
    """
    parents = list(dict.fromkeys(parents))
    if mode == "even":
        if len(parents) < (even_collision_threshold(t) if strict else 2):
            raise SelectionError(f"insufficient distinct parents: {len(parents)}")
        chosen = spanning_selection(parents, 2 * t, strict=strict)
        return _pad(chosen, sorted(parents), t + 1)

    if mode != "odd":
        raise PreconditionError(f"unknown mode '{mode}'")
    if host is None:
        raise PreconditionError("odd leaf selection needs the bipartite host")
    host.require_bipartition()
    if strict and len(parents) < odd_collision_threshold(t):
        raise SelectionError(f"insufficient parents: {len(parents)}")
    if len(parents) < 2:
        raise SelectionError(f"insufficient distinct parents: {len(parents)}")

    side_a = host.side_a
    sides = []
    for matching in parents:
        vertices = structure_vertices(matching)
        sides.append((tuple(v for v in vertices if v in side_a),
                      tuple(v for v in vertices if v not in side_a)))
    for position in (0, 1):
        owner = {}
        for matching, pair in zip(parents, sides):
            owner.setdefault(pair[position], matching)
        if strict and len(owner) < comb(3 * t, t):
            continue
        try:
            chosen_sets = spanning_selection(owner, 3 * t, strict=strict)
        except SelectionError:
            continue
        chosen = [owner[s] for s in chosen_sets]
        return _pad(chosen, sorted(parents), 2 * t + 1)
    raise SelectionError("no side of the parent matchings covers 3t vertices")


# Extraction ------------------------------------------------------------------

@dataclass
class ExtractionStats:
    layer_sizes: list = field(default_factory=list)
    collision_multiplicities: list = field(default_factory=list)
    skipped_collisions: int = 0
    split_attempts: int = 0
    shortcut_used: bool = False
    split_diagnostics: list = field(default_factory=list)


@dataclass(frozen=True)
class ExtractionOutcome:
    certificate: Certificate | None
    failure: FailureReason | None
    stats: ExtractionStats
    report: CertifyReport | None = None

    @property
    def outcome(self) -> str:
        return "certified" if self.certificate is not None else self.failure.value


def _grow(G, host, context, validation, partition, t, r, mode, collision, strict, stats):
    digraph = build_layered_digraph(context, validation, partition, r)
    structures = context.aux.structures
    tree = BfsTree(digraph.root, depth={digraph.root: 0}, layers=[[digraph.root]])
    in_parents = {}

    for k in range(r):
        frontier = tree.layers[k]
        next_layer = []
        for x in frontier:
            for y in digraph.arcs.get(x, ()):
                if y not in tree:
                    tree.parent[y] = x
                    tree.depth[y] = k + 1
                    next_layer.append(y)
                parents = in_parents.setdefault(y, [])
                parents.append(x)
                if len(parents) < collision:
                    continue
                stats.collision_multiplicities.append(len(parents))
                certificate = _assemble(G, host, tree, structures, parents, y, t, r, mode, strict)
                if certificate is None:
                    stats.skipped_collisions += 1
                    continue
                report = certify(G, certificate)
                if report.passed:
                    stats.layer_sizes = [len(layer) for layer in tree.layers] + [len(next_layer)]
                    return certificate, report
                stats.skipped_collisions += 1
        tree.layers.append(next_layer)
        if not next_layer:
            break
    stats.layer_sizes = [len(layer) for layer in tree.layers]
    return None, None


def _assemble(G, host, tree, structures, parents, y, t, r, mode, strict):
    try:
        picked = select_collision_leaves([structures[x] for x in parents], t, mode, host, strict)
    except SelectionError:
        return None
    index = {structures[x]: x for x in parents}
    leaves = [index[s] for s in picked]
    ancestor = closest_common_ancestor(tree, leaves)

    arcs = set()
    nodes = {ancestor, y}
    for leaf in leaves:
        path = tree.path_from_root(leaf)
        path = path[path.index(ancestor):]
        nodes.update(path)
        arcs.update(zip(path, path[1:]))
        arcs.add((leaf, y))
    vertices = sorted({v for x in nodes for v in structure_vertices(structures[x])})
    ordered = sorted(arcs, key=lambda arc: (tree.depth.get(arc[0], 0), arc))
    witness = tuple((structures[p], structures[c]) for p, c in ordered)
    stats = degree_stats(induced_subgraph(G, vertices))
    return Certificate(mode, t, r, tuple(vertices), witness, stats)


def _shortcut(G, t, r, cap):
    found = find_biclique(G, t + 1, shortcut_q(t), cap)
    if found is None:
        return None, None
    left, right = found
    vertices = tuple(sorted(left + right))
    stats = degree_stats(induced_subgraph(G, vertices))
    certificate = Certificate("odd", t, r, vertices, ((left, right),), stats)
    report = certify(G, certificate)
    return (certificate, report) if report.passed else (None, None)


def extract(G: Graph, t: int, r: int, theta: int, mode: str, seed: int = 0,
            max_split_attempts: int = 20, collision: int | None = None,
            cap: int = CAP_AUX) -> ExtractionOutcome:
    """
    Even mode searches the biclique auxiliary graph of G; odd mode first looks
    for K_{t+1, 2t^2+3t+1} in G, then searches the H_{t,t} auxiliary graph of a
    spanning bipartite half of G. Certificates are always measured against G.
    """
    if mode not in MODES:
        raise PreconditionError(f"unknown mode '{mode}'")
    if r < 1 or t < (2 if mode == "even" else 1):
        raise PreconditionError(f"invalid parameters t={t}, r={r} for {mode} mode")
    default = even_collision_threshold(t) if mode == "even" else odd_collision_threshold(t)
    collision = default if collision is None else collision
    if collision < 1:
        raise PreconditionError("collision threshold must be positive")
    strict = collision >= default
    stats = ExtractionStats()

    try:
        if mode == "odd":
            certificate, report = _shortcut(G, t, r, cap)
            if certificate is not None:
                stats.shortcut_used = True
                return ExtractionOutcome(certificate, None, stats, report)
            host = bipartite_half(G, seed) if G.n else G
        else:
            host = G
        if host.n == 0:
            return ExtractionOutcome(None, FailureReason.NO_TOP_GOOD_STRUCTURE, stats)
        context = prepare_split(host, t, r, mode, cap)
    except CapExceededError:
        return ExtractionOutcome(None, FailureReason.CAPS_EXCEEDED, stats)

    if not context.top_candidates:
        return ExtractionOutcome(None, FailureReason.NO_TOP_GOOD_STRUCTURE, stats)

    try:
        partition, validation = split_with_retries(host, t, r, theta, mode,
                                                   max_split_attempts, seed, context)
    except SplitExhaustedError as exc:
        stats.split_attempts = exc.attempts
        stats.split_diagnostics = list(exc.diagnostics)
        return ExtractionOutcome(None, FailureReason.SPLIT_FAILED, stats)
    stats.split_attempts = partition.attempts_used

    certificate, report = _grow(G, host, context, validation, partition, t, r, mode,
                                collision, strict, stats)
    if certificate is None:
        return ExtractionOutcome(None, FailureReason.CASE2_EXHAUSTED, stats)
    return ExtractionOutcome(certificate, None, stats, report)
