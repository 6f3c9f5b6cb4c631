"""
DenseSub - Splitting
====================

Greedy hypergraph matching, t-set union spanning, and the randomized
h-coloring of the host graph with validation of the disjoint-family
property and seeded retries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, factorial

from .counting import htt_constant, link_masks
from .errors import (
    CertificateFormatError,
    PreconditionError,
    SelectionError,
    SplitExhaustedError,
)
from .file_utils import check_artifact_header, strip_comments
from .goodness import AuxGraph, GoodnessTable, build_aux, classify_goodness, recount_goodness
from .graph import (
    Graph,
    derive_seed,
    encode_structure,
    is_matching_structure,
    make_rng,
    mask_of,
    structure_vertices,
)
from ..constants import ARTIFACT_HEADER, CAP_AUX

SPLIT_KINDS = ("even", "odd")


# Hypergraphs -------------------------------------------------------------------

@dataclass(frozen=True)
class Hypergraph:
    """t-uniform hypergraph; edges are stored as sorted tuples."""

    n: int
    edges: tuple

    def __post_init__(self):
        canon = tuple(tuple(sorted(edge)) for edge in self.edges)
        if len(set(canon)) != len(canon):
            raise PreconditionError("hypergraph edges must be distinct")
        sizes = {len(edge) for edge in canon}
        if len(sizes) > 1:
            raise PreconditionError("hypergraph edges must all have the same size")
        for edge in canon:
            if len(set(edge)) != len(edge) or any(not 0 <= v < self.n for v in edge):
                raise PreconditionError(f"bad hypergraph edge {edge}")
        object.__setattr__(self, "edges", canon)

    @property
    def t(self) -> int:
        return len(self.edges[0]) if self.edges else 0

    @property
    def max_degree(self) -> int:
        counts = [0] * self.n
        for edge in self.edges:
            for v in edge:
                counts[v] += 1
        return max(counts, default=0)


def greedy_hypergraph_matching(H: Hypergraph) -> list:
    """Scan edges in lexicographic order and keep each one disjoint from those kept."""
    if not H.edges:
        raise PreconditionError("greedy matching needs a non-empty hypergraph")
    used = 0
    chosen = []
    for edge in sorted(H.edges):
        mask = mask_of(edge)
        if not used & mask:
            chosen.append(edge)
            used |= mask
    return chosen


def spanning_selection(edges, m: int, strict: bool = True) -> list:
    """
    At most m - t + 1 of the given t-sets whose union has at least m vertices.

    Greedy: take the next edge (lexicographic) not contained in the current
    union. With at least C(m, t) distinct edges the union always reaches m.
    With strict=False fewer edges are tried anyway.
    """
    distinct = sorted({tuple(sorted(e)) for e in edges})
    if not distinct:
        raise SelectionError("no edges to select from")
    t = len(distinct[0])
    if strict and len(distinct) < comb(m, t):
        raise SelectionError(f"{len(distinct)} distinct {t}-sets, need C({m},{t}) = {comb(m, t)}")
    union = set()
    chosen = []
    for edge in distinct:
        if len(union) >= m:
            break
        if not union.issuperset(edge):
            chosen.append(edge)
            union.update(edge)
    if len(union) < m:
        raise SelectionError(f"union of all {t}-sets covers {len(union)} < {m} vertices")
    return chosen


# Partitions --------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """
    Args:
        h (int): number of classes
        color_of (tuple): color in 1..h of every vertex
        seed (int): seed the coloring was drawn with
        attempts_used (int): retries consumed when it came from split_with_retries
    """

    h: int
    color_of: tuple
    seed: int = 0
    attempts_used: int = 0

    def __post_init__(self):
        if self.h < 1:
            raise PreconditionError("a partition needs at least one class")
        object.__setattr__(self, "color_of", tuple(int(c) for c in self.color_of))
        for v, c in enumerate(self.color_of):
            if not 1 <= c <= self.h:
                raise PreconditionError(f"vertex {v} has color {c} outside 1..{self.h}")

    @property
    def n(self) -> int:
        return len(self.color_of)

    @property
    def classes(self) -> tuple:
        buckets = [set() for _ in range(self.h)]
        for v, c in enumerate(self.color_of):
            buckets[c - 1].add(v)
        return tuple(frozenset(b) for b in buckets)

    def class_mask(self, color: int) -> int:
        return mask_of(v for v, c in enumerate(self.color_of) if c == color)

    def to_text(self) -> str:
        lines = [ARTIFACT_HEADER, f"# seed {self.seed} attempts {self.attempts_used}",
                 f"{self.h} {self.n}"]
        lines.extend(f"{v} {c}" for v, c in enumerate(self.color_of))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Partition":
        lines = text.splitlines()
        check_artifact_header(lines, CertificateFormatError)
        seed = attempts = 0
        for line in lines:
            parts = line.lstrip("#").split()
            if line.startswith("#") and len(parts) == 4 and parts[0] == "seed":
                seed, attempts = int(parts[1]), int(parts[3])
        rows = strip_comments(text)
        try:
            h, n = (int(x) for x in rows[0][1].split())
            colors = [0] * n
            seen = set()
            for no, line in rows[1:]:
                v, c = (int(x) for x in line.split())
                if v in seen or not 0 <= v < n:
                    raise CertificateFormatError(f"line {no}: bad or repeated vertex {v}")
                seen.add(v)
                colors[v] = c
        except (IndexError, ValueError) as exc:
            raise CertificateFormatError(f"malformed partition: {exc}") from exc
        if len(seen) != n:
            raise CertificateFormatError(f"partition lists {len(seen)} of {n} vertices")
        try:
            return cls(h, tuple(colors), seed, attempts)
        except PreconditionError as exc:
            raise CertificateFormatError(str(exc)) from exc


def random_partition(G: Graph, h: int, seed: int) -> Partition:
    """Every vertex gets an independent uniform color from 1..h."""
    if h < 1:
        raise PreconditionError("h must be at least 1")
    colors = make_rng(seed).integers(1, h + 1, size=G.n)
    return Partition(h, tuple(int(c) for c in colors), seed)


# Validation ------------------------------------------------------------------

@dataclass(frozen=True)
class SplitContext:
    """Auxiliary graph and goodness table shared by every retry on one host."""

    host: Graph
    t: int
    h: int
    kind: str
    aux: AuxGraph
    table: GoodnessTable

    @property
    def top_candidates(self) -> list:
        """(h,h)-good structures with at least one auxiliary neighbor."""
        return [k for k in sorted(self.table.good_set(self.h)) if self.aux.graph.degrees[k] > 0]


def prepare_split(G: Graph, t: int, h: int, kind: str, cap: int = CAP_AUX) -> SplitContext:
    if kind not in SPLIT_KINDS:
        raise PreconditionError(f"unknown split kind '{kind}'")
    if h < 1:
        raise PreconditionError("h must be at least 1")
    aux = build_aux(G, t, "biclique_aux" if kind == "even" else "htt_aux", cap)
    return SplitContext(G, t, h, kind, aux, classify_goodness(aux, h))


@dataclass(frozen=True)
class FamilyRecord:
    """Disjoint family of level-(i-1) structures found for one (structure, i, class)."""

    structure_index: int
    level: int
    color: int
    family: tuple

    @property
    def size(self) -> int:
        return len(self.family)


@dataclass(frozen=True)
class SplitValidation:
    theta: int
    records: tuple
    monochromatic_top: int | None
    top_color: int | None
    passes: bool
    structures: tuple = field(repr=False, default=())

    @cached_property
    def _lookup(self) -> dict:
        return {(r.structure_index, r.level, r.color): r for r in self.records}

    def record(self, structure_index: int, level: int, color: int) -> FamilyRecord | None:
        return self._lookup.get((structure_index, level, color))

    @property
    def failing_records(self) -> int:
        return sum(1 for r in self.records if r.size < self.theta)

    @property
    def min_family_size(self):
        return min((r.size for r in self.records), default=None)

    def to_csv_rows(self):
        return [[r.level, r.color, encode_structure(self.structures[r.structure_index]),
                 r.size, self.theta, int(r.size >= self.theta)] for r in self.records]

    def recheck(self, G: Graph, P: Partition, context: SplitContext | None = None) -> list:
        """
        Re-derive every family property from scratch; returns the problems found.

        An empty list means the validation is consistent with G and P.
        """
        problems = []
        if context is None:
            kind = "odd" if self.structures and is_matching_structure(self.structures[0]) else "even"
            t = len(self.structures[0]) if self.structures else 1
            context = prepare_split(G, t, P.h, kind)
        levels = recount_goodness(context.aux, P.h)

        def good(k, level):
            return True if level == 0 else k in levels[level - 1]

        for r in self.records:
            anchor = context.aux.structures[r.structure_index]
            if not good(r.structure_index, r.level):
                problems.append(f"{encode_structure(anchor)} is not good at level {r.level}")
            if context.kind == "even":
                allowed = (1 << G.n) - 1
                for v in anchor:
                    allowed &= G.bits[v]
            else:
                x_mask, y_mask, _ = link_masks(G, anchor)
                allowed = x_mask | y_mask
            used = 0
            for k in r.family:
                member = context.aux.structures[k]
                vertices = mask_of(structure_vertices(member))
                if used & vertices:
                    problems.append(f"family of {encode_structure(anchor)} is not vertex-disjoint")
                used |= vertices
                if vertices & ~P.class_mask(r.color):
                    problems.append(f"{encode_structure(member)} leaves class {r.color}")
                if vertices & ~allowed:
                    problems.append(f"{encode_structure(member)} leaves the neighborhood of "
                                    f"{encode_structure(anchor)}")
                if context.kind == "odd" and any(not G.has_edge(u, v) for u, v in member):
                    problems.append(f"{encode_structure(member)} is not a matching of G")
                if not good(k, r.level - 1):
                    problems.append(f"{encode_structure(member)} is not good at level {r.level - 1}")

        top = self.monochromatic_top
        if top is not None:
            colors = {P.color_of[v] for v in structure_vertices(context.aux.structures[top])}
            if len(colors) != 1 or not good(top, P.h):
                problems.append("recorded top structure is not a monochromatic top-level structure")
        expected = top is not None and all(r.size >= self.theta for r in self.records)
        if expected != self.passes:
            problems.append("pass flag disagrees with the recorded families")
        return problems


def _greedy_disjoint(candidates, structures, used=0):
    chosen = []
    for k in candidates:
        mask = mask_of(structure_vertices(structures[k]))
        if not used & mask:
            chosen.append(k)
            used |= mask
    return chosen


def _two_phase_family(candidates, structures):
    # edge-disjoint first, then vertex-disjoint among those
    used_edges = set()
    edge_disjoint = []
    for k in candidates:
        edges = set(structures[k])
        if not used_edges & edges:
            edge_disjoint.append(k)
            used_edges |= edges
    return _greedy_disjoint(edge_disjoint, structures)


def _family(context: SplitContext, k: int, level: int, class_mask: int) -> tuple:
    aux, table = context.aux, context.table
    structures = aux.structures
    candidates = [
        j for j in aux.graph.adjacency[k]
        if table.is_good(j, level - 1)
        and not mask_of(structure_vertices(structures[j])) & ~class_mask
    ]
    if context.kind == "even":
        return tuple(_greedy_disjoint(candidates, structures))
    return tuple(_two_phase_family(candidates, structures))


def validate_split(G: Graph, P: Partition, t: int, h: int, theta: int, kind: str,
                   context: SplitContext | None = None, cap: int = CAP_AUX) -> SplitValidation:
    """
    Record a disjoint family for every good structure, level and class.

    Even: members lie in N*(S) restricted to the class. Odd: members are
    t-matchings of the link graph G_M restricted to the class.
    """
    if P.h != h:
        raise PreconditionError(f"partition has {P.h} classes, expected {h}")
    if P.n != G.n:
        raise PreconditionError("partition and graph disagree on the vertex count")
    if theta < 0:
        raise PreconditionError("theta must be non-negative")
    if context is None:
        context = prepare_split(G, t, h, kind, cap)

    masks = {color: P.class_mask(color) for color in range(1, h + 1)}
    records = []
    for level in range(1, h + 1):
        for k in sorted(context.table.good_set(level)):
            for color in range(1, h + 1):
                records.append(FamilyRecord(k, level, color, _family(context, k, level, masks[color])))

    top = top_color = None
    for k in context.top_candidates:
        colors = {P.color_of[v] for v in structure_vertices(context.aux.structures[k])}
        if len(colors) == 1:
            top, top_color = k, colors.pop()
            break

    passes = top is not None and all(r.size >= theta for r in records)
    return SplitValidation(theta, tuple(records), top, top_color, passes, context.aux.structures)


@dataclass(frozen=True)
class AttemptDiagnostic:
    attempt: int
    seed: int
    failing_records: int
    min_family_size: int | None
    has_top: bool


def split_with_retries(G: Graph, t: int, h: int, theta: int, kind: str, max_attempts: int,
                       seed: int, context: SplitContext | None = None, cap: int = CAP_AUX):
    """First passing (Partition, SplitValidation); SplitExhaustedError otherwise."""
    if max_attempts < 0:
        raise PreconditionError("max_attempts must be non-negative")
    diagnostics = []
    best = None
    if max_attempts == 0:
        raise SplitExhaustedError(0, None, diagnostics)
    if context is None:
        context = prepare_split(G, t, h, kind, cap)

    for attempt in range(max_attempts):
        child = derive_seed(seed, attempt)
        P = random_partition(G, h, child)
        P = Partition(P.h, P.color_of, child, attempt + 1)
        validation = validate_split(G, P, t, h, theta, kind, context)
        if validation.passes:
            return P, validation
        diagnostics.append(AttemptDiagnostic(attempt + 1, child, validation.failing_records,
                                             validation.min_family_size,
                                             validation.monochromatic_top is not None))
        score = (validation.monochromatic_top is None, validation.failing_records)
        if best is None or score < best[0]:
            best = (score, P, validation)
    raise SplitExhaustedError(max_attempts, best[1:] if best else None, diagnostics)


# Asymptotic constants ------------------------------------------------------------

def asymptotic_theta(n: int, t: int, r: int, kind: str) -> int:
    """b n^(t/r) with b = C(2t,t) (even); t! ceil((3e)^(2t)) n^((2t+1)/r) (odd)."""
    if kind == "even":
        return math.ceil(comb(2 * t, t) * n ** (t / r))
    if kind == "odd":
        return math.ceil(factorial(t) * math.ceil((3 * math.e) ** (2 * t)) * n ** ((2 * t + 1) / r))
    raise PreconditionError(f"unknown split kind '{kind}'")


def _smallest_integer(predicate) -> int:
    high = 1
    while not predicate(high):
        high *= 2
    low = high // 2 + 1 if high > 1 else 1
    while low < high:
        mid = (low + high) // 2
        if predicate(mid):
            high = mid
        else:
            low = mid + 1
    return low


def asymptotic_constant_even(h: int, t: int, b: int) -> int:
    """Smallest integer c with c^(t^2) / 3^h > (4 b t^2 h^t)^t."""
    target = 3 ** h * (4 * b * t * t * h ** t) ** t
    return _smallest_integer(lambda c: c ** (t * t) > target)


def asymptotic_constant_odd(h: int, q: int, t: int, b: int) -> int:
    """Smallest integer c with c^(t(2t+1)) c'_t / 3^h >= (q t^3 2^(t+3) b h^(2t))^t."""
    target = Fraction(3 ** h * (q * t ** 3 * 2 ** (t + 3) * b * h ** (2 * t)) ** t) / htt_constant(t)
    return _smallest_integer(lambda c: c ** (t * (2 * t + 1)) >= target)
