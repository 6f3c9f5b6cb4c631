"""
DenseSub - Graph Core
=====================

Immutable simple graphs with an optional bipartition, neighborhood algebra on
per-vertex bit-sets, metric queries, seeded generators and the edge-list text
format shared by every other module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import networkx as nx
import numpy as np

from .errors import GraphError, GraphFormatError, MissingBipartitionError, PreconditionError
from .file_utils import check_artifact_header
from ..constants import ARTIFACT_HEADER

Edge = tuple[int, int]
TSet = tuple[int, ...]
TMatching = tuple[Edge, ...]


def make_rng(seed: int) -> np.random.Generator:
    """The single random source (PCG64); every seeded routine goes through here."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def derive_seed(seed: int, attempt: int) -> int:
    """Independent child seed for retry `attempt` of a run seeded with `seed`."""
    return int(np.random.SeedSequence([int(seed), int(attempt)]).generate_state(1, np.uint64)[0])


class _Infinity:
    """Radius marker for disconnected graphs; compares above every integer."""

    __slots__ = ()

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("densesub-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITY = _Infinity()


def iter_bits(mask: int):
    """Yield the vertex ids set in a bit-set, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple graph on vertices 0..n-1.

    Args:
        n (int): vertex count
        edges (frozenset): unordered pairs, stored as (u, v) with u < v
        bipartition (tuple | None): (A, B) covering all vertices, or None
        labels (tuple | None): for subgraphs, the id of each vertex in the parent graph
    """

    n: int
    edges: frozenset
    bipartition: tuple | None = None
    labels: tuple | None = None

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            normalized.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(normalized))

        if self.bipartition is not None:
            side_a, side_b = (frozenset(int(x) for x in side) for side in self.bipartition)
            if side_a & side_b:
                raise GraphError("bipartition sides overlap")
            if side_a | side_b != frozenset(range(self.n)):
                raise GraphError("bipartition does not cover every vertex")
            for u, v in normalized:
                if (u in side_a) == (v in side_a):
                    raise GraphError(f"edge ({u}, {v}) lies inside one side of the bipartition")
            object.__setattr__(self, "bipartition", (side_a, side_b))

        if self.labels is not None:
            if len(self.labels) != self.n:
                raise GraphError("label map length differs from vertex count")
            object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))

    @classmethod
    def from_edges(cls, n, edges, bipartition=None, labels=None):
        return cls(n, frozenset(tuple(e) for e in edges), bipartition, labels)

    @classmethod
    def from_networkx(cls, graph, bipartition_attr=None):
        """Build from a networkx graph; nodes are renumbered in sorted order."""
        nodes = sorted(graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = [(index[u], index[v]) for u, v in graph.edges() if u != v]
        bipartition = None
        if bipartition_attr is not None:
            side_a = {index[x] for x in nodes if graph.nodes[x].get(bipartition_attr) == 0}
            bipartition = (side_a, set(range(len(nodes))) - side_a)
        return cls.from_edges(len(nodes), edges, bipartition)

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        if self.bipartition is not None:
            for v in range(self.n):
                graph.nodes[v]["bipartite"] = 0 if v in self.bipartition[0] else 1
        return graph

    # Adjacency -----------------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple:
        buckets = [[] for _ in range(self.n)]
        for u, v in self.edges:
            buckets[u].append(v)
            buckets[v].append(u)
        return tuple(tuple(sorted(b)) for b in buckets)

    @cached_property
    def bits(self) -> tuple:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def degrees(self) -> tuple:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    @cached_property
    def sorted_edges(self) -> tuple:
        return tuple(sorted(self.edges))

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def neighbors(self, v):
        self._check_vertex(v)
        return self.adjacency[v]

    def degree(self, v):
        self._check_vertex(v)
        return self.degrees[v]

    def has_edge(self, u, v):
        return 0 <= u < self.n and 0 <= v < self.n and bool(self.bits[u] >> v & 1)

    # Bipartition ---------------------------------------------------------

    @property
    def side_a(self) -> frozenset:
        self.require_bipartition()
        return self.bipartition[0]

    @property
    def side_b(self) -> frozenset:
        self.require_bipartition()
        return self.bipartition[1]

    @cached_property
    def side_a_mask(self) -> int:
        return mask_of(self.side_a)

    def require_bipartition(self):
        if self.bipartition is None:
            raise MissingBipartitionError("operation needs a declared bipartition")

    def _check_vertex(self, v):
        if not 0 <= v < self.n:
            raise GraphError(f"vertex {v} outside 0..{self.n - 1}")

    def original_id(self, v):
        return self.labels[v] if self.labels is not None else v


@dataclass(frozen=True)
class DegreeStats:
    """Exact min/average degree and radius of a graph."""

    min_degree: int
    avg_degree: Fraction
    radius: object


# Structures ----------------------------------------------------------------

def make_tset(G: Graph, members: Iterable[int]) -> TSet:
    """Validate and canonicalize a t-set of vertices of G."""
    tset = tuple(sorted(set(int(v) for v in members)))
    if not tset:
        raise PreconditionError("a t-set needs at least one vertex")
    for v in tset:
        G._check_vertex(v)
    return tset


def make_matching(G: Graph, edges: Iterable[Edge]) -> TMatching:
    """Validate and canonicalize a matching of G (sorted by smaller endpoint)."""
    seen = set()
    canon = []
    for u, v in edges:
        u, v = (u, v) if u < v else (v, u)
        if not G.has_edge(u, v):
            raise GraphError(f"edge ({u}, {v}) is not in the host graph")
        if u in seen or v in seen:
            raise GraphError(f"edge ({u}, {v}) shares a vertex with another matching edge")
        seen.update((u, v))
        canon.append((u, v))
    if not canon:
        raise PreconditionError("a matching needs at least one edge")
    return tuple(sorted(canon))


def is_matching_structure(structure) -> bool:
    return bool(structure) and isinstance(structure[0], tuple)


def encode_structure(structure) -> str:
    """'0,2,5' for a t-set, '0-1+2-3' for a matching."""
    if is_matching_structure(structure):
        return "+".join(f"{u}-{v}" for u, v in structure)
    return ",".join(str(v) for v in structure)


def decode_structure(text: str):
    """Inverse of encode_structure."""
    text = text.strip()
    try:
        if "-" in text:
            return tuple(sorted(tuple(sorted(int(x) for x in part.split("-")))
                                for part in text.split("+")))
        return tuple(sorted(int(x) for x in text.split(",")))
    except ValueError as exc:
        raise PreconditionError(f"malformed structure '{text}'") from exc


def structure_vertices(structure) -> tuple:
    """Vertex ids covered by a t-set or a matching."""
    if is_matching_structure(structure):
        return tuple(sorted(v for edge in structure for v in edge))
    return tuple(structure)


# Neighborhood algebra ------------------------------------------------------

def common_bits(G: Graph, vertices: Iterable[int]) -> int:
    """Bit-set of N*(S); the empty intersection is the whole vertex set."""
    mask = (1 << G.n) - 1
    for v in vertices:
        G._check_vertex(v)
        mask &= G.bits[v]
    return mask


def common_neighborhood(G: Graph, S: Iterable[int]) -> frozenset:
    """N*(S) = intersection of N(v) over v in S."""
    S = tuple(S)
    if not S:
        raise PreconditionError("common neighborhood of an empty set is undefined")
    return frozenset(iter_bits(common_bits(G, S)))


def common_degree(G: Graph, S: Iterable[int]) -> int:
    return common_bits(G, S).bit_count()


# Metrics -------------------------------------------------------------------

def eccentricity(G: Graph, source: int):
    """BFS eccentricity of a vertex; INFINITY when some vertex is unreachable."""
    G._check_vertex(source)
    full = (1 << G.n) - 1
    visited = frontier = 1 << source
    distance = 0
    while True:
        reach = 0
        for v in iter_bits(frontier):
            reach |= G.bits[v]
        frontier = reach & ~visited
        if not frontier:
            break
        visited |= frontier
        distance += 1
    return distance if visited == full else INFINITY


def radius(G: Graph):
    if G.n == 0:
        raise PreconditionError("radius of the empty graph is undefined")
    return min((eccentricity(G, v) for v in range(G.n)), key=_radius_key)


def _radius_key(value):
    return (1, 0) if value is INFINITY else (0, value)


def degree_stats(G: Graph) -> DegreeStats:
    if G.n < 1:
        raise PreconditionError("degree statistics need at least one vertex")
    return DegreeStats(
        min_degree=min(G.degrees),
        avg_degree=Fraction(2 * G.e, G.n),
        radius=radius(G),
    )


# Subgraphs -----------------------------------------------------------------

def induced_subgraph(G: Graph, W: Iterable[int]) -> Graph:
    """G[W] re-indexed 0..|W|-1; labels map each new id to its id in G."""
    keep = sorted(set(W))
    for v in keep:
        G._check_vertex(v)
    index = {v: i for i, v in enumerate(keep)}
    mask = mask_of(keep)
    edges = []
    for u in keep:
        for v in iter_bits(G.bits[u] & mask):
            if u < v:
                edges.append((index[u], index[v]))
    bipartition = None
    if G.bipartition is not None:
        side_a = {index[v] for v in keep if v in G.bipartition[0]}
        bipartition = (side_a, set(range(len(keep))) - side_a)
    return Graph.from_edges(len(keep), edges, bipartition, labels=keep)


def bipartite_half(G: Graph, seed: int = 0) -> Graph:
    """
    Spanning bipartite subgraph keeping at least ceil(e/2) edges.

    Bipartite inputs are returned with their bipartition. Otherwise a seeded
    random bisection is improved by local moves: a vertex with fewer cross
    neighbors than same-side neighbors switches sides until none remains.
    """
    if G.n < 1:
        raise PreconditionError("bipartite_half needs at least one vertex")
    if G.bipartition is not None:
        return G
    nx_graph = G.to_networkx()
    if nx.is_bipartite(nx_graph):
        coloring = nx.bipartite.color(nx_graph)
        side_a = {v for v, c in coloring.items() if c == 0}
        return Graph(G.n, G.edges, (side_a, set(range(G.n)) - side_a))

    rng = make_rng(seed)
    order = rng.permutation(G.n)
    side_a_mask = mask_of(int(v) for v in order[: (G.n + 1) // 2])
    moved = True
    while moved:
        moved = False
        for v in range(G.n):
            in_a = bool(side_a_mask >> v & 1)
            own = side_a_mask if in_a else ~side_a_mask
            same = (G.bits[v] & own).bit_count()
            if G.degrees[v] - same < same:
                side_a_mask ^= 1 << v
                moved = True

    side_a = set(iter_bits(side_a_mask))
    kept = [(u, v) for u, v in G.edges if (u in side_a) != (v in side_a)]
    return Graph.from_edges(G.n, kept, (side_a, set(range(G.n)) - side_a))


def side_a_first(G: Graph) -> Graph:
    """Renumber a bipartite graph so side A is the prefix 0..|A|-1."""
    G.require_bipartition()
    order = sorted(G.side_a) + sorted(G.side_b)
    if order == list(range(G.n)):
        return G
    index = {v: k for k, v in enumerate(order)}
    a = len(G.side_a)
    edges = [(index[u], index[v]) for u, v in G.edges]
    return Graph.from_edges(G.n, edges, (range(a), range(a, G.n)), labels=order)


# Generators ----------------------------------------------------------------

def _param(params: Mapping, key, kind, cast=int):
    if key not in params:
        raise PreconditionError(f"generator '{kind}' needs parameter '{key}'")
    try:
        return cast(params[key])
    except (TypeError, ValueError) as exc:
        raise PreconditionError(f"generator '{kind}': bad value for '{key}'") from exc


def _probability(params, kind):
    p = _param(params, "p", kind, float)
    if not 0.0 <= p <= 1.0:
        raise PreconditionError(f"generator '{kind}': p must lie in [0, 1]")
    return p


def _nonnegative(value, key, kind):
    if value < 0:
        raise PreconditionError(f"generator '{kind}': '{key}' must be non-negative")
    return value


def generate(kind: str, params: Mapping | None = None, seed: int = 0) -> Graph:
    """
    Build a graph of the given kind; deterministic for a fixed seed.

    Kinds and parameters:
        gnp(n, p), gnm(n, m), complete(n), complete_bipartite(a, b), cycle(n),
        hypercube_q3(), h_st(s, t), path(n), star(k), empty(n),
        bipartite_gnp(a, b, p), bipartite_gnm(a, b, m)
    """
    params = dict(params or {})
    rng = make_rng(seed)

    if kind == "gnp":
        n = _nonnegative(_param(params, "n", kind), "n", kind)
        p = _probability(params, kind)
        rows, cols = np.triu_indices(n, 1)
        keep = rng.random(rows.size) < p
        return Graph.from_edges(n, zip(rows[keep].tolist(), cols[keep].tolist()))

    if kind == "gnm":
        n = _nonnegative(_param(params, "n", kind), "n", kind)
        m = _nonnegative(_param(params, "m", kind), "m", kind)
        rows, cols = np.triu_indices(n, 1)
        if m > rows.size:
            raise PreconditionError(f"gnm: m={m} exceeds {rows.size} possible edges")
        picks = np.sort(rng.choice(rows.size, size=m, replace=False))
        return Graph.from_edges(n, zip(rows[picks].tolist(), cols[picks].tolist()))

    if kind == "complete":
        n = _nonnegative(_param(params, "n", kind), "n", kind)
        rows, cols = np.triu_indices(n, 1)
        return Graph.from_edges(n, zip(rows.tolist(), cols.tolist()))

    if kind in ("complete_bipartite", "bipartite_gnp", "bipartite_gnm"):
        a = _nonnegative(_param(params, "a", kind), "a", kind)
        b = _nonnegative(_param(params, "b", kind), "b", kind)
        if kind == "complete_bipartite":
            keep = np.ones((a, b), dtype=bool)
        elif kind == "bipartite_gnp":
            keep = rng.random((a, b)) < _probability(params, kind)
        else:
            m = _nonnegative(_param(params, "m", kind), "m", kind)
            if m > a * b:
                raise PreconditionError(f"bipartite_gnm: m={m} exceeds {a * b} possible edges")
            keep = np.zeros(a * b, dtype=bool)
            keep[rng.choice(a * b, size=m, replace=False)] = True
            keep = keep.reshape(a, b)
        rows, cols = np.nonzero(keep)
        edges = zip(rows.tolist(), (cols + a).tolist())
        return Graph.from_edges(a + b, edges, (range(a), range(a, a + b)))

    if kind == "cycle":
        n = _param(params, "n", kind)
        if n < 3:
            raise PreconditionError("cycle needs n >= 3")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    if kind == "path":
        n = _nonnegative(_param(params, "n", kind), "n", kind)
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    if kind == "star":
        k = _nonnegative(_param(params, "k", kind), "k", kind)
        return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)],
                                ({0}, range(1, k + 1)))

    if kind == "empty":
        n = _nonnegative(_param(params, "n", kind), "n", kind)
        return Graph.from_edges(n, [])

    if kind == "hypercube_q3":
        cube = nx.hypercube_graph(3)
        for node in cube.nodes:
            cube.nodes[node]["side"] = sum(node) % 2
        return Graph.from_networkx(cube, bipartition_attr="side")

    if kind == "h_st":
        return h_st(_param(params, "s", kind), _param(params, "t", kind))

    raise PreconditionError(f"unknown generator kind '{kind}'")


def h_st(s: int, t: int) -> Graph:
    """
    Two copies of K_{s,t} joined by an (s+t)-matching.

    Vertex ids: x_i = i, x'_j = s+j, y_i = s+t+i, y'_j = 2s+t+j. The s-matching
    {x_i y_i} and the t-matching {x'_j y'_j} are the two parts.
    """
    if s < 1 or t < 1:
        raise PreconditionError("h_st needs s, t >= 1")
    x = list(range(s))
    xp = list(range(s, s + t))
    y = list(range(s + t, 2 * s + t))
    yp = list(range(2 * s + t, 2 * s + 2 * t))
    edges = [(x[i], xp[j]) for i in range(s) for j in range(t)]
    edges += [(y[i], yp[j]) for i in range(s) for j in range(t)]
    edges += [(x[i], y[i]) for i in range(s)]
    edges += [(xp[j], yp[j]) for j in range(t)]
    return Graph.from_edges(2 * (s + t), edges, (x + yp, xp + y))


# Edge-list format ------------------------------------------------------------

def _ints(parts, line_no, expected):
    if len(parts) != expected:
        raise GraphFormatError(f"expected {expected} integers, found {len(parts)}", line_no)
    try:
        values = [int(p) for p in parts]
    except ValueError as exc:
        raise GraphFormatError(f"not a decimal integer in {' '.join(parts)!r}", line_no) from exc
    if any(v < 0 for v in values):
        raise GraphFormatError("negative integer", line_no)
    return values


def load_graph(text) -> Graph:
    """
    Parse the edge-list format.

    Line 1 is `n m`, an optional `bipartition a` line declares vertices 0..a-1
    as side A, then m lines `u v`. Lines starting with '#' are header comments.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("ascii")
        except UnicodeDecodeError as exc:
            raise GraphFormatError("edge list must be ASCII") from exc
    lines = text.splitlines()
    check_artifact_header(lines, GraphFormatError)
    rows = [(no, line.split()) for no, line in enumerate(lines, 1)
            if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise GraphFormatError("missing 'n m' header line", 1)

    header_no, header = rows[0]
    n, m = _ints(header, header_no, 2)
    body = rows[1:]

    bipartition = None
    if body and body[0][1] and body[0][1][0] == "bipartition":
        bip_no, bip = body[0]
        (a,) = _ints(bip[1:], bip_no, 1)
        if a > n:
            raise GraphFormatError(f"bipartition size {a} exceeds n={n}", bip_no)
        bipartition = (range(a), range(a, n))
        body = body[1:]

    if len(body) != m:
        last = body[-1][0] if body else header_no
        raise GraphFormatError(f"expected {m} edge lines, found {len(body)}", last)

    seen = set()
    for no, parts in body:
        u, v = _ints(parts, no, 2)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", no)
        if u >= n or v >= n:
            raise GraphFormatError(f"vertex id out of range 0..{n - 1}", no)
        edge = (u, v) if u < v else (v, u)
        if edge in seen:
            raise GraphFormatError(f"duplicate edge {edge[0]} {edge[1]}", no)
        seen.add(edge)

    try:
        return Graph(n, frozenset(seen), bipartition)
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from exc


def dump_graph(G: Graph, header: bool = True) -> str:
    """Write G in the edge-list format (bipartition line only for prefix sides)."""
    lines = [ARTIFACT_HEADER] if header else []
    lines.append(f"{G.n} {G.e}")
    if G.bipartition is not None:
        a = len(G.bipartition[0])
        if G.bipartition[0] != frozenset(range(a)):
            raise GraphError("bipartition side A must be the prefix 0..a-1 to be written")
        lines.append(f"bipartition {a}")
    lines.extend(f"{u} {v}" for u, v in G.sorted_edges)
    return "\n".join(lines) + "\n"
