"""Multigraphs with stable edge ids, plus the circulant/join constructors.

Vertex ids are either integers or strings (strings are used for the
"letter" vertices such as ``w`` or ``x0`` that subdivide long faces).
Integers sort before strings everywhere, so mixed vertex sets have a
stable canonical order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Vertex = int | str


def vkey(v: Vertex):
    """Sort key placing numeric vertices (ascending) before string labels."""
    if isinstance(v, int):
        return (0, v, "")
    return (1, 0, str(v))


def edge_key(u: Vertex, v: Vertex) -> tuple[Vertex, Vertex]:
    """Unordered edge as a canonically ordered pair."""
    return (u, v) if vkey(u) <= vkey(v) else (v, u)


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph.  ``edges[i]`` is the endpoint pair of edge id i.

    Loops and parallel edges are allowed; most constructors below only
    produce simple graphs.
    """

    vertices: frozenset = field(default_factory=frozenset)
    edges: tuple = ()  # tuple of (u, v) pairs, edge id = position

    def __post_init__(self):
        for u, v in self.edges:
            if u not in self.vertices or v not in self.vertices:
                raise GraphError(f"edge ({u},{v}) has an undeclared endpoint")

    @staticmethod
    def from_edges(vertices, edge_pairs) -> "Graph":
        return Graph(frozenset(vertices), tuple(tuple(e) for e in edge_pairs))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def sorted_vertices(self) -> list:
        return sorted(self.vertices, key=vkey)

    def degree(self, v) -> int:
        d = 0
        for a, b in self.edges:
            if a == v:
                d += 1
            if b == v:
                d += 1
        return d

    def edge_multiset(self):
        """Multiset of unordered endpoint pairs, canonically sorted."""
        return sorted((edge_key(u, v) for u, v in self.edges),
                      key=lambda p: (vkey(p[0]), vkey(p[1])))

    def has_edge(self, u, v) -> bool:
        k = edge_key(u, v)
        return any(edge_key(a, b) == k for a, b in self.edges)

    def edge_ids_between(self, u, v) -> list[int]:
        k = edge_key(u, v)
        return [i for i, (a, b) in enumerate(self.edges) if edge_key(a, b) == k]

    def neighbors(self, v) -> set:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            if b == v:
                out.add(a)
        return out

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            k = edge_key(u, v)
            if k in seen:
                return False
            seen.add(k)
        return True

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        start = next(iter(self.vertices))
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def same_as(self, other: "Graph") -> bool:
        """Label-exact equality: same vertex set and same edge multiset."""
        return (self.vertices == other.vertices
                and self.edge_multiset() == other.edge_multiset())


def build_circulant(n: int, diffs) -> Graph:
    """Circulant graph on Z_n with the given set of differences.

    Vertices are 0..n-1 and (u, v) is an edge iff |u - v| mod n lies in
    ``diffs``.  Differences must lie in 1..n//2; the result is simple.
    """
    diffs = set(diffs)
    if not diffs:
        raise GraphError("difference set must be nonempty")
    for d in diffs:
        if not (1 <= d <= n // 2):
            raise GraphError(f"difference {d} outside 1..{n // 2}")
    pairs = set()
    for u in range(n):
        for d in diffs:
            pairs.add(edge_key(u, (u + d) % n))
    return Graph.from_edges(range(n), sorted(pairs))


def build_complete(n: int) -> Graph:
    """K_n as the circulant C(n, {1..n//2})."""
    return build_circulant(n, range(1, n // 2 + 1))


def build_complete_on(labels) -> Graph:
    """Complete graph on an explicit mixed label set."""
    labels = sorted(set(labels), key=vkey)
    pairs = [(labels[i], labels[j])
             for i in range(len(labels)) for j in range(i + 1, len(labels))]
    return Graph.from_edges(labels, pairs)


def build_octahedral(vcount: int) -> Graph:
    """O_2n: the complete graph on 2n vertices minus a perfect matching."""
    if vcount % 2 or vcount < 4:
        raise GraphError("octahedral graphs need an even vertex count >= 4")
    n = vcount // 2
    return build_circulant(vcount, range(1, n))


def build_ham_complement(n: int) -> Graph:
    """K_n minus a spanning cycle: the circulant C(n, {2..n//2})."""
    if n < 5:
        raise GraphError("hamiltonian cycle complement needs n >= 5")
    return build_circulant(n, range(2, n // 2 + 1))


def join_with_empty(g: Graph, labels) -> Graph:
    """Join g with an edgeless graph on ``labels``.

    Each new label becomes adjacent to every vertex of g; the new
    vertices stay pairwise nonadjacent.
    """
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise GraphError("join labels must be distinct")
    for c in labels:
        if c in g.vertices:
            raise GraphError(f"join label {c!r} collides with a vertex of the base graph")
    verts = set(g.vertices) | set(labels)
    pairs = list(g.edges)
    for c in labels:
        for v in g.sorted_vertices():
            pairs.append((v, c))
    return Graph.from_edges(verts, pairs)


def add_edges(g: Graph, pairs) -> Graph:
    """Add the listed unordered pairs as new edges (duplicates rejected)."""
    new = list(g.edges)
    for u, v in pairs:
        if g.has_edge(u, v):
            raise GraphError(f"edge ({u},{v}) already present")
        new.append((u, v))
    return Graph.from_edges(g.vertices, new)


def remove_edges(g: Graph, pairs) -> Graph:
    """Remove one copy of each listed unordered pair."""
    remaining = list(g.edges)
    for u, v in pairs:
        k = edge_key(u, v)
        for i, (a, b) in enumerate(remaining):
            if edge_key(a, b) == k:
                del remaining[i]
                break
        else:
            raise GraphError(f"edge ({u},{v}) not present")
    return Graph.from_edges(g.vertices, remaining)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def euler_lower_bound(g: Graph, orientable: bool) -> int:
    """Euler-formula genus lower bound for a simple connected graph.

    ceil((E - 3V + 6) / 6) in the orientable case, ceil(.../3) in the
    nonorientable case; a triangular embedding attains it exactly.
    """
    if not g.is_simple():
        raise GraphError("Euler lower bound requires a simple graph")
    if not g.is_connected():
        raise GraphError("Euler lower bound requires a connected graph")
    num = g.num_edges - 3 * g.num_vertices + 6
    return _ceil_div(num, 6 if orientable else 3)


def closed_form_bound(family: str, n: int) -> int:
    """Closed-form orientable genus lower bound for the three named families.

    ``complete``: K_n.  ``octahedral``: O_n for even n (argument is the
    vertex count).  ``ham_complement``: K_n - C_n.
    """
    if family == "complete":
        if n < 3:
            raise GraphError("complete family needs n >= 3")
        return _ceil_div((n - 3) * (n - 4), 12)
    if family == "octahedral":
        if n % 2 or n < 4:
            raise GraphError("octahedral family takes an even vertex count >= 4")
        half = n // 2
        return _ceil_div((half - 1) * (half - 3), 3)
    if family == "ham_complement":
        if n < 5:
            raise GraphError("ham_complement family needs n >= 5")
        return _ceil_div(n * n - 9 * n + 12, 12)
    raise GraphError(f"unknown family {family!r}")
