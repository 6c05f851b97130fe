"""Cellular embeddings as rotation systems with edge signatures.

An embedding stores, for every vertex, a cyclic order of the incident
edge-ends ("darts"), and a type bit (signature) for every edge.  Edge i
owns darts 2i and 2i+1, one per end; a loop owns both darts at the same
vertex.  This is the universal combinatorial representation: pure
systems (all signatures 0) describe orientable embeddings, and type-1
edges reverse the local orientation during face tracing.

Face tracing works on states (dart, side).  The dart is the end the
traversal departs from; the side is the local orientation at the moment
of departure.  Crossing edge e flips the side iff e has type 1, and the
side at arrival decides whether the next outgoing dart is taken
clockwise (normal behavior) or counterclockwise (reverse behavior) in
the rotation.  States pair up under the fixed-point-free involution

    (dart, side)  <->  (other dart, 1 XOR side XOR signature)

which conjugates the step map to its inverse, so traversal orbits come
in mirror pairs; each pair is one face.  A face therefore consumes one
traversal slot per edge side: 2|E| slots in total.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .graphs import Graph, GraphError, edge_key, vkey

Vertex = int | str


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class Embedding:
    graph: Graph
    rot: dict = field(default_factory=dict)    # vertex -> tuple of darts
    sig: tuple = ()                            # signature bit per edge id
    corner_labels: dict = field(default_factory=dict)  # dart -> label in the gap after it

    def __post_init__(self):
        ne = self.graph.num_edges
        if len(self.sig) != ne:
            raise EmbeddingError("signature must cover every edge")
        if any(b not in (0, 1) for b in self.sig):
            raise EmbeddingError("signatures are bits")
        seen = set()
        for v, rotation in self.rot.items():
            for d in rotation:
                if d in seen:
                    raise EmbeddingError(f"dart {d} appears twice")
                seen.add(d)
                if self.dart_vertex(d) != v:
                    raise EmbeddingError(f"dart {d} listed at the wrong vertex")
        if len(seen) != 2 * ne:
            raise EmbeddingError("every edge end must appear in exactly one rotation")
        if set(self.rot) != set(self.graph.vertices):
            raise EmbeddingError("rotation must be defined for every vertex")

    # -- dart helpers ------------------------------------------------

    def dart_vertex(self, d: int) -> Vertex:
        u, v = self.graph.edges[d >> 1]
        return u if (d & 1) == 0 else v

    def dart_head(self, d: int) -> Vertex:
        """Vertex the arc departing from dart d arrives at."""
        return self.dart_vertex(d ^ 1)

    def dart_to(self, v: Vertex, w: Vertex) -> int:
        """The unique dart at v on an edge towards w (error if ambiguous)."""
        cands = [d for d in self.rot[v] if self.dart_head(d) == w]
        if len(cands) != 1:
            raise EmbeddingError(f"dart {v}->{w} is not unique ({len(cands)} candidates)")
        return cands[0]

    def neighbor_row(self, v: Vertex) -> list:
        return [self.dart_head(d) for d in self.rot[v]]

    def succ_pred(self):
        succ, pred = {}, {}
        for rotation in self.rot.values():
            n = len(rotation)
            for i, d in enumerate(rotation):
                nxt = rotation[(i + 1) % n]
                succ[d] = nxt
                pred[nxt] = d
        return succ, pred

    def is_pure(self) -> bool:
        return all(b == 0 for b in self.sig)


@dataclass(frozen=True)
class Face:
    """One face boundary in canonical form.

    ``steps`` is the cyclic walk as (dart, side) pairs; the walk is
    rotated so its lexicographically least variant with a
    normal-behavior first step comes first.  ``behaviors[i]`` is the
    behavior of step i (0 normal / 1 reverse).
    """

    steps: tuple
    vertices: tuple
    behaviors: tuple

    @property
    def length(self) -> int:
        return len(self.steps)

    def edge_ids(self) -> list[int]:
        return [d >> 1 for d, _ in self.steps]

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)


@dataclass(frozen=True)
class FaceSet:
    faces: tuple
    state_to_face: dict    # every (dart, side) state, packed, -> face index
    one_way: frozenset     # edge ids traversed twice in the same direction

    def __len__(self):
        return len(self.faces)

    def lengths(self) -> Counter:
        return Counter(f.length for f in self.faces)

    def face_of_state(self, dart: int, side: int) -> int:
        return self.state_to_face[2 * dart + side]


def _behavior(emb: Embedding, dart: int, side: int) -> int:
    return side ^ emb.sig[dart >> 1]


def trace_faces(emb: Embedding) -> FaceSet:
    """Decompose the surface complement into face boundary walks."""
    succ, pred = emb.succ_pred()
    ne = emb.graph.num_edges

    def next_state(state: int) -> int:
        dart, side = state >> 1, state & 1
        arr_side = side ^ emb.sig[dart >> 1]
        t = dart ^ 1
        s = succ[t] if arr_side == 0 else pred[t]
        return 2 * s + arr_side

    def mirror(state: int) -> int:
        dart, side = state >> 1, state & 1
        return 2 * (dart ^ 1) + (1 ^ side ^ emb.sig[dart >> 1])

    orbit_of = {}
    orbits = []
    for seed in range(4 * ne):
        if seed in orbit_of:
            continue
        orbit = [seed]
        orbit_of[seed] = len(orbits)
        cur = next_state(seed)
        while cur != seed:
            orbit_of[cur] = len(orbits)
            orbit.append(cur)
            cur = next_state(cur)
        orbits.append(orbit)

    faces = []
    state_to_face = {}
    consumed_orbits = set()
    for idx, orbit in enumerate(orbits):
        if idx in consumed_orbits:
            continue
        partner = orbit_of[mirror(orbit[0])]
        if partner == idx or partner in consumed_orbits:
            raise EmbeddingError("face orbits failed to pair; invalid embedding")
        consumed_orbits.add(idx)
        consumed_orbits.add(partner)
        face = _canonical_face(emb, [orbit, orbits[partner]])
        fid = len(faces)
        faces.append(face)
        for st in orbit + orbits[partner]:
            state_to_face[st] = fid

    # A step's direction is its dart; an edge is one-way when the two
    # slots of the canonical walks use the same dart.
    dart_uses = Counter()
    for face in faces:
        for d, _ in face.steps:
            dart_uses[d] += 1
    one_way = frozenset(e for e in range(ne) if dart_uses[2 * e] != 1)

    order = sorted(range(len(faces)), key=lambda i: _face_sort_key(faces[i]))
    rank = {old: new for new, old in enumerate(order)}
    faces = tuple(faces[i] for i in order)
    state_to_face = {st: rank[f] for st, f in state_to_face.items()}
    return FaceSet(faces, state_to_face, one_way)


def _face_sort_key(face: Face):
    return tuple((vkey(v), d, s) for v, (d, s) in zip(face.vertices, face.steps))


def _canonical_face(emb: Embedding, orbit_pair) -> Face:
    best = None
    for orbit in orbit_pair:
        n = len(orbit)
        steps = [(st >> 1, st & 1) for st in orbit]
        for start in range(n):
            if _behavior(emb, *steps[start]) != 0:
                continue
            rolled = steps[start:] + steps[:start]
            key = tuple((vkey(emb.dart_vertex(d)), d, s) for d, s in rolled)
            if best is None or key < best[0]:
                best = (key, rolled)
    if best is None:
        raise EmbeddingError("face with no normal-behavior step; invalid embedding")
    steps = tuple(best[1])
    vertices = tuple(emb.dart_vertex(d) for d, _ in steps)
    behaviors = tuple(_behavior(emb, d, s) for d, s in steps)
    return Face(steps, vertices, behaviors)


def euler_characteristic(emb: Embedding, faces: FaceSet | None = None) -> int:
    if faces is None:
        faces = trace_faces(emb)
    return emb.graph.num_vertices - emb.graph.num_edges + len(faces)


@dataclass(frozen=True)
class SurfaceClass:
    orientable: bool
    genus: int
    euler_characteristic: int


def classify_surface(emb: Embedding, faces: FaceSet | None = None) -> SurfaceClass:
    """Orientability and genus of the embedded surface.

    The embedding is orientable iff some set of vertex reflections
    clears every signature, i.e. iff the signature is a coboundary.
    Decided by two-coloring a spanning tree and checking every
    remaining edge; loops can never be cleared by reflections.
    """
    g = emb.graph
    if not g.is_connected():
        raise EmbeddingError("surface classification needs a connected graph")
    color = {}
    start = g.sorted_vertices()[0]
    color[start] = 0
    stack = [start]
    adj: dict = {v: [] for v in g.vertices}
    for eid, (u, v) in enumerate(g.edges):
        if u != v:
            adj[u].append((v, eid))
            adj[v].append((u, eid))
    tree_edges = set()
    while stack:
        u = stack.pop()
        for v, eid in adj[u]:
            if v not in color:
                color[v] = color[u] ^ emb.sig[eid]
                tree_edges.add(eid)
                stack.append(v)
    orientable = True
    for eid, (u, v) in enumerate(g.edges):
        if u == v:
            if emb.sig[eid] == 1:
                orientable = False
        elif eid not in tree_edges:
            if emb.sig[eid] ^ color[u] ^ color[v]:
                orientable = False
    chi = euler_characteristic(emb, faces)
    if orientable:
        if chi % 2:
            raise EmbeddingError("odd Euler characteristic on an orientable surface")
        genus = (2 - chi) // 2
    else:
        genus = 2 - chi
    return SurfaceClass(orientable, genus, chi)


def reflect_vertex(emb: Embedding, v: Vertex) -> Embedding:
    """Reverse the rotation at v and toggle its non-loop incident signatures.

    This is the equivalence move on rotation systems: the embedded
    surface is unchanged.  Loops keep their signature because both
    their ends move together.
    """
    rot = dict(emb.rot)
    rot[v] = tuple(reversed(rot[v]))
    sig = list(emb.sig)
    for eid, (a, b) in enumerate(emb.graph.edges):
        if (a == v) != (b == v):
            sig[eid] ^= 1
    return Embedding(emb.graph, rot, tuple(sig), dict(emb.corner_labels))


@dataclass(frozen=True)
class ShapeReport:
    passed: bool
    histogram: dict            # face length -> count
    offenders: tuple           # non-conforming faces (vertex tuples)
    detail: str = ""

    def __bool__(self):
        return self.passed


def check_shape(emb: Embedding, allowed_long=(), faces: FaceSet | None = None) -> ShapeReport:
    """Verify every face is a triangle except an allowed multiset.

    ``allowed_long`` lists (length, count) pairs, e.g. [(6, 2)] for two
    hexagons on top of the triangles.
    """
    if faces is None:
        faces = trace_faces(emb)
    budget = Counter()
    for length, count in allowed_long:
        budget[length] += count
    offenders = []
    used = Counter()
    for f in faces.faces:
        if f.length == 3:
            continue
        used[f.length] += 1
        if used[f.length] > budget[f.length]:
            offenders.append(f.vertices)
    missing = {L: c for L, c in budget.items() if used[L] < c}
    passed = not offenders and not missing
    detail = ""
    if offenders:
        detail = f"{len(offenders)} unexpected long face(s)"
    elif missing:
        detail = f"missing expected long faces: {missing}"
    return ShapeReport(passed, dict(faces.lengths()), tuple(offenders), detail)


def graph_identity(emb: Embedding, target: Graph) -> bool:
    """Label-exact comparison of the embedded graph with a target graph."""
    return emb.graph.same_as(target)


def embedding_from_rows(rows: dict, signatures=None) -> Embedding:
    """Build an embedding of a simple graph from neighbor-list rotations.

    ``rows`` maps each vertex to the cyclic order of its neighbors.
    Rows must be symmetric (u lists v iff v lists u); this is the ADJ
    table model, so loops and parallel edges are rejected.
    ``signatures`` optionally maps unordered vertex pairs to type bits.
    """
    pairs = set()
    for v, row in rows.items():
        if len(set(row)) != len(row):
            raise EmbeddingError(f"row {v} repeats a neighbor (parallel edges not allowed here)")
        for w in row:
            if w == v:
                raise EmbeddingError(f"row {v} lists a loop")
            if w not in rows:
                raise EmbeddingError(f"row {v} references unknown vertex {w}")
            pairs.add(edge_key(v, w))
    for u, v in sorted(pairs, key=lambda p: (vkey(p[0]), vkey(p[1]))):
        if u not in rows[v] or v not in rows[u]:
            raise EmbeddingError(f"adjacency between {u} and {v} is not symmetric")
    edges = sorted(pairs, key=lambda p: (vkey(p[0]), vkey(p[1])))
    graph = Graph.from_edges(rows.keys(), edges)
    dart_at = {}
    for eid, (u, v) in enumerate(edges):
        dart_at[(u, v)] = 2 * eid
        dart_at[(v, u)] = 2 * eid + 1
    rot = {v: tuple(dart_at[(v, w)] for w in row) for v, row in rows.items()}
    sig = [0] * len(edges)
    if signatures:
        for (u, v), bit in signatures.items():
            k = edge_key(u, v)
            if k not in dart_at and (k[1], k[0]) not in dart_at:
                raise EmbeddingError(f"signature given for absent edge ({u},{v})")
            sig[dart_at[k] >> 1] = bit
    return Embedding(graph, rot, tuple(sig))


def rows_of(emb: Embedding) -> dict:
    """Neighbor-list rotations (inverse of embedding_from_rows for simple graphs)."""
    return {v: emb.neighbor_row(v) for v in emb.graph.sorted_vertices()}
