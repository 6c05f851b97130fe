"""Local modifications of embeddings: subdivide, delete, add, bridge, flip,
contract, plus scripted sequences of these with a per-step audit trail.

All operations are pure: they return a new Embedding.  Corners are
addressed as rotation gaps, written (prev-neighbor, vertex,
next-neighbor); the two neighbors must be consecutive in the vertex's
rotation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .embedding import (
    Embedding,
    EmbeddingError,
    FaceSet,
    euler_characteristic,
    trace_faces,
)
from .graphs import Graph, edge_key, vkey


class SurgeryError(ValueError):
    pass


# ----------------------------------------------------------------------
# low-level rotation editing


def _remove_edge_raw(emb: Embedding, eid: int) -> Embedding:
    ne = emb.graph.num_edges

    def remap(d):
        e, sel = d >> 1, d & 1
        return 2 * (e - 1) + sel if e > eid else d

    edges = emb.graph.edges[:eid] + emb.graph.edges[eid + 1:]
    graph = Graph(emb.graph.vertices, edges)
    rot = {v: tuple(remap(d) for d in rotation if d >> 1 != eid)
           for v, rotation in emb.rot.items()}
    sig = emb.sig[:eid] + emb.sig[eid + 1:]
    labels = {remap(d): s for d, s in emb.corner_labels.items() if d >> 1 != eid}
    return Embedding(graph, rot, sig, labels)


def _insert_edge_raw(emb: Embedding, u, gap_u: int, v, gap_v: int, sig_bit: int) -> Embedding:
    """New edge (u, v); its u-dart goes right after gap_u in u's rotation,
    its v-dart right after gap_v."""
    eid = emb.graph.num_edges
    du, dv = 2 * eid, 2 * eid + 1
    graph = Graph(emb.graph.vertices, emb.graph.edges + ((u, v),))
    rot = dict(emb.rot)

    def insert_after(rotation, gap, new):
        i = rotation.index(gap)
        return rotation[:i + 1] + (new,) + rotation[i + 1:]

    rot[u] = insert_after(rot[u], gap_u, du)
    rot[v] = insert_after(rot[v], gap_v, dv)
    return Embedding(graph, rot, emb.sig + (sig_bit,), dict(emb.corner_labels))


def corner_map(emb: Embedding, faces: FaceSet | None = None) -> dict:
    """Map every rotation gap to its face visit.

    The gap after dart g hosts exactly one face corner; the value is
    (face index, step index, behavior at the corner).  Step index i
    means the corner between steps i and i+1 of the canonical walk.
    """
    if faces is None:
        faces = trace_faces(emb)
    out = {}
    for fid, face in enumerate(faces.faces):
        n = face.length
        for i in range(n):
            d, _ = face.steps[i]
            d_next, _ = face.steps[(i + 1) % n]
            beta = face.behaviors[i]
            gap = (d ^ 1) if beta == 0 else d_next
            out[gap] = (fid, i, beta)
    if len(out) != 2 * emb.graph.num_edges:
        raise EmbeddingError("corner map is not a bijection; invalid embedding")
    return out


def resolve_corner(emb: Embedding, prev, v, nxt) -> int:
    """Gap dart for the corner (prev, v, next); must be unique."""
    if v not in emb.rot:
        raise SurgeryError(f"no vertex {v!r}")
    rotation = emb.rot[v]
    n = len(rotation)
    hits = [rotation[i] for i in range(n)
            if emb.dart_head(rotation[i]) == prev
            and emb.dart_head(rotation[(i + 1) % n]) == nxt]
    if not hits:
        raise SurgeryError(f"corner ({prev},{v},{nxt}) not found")
    if len(hits) > 1:
        raise SurgeryError(f"corner ({prev},{v},{nxt}) is ambiguous")
    return hits[0]


def _single_edge_id(emb: Embedding, u, v) -> int:
    ids = emb.graph.edge_ids_between(u, v)
    if not ids:
        raise SurgeryError(f"no edge ({u},{v})")
    if len(ids) > 1:
        raise SurgeryError(f"edge ({u},{v}) is ambiguous ({len(ids)} parallel copies)")
    return ids[0]


# ----------------------------------------------------------------------
# the operations


def subdivide_face(emb: Embedding, face_cycle, label,
                   faces: FaceSet | None = None) -> Embedding:
    """Place a new vertex inside a face, joined to every corner in
    boundary order.  ``face_cycle`` gives the face by its vertex cycle
    (any rotation, either direction).  chi is unchanged; a face of
    length L becomes L triangles.
    """
    if faces is None:
        faces = trace_faces(emb)
    want = _normalize_cycle(tuple(face_cycle))
    target = None
    for face in faces.faces:
        if _normalize_cycle(face.vertices) == want:
            target = face
            break
    if target is None:
        raise SurgeryError(f"no face with boundary {tuple(face_cycle)}")
    corners = _face_corner_gaps(target)
    return _subdivide_at_corners(emb, target, corners, label)


def _normalize_cycle(cycle: tuple) -> tuple:
    best = None
    n = len(cycle)
    for seq in (cycle, tuple(reversed(cycle))):
        for i in range(n):
            cand = seq[i:] + seq[:i]
            key = tuple(vkey(x) for x in cand)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


def _face_corner_gaps(face) -> list[tuple]:
    """(vertex, gap dart, behavior) per corner, in walk order."""
    n = face.length
    out = []
    for i in range(n):
        d, _ = face.steps[i]
        d_next, _ = face.steps[(i + 1) % n]
        beta = face.behaviors[i]
        gap = (d ^ 1) if beta == 0 else d_next
        out.append((face.vertices[(i + 1) % n], gap, beta))
    return out


def _subdivide_at_corners(emb: Embedding, face, corners, label) -> Embedding:
    if label in emb.graph.vertices:
        raise SurgeryError(f"label {label!r} already names a vertex")
    base_ne = emb.graph.num_edges
    new_edges = []
    rot = dict(emb.rot)
    sig = list(emb.sig)
    center_darts = []
    for k, (v, gap, beta) in enumerate(corners):
        eid = base_ne + k
        new_edges.append((label, v))
        sig.append(beta)
        dv = 2 * eid + 1
        i = rot[v].index(gap)
        rot[v] = rot[v][:i + 1] + (dv,) + rot[v][i + 1:]
        center_darts.append(2 * eid)
    # the center's rotation runs against the boundary walk, rotated to
    # start at the least corner vertex for a stable printed form
    rev = list(reversed(center_darts))
    heads = [corners[len(corners) - 1 - i][0] for i in range(len(rev))]
    start = min(range(len(rev)), key=lambda i: vkey(heads[i]))
    rev = rev[start:] + rev[:start]
    rot[label] = tuple(rev)
    graph = Graph(emb.graph.vertices | {label}, emb.graph.edges + tuple(new_edges))
    out = Embedding(graph, rot, tuple(sig), dict(emb.corner_labels))
    _expect_chi(emb, out, 0, "subdivide")
    return out


def delete_edge(emb: Embedding, u, v) -> Embedding:
    """Remove edge (u, v); its two faces merge, chi is unchanged."""
    eid = _single_edge_id(emb, u, v)
    faces = trace_faces(emb)
    f0 = faces.face_of_state(2 * eid, 0)
    f1 = faces.face_of_state(2 * eid, 1)
    if f0 == f1:
        raise SurgeryError(f"edge ({u},{v}) borders a single face; deleting it "
                           "would pinch the surface")
    out = _remove_edge_raw(emb, eid)
    _expect_chi(emb, out, 0, "delete")
    return out


def add_edge_in_face(emb: Embedding, u, v, corner_u=None, corner_v=None,
                     allow_parallel: bool = False) -> Embedding:
    """Add edge (u, v) across one face, splitting it in two.

    Corners may be given as (prev, vertex, next) triples; otherwise
    both endpoints must sit on exactly one common face, each at a
    single corner.
    """
    if u == v:
        raise SurgeryError("cannot add a loop this way")
    if not allow_parallel and emb.graph.has_edge(u, v):
        raise SurgeryError(f"edge ({u},{v}) already present (simple-graph guard)")
    faces = trace_faces(emb)
    cmap = corner_map(emb, faces)
    if corner_u is None or corner_v is None:
        gap_u, gap_v = _resolve_common_face(emb, faces, cmap, u, v)
    else:
        gap_u = resolve_corner(emb, *corner_u)
        gap_v = resolve_corner(emb, *corner_v)
    fu, _, bu = cmap[gap_u]
    fv, _, bv = cmap[gap_v]
    if fu != fv:
        raise SurgeryError(f"corners of ({u},{v}) lie on different faces; use bridge")
    out = _insert_edge_raw(emb, u, gap_u, v, gap_v, bu ^ bv)
    _expect_chi(emb, out, 0, "add")
    return out


def _resolve_common_face(emb, faces, cmap, u, v):
    by_face: dict = {}
    for gap, (fid, _, _) in cmap.items():
        by_face.setdefault(fid, {}).setdefault(emb.dart_vertex(gap), []).append(gap)
    candidates = [fid for fid, at in by_face.items() if u in at and v in at]
    if not candidates:
        raise SurgeryError(f"no face contains both {u} and {v}")
    if len(candidates) > 1:
        raise SurgeryError(f"several faces contain {u} and {v}; give corners explicitly")
    at = by_face[candidates[0]]
    if len(at[u]) > 1 or len(at[v]) > 1:
        raise SurgeryError(f"corner of {u} or {v} on the face is ambiguous; "
                           "give corners explicitly")
    return at[u][0], at[v][0]


def bridge(emb: Embedding, corner_u, corner_v, orient: str = "+") -> Embedding:
    """Join two distinct faces with a new edge (a handle).

    ``corner_u``/``corner_v`` are (prev, vertex, next) triples on the
    two faces.  chi drops by exactly 2.  With orient '+' on an
    orientable embedding the result stays orientable; '-' glues the
    boundaries the other way round.
    """
    if orient not in ("+", "-"):
        raise SurgeryError("orient flag must be '+' or '-'")
    gap_u = resolve_corner(emb, *corner_u)
    gap_v = resolve_corner(emb, *corner_v)
    faces = trace_faces(emb)
    cmap = corner_map(emb, faces)
    fu, _, bu = cmap[gap_u]
    fv, _, bv = cmap[gap_v]
    if fu == fv:
        raise SurgeryError("corners lie on the same face; use add_edge_in_face")
    u, v = corner_u[1], corner_v[1]
    bit = bu ^ bv ^ (0 if orient == "+" else 1)
    out = _insert_edge_raw(emb, u, gap_u, v, gap_v, bit)
    _expect_chi(emb, out, -2, "bridge")
    return out


def flip_edge(emb: Embedding, u, v, via=None, allow_parallel: bool = False) -> Embedding:
    """Replace the shared edge of two adjacent triangles by the opposite
    diagonal.  ``via`` disambiguates parallel copies by naming the two
    apex vertices.  chi and genus are unchanged.
    """
    ids = emb.graph.edge_ids_between(u, v)
    if not ids:
        raise SurgeryError(f"no edge ({u},{v})")
    faces = trace_faces(emb)
    chosen = None
    for eid in ids:
        apexes = _flip_apexes(emb, faces, eid)
        if apexes is None:
            continue
        if via is not None and set(apexes) != set(via):
            continue
        if chosen is not None:
            raise SurgeryError(f"flip of ({u},{v}) is ambiguous; use 'via'")
        chosen = (eid, apexes)
    if chosen is None:
        raise SurgeryError(f"edge ({u},{v}) has no valid flip"
                           + (f" via {via}" if via else ""))
    eid, (a, b) = chosen
    if a == b:
        raise SurgeryError(f"flip of ({u},{v}) would create a loop at {a}")
    if not allow_parallel and emb.graph.has_edge(a, b):
        raise SurgeryError(f"diagonal ({a},{b}) already present (simple-graph guard)")

    def apex_gap(fid, apex):
        for w, gap, beta in _face_corner_gaps(faces.faces[fid]):
            if w == apex:
                return gap, beta
        raise SurgeryError(f"apex {apex} not on face {fid}")

    f0 = faces.face_of_state(2 * eid, 0)
    f1 = faces.face_of_state(2 * eid, 1)
    gap_a, beta_a = apex_gap(f0, a)
    gap_b, beta_b = apex_gap(f1, b)

    def remap(d):
        e, sel = d >> 1, d & 1
        return 2 * (e - 1) + sel if e > eid else d

    cut = _remove_edge_raw(emb, eid)
    out = _insert_edge_raw(cut, a, remap(gap_a), b, remap(gap_b), beta_a ^ beta_b)
    _expect_chi(emb, out, 0, "flip")
    new_faces = trace_faces(out)
    new_eid = out.graph.num_edges - 1
    for s in (0, 1):
        if new_faces.faces[new_faces.face_of_state(2 * new_eid, s)].length != 3:
            raise SurgeryError("flip failed to produce two triangles")
    return out


def _flip_apexes(emb: Embedding, faces: FaceSet, eid: int):
    """Apex pair (a, b) if edge eid borders two distinct triangles."""
    f0 = faces.face_of_state(2 * eid, 0)
    f1 = faces.face_of_state(2 * eid, 1)
    if f0 == f1:
        return None
    out = []
    for fid in (f0, f1):
        face = faces.faces[fid]
        if face.length != 3:
            return None
        others = [w for w in face.vertices if w not in emb.graph.edges[eid]]
        if len(others) != 1:
            return None
        out.append(others[0])
    return tuple(out)


def contract_edge(emb: Embedding, u, v, new_label=None) -> Embedding:
    """Contract edge (u, v) into one vertex inheriting both rotations.

    Requires u and v to share no neighbor (and no parallel copy), so no
    multi-edge or loop is created.  chi is unchanged.
    """
    if u == v:
        raise SurgeryError("cannot contract a loop")
    ids = emb.graph.edge_ids_between(u, v)
    if len(ids) != 1:
        raise SurgeryError(f"edge ({u},{v}) missing or parallel")
    common = emb.graph.neighbors(u) & emb.graph.neighbors(v) - {u, v}
    if common:
        raise SurgeryError(f"{u} and {v} share neighbors {sorted(common, key=vkey)}; "
                           "contraction would create parallel edges")
    eid = ids[0]
    if emb.sig[eid] == 1:
        from .embedding import reflect_vertex
        emb = reflect_vertex(emb, v)
        if emb.sig[eid] == 1:
            raise SurgeryError("cannot normalize the contracted edge's signature")
    merged = new_label if new_label is not None else u
    if merged in emb.graph.vertices - {u, v}:
        raise SurgeryError(f"label {merged!r} already names a vertex")

    du = 2 * eid if emb.dart_vertex(2 * eid) == u else 2 * eid + 1
    dv = du ^ 1
    ru = _rotated_after(emb.rot[u], du)
    rv = _rotated_after(emb.rot[v], dv)
    spliced = ru + rv

    def remap(d):
        e, sel = d >> 1, d & 1
        return 2 * (e - 1) + sel if e > eid else d

    edges = []
    for i, (a, b) in enumerate(emb.graph.edges):
        if i == eid:
            continue
        a2 = merged if a in (u, v) else a
        b2 = merged if b in (u, v) else b
        edges.append((a2, b2))
    vertices = (emb.graph.vertices - {u, v}) | {merged}
    rot = {w: tuple(remap(d) for d in rotation)
           for w, rotation in emb.rot.items() if w not in (u, v)}
    rot[merged] = tuple(remap(d) for d in spliced)
    sig = emb.sig[:eid] + emb.sig[eid + 1:]
    out = Embedding(Graph(frozenset(vertices), tuple(edges)), rot, sig)
    _expect_chi(emb, out, 0, "contract")
    return out


def _rotated_after(rotation: tuple, dart: int) -> tuple:
    i = rotation.index(dart)
    return rotation[i + 1:] + rotation[:i]


def _expect_chi(before: Embedding, after: Embedding, delta: int, what: str):
    b = euler_characteristic(before)
    a = euler_characteristic(after)
    if a - b != delta:
        raise SurgeryError(f"{what}: chi changed by {a - b}, expected {delta}")


# ----------------------------------------------------------------------
# scripts


@dataclass(frozen=True)
class Command:
    op: str
    args: tuple = ()
    kwargs: tuple = ()   # sorted (key, value) pairs

    def text(self) -> str:
        from .formats import format_sur_command
        return format_sur_command(self)


@dataclass(frozen=True)
class SurgeryScript:
    commands: tuple


@dataclass
class ScriptTrace:
    steps: list = field(default_factory=list)  # (command text, chi, histogram)

    def as_text(self) -> str:
        lines = []
        for cmd, chi, hist in self.steps:
            h = ",".join(f"{L}:{c}" for L, c in sorted(hist.items()))
            lines.append(f"{cmd:40s} chi={chi:<5d} faces={h}")
        return "\n".join(lines)


CHI_DELTA = {"delete": 0, "add": 0, "flip": 0, "subdivide": 0,
             "contract": 0, "bridge": -2}


def apply_script(emb: Embedding, script: SurgeryScript):
    """Run a script, auditing chi and the face histogram after every step.

    Numeric vertex references resolve modulo the count of numeric
    vertices, offset by any preceding ``shift`` command.  The
    simple-graph guard starts on; ``guard off`` permits parallel-edge
    intermediates.  The first failing command aborts with the trace
    collected so far.
    """
    trace = ScriptTrace()
    shift = 0
    guard = True
    cur = emb

    def res(ref):
        if isinstance(ref, int):
            n = sum(1 for w in cur.graph.vertices if isinstance(w, int))
            if n == 0:
                raise SurgeryError("no numeric vertices to resolve against")
            return (ref + shift) % n
        return ref

    for cmd in script.commands:
        try:
            before_chi = euler_characteristic(cur)
            if cmd.op == "shift":
                shift += cmd.args[0]
                continue
            if cmd.op == "guard":
                guard = cmd.args[0]
                continue
            if cmd.op == "delete":
                cur = delete_edge(cur, res(cmd.args[0]), res(cmd.args[1]))
            elif cmd.op == "add":
                kw = dict(cmd.kwargs)
                corner_u = tuple(res(r) for r in kw["corner_u"]) if "corner_u" in kw else None
                corner_v = tuple(res(r) for r in kw["corner_v"]) if "corner_v" in kw else None
                cur = add_edge_in_face(cur, res(cmd.args[0]), res(cmd.args[1]),
                                       corner_u, corner_v, allow_parallel=not guard)
            elif cmd.op == "bridge":
                kw = dict(cmd.kwargs)
                cu = tuple(res(r) for r in cmd.args[0])
                cv = tuple(res(r) for r in cmd.args[1])
                cur = bridge(cur, cu, cv, kw.get("orient", "+"))
            elif cmd.op == "flip":
                kw = dict(cmd.kwargs)
                via = tuple(res(r) for r in kw["via"]) if "via" in kw else None
                cur = flip_edge(cur, res(cmd.args[0]), res(cmd.args[1]),
                                via=via, allow_parallel=not guard)
            elif cmd.op == "subdivide":
                cycle = tuple(res(r) for r in cmd.args[0])
                cur = subdivide_face(cur, cycle, cmd.args[1])
            elif cmd.op == "contract":
                kw = dict(cmd.kwargs)
                new_label = kw.get("as")
                if isinstance(new_label, int):
                    pass  # explicit numeric labels are taken literally
                cur = contract_edge(cur, res(cmd.args[0]), res(cmd.args[1]), new_label)
            else:
                raise SurgeryError(f"unknown command {cmd.op!r}")
            after_chi = euler_characteristic(cur)
            if after_chi - before_chi != CHI_DELTA[cmd.op]:
                raise SurgeryError(f"{cmd.op}: chi moved by {after_chi - before_chi}, "
                                   f"expected {CHI_DELTA[cmd.op]}")
            hist = dict(Counter(f.length for f in trace_faces(cur).faces))
            trace.steps.append((cmd.text(), after_chi, hist))
        except (SurgeryError, EmbeddingError) as exc:
            raise SurgeryError(
                f"script failed at '{cmd.text()}': {exc}\n--- trace so far ---\n"
                + trace.as_text()) from exc
    return cur, trace


# ----------------------------------------------------------------------
# offline authoring helper (not used by the script engine)


def find_flip_path(emb: Embedding, remove, create, first=None,
                   max_flips: int = 4, allow_parallel: bool = True):
    """Bounded search for a flip sequence whose net effect removes one
    edge and creates another, leaving every other adjacency alone.

    Returns the flip list as (u, v, via) triples, or None.  Authoring
    aid only; bounded breadth-first over at most ``max_flips`` flips.
    """
    goal = Counter(edge_key(*e) for e in emb.graph.edges)
    goal[edge_key(*remove)] -= 1
    goal[edge_key(*create)] += 1
    goal = {k: c for k, c in goal.items() if c}

    def settled(e):
        return {k: c for k, c in Counter(edge_key(*p) for p in e.graph.edges).items() if c} == goal

    frontier = [(emb, [])]
    seen = set()
    for _ in range(max_flips):
        nxt = []
        for cur, path in frontier:
            faces = trace_faces(cur)
            moves = []
            for eid in range(cur.graph.num_edges):
                apex = _flip_apexes(cur, faces, eid)
                if apex is None or apex[0] == apex[1]:
                    continue
                u, v = cur.graph.edges[eid]
                if not path and first is not None and edge_key(u, v) != edge_key(*first):
                    continue
                moves.append((u, v, apex))
            for u, v, apex in moves:
                try:
                    cand = flip_edge(cur, u, v, via=apex, allow_parallel=allow_parallel)
                except SurgeryError:
                    continue
                key = _embedding_key(cand)
                if key in seen:
                    continue
                seen.add(key)
                step = path + [(u, v, apex)]
                if settled(cand):
                    return step
                nxt.append((cand, step))
        frontier = nxt
    return None


def _embedding_key(emb: Embedding):
    rows = []
    for v in emb.graph.sorted_vertices():
        row = tuple(emb.dart_head(d) for d in emb.rot[v])
        best = min((row[i:] + row[:i] for i in range(len(row) or 1)),
                   key=lambda r: tuple(vkey(x) for x in r))
        rows.append((v, best))
    return tuple(rows)
