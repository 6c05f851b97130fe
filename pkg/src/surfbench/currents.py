"""Current graphs over even cyclic groups.

A current graph is a small embedded graph whose arcs carry nonzero
elements of Z_2m.  Its face boundaries are the circuits; rewriting a
circuit's arcs as current values (sign flipped on reverse-behavior
steps), with vortex letters inserted at labeled corners, gives the log
that seeds the derived embedding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .embedding import Embedding, Face, FaceSet, trace_faces
from .graphs import vkey


class CurrentGraphError(ValueError):
    pass


@dataclass(frozen=True)
class CurrentGroup:
    """The cyclic group Z_2m; even order makes element parity meaningful."""

    order: int

    def __post_init__(self):
        if self.order < 2 or self.order % 2:
            raise CurrentGraphError("current group must have even order >= 2")

    @property
    def half(self) -> int:
        return self.order // 2

    def norm(self, c: int) -> int:
        return c % self.order

    def neg(self, c: int) -> int:
        return (-c) % self.order

    def order_of(self, c: int) -> int:
        c = self.norm(c)
        if c == 0:
            return 1
        return self.order // math.gcd(c, self.order)

    def generates_even_subgroup(self, c: int) -> bool:
        c = self.norm(c)
        return c != 0 and math.gcd(c, self.order) == 2

    def plus_minus(self, diffs) -> list[int]:
        """Multiset {+s, -s} over the difference set, order-2 element once."""
        out = set()
        for s in diffs:
            out.add(self.norm(s))
            out.add(self.neg(s))
        return sorted(out)


ENTRY = int | str


@dataclass(frozen=True)
class Log:
    """Cyclic sequence of group elements and vortex letters."""

    entries: tuple

    def numeric(self) -> list[int]:
        return [e for e in self.entries if isinstance(e, int)]

    def letters(self) -> list[str]:
        return [e for e in self.entries if isinstance(e, str)]

    def shifted(self, k: int, group: CurrentGroup) -> "Log":
        return Log(tuple(group.norm(e + k) if isinstance(e, int) else e
                         for e in self.entries))

    def reversed_(self) -> "Log":
        return Log(tuple(reversed(self.entries)))

    def with_letters_swapped(self, swap: dict) -> "Log":
        return Log(tuple(swap.get(e, e) if isinstance(e, str) else e
                         for e in self.entries))

    def cyclic_eq(self, other: "Log") -> bool:
        a, b = self.entries, other.entries
        if len(a) != len(b):
            return False
        return any(a[i:] + a[:i] == b for i in range(len(a) or 1))

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class VortexInfo:
    vertex: object
    kind: str               # "V1" or "V2"
    letters: tuple          # one letter for V2, two for V1
    excess: int | None = None


@dataclass(frozen=True)
class Circuit:
    label: int
    face: Face

    @property
    def length(self) -> int:
        return self.face.length


KIND_INDEX = {"cascade": 1, "index2": 2, "index4": 4}


@dataclass(frozen=True)
class CurrentGraph:
    """Embedded skeleton plus arc currents, declared kind and vortices.

    ``currents[d]`` is the current on the arc departing from dart d.
    Type-0 edges satisfy alpha(e+) = -alpha(e-), type-1 edges
    alpha(e+) = alpha(e-).
    """

    skeleton: Embedding
    group: CurrentGroup
    currents: dict
    kind: str
    vortices: dict = field(default_factory=dict)   # vertex -> VortexInfo
    label_anchors: tuple = ()                      # optional darts fixing circuit labels

    def __post_init__(self):
        if self.kind not in KIND_INDEX:
            raise CurrentGraphError(f"unknown kind {self.kind!r}")
        ne = self.skeleton.graph.num_edges
        for eid in range(ne):
            a = self.currents.get(2 * eid)
            b = self.currents.get(2 * eid + 1)
            if a is None or b is None:
                raise CurrentGraphError(f"edge {eid} is missing a current")
            if self.group.norm(a) == 0 or self.group.norm(b) == 0:
                raise CurrentGraphError(f"edge {eid} carries a zero current")
            if self.skeleton.sig[eid] == 0:
                if self.group.norm(a + b) != 0:
                    raise CurrentGraphError(f"type-0 edge {eid}: arcs must carry opposite currents")
            else:
                if self.group.norm(a - b) != 0:
                    raise CurrentGraphError(f"type-1 edge {eid}: arcs must carry equal currents")

    @property
    def declared_index(self) -> int:
        return KIND_INDEX[self.kind]

    def current_out(self, dart: int) -> int:
        return self.group.norm(self.currents[dart])

    def current_in(self, dart: int) -> int:
        """Current on the arc arriving at dart's vertex along dart's edge."""
        return self.group.norm(self.currents[dart ^ 1])


def compute_circuits(cg: CurrentGraph, faces: FaceSet | None = None) -> list[Circuit]:
    """Face boundaries of the skeleton, labeled [0], [1], ...

    Default labeling: the circuit containing the least traversal slot is
    [0], the next unconsumed least is [1], and so on.  ``label_anchors``
    overrides this by listing one dart per circuit in label order.
    """
    if faces is None:
        faces = trace_faces(cg.skeleton)
    order = []
    if cg.label_anchors:
        if len(cg.label_anchors) != len(faces.faces):
            raise CurrentGraphError("label anchors must name each circuit once")
        for d in cg.label_anchors:
            fid = faces.face_of_state(d, 0)
            if fid in order:
                raise CurrentGraphError("label anchors name the same circuit twice")
            order.append(fid)
    else:
        min_state = {}
        for st, fid in faces.state_to_face.items():
            if fid not in min_state or st < min_state[fid]:
                min_state[fid] = st
        order = sorted(min_state, key=lambda fid: min_state[fid])
    return [Circuit(lbl, faces.faces[fid]) for lbl, fid in enumerate(order)]


def _corner_letter(cg: CurrentGraph, vertex, gap_dart: int, circuit_label: int) -> str | None:
    """Letter sitting in the rotation gap after ``gap_dart`` at ``vertex``."""
    info = cg.vortices.get(vertex)
    if info is None:
        return None
    rot = cg.skeleton.rot[vertex]
    if info.kind == "V2":
        base = info.letters[0]
        if cg.kind == "index2":
            return f"{base}{circuit_label}"
        return base
    # V1: first letter in the gap after the first rotation dart
    idx = rot.index(gap_dart)
    return info.letters[idx % len(info.letters)]


def log_of(cg: CurrentGraph, circuit: Circuit) -> Log:
    """Rewrite a circuit as its log.

    Normal-behavior steps contribute the traversed arc's current,
    reverse steps its negative.  Vortex letters are emitted at their
    corners, and the two consecutive copies of the order-2 element at an
    unlabeled degree-1 vertex condense into one.
    """
    emb = cg.skeleton
    succ, pred = emb.succ_pred()
    steps = circuit.face.steps
    n = len(steps)
    raw = []  # (value, letter-after-or-None, corner-vertex, corner-degree)
    for i, (dart, side) in enumerate(steps):
        beta = side ^ emb.sig[dart >> 1]
        value = cg.current_out(dart) if beta == 0 else cg.group.neg(cg.current_out(dart))
        t = dart ^ 1
        v = emb.dart_vertex(t)
        s = succ[t] if beta == 0 else pred[t]
        gap_dart = t if beta == 0 else s
        letter = _corner_letter(cg, v, gap_dart, circuit.label)
        raw.append((value, letter, v, len(emb.rot[v])))

    m = cg.group.half
    entries: list = []
    skip_next = False
    for i in range(n):
        value, letter, v, deg = raw[i]
        if skip_next:
            skip_next = False
        else:
            entries.append(value)
        nxt = raw[(i + 1) % n]
        if letter is None and deg == 1 and value == m and nxt[0] == m and n > 1:
            # order-2 stub: in and out carry the same element; condense
            if i + 1 < n:
                skip_next = True
            else:
                entries.pop(0)
        if letter is not None:
            entries.append(letter)
    return Log(tuple(entries))


def vertex_excess(cg: CurrentGraph, v) -> int:
    """Sum of the currents on the arcs directed into v."""
    return cg.group.norm(sum(cg.current_in(d) for d in cg.skeleton.rot[v]))


def vortex_info(cg: CurrentGraph, v) -> VortexInfo | None:
    declared = cg.vortices.get(v)
    if declared is None:
        return None
    return VortexInfo(v, declared.kind, declared.letters, vertex_excess(cg, v))


@dataclass(frozen=True)
class PrincipleItem:
    principle: str
    subject: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class PrincipleReport:
    items: tuple
    passed: bool

    def failures(self):
        return [it for it in self.items if not it.passed]

    def as_text(self) -> str:
        lines = []
        for it in self.items:
            mark = "ok" if it.passed else "FAIL"
            detail = f" ({it.detail})" if it.detail else ""
            lines.append(f"{mark:4} {it.principle:5} {it.subject}{detail}")
        lines.append(f"principles: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def check_principles(cg: CurrentGraph, diffs) -> PrincipleReport:
    """Itemized check of the construction principles against a target
    difference set.

    (O1) degree <= 3; (O2) each log covers {+s,-s | s in diffs} exactly
    once; (O3) KCL at degree-3 vertices; (O4) order-2/3 currents at
    unlabeled degree-1 vertices; (O5) remaining excess vertices are
    valid vortices; (O6)/(O6')/(N6) per declared kind, plus the circuit
    count matching the declared index.
    """
    emb = cg.skeleton
    group = cg.group
    faces = trace_faces(emb)
    circuits = compute_circuits(cg, faces)
    items: list[PrincipleItem] = []

    items.append(PrincipleItem(
        "index", "circuit count", len(circuits) == cg.declared_index,
        f"declared {cg.declared_index}, traced {len(circuits)}"))

    for v in emb.graph.sorted_vertices():
        deg = len(emb.rot[v])
        items.append(PrincipleItem("O1", f"vertex {v}", deg <= 3, f"degree {deg}"))

    want = group.plus_minus(diffs)
    for c in circuits:
        got = sorted(log_of(cg, c).numeric())
        items.append(PrincipleItem(
            "O2", f"circuit [{c.label}]", got == want,
            "" if got == want else f"log elements {got} != target {want}"))

    for v in emb.graph.sorted_vertices():
        deg = len(emb.rot[v])
        exc = vertex_excess(cg, v)
        if deg == 3:
            items.append(PrincipleItem("O3", f"vertex {v}", exc == 0, f"excess {exc}"))
        elif exc == 0:
            continue
        elif deg == 1 and v not in cg.vortices:
            order = group.order_of(cg.current_in(emb.rot[v][0]))
            items.append(PrincipleItem(
                "O4", f"vertex {v}", order in (2, 3), f"current order {order}"))
        else:
            info = cg.vortices.get(v)
            if info is None:
                items.append(PrincipleItem(
                    "O5", f"vertex {v}", False,
                    f"excess {exc} but no vortex declared"))
            else:
                ok, why = _valid_vortex(cg, v, info, exc)
                items.append(PrincipleItem("O5", f"vortex {v} ({info.kind})", ok, why))

    if cg.kind in ("index2", "index4"):
        for eid in range(emb.graph.num_edges):
            slots = [(fid, d) for f in circuits
                     for d, _ in f.face.steps for fid in [f.label] if d >> 1 == eid]
            same = len({fid for fid, _ in slots}) == 1
            even = cg.current_out(2 * eid) % 2 == 0
            items.append(PrincipleItem(
                "O6", f"edge {eid}", same == even,
                f"{'same' if same else 'split'} circuit, current "
                f"{'even' if even else 'odd'}"))
    if cg.kind == "index4":
        for eid in range(emb.graph.num_edges):
            where = {}
            for c in circuits:
                for d, _ in c.face.steps:
                    if d >> 1 == eid:
                        where.setdefault(d, c.label)
            if len(where) == 2:
                a = where[2 * eid]
                b = where[2 * eid + 1]
                ok = (b - a) % 4 == cg.current_out(2 * eid) % 4
                items.append(PrincipleItem(
                    "O6'", f"edge {eid}", ok,
                    f"[{a}] carries e+, [{b}] carries e-, current {cg.current_out(2 * eid)}"))
    if cg.kind == "cascade":
        for eid in range(emb.graph.num_edges):
            one_way = eid in faces.one_way
            odd = cg.current_out(2 * eid) % 2 == 1
            items.append(PrincipleItem(
                "N6", f"edge {eid}", one_way == odd,
                f"{'one-way' if one_way else 'two-way'}, current "
                f"{'odd' if odd else 'even'}"))

    return PrincipleReport(tuple(items), all(it.passed for it in items))


def _valid_vortex(cg: CurrentGraph, v, info: VortexInfo, excess: int):
    deg = len(cg.skeleton.rot[v])
    if info.kind == "V2":
        if deg != 1:
            return False, f"V2 needs degree 1, has {deg}"
        if not cg.group.generates_even_subgroup(excess):
            return False, f"excess {excess} does not generate the even subgroup"
        if len(info.letters) != 1:
            return False, "V2 carries exactly one letter"
        return True, f"excess {excess}"
    if info.kind == "V1":
        if deg != 2:
            return False, f"V1 needs degree 2, has {deg}"
        outs = [cg.current_out(d) for d in cg.skeleton.rot[v]]
        if any(c % 2 == 0 for c in outs):
            return False, f"outgoing currents {outs} must both be odd"
        if not cg.group.generates_even_subgroup(excess):
            return False, f"excess {excess} does not generate the even subgroup"
        if len(info.letters) != 2 or len(set(info.letters)) != 2:
            return False, "V1 carries two distinct letters"
        return True, f"excess {excess}"
    return False, f"unknown vortex kind {info.kind!r}"


def predicted_vortex_faces(info: VortexInfo, group: CurrentGroup, kind: str) -> list[tuple[int, int]]:
    """Long faces a vortex contributes to the derived embedding.

    Returns (length, count) pairs suitable for check_shape.
    """
    if info.kind == "V2" and kind == "index2":
        if info.excess is None:
            raise CurrentGraphError("V2 prediction needs the vortex excess")
        return [(group.order_of(info.excess), 1)]
    if info.kind == "V1" and kind == "cascade":
        return [(group.order, 2)]
    raise CurrentGraphError(f"unsupported vortex/kind combination {info.kind}/{kind}")
