"""Bounded backtracking search for triangular embeddings of small graphs.

The search grows faces one corner at a time instead of enumerating
whole rotation systems: rotations are accumulated as partial successor
constraints at each vertex, a face closes only at an allowed length,
and the rotation at one anchor vertex is pinned to break symmetry.
Signatures stay 0 in orientable-only mode; otherwise each edge's type
bit is decided the first time a face crosses it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .embedding import Embedding, check_shape, classify_surface, graph_identity, trace_faces
from .graphs import Graph, vkey


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchSpec:
    target: Graph
    allowed_long: tuple = ()          # (length, count) pairs on top of triangles
    orientable_only: bool = True
    node_budget: int = 2_000_000
    time_budget: float = 60.0
    anchor: object = None             # vertex; None picks a max-degree vertex

    def __post_init__(self):
        if self.node_budget <= 0 or self.time_budget <= 0:
            raise SearchError("budgets must be positive")
        if self.anchor is not None and self.anchor not in self.target.vertices:
            raise SearchError(f"anchor {self.anchor!r} is not a vertex")


@dataclass
class SearchResult:
    status: str                  # found | exhausted | budget | impossible
    embedding: Embedding | None = None
    nodes: int = 0
    elapsed: float = 0.0
    reason: str = ""

    @property
    def found(self):
        return self.status == "found"


class _Budget(Exception):
    pass


def search(spec: SearchSpec) -> SearchResult:
    g = spec.target
    if not g.is_connected():
        raise SearchError("target must be connected")
    if not g.is_simple():
        raise SearchError("search targets simple graphs")
    long_budget: dict = {}
    for length, count in spec.allowed_long:
        if length < 3:
            raise SearchError("long faces must have length >= 3")
        long_budget[length] = long_budget.get(length, 0) + count
    slots = 2 * g.num_edges
    long_slots = sum(L * c for L, c in long_budget.items())
    if not long_budget and slots % 3:
        return SearchResult("impossible",
                            reason=f"2|E| = {slots} is not divisible by 3")
    if long_slots > slots or (slots - long_slots) % 3:
        return SearchResult("impossible",
                            reason="allowed long faces cannot tile 2|E| with triangles")

    state = _SearchState(g, spec, long_budget)
    start = time.monotonic()
    try:
        found = state.run(start)
    except _Budget:
        return SearchResult("budget", nodes=state.nodes,
                            elapsed=time.monotonic() - start)
    elapsed = time.monotonic() - start
    if found is None:
        return SearchResult("exhausted", nodes=state.nodes, elapsed=elapsed)
    emb = state.build_embedding()
    _verify_sound(emb, spec)
    return SearchResult("found", emb, state.nodes, elapsed)


def _verify_sound(emb: Embedding, spec: SearchSpec):
    faces = trace_faces(emb)
    if not check_shape(emb, spec.allowed_long, faces).passed:
        raise SearchError("internal: found embedding violates the face spec")
    if not graph_identity(emb, spec.target):
        raise SearchError("internal: found embedding is not on the target graph")
    sc = classify_surface(emb, faces)
    if spec.orientable_only and not sc.orientable:
        raise SearchError("internal: found embedding is nonorientable")


class _SearchState:
    def __init__(self, g: Graph, spec: SearchSpec, long_budget: dict):
        self.g = g
        self.spec = spec
        self.long_budget = dict(long_budget)
        self.max_len = max([3] + [L for L, c in long_budget.items() if c])
        self.nodes = 0
        ne = g.num_edges
        self.vertex_of = {}
        for eid, (u, v) in enumerate(g.edges):
            self.vertex_of[2 * eid] = u
            self.vertex_of[2 * eid + 1] = v
        self.darts_at: dict = {v: [] for v in g.vertices}
        for d in range(2 * ne):
            self.darts_at[self.vertex_of[d]].append(d)
        for v in self.darts_at:
            self.darts_at[v].sort()
        self.succ: dict = {}
        self.pred: dict = {}
        self.chain_end: dict = {}    # start of a succ-chain -> its end, per vertex implicitly
        self.chain_start: dict = {}
        self.deg = {v: len(self.darts_at[v]) for v in g.vertices}
        self.count: dict = {v: 0 for v in g.vertices}
        self.sig: dict = {}          # eid -> 0/1, unset if undecided
        self.consumed: set = set()
        self.trail: list = []
        anchor = spec.anchor
        if anchor is None:
            anchor = max(g.sorted_vertices(), key=lambda v: (self.deg[v], ))
        self.anchor = anchor
        order = sorted(self.darts_at[anchor],
                       key=lambda d: vkey(self.vertex_of[d ^ 1]))
        for i, d in enumerate(order):
            ok = self._link(d, order[(i + 1) % len(order)])
            if not ok:
                raise SearchError("could not pin the anchor rotation")

    # -- rotation constraint maintenance (per-vertex chains) ---------

    def _link(self, t: int, s: int) -> bool:
        """Require s to follow t in the rotation at their shared vertex."""
        v = self.vertex_of[t]
        if self.vertex_of[s] != v or t == s and self.deg[v] != 1:
            return False
        if self.succ.get(t, s) != s or self.pred.get(s, t) != t:
            return False
        if t in self.succ:
            return True  # already exactly this link; nothing to do
        # cycle only allowed when it completes the whole rotation
        start = self.chain_start.get(t, t)
        end = self.chain_end.get(s, s)
        if start == s and self.count[v] + 1 != self.deg[v]:
            return False
        self.succ[t] = s
        self.pred[s] = t
        self.count[v] += 1
        if start != s:
            self.chain_start[end] = start
            self.chain_end[start] = end
        self.trail.append(("link", t, s, start, end))
        return True

    def _unlink(self, t, s, start, end):
        del self.succ[t]
        del self.pred[s]
        self.count[self.vertex_of[t]] -= 1
        if start != s:
            if self.chain_start.get(end) == start:
                del self.chain_start[end]
            if self.chain_end.get(start) == end:
                del self.chain_end[start]

    def _mark(self):
        return len(self.trail)

    def _rewind(self, mark):
        while len(self.trail) > mark:
            kind, *rest = self.trail.pop()
            if kind == "link":
                self._unlink(*rest)
            elif kind == "consume":
                self.consumed.discard(rest[0])
            elif kind == "sig":
                del self.sig[rest[0]]
            elif kind == "long":
                self.long_budget[rest[0]] += 1

    def _consume(self, state) -> bool:
        if state in self.consumed:
            return False
        self.consumed.add(state)
        self.trail.append(("consume", state))
        return True

    def _set_sig(self, eid, bit):
        self.sig[eid] = bit
        self.trail.append(("sig", eid))

    # -- the DFS ------------------------------------------------------

    def run(self, start_time):
        self.deadline = start_time + self.spec.time_budget
        return self._next_face()

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.spec.node_budget:
            raise _Budget()
        if self.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            raise _Budget()

    def _next_face(self):
        seed = None
        total = 4 * self.g.num_edges
        for st in range(total):
            if st not in self.consumed:
                seed = st
                break
        if seed is None:
            return True
        return self._trace(seed, seed, 0)

    def _trace(self, start, cur, length):
        """Extend the face whose walk currently sits at state ``cur``
        (about to be consumed)."""
        self._tick()
        d, s = cur >> 1, cur & 1
        eid = d >> 1
        mark = self._mark()
        if not self._consume(cur):
            return None
        choices = (self.sig[eid],) if eid in self.sig else \
            ((0,) if self.spec.orientable_only else (0, 1))
        for lam in choices:
            submark = self._mark()
            if eid not in self.sig:
                self._set_sig(eid, lam)
            mirror = 2 * (2 * (d ^ 1)) // 2  # placeholder to keep structure clear
            mirror = 2 * (d ^ 1) + (1 ^ s ^ self.sig[eid])
            if not self._consume(mirror):
                self._rewind(submark)
                continue
            arr = s ^ self.sig[eid]
            t = d ^ 1
            v = self.vertex_of[t]
            new_len = length + 1
            for nd in self.darts_at[v]:
                if nd == t and self.deg[v] > 1:
                    continue
                nxt = 2 * nd + arr
                closing = nxt == start
                if not closing and nxt in self.consumed:
                    continue
                if not closing and new_len >= self.max_len:
                    continue
                if closing and new_len != 3:
                    if self.long_budget.get(new_len, 0) <= 0:
                        continue
                stepmark = self._mark()
                ok = self._link(t, nd) if arr == 0 else self._link(nd, t)
                if not ok:
                    self._rewind(stepmark)
                    continue
                if closing:
                    if new_len != 3:
                        self.long_budget[new_len] -= 1
                        self.trail.append(("long", new_len))
                    result = self._next_face()
                else:
                    result = self._trace(start, nxt, new_len)
                if result is not None:
                    return result
                self._rewind(stepmark)
            self._rewind(submark)
        self._rewind(mark)
        return None

    def build_embedding(self):
        rot = {}
        for v, darts in self.darts_at.items():
            if not darts:
                raise SearchError("isolated vertex in target")
            cycle = [darts[0]]
            while len(cycle) < len(darts):
                cycle.append(self.succ[cycle[-1]])
            rot[v] = tuple(cycle)
        sig = tuple(self.sig.get(e, 0) for e in range(self.g.num_edges))
        return Embedding(self.g, rot, sig)


# ----------------------------------------------------------------------
# SRC files


def parse_src(text: str) -> SearchSpec:
    from .formats import FormatError, parse_graph_spec, parse_shape_spec, parse_token, _lines
    target = None
    allowed: tuple = ()
    orientable = True
    nodes = 2_000_000
    seconds = 60.0
    anchor = None
    for lineno, line in _lines(text):
        key, _, value = line.partition(" ")
        value = value.strip()
        if key == "target":
            target = parse_graph_spec(value)
        elif key == "shape":
            allowed = tuple(parse_shape_spec(value))
        elif key == "orientable-only":
            orientable = value == "yes"
        elif key == "budget-nodes":
            nodes = int(value)
        elif key == "budget-seconds":
            seconds = float(value)
        elif key == "anchor":
            anchor = None if value == "auto" else parse_token(value)
        else:
            raise FormatError(f"line {lineno}: unknown key {key!r}")
    if target is None:
        raise FormatError("SRC file needs a target")
    return SearchSpec(target, allowed, orientable, nodes, seconds, anchor)


def print_src(spec: SearchSpec, target_spec: str) -> str:
    from .formats import print_shape_spec
    lines = [
        f"target {target_spec}",
        f"shape {print_shape_spec(spec.allowed_long)}",
        f"orientable-only {'yes' if spec.orientable_only else 'no'}",
        f"anchor {'auto' if spec.anchor is None else spec.anchor}",
        f"budget-nodes {spec.node_budget}",
        f"budget-seconds {spec.time_budget:g}",
    ]
    return "\n".join(lines) + "\n"
