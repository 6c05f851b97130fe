"""Text formats: ADJ tables, LOG seeds, CGT current graphs, SUR scripts,
and the small grammars for graph and face-shape specs.

Serializers emit a canonical form and parsers accept it back
bit-exactly; shipped fixtures are stored canonically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .currents import (
    CurrentGraph,
    CurrentGraphError,
    CurrentGroup,
    Log,
    VortexInfo,
)
from .embedding import Embedding, embedding_from_rows, rows_of
from .graphs import (
    add_edges,
    Graph,
    GraphError,
    build_circulant,
    build_complete,
    build_complete_on,
    build_ham_complement,
    build_octahedral,
    join_with_empty,
    remove_edges,
    vkey,
)
from .surgery import Command, SurgeryScript


class FormatError(ValueError):
    pass


_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def parse_token(tok: str):
    """Vertex token: integer or identifier."""
    if re.fullmatch(r"-?\d+", tok):
        return int(tok)
    if _NAME.fullmatch(tok):
        return tok
    raise FormatError(f"bad vertex token {tok!r}")


def token_str(v) -> str:
    return str(v)


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


# ----------------------------------------------------------------------
# ADJ: one rotation row per vertex, "v. n1 n2 ...", plus "! u v 1" lines
# for type-1 edges.  Simple graphs only.


def parse_adj(text: str) -> Embedding:
    rows: dict = {}
    sigs: dict = {}
    for lineno, line in _lines(text):
        if line.startswith("!"):
            parts = line[1:].split()
            if len(parts) != 3 or parts[2] != "1":
                raise FormatError(f"line {lineno}: signature lines read '! u v 1'")
            u, v = parse_token(parts[0]), parse_token(parts[1])
            sigs[(u, v)] = 1
            continue
        if "." not in line:
            raise FormatError(f"line {lineno}: expected 'vertex. neighbors...'")
        head, rest = line.split(".", 1)
        v = parse_token(head.strip())
        if v in rows:
            raise FormatError(f"line {lineno}: duplicate row for {v}")
        rows[v] = [parse_token(t) for t in rest.split()]
    if not rows:
        raise FormatError("empty ADJ input")
    try:
        return embedding_from_rows(rows, sigs)
    except Exception as exc:
        raise FormatError(f"bad ADJ table: {exc}") from exc


def print_adj(emb: Embedding) -> str:
    out = []
    for v in emb.graph.sorted_vertices():
        row = " ".join(token_str(emb.dart_head(d)) for d in emb.rot[v])
        out.append(f"{token_str(v)}. {row}")
    marked = sorted((emb.graph.edges[e] for e in range(emb.graph.num_edges)
                     if emb.sig[e] == 1),
                    key=lambda p: (vkey(p[0]), vkey(p[1])))
    for u, v in marked:
        out.append(f"! {token_str(u)} {token_str(v)} 1")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# LOG: header (group, kind, S, optional letter pairs) plus "[i]. ..." lines.


@dataclass(frozen=True)
class LogFile:
    group: CurrentGroup
    kind: str
    diffs: tuple
    logs: tuple
    letter_pairs: tuple = ()


def _parse_diffs(spec: str) -> tuple:
    out = []
    for part in spec.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)-(\d+)", part)
        if m:
            out.extend(range(int(m.group(1)), int(m.group(2)) + 1))
        elif re.fullmatch(r"\d+", part):
            out.append(int(part))
        else:
            raise FormatError(f"bad difference spec {part!r}")
    return tuple(out)


def _print_diffs(diffs) -> str:
    ds = sorted(diffs)
    if ds and ds == list(range(ds[0], ds[-1] + 1)) and len(ds) > 1:
        return f"{ds[0]}-{ds[-1]}"
    return ",".join(str(d) for d in ds)


def parse_log_file(text: str) -> LogFile:
    group = kind = None
    diffs: tuple = ()
    pairs: list = []
    logs: dict = {}
    for lineno, line in _lines(text):
        if line.startswith("["):
            m = re.match(r"^\[(\d+)\]\.\s*(.*)$", line)
            if not m:
                raise FormatError(f"line {lineno}: bad log line")
            idx = int(m.group(1))
            if idx in logs:
                raise FormatError(f"line {lineno}: duplicate log [{idx}]")
            logs[idx] = Log(tuple(parse_token(t) for t in m.group(2).split()))
            continue
        key, _, value = line.partition(" ")
        value = value.strip()
        if key == "group":
            group = CurrentGroup(int(value))
        elif key == "kind":
            kind = value
        elif key == "S":
            diffs = _parse_diffs(value)
        elif key == "pairs":
            for p in value.split():
                a, _, b = p.partition(":")
                pairs.append((parse_token(a), parse_token(b)))
        else:
            raise FormatError(f"line {lineno}: unknown key {key!r}")
    if group is None or kind is None:
        raise FormatError("LOG file needs 'group' and 'kind' headers")
    if sorted(logs) != list(range(len(logs))):
        raise FormatError("log labels must be [0], [1], ... without gaps")
    return LogFile(group, kind, diffs, tuple(logs[i] for i in range(len(logs))),
                   tuple(pairs))


def print_log_file(lf: LogFile) -> str:
    out = [f"group {lf.group.order}", f"kind {lf.kind}"]
    if lf.diffs:
        out.append(f"S {_print_diffs(lf.diffs)}")
    if lf.letter_pairs:
        out.append("pairs " + " ".join(f"{a}:{b}" for a, b in lf.letter_pairs))
    for i, log in enumerate(lf.logs):
        out.append(f"[{i}]. " + " ".join(token_str(e) for e in log.entries))
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# CGT: a full current graph.


@dataclass(frozen=True)
class CgtFile:
    group: CurrentGroup
    kind: str
    diffs: tuple
    vertex_lines: tuple      # (vertex, tuple of end tokens, orient)
    edge_lines: tuple        # (eid, u, v, current, type)
    stub_lines: tuple        # (eid, v, current)
    vortex_lines: tuple      # (vertex, kind, letters)
    label_anchors: tuple = ()  # end tokens

    def to_current_graph(self) -> CurrentGraph:
        edges: dict = {}
        for eid, u, v, cur, typ in self.edge_lines:
            edges[eid] = (u, v, cur, typ)
        stub_rot: dict = {}
        for eid, v, cur in self.stub_lines:
            if self.group.order_of(cur) != 2:
                raise FormatError(f"stub {eid}: current {cur} must have order 2")
            hidden = f"_stub{eid}"
            edges[eid] = (v, hidden, cur, 0)
            stub_rot[hidden] = (2 * eid + 1,)
        if sorted(edges) != list(range(len(edges))):
            raise FormatError("edge ids must be 0..ne-1")
        pair_list = tuple((edges[i][0], edges[i][1]) for i in range(len(edges)))
        verts = {u for u, v, *_ in edges.values()} | {v for u, v, *_ in edges.values()}
        rot = {}
        for v, ends, orient in self.vertex_lines:
            darts = tuple(_end_token_to_dart(t) for t in ends)
            rot[v] = darts if orient == "+" else tuple(reversed(darts))
        rot.update(stub_rot)
        if set(rot) != verts:
            missing = verts - set(rot)
            raise FormatError(f"vertices without rotation lines: {sorted(missing, key=vkey)}")
        sig = tuple(edges[i][3] for i in range(len(edges)))
        graph = Graph(frozenset(verts), pair_list)
        skeleton = Embedding(graph, rot, sig)
        currents = {}
        for i in range(len(edges)):
            _, _, cur, typ = edges[i]
            c = self.group.norm(cur)
            currents[2 * i] = c
            currents[2 * i + 1] = c if typ == 1 else self.group.neg(c)
        vort = {}
        for v, kind, letters in self.vortex_lines:
            vort[v] = VortexInfo(v, kind, tuple(letters))
        anchors = tuple(_end_token_to_dart(t) for t in self.label_anchors)
        return CurrentGraph(skeleton, self.group, currents, self.kind, vort, anchors)


def _end_token_to_dart(tok: str) -> int:
    m = re.fullmatch(r"(\d+)([+-])", tok)
    if not m:
        raise FormatError(f"bad edge-end token {tok!r}")
    return 2 * int(m.group(1)) + (0 if m.group(2) == "+" else 1)


def _dart_to_end_token(d: int) -> str:
    return f"{d >> 1}{'+' if d % 2 == 0 else '-'}"


def parse_cgt(text: str) -> CgtFile:
    group = kind = None
    diffs: tuple = ()
    vertex_lines: list = []
    edge_lines: list = []
    stub_lines: list = []
    vortex_lines: list = []
    anchors: tuple = ()
    for lineno, line in _lines(text):
        parts = line.split()
        key = parts[0]
        try:
            if key == "group":
                group = CurrentGroup(int(parts[1]))
            elif key == "kind":
                kind = parts[1]
            elif key == "S":
                diffs = _parse_diffs(parts[1])
            elif key == "vertex":
                if "rot" not in parts or "orient" not in parts:
                    raise FormatError("vertex lines read 'vertex V rot ends... orient +|-'")
                v = parse_token(parts[1])
                ri = parts.index("rot")
                oi = parts.index("orient")
                vertex_lines.append((v, tuple(parts[ri + 1:oi]), parts[oi + 1]))
            elif key == "edge":
                eid = int(parts[1])
                u, v = parse_token(parts[2]), parse_token(parts[3])
                cur = int(parts[parts.index("current") + 1])
                typ = int(parts[parts.index("type") + 1])
                edge_lines.append((eid, u, v, cur, typ))
            elif key == "stub":
                eid = int(parts[1])
                v = parse_token(parts[2])
                cur = int(parts[parts.index("current") + 1])
                stub_lines.append((eid, v, cur))
            elif key == "vortex":
                v = parse_token(parts[1])
                vk = parts[parts.index("kind") + 1]
                if "letters" in parts:
                    letters = tuple(parts[parts.index("letters") + 1].split(","))
                else:
                    letters = (parts[parts.index("letter") + 1],)
                vortex_lines.append((v, vk, letters))
            elif key == "circuit-labels":
                anchors = tuple(parts[1:])
            else:
                raise FormatError(f"unknown key {key!r}")
        except (IndexError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if group is None or kind is None:
        raise FormatError("CGT file needs 'group' and 'kind' headers")
    return CgtFile(group, kind, diffs, tuple(vertex_lines), tuple(edge_lines),
                   tuple(stub_lines), tuple(vortex_lines), anchors)


def print_cgt(cf: CgtFile) -> str:
    out = [f"group {cf.group.order}", f"kind {cf.kind}"]
    if cf.diffs:
        out.append(f"S {_print_diffs(cf.diffs)}")
    for v, ends, orient in cf.vertex_lines:
        out.append(f"vertex {token_str(v)} rot {' '.join(ends)} orient {orient}")
    for eid, u, v, cur, typ in cf.edge_lines:
        out.append(f"edge {eid} {token_str(u)} {token_str(v)} current {cur} type {typ}")
    for eid, v, cur in cf.stub_lines:
        out.append(f"stub {eid} {token_str(v)} current {cur}")
    for v, vk, letters in cf.vortex_lines:
        word = "letters" if len(letters) > 1 else "letter"
        out.append(f"vortex {token_str(v)} kind {vk} {word} {','.join(letters)}")
    if cf.label_anchors:
        out.append("circuit-labels " + " ".join(cf.label_anchors))
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# SUR: surgery scripts, one command per line.


def _parse_corner(tok: str) -> tuple:
    tok = tok.split("@", 1)[0]  # optional face annotations are ignored
    m = re.fullmatch(r"\(([^()]*)\)", tok)
    if not m:
        raise FormatError(f"bad corner token {tok!r}")
    parts = [parse_token(p.strip()) for p in m.group(1).split(",")]
    if len(parts) != 3:
        raise FormatError(f"corner {tok!r} needs (prev,vertex,next)")
    return tuple(parts)


def _print_corner(corner: tuple) -> str:
    return "(" + ",".join(token_str(x) for x in corner) + ")"


def parse_sur(text: str) -> SurgeryScript:
    cmds = []
    for lineno, line in _lines(text):
        parts = line.split()
        op = parts[0]
        try:
            if op == "delete":
                cmds.append(Command("delete", (parse_token(parts[1]), parse_token(parts[2]))))
            elif op == "add":
                if parts[1].startswith("("):
                    cu, cv = _parse_corner(parts[1]), _parse_corner(parts[2])
                    cmds.append(Command("add", (cu[1], cv[1]),
                                        (("corner_u", cu), ("corner_v", cv))))
                else:
                    cmds.append(Command("add", (parse_token(parts[1]), parse_token(parts[2]))))
            elif op == "bridge":
                cu, cv = _parse_corner(parts[1]), _parse_corner(parts[2])
                orient = "+"
                for p in parts[3:]:
                    if p.startswith("orient="):
                        orient = p.split("=", 1)[1]
                cmds.append(Command("bridge", (cu, cv), (("orient", orient),)))
            elif op == "flip":
                u, v = parse_token(parts[1]), parse_token(parts[2])
                kw = ()
                if len(parts) > 3:
                    if parts[3] != "via" or len(parts) != 6:
                        raise FormatError("flip reads 'flip u v [via a b]'")
                    kw = (("via", (parse_token(parts[4]), parse_token(parts[5]))),)
                cmds.append(Command("flip", (u, v), kw))
            elif op == "subdivide":
                m = re.match(r"^subdivide\s+face-of\s+(\([^()]*\))\s+label\s+(\S+)$", line)
                if not m:
                    raise FormatError("subdivide reads 'subdivide face-of (a,b,c) label L'")
                cycle = tuple(parse_token(p.strip()) for p in m.group(1)[1:-1].split(","))
                cmds.append(Command("subdivide", (cycle, parse_token(m.group(2)))))
            elif op == "contract":
                u, v = parse_token(parts[1]), parse_token(parts[2])
                kw = ()
                if len(parts) > 3:
                    if parts[3] != "as" or len(parts) != 5:
                        raise FormatError("contract reads 'contract u v [as w]'")
                    kw = (("as", parse_token(parts[4])),)
                cmds.append(Command("contract", (u, v), kw))
            elif op == "shift":
                if not re.fullmatch(r"[+-]\d+", parts[1]):
                    raise FormatError("shift reads 'shift +k' or 'shift -k'")
                cmds.append(Command("shift", (int(parts[1]),)))
            elif op == "guard":
                if parts[1] not in ("on", "off"):
                    raise FormatError("guard reads 'guard on|off'")
                cmds.append(Command("guard", (parts[1] == "on",)))
            else:
                raise FormatError(f"unknown command {op!r}")
        except IndexError as exc:
            raise FormatError(f"line {lineno}: truncated command") from exc
        except FormatError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    return SurgeryScript(tuple(cmds))


def format_sur_command(cmd) -> str:
    kw = dict(cmd.kwargs)
    if cmd.op == "delete":
        return f"delete {token_str(cmd.args[0])} {token_str(cmd.args[1])}"
    if cmd.op == "add":
        if "corner_u" in kw:
            return f"add {_print_corner(kw['corner_u'])} {_print_corner(kw['corner_v'])}"
        return f"add {token_str(cmd.args[0])} {token_str(cmd.args[1])}"
    if cmd.op == "bridge":
        return (f"bridge {_print_corner(cmd.args[0])} {_print_corner(cmd.args[1])} "
                f"orient={kw.get('orient', '+')}")
    if cmd.op == "flip":
        base = f"flip {token_str(cmd.args[0])} {token_str(cmd.args[1])}"
        if "via" in kw:
            a, b = kw["via"]
            base += f" via {token_str(a)} {token_str(b)}"
        return base
    if cmd.op == "subdivide":
        cycle, label = cmd.args
        inner = ",".join(token_str(x) for x in cycle)
        return f"subdivide face-of ({inner}) label {token_str(label)}"
    if cmd.op == "contract":
        base = f"contract {token_str(cmd.args[0])} {token_str(cmd.args[1])}"
        if "as" in kw:
            base += f" as {token_str(kw['as'])}"
        return base
    if cmd.op == "shift":
        return f"shift {cmd.args[0]:+d}"
    if cmd.op == "guard":
        return f"guard {'on' if cmd.args[0] else 'off'}"
    raise FormatError(f"unknown command {cmd.op!r}")


def print_sur(script: SurgeryScript) -> str:
    return "\n".join(format_sur_command(c) for c in script.commands) + "\n"


# ----------------------------------------------------------------------
# graph and shape specs (CLI + SRC files)


def _parse_label_list(spec: str) -> list:
    out = []
    for part in spec.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)-(\d+)", part)
        if m:
            out.extend(range(int(m.group(1)), int(m.group(2)) + 1))
        else:
            out.append(parse_token(part))
    return out


def parse_graph_spec(spec: str) -> Graph:
    """Tiny grammar for target graphs.

    base: 'complete N' | 'complete-on LIST' | 'circulant N DIFFS' |
    'octahedral N' | 'ham-complement N'; then optional 'join LIST' and
    'minus u:v,...' clauses.
    """
    toks = spec.split()
    if not toks:
        raise FormatError("empty graph spec")
    i = 0
    kind = toks[i]
    i += 1
    try:
        if kind == "complete":
            g = build_complete(int(toks[i])); i += 1
        elif kind == "complete-on":
            g = build_complete_on(_parse_label_list(toks[i])); i += 1
        elif kind == "circulant":
            g = build_circulant(int(toks[i]), _parse_diffs(toks[i + 1])); i += 2
        elif kind == "octahedral":
            g = build_octahedral(int(toks[i])); i += 1
        elif kind == "ham-complement":
            g = build_ham_complement(int(toks[i])); i += 1
        else:
            raise FormatError(f"unknown graph family {kind!r}")
        while i < len(toks):
            clause = toks[i]
            if clause == "join":
                g = join_with_empty(g, _parse_label_list(toks[i + 1])); i += 2
            elif clause in ("minus", "plus"):
                pairs = []
                for p in toks[i + 1].split(","):
                    a, _, b = p.partition(":")
                    pairs.append((parse_token(a), parse_token(b)))
                g = (remove_edges if clause == "minus" else add_edges)(g, pairs)
                i += 2
            else:
                raise FormatError(f"unknown clause {clause!r}")
    except (IndexError, ValueError, GraphError) as exc:
        raise FormatError(f"bad graph spec {spec!r}: {exc}") from exc
    return g


def parse_shape_spec(spec: str) -> list:
    """'all-triangles' or 'triangles except 2x6,4x24' -> (length, count) list."""
    spec = spec.strip()
    if spec == "all-triangles":
        return []
    m = re.fullmatch(r"triangles except ([0-9x,]+)", spec)
    if not m:
        raise FormatError(f"bad shape spec {spec!r}")
    out = []
    for part in m.group(1).split(","):
        cm = re.fullmatch(r"(\d+)x(\d+)", part)
        if not cm:
            raise FormatError(f"bad shape clause {part!r}")
        out.append((int(cm.group(2)), int(cm.group(1))))
    return out


def print_shape_spec(allowed) -> str:
    if not allowed:
        return "all-triangles"
    return "triangles except " + ",".join(f"{c}x{L}" for L, c in allowed)
