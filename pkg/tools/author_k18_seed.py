#!/usr/bin/env python3
"""Offline authoring aid: find a cascade log whose derived embedding is a
triangular O_18 containing the faces {0,6,12} and {3,9,15}, with the edge
(0,3) flanked by the triangles {0,3,16} and {0,3,7} (that is, the log
contains "12 6" and "16 3 7").  The first hit is printed in LOG format and
validated end to end, including the two-handle completion script.

Run from the repository root:  python3 tools/author_k18_seed.py
"""

import sys

sys.path.insert(0, "src")

from surfbench.currents import CurrentGroup, Log
from surfbench.derive import derive_cascade
from surfbench.embedding import check_shape, classify_surface, graph_identity, trace_faces
from surfbench.formats import parse_graph_spec, parse_sur
from surfbench.surgery import apply_script

N = 18
ELEMENTS = [c for c in range(1, N) if c != N // 2]


def closure_of(a, b):
    """All log adjacencies forced by making b follow a, via the triangle
    closure of every derived corner (both row parities)."""
    demands = set()
    stack = [(0, (a, b)), (1, (b, a))]
    seen = set()
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        p, (x, y) = state
        dem = (x, y) if p == 0 else (y, x)
        if dem not in demands:
            demands.add(dem)
            stack.append((0, dem))
            stack.append((1, (dem[1], dem[0])))
        np = p ^ (y % 2)
        nxt = (np, ((-y) % N, (x - y) % N))
        stack.append(nxt)
    return demands


def search(seeds):
    succ, pred = {}, {}

    def place(pairs):
        added = []
        for x, y in pairs:
            bad = (x == y or x not in ELEMENTS or y not in ELEMENTS
                   or succ.get(x, y) != y or pred.get(y, x) != x)
            if not bad and x not in succ:
                # no premature cycle: walk the path from y; reject if it
                # closes back to x before covering everything
                cur = y
                while cur in succ:
                    cur = succ[cur]
                bad = cur == x and len(succ) + 1 < len(ELEMENTS)
            if bad:
                undo(added)
                return None
            if x in succ:
                continue
            succ[x] = y
            pred[y] = x
            added.append((x, y))
        return added

    def undo(added):
        for x, y in added:
            del succ[x]
            del pred[y]

    def extend():
        if len(succ) == len(ELEMENTS):
            yield dict(succ)
            return
        x = min(e for e in ELEMENTS if e not in succ)
        for y in ELEMENTS:
            if y in pred or y == x:
                continue
            added = place(sorted(closure_of(x, y)))
            if added is None:
                continue
            yield from extend()
            undo(added)

    boot = place(sorted(set().union(*(closure_of(a, b) for a, b in seeds))))
    if boot is None:
        raise SystemExit("seed adjacencies are inconsistent")
    yield from extend()


K18_SCRIPT = """\
bridge (12,0,6) (15,9,3) orient=+
add 3 12
add 6 15
flip 0 3
add 0 3
flip 3 6
add 3 6
flip 6 9
add 6 9
shift +2
bridge (12,0,6) (15,9,3) orient=+
add 3 12
add 6 15
"""


def validate(log):
    group = CurrentGroup(N)
    emb = derive_cascade(log, group, ())
    faces = trace_faces(emb)
    if not check_shape(emb, faces=faces).passed:
        return "not triangular"
    if not graph_identity(emb, parse_graph_spec("circulant 18 1-8")):
        return "wrong graph"
    sc = classify_surface(emb, faces)
    if not (sc.orientable and sc.genus == 16):
        return f"wrong surface {sc}"
    sets = {f.vertex_set() for f in faces.faces}
    for want in (frozenset({0, 6, 12}), frozenset({3, 9, 15})):
        if want not in sets:
            return f"missing face {set(want)}"
    final, _ = apply_script(emb, parse_sur(K18_SCRIPT))
    if not graph_identity(final, parse_graph_spec("complete 18")):
        return "script did not complete K18"
    sc2 = classify_surface(final)
    if not (sc2.orientable and sc2.genus == 18):
        return f"script surface {sc2}"
    return None


def main():
    seeds = [(12, 6), (16, 3), (3, 7)]
    tried = 0
    for succ in search(seeds):
        start = 1
        seq, cur = [], start
        for _ in ELEMENTS:
            seq.append(cur)
            cur = succ[cur]
        log = Log(tuple(seq))
        tried += 1
        problem = validate(log)
        if problem is None:
            print(f"# found after {tried} completed sequence(s)")
            print("group 18")
            print("kind cascade")
            print("S 1-8")
            print("[0]. " + " ".join(str(e) for e in log.entries))
            return
        print(f"# candidate {tried} rejected: {problem}")
    raise SystemExit("no log found")


if __name__ == "__main__":
    main()
