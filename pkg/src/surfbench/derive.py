"""Derived embeddings: the additive row rules for index 1, 2 and 4 logs.

Row k of the derived rotation system is the appropriate log with k
added to every group element.  Index 2 alternates between two logs by
the parity of k; cascades (index 1 over a nonorientable skeleton)
reverse the log on odd rows and swap each vortex letter pair, which is
what makes the result a pure, orientable rotation system.  Letters mark
the corners of the long vortex faces; those faces are then subdivided
by a vertex named after the letter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .currents import CurrentGroup, Log
from .embedding import Embedding, EmbeddingError, embedding_from_rows, trace_faces
from .graphs import vkey
from .surgery import _subdivide_at_corners


class DeriveError(ValueError):
    pass


def derive_index2(logs, group: CurrentGroup) -> Embedding:
    """Row k = log[k mod 2] + k, letters carried unchanged, then each
    letter face is subdivided by a vertex with that letter's name."""
    if len(logs) != 2:
        raise DeriveError("index 2 derivation takes two logs")
    _check_logs(logs, group)
    rows = {k: list(logs[k % 2].shifted(k, group).entries)
            for k in range(group.order)}
    return assemble_rows(rows)


def derive_cascade(log: Log, group: CurrentGroup, letter_pairs=()) -> Embedding:
    """Row k = log + k for even k; for odd k the log is reversed first
    and each vortex pair's two letters are exchanged."""
    _check_logs([log], group)
    letters = log.letters()
    paired = [l for pair in letter_pairs for l in pair]
    if sorted(paired) != sorted(letters):
        raise DeriveError(f"letter pairs {letter_pairs} do not match log letters {letters}")
    swap = {}
    for a, b in letter_pairs:
        swap[a] = b
        swap[b] = a
    rows = {}
    for k in range(group.order):
        if k % 2 == 0:
            rows[k] = list(log.shifted(k, group).entries)
        else:
            rows[k] = list(log.reversed_().shifted(k, group)
                           .with_letters_swapped(swap).entries)
    return assemble_rows(rows)


def derive_index4(logs, group: CurrentGroup) -> Embedding:
    """Row k = log[k mod 4] + k.  No vortex letters supported here."""
    if len(logs) != 4:
        raise DeriveError("index 4 derivation takes four logs")
    if group.order % 4:
        raise DeriveError("index 4 needs a group order divisible by 4")
    if any(log.letters() for log in logs):
        raise DeriveError("letters are not supported in index 4 derivations")
    _check_logs(logs, group)
    rows = {k: list(logs[k % 4].shifted(k, group).entries)
            for k in range(group.order)}
    return assemble_rows(rows)


def _check_logs(logs, group: CurrentGroup):
    for i, log in enumerate(logs):
        nums = [group.norm(c) for c in log.numeric()]
        if len(set(nums)) != len(nums):
            raise DeriveError(f"log [{i}] repeats a group element")
        if 0 in nums:
            raise DeriveError(f"log [{i}] contains 0")
        letters = log.letters()
        if len(set(letters)) != len(letters):
            raise DeriveError(f"log [{i}] repeats a letter")


def assemble_rows(rows: dict) -> Embedding:
    """Build the derived embedding from numeric rows with inline letters.

    The numeric entries of each row are the rotation; every letter
    marks the corner between its two numeric neighbors.  All corners of
    one letter must tile a single face, which is then subdivided.
    """
    numeric_rows = {}
    letter_corners: dict = {}  # letter -> list of (prev, vertex, next)
    for v, row in sorted(rows.items(), key=lambda kv: vkey(kv[0])):
        nums = [e for e in row if isinstance(e, int)]
        if len(nums) < 2:
            raise DeriveError(f"row {v} has fewer than two group elements")
        numeric_rows[v] = nums
        n = len(row)
        for i, e in enumerate(row):
            if isinstance(e, int):
                continue
            prev = row[(i - 1) % n]
            nxt = row[(i + 1) % n]
            if not (isinstance(prev, int) and isinstance(nxt, int)):
                raise DeriveError(f"letter {e!r} in row {v} is not flanked by group elements")
            letter_corners.setdefault(e, []).append((prev, v, nxt))

    try:
        emb = embedding_from_rows(numeric_rows)
    except EmbeddingError as exc:
        raise DeriveError(f"derived rows are inconsistent: {exc}") from exc

    for letter in sorted(letter_corners):
        faces = trace_faces(emb)
        corners = letter_corners[letter]
        fids = set()
        gap_info = {}
        for prev, v, nxt in corners:
            state = 2 * emb.dart_to(v, nxt)  # step leaving the corner, normal side
            fid = faces.state_to_face[state]
            fids.add(fid)
            gap_info[v] = (prev, nxt)
        if len(fids) != 1:
            raise DeriveError(f"corners of letter {letter!r} lie on {len(fids)} faces")
        face = faces.faces[next(iter(fids))]
        if face.length != len(corners):
            raise DeriveError(
                f"letter {letter!r} face has length {face.length}, expected "
                f"{len(corners)}: every corner must carry the letter")
        boundary = _forward_corners(emb, face, gap_info, letter)
        emb = _subdivide_at_corners(emb, face, boundary, letter)
    return _realign_rows(emb, rows)


def _realign_rows(emb: Embedding, rows: dict) -> Embedding:
    """Rotate each derived rotation so it reads exactly like its source row.

    Subdivision inserts the letter darts at the right corners but can
    leave a row cyclically shifted when a letter opened it; this also
    re-validates that every letter landed where the log said.
    """
    rot = dict(emb.rot)
    for v, row in rows.items():
        current = [emb.dart_head(d) for d in rot[v]]
        n = len(current)
        if n != len(row):
            raise DeriveError(f"row {v}: derived degree {n} != row length {len(row)}")
        for off in range(n):
            if all(current[(off + i) % n] == row[i] for i in range(n)):
                rot[v] = rot[v][off:] + rot[v][:off]
                break
        else:
            raise DeriveError(f"row {v}: derived rotation does not match the shifted log")
    return Embedding(emb.graph, rot, emb.sig, dict(emb.corner_labels))


def _forward_corners(emb: Embedding, face, gap_info, letter):
    """Corners of the letter face oriented so each reads (prev, v, next)
    as the letters were written in the rows."""
    n = face.length
    out = []
    forward = None
    for i in range(n):
        d, _ = face.steps[i]
        d_next, _ = face.steps[(i + 1) % n]
        beta = face.behaviors[i]
        gap = (d ^ 1) if beta == 0 else d_next
        v = face.vertices[(i + 1) % n]
        prev_v = face.vertices[i]
        next_v = face.vertices[(i + 2) % n]
        want_prev, want_next = gap_info[v]
        if (prev_v, next_v) == (want_prev, want_next):
            ok = True
        elif (prev_v, next_v) == (want_next, want_prev):
            ok = False
        else:
            raise DeriveError(f"letter {letter!r} corner at {v} does not match the face")
        if forward is None:
            forward = ok
        elif forward != ok:
            raise DeriveError(f"letter {letter!r} corners disagree on orientation")
        out.append((v, gap, beta))
    if forward:
        return out
    # walk direction opposite to how the letters read; re-derive gaps by
    # the written (prev, v, next) corners directly
    flipped = []
    for i in range(n - 1, -1, -1):
        v, _, beta = out[i]
        prev, nxt = gap_info[v]
        gap = emb.dart_to(v, prev)
        flipped.append((v, gap, beta))
    return flipped


def extract_logs(emb: Embedding, index: int):
    """Recover the base logs from a derived table.

    Verifies row_k = row_{k mod index} + (k - k mod index) elementwise
    (letters identical), ignoring letter-vertex rows, and returns the
    ``index`` base logs shifted back to vertex 0's frame.
    """
    numeric = sorted(v for v in emb.graph.vertices if isinstance(v, int))
    n = len(numeric)
    if numeric != list(range(n)):
        raise DeriveError("numeric vertices must be exactly 0..n-1")
    if n % index:
        raise DeriveError(f"{n} rows cannot split into {index} residue classes")

    def row_entries(k):
        return [emb.dart_head(d) for d in emb.rot[k]]

    base = {r: row_entries(r) for r in range(index)}
    for k in range(n):
        r = k % index
        expect = [(e + k - r) % n if isinstance(e, int) else e for e in base[r]]
        got = row_entries(k)
        if len(got) != len(expect):
            raise DeriveError(f"row {k} has {len(got)} entries, row {r} has {len(expect)}")
        for pos, (a, b) in enumerate(zip(got, expect)):
            if a != b:
                raise DeriveError(
                    f"additive symmetry fails at row {k}, position {pos}: "
                    f"{a} != {b} (= row {r} entry + {k - r})")
    return [Log(tuple((e - r) % n if isinstance(e, int) else e for e in base[r]))
            for r in range(index)]
