"""OFF meshes, combinatorial-type files and table rows.

OFF numbers are written with 17 significant digits, which is enough to
round-trip any IEEE double exactly, so ``write_off(read_off(s)) == s`` for
any ``s`` produced by :func:`write_off`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from polytiles.combinatorics import CombinatorialType
from polytiles.mesh import Polyhedron


class ParseError(ValueError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _content_lines(text):
    """(line number, tokens) for every non-blank, non-comment line."""
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def read_off(text: str, name="") -> Polyhedron:
    """Parse an OFF mesh. Face indices are zero-based; the edge count is ignored.

    Raises
    ------
    ParseError
        With the offending line number.
    """
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != ["OFF"]:
        raise ParseError(lines[0][0] if lines else 1, "first line must be 'OFF'")
    if len(lines) < 2:
        raise ParseError(lines[0][0], "missing 'V F E' counts line")
    no, tok = lines[1]
    try:
        nv, nf, _ = (int(x) for x in tok)
    except ValueError:
        raise ParseError(no, f"expected three integers 'V F E', got {' '.join(tok)!r}") from None
    if nv < 0 or nf < 0:
        raise ParseError(no, "negative counts")
    body = lines[2:]
    if len(body) < nv + nf:
        raise ParseError(body[-1][0] if body else no, f"expected {nv} vertices and {nf} faces, file ends early")
    if len(body) > nv + nf:
        raise ParseError(body[nv + nf][0], "unexpected extra data")
    verts = np.empty((nv, 3))
    for i, (no, tok) in enumerate(body[:nv]):
        if len(tok) != 3:
            raise ParseError(no, f"vertex needs 3 coordinates, got {len(tok)}")
        try:
            verts[i] = [float(x) for x in tok]
        except ValueError:
            raise ParseError(no, f"bad coordinate in {' '.join(tok)!r}") from None
        if not np.isfinite(verts[i]).all():
            raise ParseError(no, "non-finite coordinate")
    faces = []
    for no, tok in body[nv:]:
        try:
            k, *idx = (int(x) for x in tok)
        except ValueError:
            raise ParseError(no, f"bad face line {' '.join(tok)!r}") from None
        if k < 3 or len(idx) != k:
            raise ParseError(no, f"face declares {k} vertices but lists {len(idx)}")
        bad = [i for i in idx if not 0 <= i < nv]
        if bad:
            raise ParseError(no, f"vertex index {bad[0]} out of range 0..{nv - 1}")
        faces.append(tuple(idx))
    return Polyhedron(verts, faces, name)


def _num(x):
    s = f"{x:.17g}"
    return "0" if s == "-0" else s


def write_off(p: Polyhedron) -> str:
    edges = len(p.edges) if p.faces else 0
    out = ["OFF", f"{p.n_vertices} {p.n_faces} {edges}"]
    out += [" ".join(_num(c) for c in v) for v in p.vertices]
    out += [" ".join(str(i) for i in (len(f), *f)) for f in p.faces]
    return "\n".join(out) + "\n"


def read_type(text: str) -> CombinatorialType:
    """One face per line, as whitespace-separated vertex labels.

    Labels may be any tokens; they are numbered in order of first
    appearance. The result is validated (manifold, orientation, Euler).
    """
    labels = {}
    faces = []
    for no, tok in _content_lines(text):
        if len(tok) < 3:
            raise ParseError(no, "a face needs at least three vertices")
        faces.append(tuple(labels.setdefault(x, len(labels)) for x in tok))
    if not faces:
        raise ParseError(0, "no faces")
    return CombinatorialType(faces, tuple(labels)).validated()


def write_type(t: CombinatorialType) -> str:
    return "".join(" ".join(str(v) for v in f) + "\n" for f in t.faces)


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class TableRow:
    name: str
    n: int
    surface_area: float
    expected: float | None = None
    tolerance: float | None = None
    provenance: str = ""

    @property
    def delta(self):
        return None if self.expected is None else self.surface_area - self.expected

    @property
    def ok(self):
        return self.expected is None or abs(self.delta) <= self.tolerance + 1e-12

    def as_dict(self):
        d = asdict(self)
        d["surface_area"] = round(self.surface_area, 4) if np.isfinite(self.surface_area) else None
        d["delta"] = None if d["surface_area"] is None or self.delta is None else round(self.delta, 4)
        d["ok"] = self.ok
        return d


_COLUMNS = ("name", "n", "surface_area", "expected", "delta", "tolerance", "ok", "provenance")


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        s = f"{v:.4f}"
        return s[1:] if s == "-0.0000" else s
    return str(v)


def format_table(rows, fmt="text") -> str:
    """Render rows as ``text``, ``csv`` or ``json``."""
    if fmt == "json":
        return json.dumps([r.as_dict() for r in rows], indent=2) + "\n"
    data = [[_cell(r.as_dict()[c]) if c != "tolerance" else _cell_tol(r.tolerance) for c in _COLUMNS] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_COLUMNS)
        w.writerows(data)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    widths = [max(len(c), *(len(d[i]) for d in data)) if data else len(c) for i, c in enumerate(_COLUMNS)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(_COLUMNS, widths)).rstrip()]
    lines += ["  ".join(d.ljust(w) for d, w in zip(row, widths)).rstrip() for row in data]
    return "\n".join(lines) + "\n"


def _cell_tol(t):
    return "" if t is None else f"{t:g}"
