"""Combinatorial types of polyhedra.

Face vectors, canonical codes for deciding combinatorial equivalence,
prism detection and the five-face classification.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np


class InvalidTypeError(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid combinatorial type: " + "; ".join(self.problems[:5]))


class ClassificationError(ValueError):
    pass


class LineRelationError(ValueError):
    pass


@dataclass(frozen=True)
class FaceVector:
    """Counts ``x_i`` of i-gonal faces for ``i = 3 .. n-1``."""

    n: int
    counts: tuple

    @property
    def n_faces(self):
        return sum(self.counts)

    @property
    def edge_sum(self):
        return sum(i * x for i, x in zip(range(3, self.n), self.counts))

    @property
    def parity_ok(self):
        """True when ``sum(i * x_i)`` is even, i.e. edges can pair up."""
        return self.edge_sum % 2 == 0

    def as_dict(self):
        return {i: x for i, x in zip(range(3, self.n), self.counts) if x}


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_face_vectors(n: int):
    """All nonnegative solutions of ``x_3 + x_4 + ... + x_{n-1} = n``.

    There are ``C(2n-4, n)`` of them. Not every solution is realizable;
    :attr:`FaceVector.parity_ok` flags the ones whose edge count is whole.
    """
    if not 4 <= n <= 20:
        raise ValueError(f"n must be in 4..20, got {n}")
    return [FaceVector(n, c) for c in _compositions(n, n - 3)]


def face_vector_count(n: int) -> int:
    return comb(2 * n - 4, n)


@dataclass(frozen=True)
class CombinatorialType:
    """Face cycles over abstract vertex labels ``0 .. V-1``.

    Cycles follow the same outward orientation convention as
    :class:`polytiles.mesh.Polyhedron`.
    """

    faces: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "faces", tuple(tuple(int(i) for i in f) for f in self.faces))

    @classmethod
    def from_polyhedron(cls, p):
        return cls(p.faces)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def n_vertices(self):
        return 1 + max(max(f) for f in self.faces)

    @property
    def edges(self):
        es = set()
        for f in self.faces:
            for a, b in zip(f, f[1:] + f[:1]):
                es.add((min(a, b), max(a, b)))
        return sorted(es)

    @property
    def face_sizes(self):
        return [len(f) for f in self.faces]

    def face_size_counts(self):
        return dict(sorted(Counter(self.face_sizes).items()))

    def degrees(self):
        deg = Counter()
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return [deg[v] for v in range(self.n_vertices)]

    def vertex_faces(self):
        """Faces around each vertex, in rotation order."""
        nxt = defaultdict(dict)
        for fi, f in enumerate(self.faces):
            k = len(f)
            for idx, v in enumerate(f):
                nxt[v][f[idx - 1]] = (f[(idx + 1) % k], fi)
        out = []
        for v in range(self.n_vertices):
            ring = nxt[v]
            start = min(ring)
            u, fs = start, []
            while True:
                u, fi = ring[u]
                fs.append(fi)
                if u == start or len(fs) > len(ring):
                    break
            out.append(tuple(fs))
        return out

    def problems(self):
        """Manifold, orientation and Euler-characteristic violations."""
        out = []
        directed = Counter()
        undirected = defaultdict(list)
        for fi, f in enumerate(self.faces):
            if len(f) < 3 or len(set(f)) != len(f):
                out.append(f"face {fi} needs >= 3 distinct vertices")
            for a, b in zip(f, f[1:] + f[:1]):
                directed[(a, b)] += 1
                undirected[(min(a, b), max(a, b))].append(fi)
        for e, owners in sorted(undirected.items()):
            if len(owners) != 2:
                out.append(f"manifold: edge {e} lies in {len(owners)} faces")
        for e, k in sorted(directed.items()):
            if k > 1:
                out.append(f"orientation: directed edge {e} used {k} times")
        used = {v for f in self.faces for v in f}
        if used != set(range(len(used))) or not used:
            out.append("labels are not 0..V-1")
        chi = len(used) - len(undirected) + len(self.faces)
        if chi != 2:
            out.append(f"euler: V - E + F = {chi}, expected 2")
        if not out:
            deg = self.degrees()
            low = [v for v, d in enumerate(deg) if d < 3]
            if low:
                out.append(f"vertices {low} have degree < 3")
        return out

    def validated(self):
        probs = self.problems()
        if probs:
            raise InvalidTypeError(probs)
        return self


def _rotation(t: CombinatorialType):
    """``rot[v][u]``: neighbour following ``u`` around ``v``."""
    rot = defaultdict(dict)
    for f in t.faces:
        k = len(f)
        for idx, v in enumerate(f):
            rot[v][f[idx - 1]] = f[(idx + 1) % k]
    return rot


def _code_from(rot, start, first, n):
    label = {start: 0}
    ref = {start: first}
    order = [start]
    code = []
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        u = ref[v]
        ring = []
        w = u
        while True:
            ring.append(w)
            w = rot[v][w]
            if w == u:
                break
        for w in ring:
            if w not in label:
                label[w] = len(order)
                ref[w] = v
                order.append(w)
            code.append(label[w])
        code.append(n)
    return tuple(code), order


def canonical_code(t: CombinatorialType) -> bytes:
    """Relabeling-, rotation- and reflection-invariant code of a type.

    Minimum over every starting dart and both orientations of a
    breadth-first traversal of the rotation system.
    """
    t.validated()
    n = t.n_vertices
    best = min(c for c, _, _ in _all_codes(t))
    width = 1 if n < 255 else 2
    return b"".join(int(x).to_bytes(width, "big") for x in best)


def _all_codes(t):
    n = t.n_vertices
    rot = _rotation(t)
    mirror = defaultdict(dict)
    for v, r in rot.items():
        for a, b in r.items():
            mirror[v][b] = a
    for flip, system in ((False, rot), (True, mirror)):
        for v in range(n):
            for u in system[v]:
                code, order = _code_from(system, v, u, n)
                yield code, order, flip


def automorphisms(t: CombinatorialType):
    """Face permutations induced by the combinatorial automorphisms of ``t``.

    Returns
    -------
    list of (ndarray, bool)
        ``(perm, reverses_orientation)``; ``perm[i]`` is the image of face ``i``.
        The identity comes first.
    """
    t.validated()
    codes = list(_all_codes(t))
    best = min(c for c, _, _ in codes)
    hits = [(order, flip) for c, order, flip in codes if c == best]
    base = hits[0][0]
    index = {frozenset(f): i for i, f in enumerate(t.faces)}
    out = []
    for order, flip in hits:
        vmap = dict(zip(base, order))
        perm = np.array([index[frozenset(vmap[v] for v in f)] for f in t.faces])
        out.append((perm, flip))
    out.sort(key=lambda pf: (pf[0] != np.arange(len(pf[0]))).sum())
    return out


def equivalent(s: CombinatorialType, t: CombinatorialType) -> bool:
    return canonical_code(s) == canonical_code(t)


def isomorphism(s: CombinatorialType, t: CombinatorialType):
    """Vertex map from ``s`` onto ``t``, or None when the types differ.

    Returns
    -------
    (dict, bool) or None
        ``(vmap, reverses_orientation)``. Orientation-preserving maps are
        preferred when both kinds exist.
    """
    s.validated()
    t.validated()
    if s.n_vertices != t.n_vertices or sorted(s.face_sizes) != sorted(t.face_sizes):
        return None
    code_s, order_s, flip_s = min(_all_codes(s), key=lambda c: c[0])
    hits = [(order, flip != flip_s) for c, order, flip in _all_codes(t) if c == code_s]
    if not hits:
        return None
    order_t, reverses = min(hits, key=lambda h: h[1])
    return dict(zip(order_s, order_t)), reverses


def is_combinatorial_prism(t: CombinatorialType):
    """Base-face pair ``(i, j)`` if ``t`` is a combinatorial k-gonal prism, else None.

    The lexicographically smallest valid pair is returned, so a cube
    yields its first opposite pair.
    """
    sizes = t.face_sizes
    F = len(sizes)
    k = F - 2
    if k < 3:
        return None
    cnt = Counter(sizes)
    if k == 4:
        if cnt != Counter({4: 6}):
            return None
    elif cnt != Counter({k: 2, 4: k}):
        return None
    for i, j in combinations(range(F), 2):
        if sizes[i] != k or sizes[j] != k:
            continue
        a, b = set(t.faces[i]), set(t.faces[j])
        if a & b:
            continue
        if len(a | b) != t.n_vertices:
            continue
        ok = True
        for fi, f in enumerate(t.faces):
            if fi in (i, j):
                continue
            if len(set(f) & a) != 2 or len(set(f) & b) != 2:
                ok = False
                break
        if ok and all(d == 3 for d in t.degrees()):
            return (i, j)
    return None


def classify_5hedron(t: CombinatorialType) -> str:
    """``'triangular-prism'`` or ``'quadrilateral-pyramid'``."""
    t.validated()
    if t.n_faces != 5:
        raise ValueError(f"need 5 faces, got {t.n_faces}")
    cnt = Counter(t.face_sizes)
    if cnt == Counter({3: 2, 4: 3}) and is_combinatorial_prism(t) is not None:
        return "triangular-prism"
    if cnt == Counter({3: 4, 4: 1}):
        quad = next(f for f in t.faces if len(f) == 4)
        apex = set(range(t.n_vertices)) - set(quad)
        if len(apex) == 1 and all(next(iter(apex)) in f for f in t.faces if len(f) == 3):
            return "quadrilateral-pyramid"
    raise ClassificationError(f"five-face type with faces {dict(cnt)} is neither prism nor pyramid")


def prism_side_edges(t: CombinatorialType, bases=None):
    """Pairs ``(a, b)`` joining base ``i`` to base ``j``, ordered along base ``i``."""
    if bases is None:
        bases = is_combinatorial_prism(t)
    if bases is None:
        raise ValueError("not a combinatorial prism")
    i, j = bases
    top = set(t.faces[j])
    out = []
    for a in t.faces[i]:
        partner = [b for e in t.edges for b in e if a in e and b != a and b in top]
        out.append((a, partner[0]))
    return out


def edge_lines_relation(p, *, parallel_tol=1e-10, concur_rtol=1e-8):
    """Classify the three side-edge lines of a triangular prism.

    Returns
    -------
    (str, ndarray or None)
        ``('parallel', None)`` or ``('concurrent', apex)``.
    """
    t = CombinatorialType(p.faces)
    bases = is_combinatorial_prism(t)
    if bases is None or len(p.faces[bases[0]]) != 3:
        raise ValueError("not a combinatorial triangular prism")
    pairs = prism_side_edges(t, bases)
    v = p.vertices
    pts = np.array([v[a] for a, _ in pairs])
    dirs = np.array([v[b] - v[a] for a, b in pairs])
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    crosses = [np.linalg.norm(np.cross(dirs[a], dirs[b])) for a, b in ((0, 1), (1, 2), (0, 2))]
    if max(crosses) < parallel_tol:
        return "parallel", None
    diam = p.diameter()
    close = []
    for a, b in ((0, 1), (1, 2), (0, 2)):
        # closest points of two lines
        w = pts[a] - pts[b]
        A = np.array([[dirs[a] @ dirs[a], -dirs[a] @ dirs[b]], [dirs[a] @ dirs[b], -dirs[b] @ dirs[b]]])
        rhs = -np.array([dirs[a] @ w, dirs[b] @ w])
        s, u = np.linalg.solve(A, rhs)
        close.append(pts[a] + s * dirs[a])
        close.append(pts[b] + u * dirs[b])
    close = np.array(close)
    apex = close.mean(0)
    if np.abs(close - apex).max() <= concur_rtol * diam * max(1.0, np.linalg.norm(apex) / diam):
        return "concurrent", apex
    raise LineRelationError("side edges are neither parallel nor concurrent")
