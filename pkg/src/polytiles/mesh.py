"""Closed polyhedral surfaces: validation, measurement and elementary edits.

A :class:`Polyhedron` is a vertex array plus a tuple of face cycles. Each
cycle is ordered counter-clockwise when seen from outside, so that the
right-hand normal points out of the solid.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from polytiles.lp import chebyshev_center

#: planarity tolerance, relative to the diameter
PLANARITY_RTOL = 1e-9


class InvalidPolyhedronError(ValueError):
    """Raised when an operation needs a valid polyhedron and gets another."""

    def __init__(self, report):
        self.report = list(report)
        lines = "; ".join(str(v) for v in self.report[:5])
        super().__init__(f"invalid polyhedron: {lines}")


class NonConvexError(ValueError):
    pass


class DegenerateInputError(ValueError):
    pass


class CutTooDeepError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """One broken invariant, with the offending face, edge or vertex."""

    invariant: str
    index: object
    message: str

    def __str__(self):
        return f"{self.invariant}[{self.index}]: {self.message}"


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """Vertex coordinates and outward-oriented face cycles.

    Parameters
    ----------
    vertices : array_like, shape (V, 3)
    faces : sequence of sequences of int
        Zero-based vertex indices, one cycle per face.
    """

    vertices: np.ndarray
    faces: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 3)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", tuple(tuple(int(i) for i in f) for f in self.faces))

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def edges(self):
        """Sorted list of undirected edges ``(i, j)`` with ``i < j``."""
        es = set()
        for f in self.faces:
            for a, b in zip(f, f[1:] + f[:1]):
                es.add((min(a, b), max(a, b)))
        return sorted(es)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def face_sizes(self):
        return [len(f) for f in self.faces]

    def degrees(self):
        deg = np.zeros(self.n_vertices, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def diameter(self):
        v = self.vertices
        d = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((d**2).sum(-1)).max())

    def vector_areas(self):
        """Per-face vector area ``0.5 * sum(p_k x p_{k+1})``."""
        out = np.zeros((self.n_faces, 3))
        for i, f in enumerate(self.faces):
            p = self.vertices[list(f)]
            out[i] = 0.5 * np.cross(p, np.roll(p, -1, axis=0)).sum(0)
        return out

    def face_normals(self):
        va = self.vector_areas()
        return va / np.linalg.norm(va, axis=1)[:, None]

    def face_planes(self):
        """Unit outward normals ``n`` and offsets ``d`` with ``n . x = d`` on each face."""
        n = self.face_normals()
        d = np.array([n[i] @ self.vertices[list(f)].mean(0) for i, f in enumerate(self.faces)])
        return n, d

    def face_areas(self):
        """Fan-triangulated areas, signed against the face normal."""
        n = self.face_normals()
        out = np.empty(self.n_faces)
        for i, f in enumerate(self.faces):
            p = self.vertices[list(f)]
            cr = np.cross(p[1:-1] - p[0], p[2:] - p[0])
            out[i] = 0.5 * (cr @ n[i]).sum()
        return out

    def face_centroids(self):
        """Area centroids of the face polygons."""
        n = self.face_normals()
        out = np.empty((self.n_faces, 3))
        for i, f in enumerate(self.faces):
            p = self.vertices[list(f)]
            a = 0.5 * np.cross(p[1:-1] - p[0], p[2:] - p[0]) @ n[i]
            c = (p[0] + p[1:-1] + p[2:]) / 3.0
            out[i] = (a[:, None] * c).sum(0) / a.sum()
        return out

    def centroid(self):
        """Volume centroid (tetrahedra from the origin over fan triangles)."""
        acc = np.zeros(3)
        vol = 0.0
        for f in self.faces:
            p = self.vertices[list(f)]
            for k in range(1, len(f) - 1):
                a, b, c = p[0], p[k], p[k + 1]
                w = a @ np.cross(b, c) / 6.0
                vol += w
                acc += w * (a + b + c) / 4.0
        return acc / vol

    def signed_volume(self):
        vol = 0.0
        for f in self.faces:
            p = self.vertices[list(f)]
            vol += (p[0] @ np.cross(p[1:-1], p[2:]).T).sum() / 6.0
        return float(vol)

    def scaled(self, s):
        return Polyhedron(self.vertices * s, self.faces, self.name)

    def translated(self, t):
        return Polyhedron(self.vertices + np.asarray(t, float), self.faces, self.name)

    def with_name(self, name):
        return Polyhedron(self.vertices, self.faces, name)

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<Polyhedron{tag} V={self.n_vertices} F={self.n_faces}>"


@dataclass(frozen=True)
class Measures:
    surface_area: float
    volume: float
    cost: float
    diameter: float


@dataclass(frozen=True)
class Insphere:
    center: np.ndarray
    radius: float


def _orientation_offenders(faces):
    """Faces whose orientation disagrees with the majority of their component.

    Orientations are propagated over the face adjacency graph: two faces
    sharing an edge agree when they traverse it in opposite directions.
    """
    owners = defaultdict(list)
    for fi, f in enumerate(faces):
        for a, b in zip(f, f[1:] + f[:1]):
            owners[(min(a, b), max(a, b))].append((fi, a < b))
    adj = defaultdict(list)
    for lst in owners.values():
        if len(lst) == 2:
            (f, s), (g, t) = lst
            adj[f].append((g, s != t))
            adj[g].append((f, s != t))
    flip = {}
    offenders = []
    for start in range(len(faces)):
        if start in flip:
            continue
        flip[start] = False
        comp = [start]
        stack = [start]
        while stack:
            f = stack.pop()
            for g, consistent in adj[f]:
                want = flip[f] if consistent else not flip[f]
                if g not in flip:
                    flip[g] = want
                    comp.append(g)
                    stack.append(g)
        minority = [f for f in comp if flip[f]]
        if 2 * len(minority) > len(comp):
            minority = [f for f in comp if not flip[f]]
        offenders.extend(minority)
    return sorted(offenders)


def validate(p: Polyhedron):
    """Check every structural and geometric invariant of ``p``.

    Returns
    -------
    list of Violation
        Empty when ``p`` is a closed, consistently outward-oriented,
        planar-faced polyhedron of genus zero.
    """
    report = []
    nv = p.n_vertices
    v = p.vertices
    if not np.all(np.isfinite(v)):
        report.append(Violation("finite", "vertices", "non-finite coordinate"))
        return report
    structural_ok = True
    for fi, f in enumerate(p.faces):
        if len(f) < 3 or len(set(f)) != len(f):
            report.append(Violation("face-size", fi, f"face needs >= 3 distinct vertices, got {f}"))
            structural_ok = False
        if any(i < 0 or i >= nv for i in f):
            report.append(Violation("index-range", fi, f"vertex index out of range in {f}"))
            structural_ok = False
    if not structural_ok:
        return report

    directed = defaultdict(list)
    undirected = defaultdict(list)
    for fi, f in enumerate(p.faces):
        for a, b in zip(f, f[1:] + f[:1]):
            directed[(a, b)].append(fi)
            undirected[(min(a, b), max(a, b))].append(fi)
    for e, owners in sorted(undirected.items()):
        if len(owners) != 2:
            report.append(Violation("manifold", e, f"edge in {len(owners)} faces {owners}"))
    bad_dir = any(len(o) > 1 for o in directed.values())
    if bad_dir:
        for fi in _orientation_offenders(p.faces):
            report.append(Violation("orientation", fi, "face traverses shared edges in the same direction as its neighbours"))

    used = sorted({i for f in p.faces for i in f})
    chi = len(used) - len(undirected) + p.n_faces
    if chi != 2:
        report.append(Violation("euler", "V-E+F", f"V - E + F = {chi}, expected 2"))
    if len(used) != nv:
        report.append(Violation("unused-vertex", sorted(set(range(nv)) - set(used)), "vertex in no face"))

    diam = p.diameter()
    tol = PLANARITY_RTOL * max(diam, np.finfo(float).tiny)
    for fi, f in enumerate(p.faces):
        if len(f) == 3:
            continue
        q = v[list(f)]
        c = q.mean(0)
        # least-squares plane normal = smallest singular vector
        _, s, vt = np.linalg.svd(q - c)
        dev = np.abs((q - c) @ vt[-1]).max()
        if dev > tol:
            report.append(Violation("planarity", fi, f"max off-plane distance {dev:.3e} > {tol:.3e}"))

    if not report and p.signed_volume() <= 0:
        report.append(Violation("volume", "signed", f"signed volume {p.signed_volume():.6g} <= 0"))
    return report


def _require_valid(p):
    report = validate(p)
    if report:
        raise InvalidPolyhedronError(report)


def measures(p: Polyhedron) -> Measures:
    """Surface area, volume, scale-free cost ``A^3/V^2`` and vertex diameter."""
    _require_valid(p)
    area = float(p.face_areas().sum())
    vol = p.signed_volume()
    return Measures(area, vol, area**3 / vol**2, p.diameter())


def scale_to_unit_volume(p: Polyhedron) -> Polyhedron:
    _require_valid(p)
    return p.scaled(p.signed_volume() ** (-1.0 / 3.0))


def _face_edge_map(p):
    m = {}
    for fi, f in enumerate(p.faces):
        for a, b in zip(f, f[1:] + f[:1]):
            m[(a, b)] = fi
    return m


def dihedral_angles(p: Polyhedron):
    """Interior dihedral angle in degrees for every undirected edge.

    Reflex edges (non-convex solids) come out above 180.
    """
    _require_valid(p)
    n = p.face_normals()
    owner = _face_edge_map(p)
    out = {}
    for i, j in p.edges:
        f, g = owner[(i, j)], owner[(j, i)]
        e = p.vertices[j] - p.vertices[i]
        e /= np.linalg.norm(e)
        # in-face directions pointing away from the edge, into each face
        uf = np.cross(n[f], e)
        ug = np.cross(n[g], -e)
        ang = np.arctan2(np.cross(ug, uf) @ e, uf @ ug)
        out[(i, j)] = float(np.degrees(ang % (2 * np.pi)))
    return out


def is_convex(p: Polyhedron, rtol=1e-9):
    n, d = p.face_planes()
    slack = p.vertices @ n.T - d
    return bool(slack.max() <= rtol * p.diameter())


def insphere(p: Polyhedron) -> Insphere:
    """Largest ball inside a convex polyhedron (Chebyshev center of the faces)."""
    _require_valid(p)
    if not is_convex(p):
        raise NonConvexError("insphere needs a convex polyhedron")
    n, d = p.face_planes()
    try:
        c, r = chebyshev_center(n, d, interior=p.vertices.mean(0))
    except ValueError as exc:
        raise DegenerateInputError(str(exc)) from exc
    if r <= 0:
        raise DegenerateInputError("inscribed radius is not positive")
    return Insphere(c, r)


def truncate_vertex(p: Polyhedron, v: int, t: float) -> Polyhedron:
    """Cut off vertex ``v`` by a plane at distance ``t`` from it.

    The plane is perpendicular to the normalized sum of the unit vectors
    along the edges leaving ``v``, or, when that sum is not strictly inside
    the cone of edges, to the inward sum of the incident face normals. Each incident edge is cut where it meets
    the plane; the new vertices form one extra face.
    """
    _require_valid(p)
    if t == 0:
        return p
    if t < 0:
        raise CutTooDeepError("cut depth must be non-negative")
    verts = p.vertices
    # neighbours of v in face order around v
    nxt = {}
    for f in p.faces:
        k = len(f)
        for idx, a in enumerate(f):
            if a == v:
                prev_, next_ = f[idx - 1], f[(idx + 1) % k]
                nxt[prev_] = next_
    if not nxt:
        raise ValueError(f"vertex {v} is in no face")
    # rotation around v: prev -> next within each face, walking face to face
    start = min(nxt)
    ring = [start]
    while True:
        b = nxt[ring[-1]]
        if b == start:
            break
        ring.append(b)
        if len(ring) > len(nxt):
            raise InvalidPolyhedronError([Violation("manifold", v, "vertex link is not a cycle")])
    n, d = p.face_planes()
    inc = [fi for fi, f in enumerate(p.faces) if v in f]
    # every incident face plane must support the solid
    if np.any(verts @ n[inc].T - d[inc] > 1e-9 * p.diameter()):
        raise NonConvexError(f"vertex {v} is not strictly convex")
    dirs = verts[ring] - verts[v]
    lens = np.linalg.norm(dirs, axis=1)
    axis = (dirs / lens[:, None]).sum(0)
    axis /= np.linalg.norm(axis)
    proj = dirs @ axis
    if np.any(proj <= 1e-9 * lens):
        # edge directions can sum to a vector perpendicular to one of them
        # (90-120-120 corners); the inward normal sum is always inside the cone
        axis = -n[inc].sum(0)
        axis /= np.linalg.norm(axis)
        proj = dirs @ axis
        if np.any(proj <= 1e-9 * lens):
            raise NonConvexError(f"vertex {v} is not strictly convex")
    fracs = t / proj
    if np.any(fracs >= 1.0):
        raise CutTooDeepError(f"cut depth {t} reaches a neighbouring vertex")
    rest = np.delete(np.arange(p.n_vertices), v)
    depth = (verts[rest] - verts[v]) @ axis
    if np.any(depth <= t):
        raise CutTooDeepError(f"cut plane at depth {t} does not separate vertex {v}")

    new_pts = verts[v] + fracs[:, None] * dirs
    base = p.n_vertices
    new_index = {nb: base + k for k, nb in enumerate(ring)}
    faces = []
    for f in p.faces:
        if v not in f:
            faces.append(f)
            continue
        k = len(f)
        idx = f.index(v)
        prev_, next_ = f[idx - 1], f[(idx + 1) % k]
        faces.append(f[:idx] + (new_index[prev_], new_index[next_]) + f[idx + 1:])
    # new face: ring order is clockwise seen from outside, reverse it
    faces.append(tuple(new_index[nb] for nb in reversed(ring)))
    all_pts = np.vstack([verts, new_pts])
    keep = [i for i in range(len(all_pts)) if i != v]
    remap = {old: new for new, old in enumerate(keep)}
    faces = [tuple(remap[i] for i in f) for f in faces]
    out = Polyhedron(all_pts[keep], faces, p.name)
    _require_valid(out)
    return out


# ---------------------------------------------------------------------------
# construction from points or halfspaces


def convex_hull(points, name="", rtol=1e-9) -> Polyhedron:
    """Convex hull with coplanar Qhull facets merged into polygons.

    Points that are not hull vertices, including points interior to a
    face or an edge and near-duplicates, are dropped.

    Raises
    ------
    DegenerateInputError
        Fewer than four points, or all points coplanar.
    """
    from scipy.spatial import ConvexHull, QhullError

    P = np.asarray(points, float)
    if P.ndim != 2 or P.shape[1] != 3 or len(P) < 4:
        raise DegenerateInputError("need at least four points in R^3")
    if not np.isfinite(P).all():
        raise DegenerateInputError("non-finite coordinates")
    span = np.ptp(P, axis=0).max()
    if span == 0 or np.linalg.matrix_rank(P - P.mean(0), tol=rtol * span) < 3:
        raise DegenerateInputError("points are coplanar")
    P = _dedupe(P, 1e3 * rtol * span)
    try:
        hull = ConvexHull(P)
    except QhullError as exc:
        raise DegenerateInputError(str(exc)) from exc
    tol = 1e3 * rtol * span
    eq = hull.equations
    # group facets by plane
    group = -np.ones(len(eq), dtype=int)
    planes = []
    for i, e in enumerate(eq):
        for g, q in enumerate(planes):
            if np.abs(e[:3] - q[:3]).max() < 1e3 * rtol and abs(e[3] - q[3]) < tol:
                group[i] = g
                break
        else:
            group[i] = len(planes)
            planes.append(e)
    faces = []
    for g, q in enumerate(planes):
        n = q[:3]
        on = np.nonzero(np.abs(P @ n + q[3]) < tol)[0]
        u = P[on[0]] - P[on].mean(0)
        u /= np.linalg.norm(u)
        w = np.cross(n, u)
        rel = P[on] - P[on].mean(0)
        faces.append(tuple(int(on[i]) for i in _ccw_hull_2d(rel @ u, rel @ w, tol)))
    used = sorted({v for f in faces for v in f})
    remap = {v: i for i, v in enumerate(used)}
    return Polyhedron(P[used], [tuple(remap[v] for v in f) for f in faces], name)


def _dedupe(P, tol):
    from scipy.spatial import cKDTree

    drop = set()
    for i, j in sorted(cKDTree(P).query_pairs(tol)):
        if i not in drop:
            drop.add(j)
    return P[[i for i in range(len(P)) if i not in drop]]


def _ccw_hull_2d(x, y, tol):
    """Indices of the strictly convex counterclockwise hull (monotone chain)."""
    order = sorted(range(len(x)), key=lambda i: (x[i], y[i]))

    def turn(o, a, b):
        return (x[a] - x[o]) * (y[b] - y[o]) - (y[a] - y[o]) * (x[b] - x[o])

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and turn(out[-2], out[-1], i) <= tol * tol:
                out.pop()
            out.append(i)
        return out

    lower, upper = chain(order), chain(order[::-1])
    return lower[:-1] + upper[:-1]


def halfspace_polyhedron(normals, offsets, interior=None, name="") -> Polyhedron:
    """Bounded intersection of ``{x : n_i . x <= d_i}`` as a polyhedron."""
    from scipy.spatial import HalfspaceIntersection, QhullError

    N = np.asarray(normals, float)
    d = np.asarray(offsets, float)
    if interior is None:
        from scipy.optimize import linprog

        norms = np.linalg.norm(N, axis=1)
        c = np.zeros(4)
        c[3] = -1.0
        res = linprog(c, A_ub=np.hstack([N, norms[:, None]]), b_ub=d, bounds=[(None, None)] * 3 + [(0, None)])
        if res.status != 0 or res.x[3] <= 0:
            raise DegenerateInputError("halfspaces have empty or unbounded interior")
        interior = res.x[:3]
    try:
        hs = HalfspaceIntersection(np.hstack([N, -d[:, None]]), np.asarray(interior, float))
    except QhullError as exc:
        raise DegenerateInputError(str(exc)) from exc
    return convex_hull(hs.intersections, name)
