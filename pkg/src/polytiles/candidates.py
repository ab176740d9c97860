"""Named solids: conjectured least-area tiles, competitors and tetrahedral tiles.

Every builder returns a unit-volume :class:`~polytiles.mesh.Polyhedron`.
Closed-form solids come from exact coordinates; the optimized ones are
local minimizers of ``A^3/V^2`` inside a fixed combinatorial type and
symmetry group, started from a documented seed.

The registry is plain data. Each entry carries the reference area it is
compared against, its tolerance and a provenance note, so table output
never needs numbers from anywhere else.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import permutations, product

import numpy as np
from scipy.optimize import minimize_scalar

from polytiles import bounds, prisms
from polytiles.combinatorics import CombinatorialType
from polytiles.mesh import Polyhedron, convex_hull, halfspace_polyhedron, scale_to_unit_volume
from polytiles.optimize import (
    CombinatoricsBrokenError,
    NoConvergenceError,
    Symmetry,
    minimize_within_type,
)

PHI = (1 + 5**0.5) / 2
RESTARTS = 4


class UnknownNameError(KeyError):
    def __str__(self):
        return f"unknown solid {self.args[0]!r}"


class UnsupportedNameError(ValueError):
    """Known name that cannot be built without extra input (a type file)."""


class OptimizerFailureError(RuntimeError):
    pass


@dataclass(frozen=True)
class CandidateSpec:
    name: str
    n: int
    construction: str  # closed-form | cut-of | optimized | type-file
    expected_area: float | None
    tolerance: float | None
    provenance: str
    table: str  # "tiles", "competitors", "tetrahedra" or "extra"
    label: str = ""


# ---------------------------------------------------------------------------
# closed-form solids


def _hull(points, name):
    return scale_to_unit_volume(convex_hull(np.asarray(points, float), name))


def cube():
    return _hull(list(product((0, 1), repeat=3)), "cube")


def truncated_octahedron():
    pts = {tuple(s * np.array(p)) for p in permutations((0, 1, 2)) for s in product((-1, 1), repeat=3)}
    return _hull(sorted(pts), "truncated-octahedron")


def rhombic_dodecahedron():
    pts = list(product((-1, 1), repeat=3))
    pts += [tuple(2 * s * np.eye(3)[i]) for i in range(3) for s in (-1, 1)]
    return _hull(pts, "rhombic-dodecahedron")


def regular_tetrahedron():
    return _hull([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], "regular-tetrahedron")


def regular_octahedron():
    return _hull([tuple(s * np.eye(3)[i]) for i in range(3) for s in (-1, 1)], "regular-octahedron")


def regular_dodecahedron():
    pts = list(product((-1, 1), repeat=3))
    for a, b in product((-1, 1), repeat=2):
        c = (0.0, a / PHI, b * PHI)
        pts += [c, (c[1], c[2], c[0]), (c[2], c[0], c[1])]
    return _hull(pts, "regular-dodecahedron")


def elongated_dodecahedron(elongation=None):
    """Rhombic dodecahedron stretched along a four-fold axis.

    ``elongation`` is the length of the inserted belt. The default is the
    equal-edge member, whose four belt faces are hexagons with all edges
    ``sqrt(8/3)``. Pass ``"optimal"`` for the elongation of least area at
    unit volume (a bounded one-parameter search).
    """
    if isinstance(elongation, str):
        if elongation != "optimal":
            raise ValueError(f"unknown elongation {elongation!r}")
        res = minimize_scalar(
            lambda L: float(_elongated(L).face_areas().sum()),
            bounds=(1e-3, 4.0),
            method="bounded",
            options={"xatol": 1e-12},
        )
        return _elongated(res.x)
    return _elongated((8 / 3) ** 0.5 if elongation is None else float(elongation))


def _elongated(L):
    if L <= 0:
        raise ValueError("elongation must be positive")
    b = (2 / 3) ** 0.5
    pts = [(x, y, z * (b + L / 2)) for x, y, z in product((-1, 1), repeat=3)]
    pts += [(0, 0, s * (2 * b + L / 2)) for s in (-1, 1)]
    pts += [(sx * 2, 0, sz * L / 2) for sx, sz in product((-1, 1), repeat=2)]
    pts += [(0, sy * 2, sz * L / 2) for sy, sz in product((-1, 1), repeat=2)]
    return _hull(pts, "elongated-dodecahedron")


def gyrobifastigium(height=None):
    """Two triangular prisms on a unit square, ridges crossed at 90 degrees.

    ``height`` is the ridge height over the square; by default it is
    chosen to minimize area at unit volume.
    """

    def solid(h):
        s = [(x, y, 0.0) for x, y in product((-0.5, 0.5), repeat=2)]
        s += [(x, 0.0, h) for x in (-0.5, 0.5)] + [(0.0, y, -h) for y in (-0.5, 0.5)]
        return convex_hull(s, "gyrobifastigium")

    if height is None:
        res = minimize_scalar(
            lambda h: float(scale_to_unit_volume(solid(h)).face_areas().sum()),
            bounds=(0.05, 3.0),
            method="bounded",
            options={"xatol": 1e-12},
        )
        height = res.x
    return scale_to_unit_volume(solid(height))


def right_prism(base, name):
    return prisms.optimal_prism(base).polyhedron(name)


def square_pyramid():
    return bounds.square_pyramid_optimum().polyhedron


# Sommerville's four tetrahedral tiles, before scaling
_SOMMERVILLE = {
    # tetragonal disphenoid: opposite edges 2, 2, the other four sqrt(3)
    1: [(-1, 0, -0.5), (1, 0, -0.5), (0, -1, 0.5), (0, 1, 0.5)],
    # half of No. 3, cut through the midpoint of its long edge
    2: [(0, 0, 0), (1, -1, 1), (0, 0, 1), (1, 1, 1)],
    # half of the square pyramid (apex at the cube center) across a base diagonal
    3: [(0, 0, 0), (1, 1, 1), (1, -1, 1), (-1, -1, 1)],
    # cone from the centroid of No. 1 over one of its faces
    4: [(-1, 0, -0.5), (0, -1, 0.5), (0, 0, 0), (0, 1, 0.5)],
}


def build_sommerville(k: int) -> Polyhedron:
    """Sommerville tetrahedron No. ``k`` at unit volume."""
    if k not in _SOMMERVILLE:
        raise ValueError(f"Sommerville number must be 1..4, got {k!r}")
    return _hull(_SOMMERVILLE[k], f"sommerville-{k}")


# ---------------------------------------------------------------------------
# optimized solids


def _halfspace_seed(directions, name):
    U = np.asarray(directions, float)
    U = U / np.linalg.norm(U, axis=1)[:, None]
    return halfspace_polyhedron(U, np.ones(len(U)), interior=np.zeros(3), name=name)


def enneahedron_seed():
    """Planes dual to a tricapped trigonal prism: three squares, six pentagons."""
    U = []
    for k in range(3):
        a = 2 * np.pi * k / 3
        U += [(np.cos(a), np.sin(a), z) for z in (-0.7, 0.7)]
        U.append((np.cos(a + np.pi / 3), np.sin(a + np.pi / 3), 0.0))
    return _halfspace_seed(U, "enneahedron")


def barrel_seed():
    """Planes dual to a bicapped square antiprism: two squares, eight pentagons."""
    U = [(0, 0, 1), (0, 0, -1)]
    for k in range(8):
        a = np.pi * k / 4 + np.pi / 8
        U.append((np.cos(a), np.sin(a), 0.4 if k % 2 else -0.4))
    return _halfspace_seed(U, "decahedral-barrel")


def gabled_seed():
    """Square box with crossed gable roofs: four pentagons, four quadrilaterals.

    The ridges run along the two diagonals, so the two-fold axes of the
    D2d group lie along x and y.
    """
    pts = [(x, y, z) for x, y, z in product((-0.5, 0.5), (-0.5, 0.5), (-0.5, 0.5))]
    pts += [(x, 0.0, 0.8) for x in (-0.5, 0.5)] + [(0.0, y, -0.8) for y in (-0.5, 0.5)]
    c, s = np.cos(np.pi / 4), np.sin(np.pi / 4)
    R = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    return convex_hull(np.array(pts) @ R.T, "gabled-rhombohedron")


def half_kelvin_seed(tilt_deg=3.0):
    """Truncated octahedron cut through its center by a slightly tilted plane.

    A cut normal to a four-fold axis runs through eight vertices; tilting
    it by ``tilt_deg`` about y leaves a simple 12-hedron with 20 vertices.
    """
    k = truncated_octahedron()
    N, d = k.face_planes()
    c = k.centroid()
    t = np.radians(tilt_deg)
    n = np.array([np.sin(t), 0.0, np.cos(t)])
    return halfspace_polyhedron(np.vstack([N, -n]), np.append(d, -n @ c), name="half-truncated-octahedron")


def capped_hexagonal_prism_seed():
    """Simple 14-hedron: a hexagonal belt with a four-face cap at each end.

    Each cap is a hipped roof (two faces along a ridge, two end faces) and
    the caps are related by the central inversion. Faces: two
    quadrilaterals, eight pentagons, four hexagons.
    """
    U = [(np.cos(a), np.sin(a), 0.0) for a in np.pi / 3 * np.arange(6)]
    for s in (1, -1):
        U += [(0.0, s * y, s * 1.0) for y in (0.9, -0.9)]
        U += [(s * x, 0.0, s * 1.0) for x in (1.2, -1.2)]
    return _halfspace_seed(U, "capped-hexagonal-prism")


def half_capped_prism_seed(normal=(0.27, 0.96, 0.0)):
    """Half of :func:`capped_hexagonal_prism_seed`, cut through its center.

    The default cut contains the prism axis and crosses ten of the
    fourteen faces, leaving a simple 13-hedron.
    """
    p = capped_hexagonal_prism_seed()
    N, d = p.face_planes()
    n = np.asarray(normal, float)
    n = n / np.linalg.norm(n)
    c = p.centroid()
    return halfspace_polyhedron(np.vstack([N, -n]), np.append(d, -n @ c), name="goldberg-13-IV")


@dataclass(frozen=True)
class OptimizedRecipe:
    seed: callable
    group: str
    freeze_horizontal: bool = False
    use_automorphisms: bool = False


_RECIPES = {
    "gabled-rhombohedron": OptimizedRecipe(gabled_seed, "D2d", freeze_horizontal=True),
    "enneahedron": OptimizedRecipe(enneahedron_seed, "D3"),
    "decahedral-barrel": OptimizedRecipe(barrel_seed, "D4"),
    "half-truncated-octahedron": OptimizedRecipe(half_kelvin_seed, "C1", use_automorphisms=True),
    "goldberg-13-IV": OptimizedRecipe(half_capped_prism_seed, "C1", use_automorphisms=True),
}


def optimized(name, restarts=RESTARTS):
    """Run the optimizer for a named recipe; returns the OptimizeResult."""
    from polytiles.combinatorics import automorphisms

    recipe = _RECIPES[name]
    seed = recipe.seed()
    t = CombinatorialType(seed.faces)
    N, D = seed.face_planes()
    frozen = [i for i in range(len(N)) if abs(N[i, 2]) < 1e-9] if recipe.freeze_horizontal else ()
    if recipe.use_automorphisms:
        sym = Symmetry.from_automorphisms(automorphisms(t), N, frozen=frozen)
    else:
        sym = Symmetry.from_seed(recipe.group, N, D, frozen=frozen)
    try:
        return minimize_within_type(t, seed, sym, restarts=restarts, name=name)
    except (CombinatoricsBrokenError, NoConvergenceError) as exc:
        raise OptimizerFailureError(f"{name}: {exc}") from exc


@functools.lru_cache(maxsize=None)
def _optimized_outcome(name):
    try:
        return optimized(name).polyhedron, None
    except OptimizerFailureError as exc:
        return None, str(exc)


def _optimized_polyhedron(name):
    p, err = _optimized_outcome(name)
    if err is not None:
        raise OptimizerFailureError(err)
    return p


_optimized_polyhedron.cache_clear = _optimized_outcome.cache_clear


# ---------------------------------------------------------------------------
# registry

_CLOSED = {
    "cube": cube,
    "triangular-prism": lambda: right_prism(prisms.regular_polygon(3), "triangular-prism"),
    "pentagonal-prism": lambda: right_prism(prisms.regular_polygon(5), "pentagonal-prism"),
    "hexagonal-prism": lambda: right_prism(prisms.regular_polygon(6), "hexagonal-prism"),
    "cairo-prism": lambda: right_prism(prisms.cairo_pentagon(), "cairo-prism"),
    "prismatic-prism": lambda: right_prism(prisms.prismatic_pentagon(), "prismatic-prism"),
    "truncated-octahedron": truncated_octahedron,
    "one-third-triangular-prism": lambda: build_sommerville(1).with_name("one-third-triangular-prism"),
    "rhombic-dodecahedron": rhombic_dodecahedron,
    "elongated-dodecahedron": elongated_dodecahedron,
    "regular-tetrahedron": regular_tetrahedron,
    "regular-octahedron": regular_octahedron,
    "regular-dodecahedron": regular_dodecahedron,
    "square-pyramid": square_pyramid,
    "gyrobifastigium": gyrobifastigium,
}

_REF = "reference value"

REGISTRY = {
    s.name: s
    for s in [
        CandidateSpec("one-third-triangular-prism", 4, "cut-of", 7.4126, 5e-4, _REF, "tiles", "One third triangular prism"),
        CandidateSpec("triangular-prism", 5, "closed-form", 6.5467, 5e-4, _REF, "tiles", "A triangular prism"),
        CandidateSpec("cube", 6, "closed-form", 6.0000, 5e-4, _REF, "tiles", "Cube"),
        CandidateSpec("cairo-prism", 7, "closed-form", 5.8629, 5e-4, _REF, "tiles", "Cairo pentagonal prism"),
        CandidateSpec("hexagonal-prism", 8, "closed-form", 5.7191, 5e-4, _REF, "tiles", "A hexagonal prism"),
        CandidateSpec("enneahedron", 9, "optimized", 5.5299, 1e-2, _REF + "; best-effort tolerance", "tiles", "An enneahedron"),
        CandidateSpec("decahedral-barrel", 10, "optimized", 5.4434, 1e-2, _REF + "; best-effort tolerance; also the n=11 entry", "tiles", "Decahedral barrel"),
        CandidateSpec("half-truncated-octahedron", 12, "optimized", 5.3199, 2e-3, _REF, "tiles", "Half truncated octahedron"),
        CandidateSpec("goldberg-13-IV", 13, "optimized", 5.3189, 2e-3, _REF, "tiles", "Goldberg type 13-IV"),
        CandidateSpec("truncated-octahedron", 14, "closed-form", 5.3147, 5e-4, _REF, "tiles", "Truncated octahedron"),
        # companions of the n = 7 and n = 8 tiles
        CandidateSpec("prismatic-prism", 7, "closed-form", 5.8629, 5e-4, "equal to the Cairo prism (same angle multiset)", "extra"),
        CandidateSpec("gabled-rhombohedron", 8, "optimized", 5.7191, 2e-3, "equal-area claim with the hexagonal prism", "extra"),
        # competitors
        CandidateSpec("rhombic-dodecahedron", 12, "closed-form", 5.3454, 5e-4, _REF, "competitors", "Rhombic dodecahedron"),
        CandidateSpec("elongated-dodecahedron", 12, "closed-form", 5.4932, 2e-3, _REF, "competitors", "Elongated dodecahedron"),
        CandidateSpec("goldberg-13-I", 13, "type-file", 5.3640, 5e-3, _REF + "; needs a type file", "competitors", "Goldberg type 13-I"),
        CandidateSpec("goldberg-13-II", 13, "type-file", 6.8813, 5e-3, _REF + "; needs a type file", "competitors", "Goldberg type 13-II"),
        # comparison solids
        CandidateSpec("regular-tetrahedron", 4, "closed-form", None, None, "closed form sqrt(3) (6 sqrt(2))^(2/3)", "extra"),
        CandidateSpec("regular-octahedron", 8, "closed-form", 5.7191, 5e-4, "equal to the hexagonal prism", "extra"),
        CandidateSpec("regular-dodecahedron", 12, "closed-form", None, None, "equality case of the face-count bound", "extra"),
        CandidateSpec("pentagonal-prism", 7, "closed-form", None, None, "closed form 3 (P^2 / 2A)^(1/3)", "extra"),
        CandidateSpec("square-pyramid", 5, "closed-form", None, None, "closed form 2^(5/3) 3^(2/3)", "extra"),
        CandidateSpec("gyrobifastigium", 8, "optimized", None, None, "height chosen by a one-parameter search", "extra"),
        # Sommerville tetrahedra
        *[
            CandidateSpec(f"sommerville-{k}", 4, "cut-of", a, 5e-4, _REF, "tetrahedra", f"Sommerville No. {k}")
            for k, a in zip((1, 2, 3, 4), (7.4126, 7.9635, 8.1802, 10.3646))
        ],
    ]
}

COMPETITORS = (
    "rhombic-dodecahedron",
    "elongated-dodecahedron",
    "goldberg-13-I",
    "goldberg-13-II",
    "regular-octahedron",
    "regular-tetrahedron",
    "regular-dodecahedron",
    "square-pyramid",
    "gyrobifastigium",
)

TABLE1 = tuple(s.name for s in REGISTRY.values() if s.table == "tiles")
TABLE2 = tuple(s.name for s in REGISTRY.values() if s.table == "competitors")


def spec(name) -> CandidateSpec:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownNameError(name) from None


def build(name: str, type_file=None) -> Polyhedron:
    """Unit-volume realization of a registered solid.

    Parameters
    ----------
    name : str
        Registry key, e.g. ``"cube"`` or ``"enneahedron"``.
    type_file : str or path, optional
        Combinatorial type for the file-supplied names (Goldberg 13-I/13-II).

    Raises
    ------
    UnknownNameError, UnsupportedNameError, OptimizerFailureError
    """
    s = spec(name)
    if s.construction == "type-file":
        if type_file is None:
            raise UnsupportedNameError(f"{name} needs a combinatorial-type file")
        return build_from_type_file(type_file, name)
    if name in _CLOSED:
        return _CLOSED[name]()
    if name.startswith("sommerville-"):
        return build_sommerville(int(name.split("-")[1]))
    return _optimized_polyhedron(name)


def build_competitor(name: str, type_file=None) -> Polyhedron:
    if name not in COMPETITORS:
        raise UnknownNameError(name)
    return build(name, type_file)


def build_from_type_file(path, name="", restarts=RESTARTS):
    """Optimize a type read from a file, seeded from a realization of its dual.

    The seed is found by the sphere-point construction in
    :func:`seed_from_type`; the result is the in-type optimum.
    """
    from polytiles.io import read_type

    with open(path) as fh:
        t = read_type(fh.read())
    seed = seed_from_type(t)
    try:
        return minimize_within_type(t, seed, restarts=restarts, name=name).polyhedron
    except (CombinatoricsBrokenError, NoConvergenceError) as exc:
        raise OptimizerFailureError(f"{name}: {exc}") from exc


def seed_from_type(t: CombinatorialType, attempts=8):
    """Some convex realization of a simple combinatorial type.

    Face ``i`` of the type becomes a point ``u_i`` on the unit sphere such
    that the hull of the points is the dual triangulation; the planes
    ``u_i . x <= 1`` then realize ``t``. The points are found by a
    spring relaxation followed by a penalty on non-convex edges.
    """
    from scipy.optimize import minimize

    from polytiles.combinatorics import canonical_code

    t.validated()
    if any(len(fs) != 3 for fs in t.vertex_faces()):
        raise ValueError("automatic seeding needs every vertex of degree three")
    F = t.n_faces
    tris = [tuple(fs[::-1]) for fs in t.vertex_faces()]
    nbr = [set() for _ in range(F)]
    opp = {}
    for a, b, c in tris:
        for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
            nbr[u].add(v)
            opp[(u, v)] = w
    quads = np.array([(a, b, c, opp[(b, a)]) for (a, b), c in opp.items() if a < b])
    T = np.array(tris)
    target = canonical_code(t)

    def penalty(x):
        P = x.reshape(F, 3)
        P = P / np.linalg.norm(P, axis=1)[:, None]
        a, b, c, d = (P[quads[:, k]] for k in range(4))
        o = np.einsum("ij,ij->i", np.cross(b - a, c - a), d - a)
        A, B, C = (P[T[:, k]] for k in range(3))
        o2 = np.einsum("ij,ij->i", np.cross(B - A, C - A), A)
        return (np.maximum(o + 0.02, 0) ** 2).sum() + (np.maximum(0.02 - o2, 0) ** 2).sum()

    nbr = [sorted(s) for s in nbr]
    for attempt in range(attempts):
        rng = np.random.default_rng(attempt)
        P = rng.standard_normal((F, 3))
        P /= np.linalg.norm(P, axis=1)[:, None]
        for _ in range(500):
            Q = np.array([P[nb].mean(0) for nb in nbr])
            diff = P[:, None, :] - P[None, :, :]
            r = np.linalg.norm(diff, axis=2) + np.eye(F)
            P = P + 0.5 * (Q - P) + 0.02 * (diff / r[..., None] ** 3).sum(1)
            P -= P.mean(0)
            P /= np.linalg.norm(P, axis=1)[:, None]
        res = minimize(penalty, P.ravel(), method="L-BFGS-B")
        P = res.x.reshape(F, 3)
        P /= np.linalg.norm(P, axis=1)[:, None]
        try:
            seed = halfspace_polyhedron(P, np.ones(F), interior=np.zeros(3))
        except Exception:
            continue
        if seed.n_faces == F and canonical_code(CombinatorialType(seed.faces)) == target:
            return relabel_to(seed, t)
    raise OptimizerFailureError("could not find a convex realization of the type")


def relabel_to(p: Polyhedron, t: CombinatorialType):
    """Reorder vertices and faces of ``p`` to match the labels of ``t``."""
    from polytiles.combinatorics import isomorphism

    vmap, reverses = isomorphism(t, CombinatorialType(p.faces))
    verts = np.array([p.vertices[vmap[v]] for v in range(t.n_vertices)])
    if reverses:
        verts[:, 0] *= -1
    return Polyhedron(verts, t.faces, p.name)


def table1_candidate(n: int) -> str:
    """Registry name of the conjectured tile with ``n`` faces (4 <= n <= 14)."""
    if not 4 <= n <= 14:
        raise ValueError("n must be in 4..14")
    if n == 11:
        return "decahedral-barrel"
    return next(s.name for s in REGISTRY.values() if s.table == "tiles" and s.n == n)
