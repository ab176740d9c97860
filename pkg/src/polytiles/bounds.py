"""Closed-form lower bounds on surface area.

All area bounds are stated at unit volume, i.e. as the cube root of the
corresponding bound on ``A^3 / V^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from polytiles.mesh import Polyhedron, convex_hull, scale_to_unit_volume

RANDOM_PYRAMID_SEED = 20240607


@dataclass(frozen=True)
class BoundResult:
    bound_value: float
    attained_by: str | None = None


_EQUALITY = {4: "regular-tetrahedron", 6: "cube", 12: "regular-dodecahedron"}


def goldberg_cost_bound(f: int) -> float:
    """``54 (f-2) tan(w) (4 sin(w)^2 - 1)`` with ``w = pi f / (6 (f-2))``."""
    if not isinstance(f, (int, np.integer)) or f < 4:
        raise ValueError(f"face count must be an integer >= 4, got {f!r}")
    w = np.pi * f / (6 * (f - 2))
    return float(54 * (f - 2) * np.tan(w) * (4 * np.sin(w) ** 2 - 1))


def goldberg_bound(f: int) -> BoundResult:
    """Least possible area of a unit-volume convex polyhedron with ``f`` faces.

    Attained only by the regular tetrahedron, cube and regular dodecahedron.
    """
    return BoundResult(goldberg_cost_bound(f) ** (1 / 3), _EQUALITY.get(int(f)))


def pyramid_lateral_bound(S: float, p: float, h: float) -> float:
    """Lower bound ``sqrt((2S)^2 + p^2 h^2) / 2`` on the lateral area of a pyramid.

    ``S`` and ``p`` are base area and perimeter, ``h`` the apex height.
    Equality holds when the base has an incircle and the apex sits above
    its center.
    """
    if S <= 0 or p <= 0 or h < 0:
        raise ValueError("need S > 0, p > 0, h >= 0")
    return 0.5 * float(np.hypot(2 * S, p * h))


@dataclass(frozen=True)
class SquarePyramidOptimum:
    base_side: float
    base_area: float
    height: float
    surface_area: float
    polyhedron: Polyhedron


def square_pyramid_optimum() -> SquarePyramidOptimum:
    """Unit-volume right square pyramid of least area.

    Base area ``2^(-1/3) 3^(2/3)`` (side ``3^(1/3) 2^(-1/6)``), height
    ``6^(1/3)``, area ``2^(5/3) 3^(2/3)``.
    """
    S = 2 ** (-1 / 3) * 3 ** (2 / 3)
    a = 3 ** (1 / 3) * 2 ** (-1 / 6)
    h = 6 ** (1 / 3)
    poly = right_pyramid(square(a), h, "square-pyramid")
    return SquarePyramidOptimum(a, S, h, 2 ** (5 / 3) * 3 ** (2 / 3), poly)


def square(a):
    s = a / 2
    return np.array([[-s, -s], [s, -s], [s, s], [-s, s]])


def right_pyramid(base, h, name="", apex_xy=None):
    """Pyramid over a counterclockwise 2-D ``base`` in ``z = 0``.

    The apex sits at height ``h`` above ``apex_xy`` (default: the origin).
    """
    B = np.asarray(base, float)
    k = len(B)
    apex = np.zeros(3) if apex_xy is None else np.append(np.asarray(apex_xy, float), 0.0)
    apex[2] = h
    V = np.vstack([np.column_stack([B, np.zeros(k)]), apex])
    faces = [tuple(range(k - 1, -1, -1))] + [(i, (i + 1) % k, k) for i in range(k)]
    return Polyhedron(V, faces, name)


def diameter_bound(P0: float) -> float:
    """``3 P0^2 / (2 pi)``: diameter cap for unit-volume convex bodies of area <= P0."""
    if P0 <= 0:
        raise ValueError("P0 must be positive")
    return 3 * P0 * P0 / (2 * np.pi)


def random_pyramids(count, seed=RANDOM_PYRAMID_SEED, unit_volume=False, sides=None):
    """Random pyramids over convex bases.

    Each base is the convex hull of 4 to 8 uniform points in the unit disc
    (redrawn until it has exactly ``sides`` vertices, when given);
    the apex is uniform in ``[-1, 1]^2 x [0.2, 2]``. Generated from
    ``numpy.random.default_rng(seed)``.

    Yields
    ------
    (Polyhedron, base_area, base_perimeter, height)
    """
    from scipy.spatial import ConvexHull

    rng = np.random.default_rng(seed)
    made = 0
    while made < count:
        m = sides if sides is not None else int(rng.integers(4, 9))
        r = np.sqrt(rng.random(m))
        a = 2 * np.pi * rng.random(m)
        pts = np.column_stack([r * np.cos(a), r * np.sin(a)])
        hull = ConvexHull(pts)
        base = pts[hull.vertices]  # counterclockwise in 2-D
        if hull.volume < 1e-3 or (sides is not None and len(base) != sides):
            continue
        apex = np.array([rng.uniform(-1, 1), rng.uniform(-1, 1)])
        h = rng.uniform(0.2, 2.0)
        p = right_pyramid(base, h, "pyramid", apex_xy=apex)
        area = hull.volume
        perim = hull.area
        if unit_volume:
            s = p.signed_volume() ** (-1 / 3)
            p = p.scaled(s)
            area, perim, h = area * s * s, perim * s, h * s
        made += 1
        yield p, area, perim, h


def random_convex_hulls(count, seed=RANDOM_PYRAMID_SEED + 1, n_points=(5, 40)):
    """Unit-volume hulls of random points on the unit sphere."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        m = int(rng.integers(n_points[0], n_points[1] + 1))
        P = rng.standard_normal((m, 3))
        P /= np.linalg.norm(P, axis=1)[:, None]
        yield scale_to_unit_volume(convex_hull(P, "random-hull"))
