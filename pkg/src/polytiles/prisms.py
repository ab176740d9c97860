"""Right prisms of least area for a given base shape.

For a base of area ``A0`` and perimeter ``P0`` (up to similarity), the
unit-volume right prism of least area has height
``h = (4 sqrt(A0') / P0')^(2/3)`` after the base is rescaled so that the
prism has unit volume, and area ``S = 3 (P0^2 / (2 A0))^(1/3)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from polytiles.mesh import DegenerateInputError, Polyhedron


@dataclass(frozen=True)
class PrismSpec:
    """Optimal right prism over a rescaled copy of a base polygon.

    ``base`` holds the rescaled 2-D vertices (counterclockwise, centroid
    at the origin); ``A0``/``P0`` are its area and perimeter and ``h`` the
    height, so ``A0 * h == 1``.
    """

    base: np.ndarray
    A0: float
    P0: float
    h: float

    @property
    def surface_area(self):
        return 2 * self.A0 + self.P0 * self.h

    def polyhedron(self, name=""):
        """Base in ``z = 0`` with centroid at the origin, top at ``z = h``."""
        return prism_polyhedron(self.base, self.h, name)


def polygon_area_perimeter(poly):
    """Signed shoelace area and perimeter of a closed 2-D polygon."""
    P = np.asarray(poly, float)
    Q = np.roll(P, -1, axis=0)
    area = 0.5 * float(np.sum(P[:, 0] * Q[:, 1] - Q[:, 0] * P[:, 1]))
    perim = float(np.linalg.norm(Q - P, axis=1).sum())
    return area, perim


def _polygon_centroid(P, area):
    Q = np.roll(P, -1, axis=0)
    cr = P[:, 0] * Q[:, 1] - Q[:, 0] * P[:, 1]
    return ((P + Q) * cr[:, None]).sum(0) / (6 * area)


def _check_polygon(poly):
    P = np.asarray(poly, float)
    if P.ndim != 2 or P.shape[1] != 2 or len(P) < 3 or not np.isfinite(P).all():
        raise DegenerateInputError("base must be at least three finite 2-D points")
    area, perim = polygon_area_perimeter(P)
    if abs(area) <= 1e-12 * max(perim, 1e-300) ** 2:
        raise DegenerateInputError("base polygon has zero area")
    if area < 0:
        P = P[::-1]
        area = -area
    # simple: no two non-adjacent edges intersect
    n = len(P)
    for i in range(n):
        a, b = P[i], P[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c, d = P[j], P[(j + 1) % n]
            if _segments_cross(a, b, c, d):
                raise DegenerateInputError(f"base polygon edges {i} and {j} intersect")
    return P, area, perim


def _segments_cross(a, b, c, d):
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def optimal_prism(base) -> PrismSpec:
    """Least-area unit-volume right prism whose base is similar to ``base``.

    Raises
    ------
    DegenerateInputError
        Fewer than three vertices, zero area or a self-intersecting base.
    """
    P, A, L = _check_polygon(base)
    # scale lambda with lambda^3 = L / (4 A^2) puts the base at the optimal size
    lam = (L / (4 * A * A)) ** (1 / 3)
    B = lam * (P - _polygon_centroid(P, A))
    A0, P0 = lam * lam * A, lam * L
    return PrismSpec(base=B, A0=A0, P0=P0, h=1.0 / A0)


def optimal_prism_area(base) -> float:
    """Closed form ``3 (P0^2 / (2 A0))^(1/3)`` for the base's similarity class."""
    _, A, L = _check_polygon(base)
    return 3 * (L * L / (2 * A)) ** (1 / 3)


def prism_polyhedron(base, h, name=""):
    B = np.asarray(base, float)
    k = len(B)
    bottom = np.column_stack([B, np.zeros(k)])
    top = np.column_stack([B, np.full(k, float(h))])
    faces = [tuple(range(k - 1, -1, -1)), tuple(range(k, 2 * k))]
    faces += [(i, (i + 1) % k, k + (i + 1) % k, k + i) for i in range(k)]
    return Polyhedron(np.vstack([bottom, top]), faces, name)


def regular_polygon(k: int) -> np.ndarray:
    """Regular ``k``-gon with unit sides, centered at the origin."""
    if not isinstance(k, (int, np.integer)) or not 3 <= k <= 64:
        raise ValueError(f"k must be an integer in 3..64, got {k!r}")
    R = 0.5 / np.sin(np.pi / k)
    ang = 2 * np.pi * np.arange(k) / k
    return R * np.column_stack([np.cos(ang), np.sin(ang)])


def tangential_polygon(angles_deg, r=1.0) -> np.ndarray:
    """Polygon circumscribed about the circle of radius ``r`` with given interior angles.

    The tangent length at a vertex of angle ``theta`` is ``r cot(theta/2)``;
    each side is the sum of the tangent lengths at its ends.
    """
    th = np.radians(np.asarray(angles_deg, float))
    k = len(th)
    if k < 3 or not np.isclose(th.sum(), (k - 2) * np.pi, atol=1e-12):
        raise ValueError("interior angles must sum to (k - 2) * 180")
    t = r / np.tan(th / 2)
    sides = t + np.roll(t, -1)
    heading = np.concatenate([[0.0], np.cumsum(np.pi - th[1:])])
    steps = sides[:, None] * np.column_stack([np.cos(heading), np.sin(heading)])
    pts = np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)[:-1]])
    gap = np.linalg.norm(np.cumsum(steps, axis=0)[-1])
    if gap > 1e-12 * sides.sum():
        raise ValueError(f"polygon does not close (gap {gap:.3e})")
    # the incenter lies on the bisector of vertex 0, at distance r / sin(theta0 / 2)
    d = r / np.sin(th[0] / 2)
    return pts - d * np.array([np.cos(th[0] / 2), np.sin(th[0] / 2)])


def cairo_pentagon() -> np.ndarray:
    """Incircle-radius-1 pentagon with angles 90, 120, 90, 120, 120 (right angles apart)."""
    return tangential_polygon([90, 120, 90, 120, 120])


def prismatic_pentagon() -> np.ndarray:
    """Incircle-radius-1 pentagon with angles 90, 90, 120, 120, 120 (right angles adjacent)."""
    return tangential_polygon([90, 90, 120, 120, 120])


def interior_angles(poly) -> np.ndarray:
    """Interior angles in degrees of a counterclockwise polygon."""
    P = np.asarray(poly, float)
    a = np.roll(P, 1, axis=0) - P
    b = np.roll(P, -1, axis=0) - P
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    return np.degrees(np.arctan2(np.abs(cross), (a * b).sum(1)))


def hexagonal_optimum():
    """Closed-form constants of the best unit-volume hexagonal prism.

    Returns
    -------
    dict
        ``edge = (2/9)^(1/3)``, ``height = 2^(1/3) 3^(-1/6)``,
        ``area = 2^(2/3) 3^(7/6)``.
    """
    return {
        "edge": (2 / 9) ** (1 / 3),
        "height": 2 ** (1 / 3) * 3 ** (-1 / 6),
        "area": 2 ** (2 / 3) * 3 ** (7 / 6),
    }
