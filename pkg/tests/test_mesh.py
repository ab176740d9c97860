from itertools import product

import numpy as np
import oracles as O
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polytiles import candidates
from polytiles.combinatorics import CombinatorialType, equivalent
from polytiles.mesh import (
    CutTooDeepError,
    DegenerateInputError,
    InvalidPolyhedronError,
    NonConvexError,
    Polyhedron,
    convex_hull,
    dihedral_angles,
    halfspace_polyhedron,
    insphere,
    is_convex,
    measures,
    scale_to_unit_volume,
    truncate_vertex,
    validate,
)
from polytiles.prisms import prism_polyhedron, regular_polygon

CUBE_FACES = [(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)]


def unit_cube(side=1.0, center=False):
    v = np.array([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)], float)
    if center:
        v -= 0.5
    return Polyhedron(v * side, CUBE_FACES, "cube")


def regular_tetrahedron(edge=1.0):
    v = np.array([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], float) * edge / (2 * 2**0.5)
    return Polyhedron(v, [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)], "tet")


# --- validate --------------------------------------------------------------


def test_cube_is_valid():
    assert validate(unit_cube()) == []


def test_reversed_face_is_reported():
    faces = list(CUBE_FACES)
    faces[2] = faces[2][::-1]
    report = validate(Polyhedron(unit_cube().vertices, faces))
    assert any(v.invariant == "orientation" and v.index == 2 for v in report)


def test_planarity_violation():
    v = unit_cube().vertices.copy()
    v[6, 2] += 1e-3
    report = validate(Polyhedron(v, CUBE_FACES))
    assert {r.invariant for r in report} == {"planarity"}


def test_missing_face_breaks_manifold_and_euler():
    report = validate(Polyhedron(unit_cube().vertices, CUBE_FACES[:-1]))
    kinds = {r.invariant for r in report}
    assert "manifold" in kinds and "euler" in kinds


def test_inside_out_cube_has_negative_volume():
    report = validate(Polyhedron(unit_cube().vertices, [f[::-1] for f in CUBE_FACES]))
    assert [r.invariant for r in report] == ["volume"]


def test_bad_index_and_short_face():
    report = validate(Polyhedron(unit_cube().vertices, CUBE_FACES[:-1] + [(0, 1)]))
    assert report[0].invariant == "face-size"
    report = validate(Polyhedron(unit_cube().vertices, CUBE_FACES[:-1] + [(3, 0, 4, 99)]))
    assert report[0].invariant == "index-range"


def test_non_finite():
    v = unit_cube().vertices.copy()
    v[0, 0] = np.nan
    assert validate(Polyhedron(v, CUBE_FACES))[0].invariant == "finite"


# --- measures --------------------------------------------------------------


def test_cube_measures():
    m = measures(unit_cube())
    assert (m.surface_area, m.volume, m.cost) == pytest.approx((6, 1, 216), rel=1e-14)
    assert m.diameter == pytest.approx(3**0.5)


def test_tetrahedron_volume_matches_cayley_menger():
    p = regular_tetrahedron()
    assert measures(p).volume == pytest.approx(O.cayley_menger_volume(p.vertices), rel=1e-14)
    assert measures(p).volume == pytest.approx(1 / (6 * 2**0.5), rel=1e-14)


def test_kelvin_area():
    p = candidates.truncated_octahedron()
    assert measures(p).surface_area == pytest.approx(O.KELVIN, rel=1e-13)
    assert abs(measures(p).surface_area - 5.3147) < 5e-4


def test_measures_rejects_invalid():
    with pytest.raises(InvalidPolyhedronError):
        measures(Polyhedron(unit_cube().vertices, CUBE_FACES[:-1]))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([0.1, 2.0, 17.0]), st.integers(0, 1000))
def test_cost_is_scale_invariant(lam, seed):
    rng = np.random.default_rng(seed)
    p = convex_hull(rng.standard_normal((12, 3)))
    assert measures(p.scaled(lam)).cost == pytest.approx(measures(p).cost, rel=1e-10)


# --- scale_to_unit_volume --------------------------------------------------


def test_scale_cube_of_side_two():
    p = scale_to_unit_volume(unit_cube(2.0))
    assert np.allclose(p.vertices, unit_cube().vertices, atol=1e-15)


def test_scale_is_idempotent_and_scales_area():
    p = convex_hull(np.random.default_rng(1).standard_normal((20, 3)))
    q = scale_to_unit_volume(p)
    assert measures(q).volume == pytest.approx(1, rel=1e-12)
    assert np.allclose(scale_to_unit_volume(q).vertices, q.vertices, rtol=1e-12, atol=1e-15)
    m = measures(p)
    assert measures(q).surface_area == pytest.approx(m.surface_area * m.volume ** (-2 / 3), rel=1e-12)


def test_sommerville_one_at_unit_volume():
    p = scale_to_unit_volume(convex_hull(O.SOMMERVILLE_POINTS[1]))
    assert abs(measures(p).surface_area - 7.4126) < 5e-4


# --- dihedral angles -------------------------------------------------------


def test_tetrahedron_dihedrals():
    ang = np.array(list(dihedral_angles(regular_tetrahedron()).values()))
    assert np.allclose(ang, np.degrees(np.arccos(1 / 3)), atol=1e-10)
    r = 360 / ang[0]
    assert abs(r - round(r)) > 1e-3


def test_cube_dihedrals():
    ang = dihedral_angles(unit_cube())
    assert len(ang) == 12 and np.allclose(list(ang.values()), 90)
    assert sum(ang.values()) == pytest.approx(1080)


def test_triangular_prism_dihedrals():
    p = prism_polyhedron(regular_polygon(3), 1.0)
    ang = dihedral_angles(p)
    vertical = [a for (i, j), a in ang.items() if abs(i - j) == 3]
    other = [a for (i, j), a in ang.items() if abs(i - j) != 3]
    assert np.allclose(vertical, 60) and np.allclose(other, 90)


def test_reflex_edge_exceeds_180():
    # an L-shaped prism has one reflex vertical edge
    L = np.array([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], float)
    ang = dihedral_angles(prism_polyhedron(L, 1.0))
    assert max(ang.values()) == pytest.approx(270)


# --- insphere --------------------------------------------------------------


def test_cube_insphere():
    ball = insphere(unit_cube(center=True))
    assert np.allclose(ball.center, 0, atol=1e-12) and ball.radius == pytest.approx(0.5)


def test_box_insphere():
    v = unit_cube().vertices * np.array([1, 1, 2])
    ball = insphere(Polyhedron(v, CUBE_FACES))
    assert ball.radius == pytest.approx(0.5)
    assert ball.center[2] == pytest.approx(1.0)


def test_circumscribed_prism_insphere():
    side = 4 ** (1 / 3)
    h = side / 3**0.5
    base = regular_polygon(3) * side
    ball = insphere(prism_polyhedron(base, h))
    assert ball.radius == pytest.approx(h / 2, rel=1e-12)


def test_insphere_rejects_nonconvex():
    L = np.array([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], float)
    with pytest.raises(NonConvexError):
        insphere(prism_polyhedron(L, 1.0))


@pytest.mark.parametrize("name", ["cube", "truncated-octahedron", "sommerville-2", "cairo-prism", "square-pyramid"])
def test_insphere_beats_centroid(name):
    p = candidates.build(name)
    n, d = p.face_planes()
    ball = insphere(p)
    assert ball.radius >= (d - n @ p.centroid()).min() - 1e-9
    assert (d - n @ ball.center).min() >= ball.radius - 1e-9


# --- convex hull -----------------------------------------------------------


def test_hull_of_cube_corners():
    pts = np.array(list(product((0, 1), repeat=3)), float)
    p = convex_hull(pts)
    assert p.n_faces == 6 and set(p.face_sizes) == {4}
    q = convex_hull(np.vstack([pts, [[0.5, 0.5, 0.5]]]))
    assert q.n_vertices == 8


def test_hull_of_sphere_points():
    P = np.random.default_rng(0).standard_normal((100, 3))
    P /= np.linalg.norm(P, axis=1)[:, None]
    p = convex_hull(P)
    assert validate(p) == []
    assert p.n_vertices - p.n_edges + p.n_faces == 2
    n, d = p.face_planes()
    assert (P @ n.T - d).max() < 1e-9


def test_hull_rejects_coplanar():
    with pytest.raises(DegenerateInputError):
        convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 3, 0)])
    with pytest.raises(DegenerateInputError):
        convex_hull([(0, 0, 0), (1, 1, 1), (2, 2, 2)])


@pytest.mark.parametrize("name", ["truncated-octahedron", "rhombic-dodecahedron", "regular-dodecahedron", "enneahedron"])
def test_hull_reproduces_candidate_type(name):
    p = candidates.build(name)
    q = convex_hull(p.vertices)
    assert equivalent(CombinatorialType(p.faces), CombinatorialType(q.faces))


def test_halfspace_cube():
    N = np.vstack([np.eye(3), -np.eye(3)])
    p = halfspace_polyhedron(N, np.full(6, 0.5))
    assert measures(p).volume == pytest.approx(1)


# --- truncation ------------------------------------------------------------


def test_cube_corner_cut():
    p = unit_cube()
    q = truncate_vertex(p, 6, 0.1)
    assert q.n_faces == 7 and sorted(q.face_sizes)[0] == 3
    assert measures(q).cost < 216
    assert truncate_vertex(p, 6, 0.0) is p


def test_cut_too_deep():
    with pytest.raises(CutTooDeepError):
        truncate_vertex(unit_cube(), 0, 0.9)
    with pytest.raises(CutTooDeepError):
        truncate_vertex(unit_cube(), 0, -0.1)


def test_reflex_vertex_is_rejected():
    L = np.array([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], float)
    with pytest.raises(NonConvexError):
        truncate_vertex(prism_polyhedron(L, 1.0), 3, 0.05)


def test_kelvin_vertex_uses_fallback_axis():
    p = candidates.truncated_octahedron()
    q = truncate_vertex(p, 0, 1e-2)
    assert validate(q) == [] and q.n_faces == 15
    assert is_convex(q)
