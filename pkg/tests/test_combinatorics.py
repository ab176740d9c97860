from math import comb

import numpy as np
import pytest

from polytiles import candidates
from polytiles.bounds import right_pyramid, square
from polytiles.combinatorics import (
    ClassificationError,
    CombinatorialType,
    InvalidTypeError,
    LineRelationError,
    automorphisms,
    canonical_code,
    classify_5hedron,
    edge_lines_relation,
    enumerate_face_vectors,
    equivalent,
    face_vector_count,
    is_combinatorial_prism,
    isomorphism,
)
from polytiles.mesh import Polyhedron, convex_hull
from polytiles.prisms import prism_polyhedron, regular_polygon

CUBE = CombinatorialType([(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)])
TRI_PRISM = CombinatorialType(prism_polyhedron(regular_polygon(3), 1).faces)
PYRAMID = CombinatorialType(right_pyramid(square(1), 1).faces)


def relabel(t, perm):
    return CombinatorialType([tuple(int(perm[v]) for v in f) for f in t.faces])


# --- face vectors ----------------------------------------------------------


@pytest.mark.parametrize("n", range(4, 11))
def test_face_vector_count(n):
    fvs = enumerate_face_vectors(n)
    assert len(fvs) == comb(2 * n - 4, n) == face_vector_count(n)
    assert all(fv.n_faces == n for fv in fvs)
    assert len({fv.counts for fv in fvs}) == len(fvs)


def test_small_cases():
    assert [fv.counts for fv in enumerate_face_vectors(4)] == [(4,)]
    five = enumerate_face_vectors(5)
    assert len(five) == 6
    assert {tuple(fv.counts) for fv in five if fv.parity_ok} == {(4, 1), (2, 3), (0, 5)}


@pytest.mark.parametrize("n", [3, 21])
def test_face_vector_range(n):
    with pytest.raises(ValueError):
        enumerate_face_vectors(n)


# --- canonical codes -------------------------------------------------------


@pytest.mark.parametrize("name", ["cube", "truncated-octahedron", "enneahedron", "cairo-prism"])
def test_code_invariant_under_relabeling(name):
    t = CombinatorialType(candidates.build(name).faces)
    code = canonical_code(t)
    rng = np.random.default_rng(0)
    for _ in range(50):
        assert canonical_code(relabel(t, rng.permutation(t.n_vertices))) == code


def test_code_invariant_under_mirror():
    mirrored = CombinatorialType([f[::-1] for f in CUBE.faces])
    assert canonical_code(mirrored) == canonical_code(CUBE)


def test_codes_separate_types():
    assert not equivalent(TRI_PRISM, PYRAMID)
    gabled = CombinatorialType(candidates.gabled_seed().faces)
    hexa = CombinatorialType(candidates.build("hexagonal-prism").faces)
    assert not equivalent(gabled, hexa)
    # cairo and prismatic prisms share a type: only the base angles differ
    assert equivalent(
        CombinatorialType(candidates.build("cairo-prism").faces),
        CombinatorialType(candidates.build("prismatic-prism").faces),
    )


def test_invalid_type_rejected():
    with pytest.raises(InvalidTypeError):
        canonical_code(CombinatorialType([(0, 1, 2), (0, 1, 3), (0, 1, 4), (2, 3, 4)]))


def test_automorphism_counts():
    assert len(automorphisms(CUBE)) == 48
    auts = automorphisms(CombinatorialType(candidates.build("regular-dodecahedron").faces))
    assert len(auts) == 120 and sum(flip for _, flip in auts) == 60
    perm, flip = automorphisms(TRI_PRISM)[0]
    assert not flip and list(perm) == list(range(5))


def test_isomorphism_maps_faces():
    rng = np.random.default_rng(5)
    t = CombinatorialType(candidates.build("enneahedron").faces)
    s = relabel(t, rng.permutation(t.n_vertices))
    vmap, reverses = isomorphism(t, s)
    assert not reverses
    target = {tuple(sorted(f)) for f in s.faces}
    assert all(tuple(sorted(vmap[v] for v in f)) in target for f in t.faces)
    assert isomorphism(t, CUBE) is None


# --- prisms ----------------------------------------------------------------


def test_prism_detection():
    i, j = is_combinatorial_prism(TRI_PRISM)
    assert {len(TRI_PRISM.faces[i]), len(TRI_PRISM.faces[j])} == {3}
    assert is_combinatorial_prism(PYRAMID) is None
    assert is_combinatorial_prism(CUBE) == (0, 1)


@pytest.mark.parametrize("name", ["triangular-prism", "cube", "cairo-prism", "hexagonal-prism", "pentagonal-prism"])
def test_every_prism_builder_is_detected(name):
    assert is_combinatorial_prism(CombinatorialType(candidates.build(name).faces)) is not None


def test_classify_5hedron():
    assert classify_5hedron(TRI_PRISM) == "triangular-prism"
    assert classify_5hedron(PYRAMID) == "quadrilateral-pyramid"
    with pytest.raises(ValueError):
        classify_5hedron(CUBE)


def test_five_quads_fail_precondition():
    # five quadrilaterals cannot close up: the structure is not a valid type
    bogus = CombinatorialType([(0, 1, 2, 3), (0, 3, 4, 5), (0, 5, 6, 1), (1, 6, 7, 2), (2, 7, 4, 3)])
    with pytest.raises((InvalidTypeError, ClassificationError)):
        classify_5hedron(bogus)


# --- edge lines ------------------------------------------------------------


def test_right_and_sheared_prisms_are_parallel():
    assert edge_lines_relation(prism_polyhedron(regular_polygon(3), 1.0))[0] == "parallel"
    tri = np.column_stack([regular_polygon(3), np.zeros(3)])
    sheared = convex_hull(np.vstack([tri, tri + [0.7, -0.4, 1.3]]))
    assert edge_lines_relation(sheared)[0] == "parallel"


def test_frustum_recovers_apex():
    apex = np.array([0.3, -0.2, 2.5])
    tri = np.column_stack([regular_polygon(3) * 2, np.zeros(3)])
    top = apex + 0.5 * (tri - apex)
    kind, found = edge_lines_relation(convex_hull(np.vstack([tri, top])))
    assert kind == "concurrent"
    assert np.linalg.norm(found - apex) < 1e-8 * 3


def test_skew_side_edges_raise():
    # moving one top vertex bends two side faces out of plane
    p = prism_polyhedron(regular_polygon(3), 1.0)
    v = p.vertices.copy()
    v[3] += [0.05, 0.0, 0.0]
    with pytest.raises((LineRelationError, ValueError)):
        edge_lines_relation(Polyhedron(v, p.faces))
