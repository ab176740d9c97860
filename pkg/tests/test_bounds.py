import numpy as np
import oracles as O
import pytest

from polytiles import candidates
from polytiles.bounds import (
    diameter_bound,
    goldberg_bound,
    goldberg_cost_bound,
    pyramid_lateral_bound,
    random_pyramids,
    right_pyramid,
    square,
    square_pyramid_optimum,
)
from polytiles.mesh import measures


@pytest.mark.parametrize("f", sorted(O.GOLDBERG))
def test_goldberg_values(f):
    assert goldberg_bound(f).bound_value == pytest.approx(O.GOLDBERG[f], rel=1e-13)


def test_goldberg_equality_cases():
    assert goldberg_bound(6).bound_value == pytest.approx(6.0, rel=1e-14)
    assert goldberg_bound(4).attained_by == "regular-tetrahedron"
    assert goldberg_bound(12).attained_by == "regular-dodecahedron"
    assert goldberg_bound(14).attained_by is None
    for f, ref in ((4, O.TETRA), (12, O.DODECA)):
        assert goldberg_bound(f).bound_value == pytest.approx(ref, rel=1e-12)


def test_goldberg_decreasing_to_sphere():
    vals = [goldberg_cost_bound(f) for f in range(4, 51)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 36 * np.pi


@pytest.mark.parametrize("f", [3, 2.5, -1])
def test_goldberg_rejects(f):
    with pytest.raises(ValueError):
        goldberg_bound(f)


def test_table_candidates_respect_bound():
    for name in candidates.TABLE1:
        try:
            p = candidates.build(name)
        except candidates.OptimizerFailureError:
            continue  # reported by the acceptance suite
        a = measures(p).surface_area
        b = goldberg_bound(p.n_faces).bound_value
        if name == "cube":
            assert a == pytest.approx(b, rel=1e-12)
        else:
            assert a > b + 1e-6


def test_lateral_bound_examples():
    assert pyramid_lateral_bound(1.0, 4.0, 0.0) == pytest.approx(1.0)
    # square of side 2, apex height 1 above the center: four triangles of slant sqrt(2)
    assert pyramid_lateral_bound(4.0, 8.0, 1.0) == pytest.approx(4 * 2**0.5)
    with pytest.raises(ValueError):
        pyramid_lateral_bound(1.0, 4.0, -1.0)


def test_lateral_bound_on_random_pyramids():
    for p, S, per, h in random_pyramids(500):
        lateral = p.face_areas()[1:].sum()
        assert lateral >= pyramid_lateral_bound(S, per, h) - 1e-12


def test_square_pyramid_optimum():
    opt = square_pyramid_optimum()
    m = measures(opt.polyhedron)
    assert abs(m.volume - 1) < 1e-10
    assert abs(m.surface_area - opt.surface_area) < 1e-10
    assert opt.surface_area == pytest.approx(O.SQUARE_PYRAMID, rel=1e-14)
    assert opt.base_side**2 == pytest.approx(opt.base_area, rel=1e-14)
    assert opt.height == pytest.approx(4 * opt.base_side / 2**0.5 / 2, rel=1e-14)  # h = sqrt(2) a


def test_side_height_pair_as_printed_is_not_optimal():
    # 2^(-1/3) 3^(2/3) read as a side length, with height 2^(2/3) 3^(-1/3),
    # has unit volume but a larger area than the optimum
    a, h = 2 ** (-1 / 3) * 3 ** (2 / 3), 2 ** (2 / 3) * 3 ** (-1 / 3)
    m = measures(right_pyramid(square(a), h))
    assert m.volume == pytest.approx(1, rel=1e-12)
    assert m.surface_area > square_pyramid_optimum().surface_area + 0.5


def test_square_pyramid_beats_random_square_pyramids():
    best = square_pyramid_optimum().surface_area
    for p, *_ in random_pyramids(1000, unit_volume=True, sides=4):
        assert measures(p).surface_area >= best - 1e-12
    rng = np.random.default_rng(11)
    for a in rng.uniform(0.3, 4.0, 1000):
        h = 3 / (a * a)
        assert measures(right_pyramid(square(a), h)).surface_area >= best - 1e-12


def test_diameter_bound():
    assert diameter_bound(6.0) == pytest.approx(54 / np.pi)
    with pytest.raises(ValueError):
        diameter_bound(0)
    for name in ("cube", "truncated-octahedron", "sommerville-4"):
        p = candidates.build(name)
        assert p.diameter() <= diameter_bound(measures(p).surface_area)
