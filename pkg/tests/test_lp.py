import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from polytiles.lp import LPError, chebyshev_center, simplex_max


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5), st.integers(2, 12))
def test_simplex_matches_linprog(seed, n, m):
    rng = np.random.default_rng(seed)
    A = rng.uniform(0.1, 2.0, (m, n))  # positive rows keep the problem bounded
    b = rng.uniform(0.5, 3.0, m)
    c = rng.uniform(-1, 2, n)
    x, val = simplex_max(c, A, b)
    ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
    assert val == pytest.approx(-ref.fun, abs=1e-9)
    assert np.all(A @ x <= b + 1e-9) and np.all(x >= -1e-12)


def test_unbounded():
    with pytest.raises(LPError, match="unbounded"):
        simplex_max([1.0, 0.0], [[-1.0, 1.0]], [1.0])


def test_negative_rhs_rejected():
    with pytest.raises(LPError):
        simplex_max([1.0], [[1.0]], [-1.0])


def test_chebyshev_center_of_box():
    N = np.vstack([np.eye(3), -np.eye(3)])
    d = np.array([1, 2, 3, 1, 2, 3], float)
    c, r = chebyshev_center(N, d)
    assert r == pytest.approx(1.0)
    assert abs(c[0]) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_chebyshev_radius_matches_linprog(seed):
    rng = np.random.default_rng(seed)
    N = rng.standard_normal((12, 3))
    N /= np.linalg.norm(N, axis=1)[:, None]
    d = rng.uniform(0.5, 2.0, 12)
    try:
        _, r = chebyshev_center(N, d, interior=np.zeros(3))
    except LPError:
        return  # random directions may leave the region unbounded
    # maximize r subject to N x + r <= d
    A = np.hstack([N, np.ones((12, 1))])
    ref = linprog([0, 0, 0, -1], A_ub=A, b_ub=d, bounds=[(None, None)] * 3 + [(0, None)], method="highs")
    assert ref.status == 0
    assert r == pytest.approx(-ref.fun, abs=1e-9)
