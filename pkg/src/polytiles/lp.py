"""Small dense linear programs.

Only what the insphere computation needs: a tableau simplex with Bland's
rule, and a Chebyshev-center wrapper around it. Problem sizes here are a
handful of variables and at most a few hundred constraints.
"""

from itertools import combinations
from math import comb

import numpy as np

TOL = 1e-10
_MAX_TRIPLES = 200_000


class LPError(ValueError):
    pass


def simplex_max(c, A, b, tol=TOL, max_iter=10_000):
    """Maximize ``c @ x`` subject to ``A @ x <= b``, ``x >= 0``, with ``b >= 0``.

    The slack basis is feasible because ``b >= 0``, so no phase one is run.

    Returns
    -------
    x : ndarray
    value : float
    """
    A = np.asarray(A, float)
    b = np.asarray(b, float)
    c = np.asarray(c, float)
    m, n = A.shape
    if np.any(b < -tol):
        raise LPError("slack basis infeasible (b has negative entries)")
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = np.maximum(b, 0.0)
    T[m, :n] = -c
    basis = list(range(n, n + m))
    for _ in range(max_iter):
        # Bland: lowest-index improving column
        cand = np.nonzero(T[m, :-1] < -tol)[0]
        if cand.size == 0:
            break
        j = int(cand[0])
        col = T[:m, j]
        pos = col > tol
        if not pos.any():
            raise LPError("unbounded")
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + tol * max(1.0, abs(best)))[0]
        i = int(min(ties, key=lambda r: basis[r]))
        T[i] /= T[i, j]
        for r in range(m + 1):
            if r != i and T[r, j] != 0.0:
                T[r] -= T[r, j] * T[i]
        basis[i] = j
    else:
        raise LPError("simplex iteration limit reached")
    x = np.zeros(n + m)
    x[basis] = T[:m, -1]
    return x[:n], float(T[m, -1])


def chebyshev_center(normals, offsets, interior=None, tol=TOL):
    """Center and radius of the largest ball in ``{x : normals @ x <= offsets}``.

    ``normals`` must be unit rows. When the maximizing center is not unique
    (a 1x1x2 box, say), the vertices of the set of optimal centers are
    enumerated and averaged, which puts the center on every symmetry
    element of the input.
    """
    N = np.asarray(normals, float)
    d = np.asarray(offsets, float)
    x0 = np.zeros(N.shape[1]) if interior is None else np.asarray(interior, float)
    b = d - N @ x0
    if np.any(b <= 0):
        raise LPError("interior point is not strictly inside")
    scale = float(b.max())
    # y = y_plus - y_minus ; variables (y_plus, y_minus, r), all scaled by `scale`
    A = np.hstack([N, -N, np.ones((len(N), 1))])
    dim = N.shape[1]
    obj = np.zeros(2 * dim + 1)
    obj[-1] = 1.0
    z, _ = simplex_max(obj, A, b / scale, tol=tol)
    y = (z[:dim] - z[dim:2 * dim]) * scale
    r = z[-1] * scale
    center = x0 + y
    center = _center_of_optimal_set(N, d - r, center, tol * max(scale, 1.0))
    return center, float(r)


def _center_of_optimal_set(N, rhs, fallback, tol):
    """Average of the vertices of ``{x : N x <= rhs}`` (a set with empty interior)."""
    m, dim = N.shape
    if comb(m, dim) > _MAX_TRIPLES:
        return fallback
    pts = []
    for idx in combinations(range(m), dim):
        M = N[list(idx)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, rhs[list(idx)])
        if np.all(N @ x <= rhs + 10 * tol):
            pts.append(x)
    if not pts:
        return fallback
    pts = np.array(pts)
    uniq = [pts[0]]
    for q in pts[1:]:
        if min(np.abs(q - u).max() for u in uniq) > 1e3 * tol:
            uniq.append(q)
    return np.mean(uniq, axis=0)
