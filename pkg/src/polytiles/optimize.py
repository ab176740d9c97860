"""Surface-area minimization inside a fixed combinatorial type.

A polyhedron of a given type is parametrized by its face planes: a unit
outward normal and a support offset per face. Vertices are recovered by
intersecting the planes around each abstract vertex, so faces stay planar
by construction. The objective is the scale-free cost ``A^3 / V^2``.

The optimality certificate is the tangency condition of Lindelöf: at a
minimizer the inscribed sphere touches every face at the face's area
centroid. :func:`lindelof_check` measures how far a polyhedron is from it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from polytiles.combinatorics import CombinatorialType
from polytiles.lp import LPError, simplex_max
from polytiles.mesh import (
    CutTooDeepError,
    Insphere,
    Polyhedron,
    insphere,
    measures,
    truncate_vertex,
)

log = logging.getLogger(__name__)

DEGENERATE_EDGE_RTOL = 1e-7
FD_STEP = 1e-6


class CombinatoricsBrokenError(RuntimeError):
    """A face or edge collapsed: the type has no interior optimum from this seed."""


class NoConvergenceError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Lindelöf condition


@dataclass(frozen=True)
class LindelofReport:
    insphere: Insphere
    tangency_points: np.ndarray
    centroids: np.ndarray
    residuals: np.ndarray
    deficits: np.ndarray

    @property
    def max_residual(self):
        return float(self.residuals.max())

    @property
    def max_deficit(self):
        return float(self.deficits.max())


def lindelof_check(p: Polyhedron) -> LindelofReport:
    """Per-face distance between insphere tangency point and face centroid.

    For each face plane the tangency point is the foot of the
    perpendicular from the insphere center. ``deficits`` hold
    ``|dist(center, plane) - radius|``; faces that do not touch the ball
    show up there.
    """
    ball = insphere(p)
    n, d = p.face_planes()
    dist = d - n @ ball.center
    feet = ball.center + dist[:, None] * n
    cents = p.face_centroids()
    return LindelofReport(
        insphere=ball,
        tangency_points=feet,
        centroids=cents,
        residuals=np.linalg.norm(feet - cents, axis=1),
        deficits=np.abs(dist - ball.radius),
    )


# ---------------------------------------------------------------------------
# plane parametrization of a combinatorial type


class TypeModel:
    """Vectorized geometry of one combinatorial type under face-plane parameters.

    All evaluation methods accept leading batch dimensions, so a whole
    finite-difference stencil is evaluated in one call.
    """

    def __init__(self, t: CombinatorialType):
        self.type = t.validated()
        self.F = t.n_faces
        self.V = t.n_vertices
        vf = t.vertex_faces()
        self.vertex_faces = vf
        self.simple = np.array([len(x) == 3 for x in vf])
        self.vf3 = np.array([x[:3] for x in vf])
        self.high = [(v, np.array(x)) for v, x in enumerate(vf) if len(x) > 3]
        fa, fb, fc, ff = [], [], [], []
        for fi, f in enumerate(t.faces):
            k = len(f)
            for i in range(k):
                fa.append(f[i])
                fb.append(f[(i + 1) % k])
                fc.append(f[(i + 2) % k])
                ff.append(fi)
        self.ea, self.eb, self.ec, self.ef = map(np.array, (fa, fb, fc, ff))
        self.inc = np.zeros((self.V, self.F), dtype=bool)
        for v, fs in enumerate(vf):
            self.inc[v, list(fs)] = True

    def vertices(self, N, D):
        """Vertices from planes; also returns the plane-agreement residual."""
        M = N[..., self.vf3, :]
        b = D[..., self.vf3]
        X = np.linalg.solve(M, b[..., None])[..., 0]
        resid = np.zeros(N.shape[:-2])
        for v, fs in self.high:
            Nv, Dv = N[..., fs, :], D[..., fs]
            A = np.einsum("...ki,...kj->...ij", Nv, Nv)
            rhs = np.einsum("...ki,...k->...i", Nv, Dv)
            x = np.linalg.solve(A, rhs[..., None])[..., 0]
            X[..., v, :] = x
            r = np.einsum("...ki,...i->...k", Nv, x) - Dv
            resid = resid + (r**2).sum(-1)
        return X, resid

    def evaluate(self, N, D):
        """Area, volume, validity flag, shortest relative edge and vertices."""
        X, resid = self.vertices(N, D)
        pa, pb, pc = X[..., self.ea, :], X[..., self.eb, :], X[..., self.ec, :]
        batch = N.shape[:-2]
        flat = np.cross(pa, pb).reshape(-1, len(self.ef), 3)
        va = np.stack([_bincount_rows(self.ef, flat[..., k], self.F) for k in range(3)], axis=-1)
        va = 0.5 * va.reshape(batch + (self.F, 3))
        a = np.einsum("...fi,...fi->...f", va, N)
        area = a.sum(-1)
        vol = (D * a).sum(-1) / 3.0
        nrm = N[..., self.ef, :]
        turn = np.einsum("...ki,...ki->...k", np.cross(pb - pa, pc - pb), nrm)
        elen = np.linalg.norm(pb - pa, axis=-1)
        span = np.linalg.norm(X - X.mean(-2, keepdims=True), axis=-1).max(-1)
        side = np.einsum("...vi,...fi->...vf", X, N) - D[..., None, :]
        side = np.where(self.inc, -np.inf, side)
        scale = np.maximum(span, 1e-300)
        valid = (
            (turn > 0).all(-1)
            & (side.max(axis=(-1, -2)) < 1e-12 * scale)
            & (vol > 0)
            & np.isfinite(area)
        )
        min_edge = elen.min(-1) / scale
        return area, vol, valid, min_edge, X, resid / scale**2

    def cost(self, N, D, penalty=1e6):
        area, vol, valid, _, _, resid = self.evaluate(N, D)
        with np.errstate(divide="ignore", invalid="ignore"):
            c = area**3 / vol**2 * (1.0 + penalty * resid)
        return np.where(valid, c, np.inf)

    def polyhedron(self, N, D, name=""):
        X, _ = self.vertices(N, D)
        return Polyhedron(X, self.type.faces, name)


def _bincount_rows(idx, rows, minlength):
    B = rows.shape[0]
    offs = (np.arange(B)[:, None] * minlength + idx[None, :]).ravel()
    return np.bincount(offs, weights=rows.ravel(), minlength=B * minlength).reshape(B, minlength)


@dataclass
class TypeEmbedding:
    """Face planes realizing a combinatorial type."""

    type: CombinatorialType
    normals: np.ndarray
    offsets: np.ndarray

    @classmethod
    def from_polyhedron(cls, p: Polyhedron):
        n, d = p.face_planes()
        return cls(CombinatorialType(p.faces), n, d)

    def polyhedron(self, name=""):
        return TypeModel(self.type).polyhedron(self.normals, self.offsets, name)


# ---------------------------------------------------------------------------
# symmetry


def _rot(axis, angle):
    axis = np.asarray(axis, float)
    axis = axis / np.linalg.norm(axis)
    K = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * K @ K


def _mirror(normal):
    n = np.asarray(normal, float)
    n = n / np.linalg.norm(n)
    return np.eye(3) - 2 * np.outer(n, n)


def group_closure(generators, max_order=240):
    elems = [np.eye(3)]
    keys = {tuple(np.round(np.eye(3), 8).ravel())}
    frontier = list(elems)
    while frontier:
        new = []
        for g in frontier:
            for h in generators:
                m = h @ g
                k = tuple(np.round(m, 8).ravel())
                if k not in keys:
                    keys.add(k)
                    elems.append(m)
                    new.append(m)
        frontier = new
        if len(elems) > max_order:
            raise ValueError("group does not close")
    return elems


def point_group(spec: str):
    """Matrices of a point group given as e.g. ``'D3'``, ``'D2d'``, ``'C2v'``, ``'Ci'``.

    The principal axis is z; secondary two-fold axes lie along x, and
    vertical mirrors contain the x axis.
    """
    s = spec.strip()
    if s in ("C1", ""):
        return [np.eye(3)]
    if s == "Ci":
        return group_closure([-np.eye(3)])
    if s == "Cs":
        return group_closure([_mirror((0, 0, 1))])
    kind = s[0]
    rest = s[1:]
    digits = "".join(ch for ch in rest if ch.isdigit())
    suffix = rest[len(digits):]
    if kind not in "CDS" or not digits:
        raise ValueError(f"unknown point group {spec!r}")
    n = int(digits)
    rz = _rot((0, 0, 1), 2 * np.pi / n)
    c2x = _rot((1, 0, 0), np.pi)
    sz = _mirror((0, 0, 1))
    sv = _mirror((0, 1, 0))
    if kind == "S":
        if n % 2:
            raise ValueError("S groups need an even order")
        return group_closure([sz @ _rot((0, 0, 1), 2 * np.pi / n)])
    gens = {
        ("C", ""): [rz],
        ("C", "v"): [rz, sv],
        ("C", "h"): [rz, sz],
        ("D", ""): [rz, c2x],
        ("D", "h"): [rz, c2x, sz],
        ("D", "d"): [rz, c2x, sz @ _rot((0, 0, 1), np.pi / n)],
    }.get((kind, suffix))
    if gens is None:
        raise ValueError(f"unknown point group {spec!r}")
    return group_closure(gens)


@dataclass
class Symmetry:
    """A point group acting on face planes, plus optionally frozen normals.

    ``perms[g][i]`` is the face that face ``i`` is carried to by
    ``matrices[g]``. Frozen faces keep their seed normal throughout; the
    offsets of frozen faces stay free.
    """

    matrices: list
    perms: list
    frozen: tuple = ()

    @classmethod
    def identity(cls, F):
        return cls([np.eye(3)], [np.arange(F)])

    @classmethod
    def from_seed(cls, spec, normals, offsets, frozen=(), tol=1e-6):
        mats = point_group(spec) if isinstance(spec, str) else list(spec)
        N = np.asarray(normals, float)
        D = np.asarray(offsets, float)
        perms = []
        for R in mats:
            RN = N @ R.T
            perm = np.empty(len(N), dtype=int)
            for i in range(len(N)):
                err = np.linalg.norm(N - RN[i], axis=1) + np.abs(D - D[i]) / max(abs(D).max(), 1)
                j = int(err.argmin())
                if err[j] > tol:
                    raise ValueError(f"seed is not invariant under the {spec} action (face {i})")
                perm[i] = j
            if len(set(perm)) != len(perm):
                raise ValueError("symmetry does not permute faces")
            perms.append(perm)
        return cls(mats, perms, tuple(frozen))

    @classmethod
    def from_automorphisms(cls, autos, normals=None, frozen=()):
        """Symmetry from combinatorial automorphisms ``[(perm, reverses), ...]``.

        The isometry for each automorphism is refitted to the current
        normals (orthogonal Procrustes) whenever :meth:`fit` is called, so
        the seed need not be symmetric.
        """
        sym = cls([np.eye(3)] * len(autos), [np.asarray(p) for p, _ in autos], tuple(frozen))
        sym.reverses = [bool(r) for _, r in autos]
        if normals is not None:
            sym.fit(normals)
        return sym

    def fit(self, N):
        rev = getattr(self, "reverses", None)
        if rev is None:
            return
        mats = []
        for perm, flip in zip(self.perms, rev):
            M = N[perm].T @ N
            U, _, Vt = np.linalg.svd(M)
            S = np.eye(3)
            S[2, 2] = (-1.0 if flip else 1.0) * np.sign(np.linalg.det(U @ Vt))
            mats.append(U @ S @ Vt)
        self.matrices = mats

    def project(self, N, D):
        """Average over the group (Reynolds projection) on plane parameters."""
        if len(self.matrices) == 1:
            return N, D
        Ns = np.zeros_like(N)
        Ds = np.zeros_like(D)
        for R, perm in zip(self.matrices, self.perms):
            Ns[..., perm, :] += N @ R.T
            Ds[..., perm] += D
        k = len(self.matrices)
        return Ns / k, Ds / k


# ---------------------------------------------------------------------------
# projected gradient descent


@dataclass
class OptimizeResult:
    polyhedron: Polyhedron
    cost: float
    area: float
    trace: list
    iterations: int
    converged: bool
    lindelof: LindelofReport | None
    seed_index: int = 0
    restarts: list = field(default_factory=list)


class _Problem:
    def __init__(self, model, sym, seed_normals):
        self.m = model
        self.sym = sym
        self.frozen = np.array(sym.frozen, dtype=int)
        self.seed_normals = np.array(seed_normals, float)
        F = model.F
        self.F = F
        self.free = np.ones(4 * F, dtype=bool)
        for f in self.frozen:
            self.free[3 * f:3 * f + 3] = False

    def unpack(self, x):
        F = self.F
        N = x[..., : 3 * F].reshape(x.shape[:-1] + (F, 3))
        D = x[..., 3 * F:]
        return N, D

    def pack(self, N, D):
        return np.concatenate([N.reshape(N.shape[:-2] + (-1,)), D], axis=-1)

    def normalize(self, N, D):
        N = N / np.linalg.norm(N, axis=-1, keepdims=True)
        if len(self.frozen):
            N = N.copy()
            N[..., self.frozen, :] = self.seed_normals[self.frozen]
        return N, D

    def f(self, x):
        N, D = self.normalize(*self.unpack(x))
        return self.m.cost(N, D)

    def project(self, x):
        N, D = self.normalize(*self.unpack(x))
        self.sym.fit(N)
        N, D = self.sym.project(N, D)
        N, D = self.normalize(N, D)
        # gauge: insphere center to origin, mean offset to one
        try:
            c = _chebyshev_quick(N, D)
        except (LPError, np.linalg.LinAlgError):
            c = np.zeros(3)
        D = D - N @ c
        D = D / D.mean()
        return self.pack(N, D)

    def grad(self, x):
        p = x.size
        h = FD_STEP * np.maximum(1.0, np.abs(x))
        E = np.diag(h)
        X = np.concatenate([x + E, x - E])
        vals = self.f(X)
        with np.errstate(invalid="ignore"):
            g = (vals[:p] - vals[p:]) / (2 * h)
        # a stencil point outside the type gives no information
        g[~np.isfinite(g)] = 0.0
        g[~self.free] = 0.0
        N, D = self.unpack(g)
        N, D = self.sym.project(N, D)
        g = self.pack(N, D)
        g[~self.free] = 0.0
        return g


def _chebyshev_quick(N, D):
    """Chebyshev center by one simplex solve (no tie-breaking)."""
    x0 = np.zeros(3)
    b = D - N @ x0
    if np.any(b <= 0):
        raise LPError("origin not interior")
    s = b.max()
    A = np.hstack([N, -N, np.ones((len(N), 1))])
    obj = np.zeros(7)
    obj[-1] = 1.0
    z, _ = simplex_max(obj, A, b / s)
    return (z[:3] - z[3:6]) * s


def minimize_within_type(
    t: CombinatorialType,
    seed,
    symmetry: Symmetry | None = None,
    *,
    restarts: int = 1,
    perturbation: float = 0.03,
    max_iter: int = 20000,
    rel_tol: float = 1e-12,
    window: int = 100,
    lindelof_tol: float = 1e-5,
    seed_offset: int = 0,
    name: str = "",
):
    """Locally minimize ``A^3/V^2`` over face planes of a fixed type.

    Parameters
    ----------
    t : CombinatorialType
    seed : TypeEmbedding or Polyhedron
        Starting planes; must realize ``t``.
    symmetry : Symmetry, optional
        Group constraint applied as a projection after every step.
    restarts : int
        Number of runs. Run ``k`` starts from the seed perturbed with
        ``numpy.random.default_rng(seed_offset + k)`` (run 0 of a
        ``seed_offset=0`` batch is the unperturbed seed) and symmetrized.

    Returns
    -------
    OptimizeResult
        Best run (lowest cost, ties broken by seed index), rescaled to
        unit volume with the insphere center at the origin.

    Raises
    ------
    CombinatoricsBrokenError
        Every run degenerated (an edge shrank below ``1e-7`` of the span).
    NoConvergenceError
        Every run hit ``max_iter`` without meeting the stopping rule.
    """
    if isinstance(seed, Polyhedron):
        seed = TypeEmbedding.from_polyhedron(seed)
    model = TypeModel(t)
    sym = symmetry or Symmetry.identity(model.F)
    prob = _Problem(model, sym, seed.normals)
    runs, errors = [], []
    for k in range(restarts):
        idx = seed_offset + k
        N0 = np.array(seed.normals, float)
        D0 = np.array(seed.offsets, float)
        if idx:
            rng = np.random.default_rng(idx)
            N0 = N0 + perturbation * rng.standard_normal(N0.shape)
            D0 = D0 * (1 + perturbation * rng.standard_normal(D0.shape))
        x0 = prob.project(prob.pack(N0, D0))
        try:
            runs.append(_descend(prob, x0, idx, max_iter, rel_tol, window, lindelof_tol, name))
        except (CombinatoricsBrokenError, NoConvergenceError) as exc:
            log.info("restart %d failed: %s", idx, exc)
            errors.append(exc)
    if not runs:
        raise errors[0]
    best = min(runs, key=lambda r: (round(r.cost, 10), r.seed_index))
    best.restarts = [(r.seed_index, r.area) for r in runs]
    return best


def _descend(prob, x, idx, max_iter, rel_tol, window, lindelof_tol, name):
    fx = float(prob.f(x))
    if not np.isfinite(fx):
        raise CombinatoricsBrokenError("seed does not realize the type")
    trace = [fx]
    g = prob.grad(x)
    step = 1e-3 / max(np.linalg.norm(g), 1e-300)
    x_prev = g_prev = None
    converged = False
    blocked = len(prob.frozen) > 0
    it = 0
    for it in range(1, max_iter + 1):
        if x_prev is not None:
            s, y = x - x_prev, g - g_prev
            sy = s @ y
            if sy > 0:
                step = (s @ s) / sy
        accepted = False
        gg = g @ g
        for _ in range(60):
            xn = prob.project(x - step * g)
            fn = float(prob.f(xn))
            if np.isfinite(fn) and fn <= fx - 1e-4 * step * gg:
                accepted = True
                break
            step *= 0.5
        if accepted:
            x_prev, g_prev = x, g
            x, fx = xn, fn
            N, D = prob.normalize(*prob.unpack(x))
            min_edge = prob.m.evaluate(N, D)[3]
            if min_edge < DEGENERATE_EDGE_RTOL:
                raise CombinatoricsBrokenError(
                    f"edge collapsed (relative length {min_edge:.2e}) in restart {idx}"
                )
            g = prob.grad(x)
        # a failed line search means no representable descent remains
        trace.append(fx)
        flat = len(trace) > window and (trace[-window - 1] - fx) <= rel_tol * fx
        if flat or not accepted:
            poly = _finish(prob, x, name)
            rep = lindelof_check(poly)
            if blocked or rep.max_residual < lindelof_tol:
                converged = True
                break
            if not accepted:
                break
    if not converged:
        raise NoConvergenceError(f"restart {idx}: no convergence after {it} iterations (cost {fx:.12g})")
    return OptimizeResult(
        polyhedron=poly,
        cost=fx,
        area=fx ** (1 / 3),
        trace=trace,
        iterations=it,
        converged=True,
        lindelof=rep,
        seed_index=idx,
    )


def _finish(prob, x, name):
    N, D = prob.normalize(*prob.unpack(x))
    p = prob.m.polyhedron(N, D, name)
    p = p.scaled(p.signed_volume() ** (-1 / 3))
    ball = insphere(p)
    return p.translated(-ball.center)


# ---------------------------------------------------------------------------
# truncation experiment


def truncation_experiment(p: Polyhedron, v: int, steps: int = 8, t_max=None):
    """Cost after cutting vertex ``v`` at geometrically shrinking depths.

    Depths are ``t_max / steps * 10**-k`` for ``k = 0 .. steps-1``;
    ``t_max`` defaults to a tenth of the shortest edge at ``v``.

    Returns
    -------
    rows : list of (t, cost)
    slope : float
        One-sided difference quotient ``(cost(t) - cost(0)) / t`` at the
        smallest depth, an estimate of the derivative at ``0+``.
    base : float
        Cost of the untruncated polyhedron.
    """
    if steps < 2:
        raise ValueError("need at least two steps")
    base = measures(p).cost
    if t_max is None:
        nbr = [b if a == v else a for a, b in p.edges if v in (a, b)]
        t_max = 0.1 * min(np.linalg.norm(p.vertices[nbr] - p.vertices[v], axis=1))
    rows = []
    for k in range(steps):
        t = t_max / steps * 10.0 ** (-k)
        try:
            q = truncate_vertex(p, v, t)
        except CutTooDeepError:
            continue
        rows.append((t, measures(q).cost))
    if not rows:
        raise CutTooDeepError("every requested depth cuts past a neighbouring vertex")
    t1, c1 = rows[-1]
    return rows, (c1 - base) / t1, base
