"""Convex polytopes in two and three dimensions.

A :class:`ConvexBody` carries both the halfspace and the vertex description of
a bounded polytope. Everything downstream (meshing, erosion, the profile
construction) relies on the two descriptions agreeing, so bodies are only ever
created through :func:`build_body` or :func:`erode`.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError

from .errors import (
    DegenerateBody,
    DimensionUnsupported,
    EmptyErosion,
    InputError,
    LPFailure,
    OutsideBody,
    Unbounded,
)
from .lp import chebyshev_center

EPS_GEOM = 1e-9  # relative to diameter
EPS_REL = 1e-6

# internal tolerances for vertex enumeration, relative to the body scale
_SOLVE_DET = 1e-9
_TIGHT = 1e-12
_MERGE = 1e-13

N_WIDTH_DIRECTIONS = 2048


@dataclass(frozen=True, eq=False)
class ConvexBody:
    dim: int
    normals: np.ndarray  # (m, n) unit outward normals
    offsets: np.ndarray  # (m,)
    vertices: np.ndarray  # (k, n)
    facets: tuple  # per halfspace: ordered tuple of vertex indices
    provenance: Any = "explicit"
    _incircle: Optional[tuple] = field(default=None, repr=False)

    @property
    def n_facets(self) -> int:
        return len(self.offsets)

    @cached_property
    def diameter(self) -> float:
        V = self.vertices
        diff = V[:, None, :] - V[None, :, :]
        return float(np.sqrt((diff ** 2).sum(-1).max()))

    @property
    def eps(self) -> float:
        return EPS_GEOM * self.diameter

    @cached_property
    def plane_bases(self) -> np.ndarray:
        return _plane_bases(self.normals)

    @cached_property
    def facet_measures(self) -> np.ndarray:
        tol = 10 * _MERGE * self.diameter
        return np.array([_facet_polygon(self.vertices[list(f)], B, tol)[1]
                         for f, B in zip(self.facets, self.plane_bases)])

    @cached_property
    def perimeter(self) -> float:
        return float(self.facet_measures.sum())

    @cached_property
    def volume(self) -> float:
        if self.dim == 2:
            return _shoelace(self.vertices[list(self.boundary_cycle)])
        # divergence theorem over facets, relative to the vertex centroid
        c = self.vertices.mean(axis=0)
        heights = self.offsets - self.normals @ c
        return float((heights * self.facet_measures).sum() / 3.0)

    @cached_property
    def boundary_cycle(self) -> tuple:
        """Vertex indices in counter-clockwise order (2-D only)."""
        if self.dim != 2:
            raise DimensionUnsupported("boundary cycle is defined for polygons only")
        V = self.vertices
        c = V.mean(axis=0)
        ang = np.arctan2(V[:, 1] - c[1], V[:, 0] - c[0])
        return tuple(int(i) for i in np.argsort(ang, kind="stable"))

    @cached_property
    def vertex_solver(self) -> tuple:
        return _vertex_solver(self.normals)

    @cached_property
    def chebyshev(self) -> tuple:
        if self._incircle is not None:
            return self._incircle
        try:
            center, r = chebyshev_center(self.normals, self.offsets)
        except LPFailure as exc:
            raise LPFailure(f"Chebyshev LP failed: {exc}") from exc
        if r <= self.eps:
            raise LPFailure("Chebyshev radius is not positive")
        return np.asarray(center), float(r)

    @property
    def inradius(self) -> float:
        return self.chebyshev[1]

    @property
    def incenter(self) -> np.ndarray:
        return self.chebyshev[0]

    def to_json(self) -> dict:
        hs = np.hstack([self.normals, self.offsets[:, None]])
        return {"dim": self.dim, "halfspaces": hs.tolist(), "vertices": self.vertices.tolist()}

    def scaled(self, s: float) -> "ConvexBody":
        return build_body(halfspaces=np.hstack([self.normals, s * self.offsets[:, None]]),
                          dim=self.dim, provenance=self.provenance)

    def translated(self, v) -> "ConvexBody":
        v = np.asarray(v, dtype=float)
        return build_body(vertices=self.vertices + v, dim=self.dim, provenance=self.provenance)


@dataclass(frozen=True)
class GeometrySummary:
    n: int
    volume: float
    perimeter: float
    inradius: float
    incenter: tuple
    minwidth: float
    minwidth_error: float
    diameter: float
    alpha: float
    beta: float
    gamma: float

    @property
    def pr_ratio(self) -> float:
        return self.perimeter * self.inradius / self.volume

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["incenter"] = list(self.incenter)
        return d


# ---------------------------------------------------------------------------
# low-level helpers
# ---------------------------------------------------------------------------

def _shoelace(P: np.ndarray) -> float:
    x, y = P[:, 0], P[:, 1]
    xs = np.concatenate([x[1:], x[:1]])
    ys = np.concatenate([y[1:], y[:1]])
    return float(0.5 * abs(x @ ys - y @ xs))


def _plane_bases(A: np.ndarray) -> np.ndarray:
    """Orthonormal in-plane bases for each row normal of ``A``; shape (m, n-1, n)."""
    m, n = A.shape
    if n == 2:
        return np.stack([-A[:, 1], A[:, 0]], axis=1)[:, None, :]
    helper = np.eye(3)[np.argmin(np.abs(A), axis=1)]
    e1 = np.cross(A, helper)
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    e2 = np.cross(A, e1)
    return np.stack([e1, e2], axis=1)


def _facet_polygon(points: np.ndarray, basis: np.ndarray, tol: float):
    """Order the tight points of one facet and return ``(order, measure)``.

    The measure is zero when the points do not span an (n-1)-face.
    """
    q = points @ basis.T
    if q.shape[1] == 1:
        order = np.argsort(q[:, 0], kind="stable")
        length = float(q[order[-1], 0] - q[order[0], 0])
        return order, (length if length > tol else 0.0)
    if len(points) < 3:
        return np.arange(len(points)), 0.0
    c = q.mean(axis=0)
    order = np.argsort(np.arctan2(q[:, 1] - c[1], q[:, 0] - c[0]), kind="stable")
    area = _shoelace(q[order])
    extent = float(np.ptp(q, axis=0).max())
    return order, (area if area > tol * extent else 0.0)


def _affine_rank(points: np.ndarray, tol: float) -> int:
    if len(points) < 2:
        return 0
    s = np.linalg.svd(points - points.mean(axis=0), compute_uv=False)
    return int((s > tol).sum())


def _merge_points(P: np.ndarray, tol: float) -> np.ndarray:
    """Collapse points closer than ``tol`` (deterministic: first one wins)."""
    if len(P) == 0:
        return P
    order = np.lexsort(P.T[::-1])
    P = P[order]
    keep: list[np.ndarray] = []
    for p in P:
        if not keep:
            keep.append(p)
            continue
        K = np.asarray(keep)
        # only compare against the recent window in the first coordinate
        near = np.abs(K[:, 0] - p[0]) <= tol
        if near.any() and (np.abs(K[near] - p).max(axis=1) <= tol).any():
            continue
        keep.append(p)
    return np.asarray(keep)


@lru_cache(maxsize=64)
def _combinations(m: int, n: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(m), n)), dtype=np.intp)


def _vertex_solver(A: np.ndarray):
    """Index sets of independent n-subsets of rows and their inverse matrices.

    Offsets change under erosion but normals do not, so bodies cache this.
    """
    m, n = A.shape
    combos = _combinations(m, n)
    M = A[combos]
    if n == 2:
        det = M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
        adj = np.stack([np.stack([M[:, 1, 1], -M[:, 0, 1]], -1),
                        np.stack([-M[:, 1, 0], M[:, 0, 0]], -1)], 1)
    elif n == 3:
        c0 = np.cross(M[:, 1], M[:, 2])
        c1 = np.cross(M[:, 2], M[:, 0])
        c2 = np.cross(M[:, 0], M[:, 1])
        det = np.einsum("kd,kd->k", M[:, 0], c0)
        adj = np.stack([c0, c1, c2], axis=2)  # columns are the adjugate columns
    else:
        det = np.linalg.det(M)
        adj = None
    ok = np.abs(det) > _SOLVE_DET
    if adj is None:
        inv = np.linalg.inv(M[ok])
    else:
        inv = adj[ok] / det[ok][:, None, None]
    return combos[ok], inv


def _enumerate_vertices(A: np.ndarray, b: np.ndarray, scale: float, solver=None) -> np.ndarray:
    """All feasible intersections of ``n`` independent constraint hyperplanes."""
    m, n = A.shape
    combos, inv = _vertex_solver(A) if solver is None else solver
    if len(combos) == 0:
        return np.zeros((0, n))
    X = np.einsum("kij,kj->ki", inv, b[combos])
    slack = X @ A.T - b
    feas = (slack <= _TIGHT * scale).all(axis=1)
    # the explicit inverse is not backward stable for nearly coplanar normals;
    # one refinement step fixes the residual of near-feasible candidates
    near = ~feas & (slack <= 1e-6 * scale).all(axis=1)
    if near.any():
        idx = np.nonzero(near)[0]
        Ak = A[combos[idx]]
        resid = b[combos[idx]] - np.einsum("kij,kj->ki", Ak, X[idx])
        X[idx] += np.einsum("kij,kj->ki", inv[idx], resid)
        slack[idx] = X[idx] @ A.T - b
        feas[idx] = (slack[idx] <= _TIGHT * scale).all(axis=1)
    X = X[feas]
    # coarse dedupe first (degenerate apexes produce many copies)
    if len(X) > 1:
        key = np.round(X / (_MERGE * scale * 10.0)).astype(np.int64)
        _, first = np.unique(key, axis=0, return_index=True)
        X = X[np.sort(first)]
    return _merge_points(X, _MERGE * scale)


def _assemble(A: np.ndarray, b: np.ndarray, V: np.ndarray, scale: float, provenance,
              incircle=None, bases=None, dedupe: bool = True) -> ConvexBody:
    n = A.shape[1]
    tight_tol = _TIGHT * scale
    size_tol = 10 * _MERGE * scale
    if bases is None:
        bases = _plane_bases(A)
    keep_rows, facets, measures = [], [], []
    seen = []
    tight_all = np.abs(V @ A.T - b) <= tight_tol
    for i in range(len(b)):
        if dedupe:
            key = np.r_[A[i], b[i] / scale]
            if any(np.abs(key - s).max() < 1e-10 for s in seen):
                continue
            seen.append(key)
        tight = np.nonzero(tight_all[:, i])[0]
        if len(tight) < n:
            continue
        order, meas = _facet_polygon(V[tight], bases[i], size_tol)
        if meas == 0.0:
            continue
        keep_rows.append(i)
        facets.append(tuple(int(t) for t in tight[order]))
        measures.append(meas)
    if len(keep_rows) < n + 1:
        raise DegenerateBody("fewer than n+1 facets survive")
    body = ConvexBody(dim=n, normals=A[keep_rows].copy(), offsets=b[keep_rows].copy(),
                      vertices=V, facets=tuple(facets), provenance=provenance,
                      _incircle=incircle)
    body.__dict__["facet_measures"] = np.array(measures)
    body.__dict__["plane_bases"] = bases[keep_rows]
    return body


def _check_bounded(A: np.ndarray) -> None:
    n = A.shape[1]
    try:
        hull = ConvexHull(A)
    except (QhullError, ValueError) as exc:
        raise Unbounded("facet normals do not positively span the space") from exc
    # origin must be strictly inside the hull of the normals
    if not (hull.equations[:, -1] < -1e-12).all():
        raise Unbounded("halfspace intersection is unbounded")
    if hull.points.shape[1] != n:
        raise Unbounded("halfspace intersection is unbounded")


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def build_body(halfspaces=None, vertices=None, dim: Optional[int] = None,
               provenance: Any = "explicit") -> ConvexBody:
    """Build a polytope from halfspaces ``[a..., b]`` (a·x <= b) or from points.

    When both are given the vertex list wins and the halfspaces are recomputed.
    """
    if vertices is not None and len(vertices):
        return _from_vertices(np.asarray(vertices, dtype=float), dim, provenance)
    if halfspaces is None or len(halfspaces) == 0:
        raise InputError("need halfspaces or vertices")
    H = np.asarray(halfspaces, dtype=float)
    n = H.shape[1] - 1
    if dim is not None and dim != n:
        raise InputError(f"halfspaces have dimension {n}, expected {dim}")
    if n not in (2, 3):
        raise DimensionUnsupported(f"explicit bodies need dim 2 or 3, got {n}")
    A, b = H[:, :n], H[:, n]
    norms = np.linalg.norm(A, axis=1)
    if (norms == 0).any():
        raise InputError("zero normal in halfspace list")
    A, b = A / norms[:, None], b / norms
    _check_bounded(A)
    try:
        center, r = chebyshev_center(A, b)
    except LPFailure as exc:
        raise DegenerateBody(f"empty halfspace intersection: {exc}") from exc
    scale = max(1.0, float(np.abs(center).max()), r)
    if r <= EPS_GEOM * scale:
        raise DegenerateBody("halfspace intersection has empty interior")
    V = _enumerate_vertices(A, b, scale)
    scale = max(r, float(np.ptp(V, axis=0).max()))
    return _assemble(A, b, V, scale, provenance, incircle=(center, r))


def _from_vertices(P: np.ndarray, dim, provenance) -> ConvexBody:
    n = P.shape[1]
    if dim is not None and dim != n:
        raise InputError(f"vertices have dimension {n}, expected {dim}")
    if n not in (2, 3):
        raise DimensionUnsupported(f"explicit bodies need dim 2 or 3, got {n}")
    span = float(np.ptp(P, axis=0).max()) if len(P) else 0.0
    if len(P) < n + 1 or span == 0.0 or _affine_rank(P, EPS_GEOM * span) < n:
        raise DegenerateBody("points do not span the space")
    hull = _qhull(P)
    body = _body_from_hull(hull, span, provenance)
    if _agrees_with_hull(body, hull):
        return body
    # points within the merge tolerance of an edge make qhull emit sliver facets;
    # strip such points and rebuild, then insist on agreement with qhull
    hull = _qhull(_strip_near_hull_points(P[hull.vertices], 1e-9 * span))
    body = _body_from_hull(hull, span, provenance)
    if not _agrees_with_hull(body, hull):
        raise DegenerateBody("hull is too degenerate for a consistent facet structure")
    return body


def _qhull(P: np.ndarray) -> ConvexHull:
    try:
        return ConvexHull(P)
    except QhullError as exc:
        raise DegenerateBody(str(exc)) from exc


def _agrees_with_hull(body: ConvexBody, hull: ConvexHull, rel: float = 1e-9) -> bool:
    return (abs(body.volume - hull.volume) <= rel * hull.volume
            and abs(body.perimeter - hull.area) <= rel * hull.area)


def _strip_near_hull_points(V: np.ndarray, tol: float) -> np.ndarray:
    """Drop points lying within ``tol`` of every facet plane of the others' hull."""
    keep = np.ones(len(V), dtype=bool)
    for i in range(len(V)):
        others = V[keep & (np.arange(len(V)) != i)]
        try:
            eq = ConvexHull(others).equations
        except QhullError:
            continue
        if (eq[:, :-1] @ V[i] + eq[:, -1]).max() <= tol:
            keep[i] = False
    return V[keep]


def _body_from_hull(hull: ConvexHull, span: float, provenance) -> ConvexBody:
    P = hull.points
    n = P.shape[1]
    V = P[hull.vertices]
    eq = hull.equations
    A = eq[:, :n]
    b = -eq[:, n]
    # qhull triangulates facets in 3-D; recompute each plane from its tight vertices
    planes = []
    for a, off in zip(A, b):
        if any(np.abs(a - p[:n]).max() < 1e-7 and abs(off - p[n]) < 1e-7 * span for p in planes):
            continue
        planes.append(np.r_[a, off])
    A = np.array([p[:n] for p in planes])
    b = np.array([p[n] for p in planes])
    tol = 1e-9 * span
    # after merging, a hull vertex lying on fewer than n planes sits inside a
    # face or an edge; drop it before the planes are refit through the vertices
    V = V[(np.abs(V @ A.T - b) <= tol).sum(axis=1) >= n]
    for i in range(len(b)):
        tight = np.abs(V @ A[i] - b[i]) <= tol
        Q = V[tight]
        if len(Q) >= n:
            # refit the plane through the tight vertices by least squares
            c = Q.mean(axis=0)
            _, _, vt = np.linalg.svd(Q - c)
            a = vt[-1]
            if a @ A[i] < 0:
                a = -a
            A[i], b[i] = a, a @ c
    # snap onto the refit planes with a minimum-norm correction; truncating small
    # singular values keeps nearly parallel planes from moving a vertex far
    T = np.abs(V @ A.T - b) <= tol
    V = np.array([v + np.linalg.lstsq(A[t], b[t] - A[t] @ v, rcond=1e-6)[0] for v, t in zip(V, T)])
    V = _merge_points(V, _MERGE * span)
    return _assemble(A, b, V, span, provenance)


def support_value(body: ConvexBody, direction) -> float:
    u = np.asarray(direction, dtype=float)
    if not np.any(u):
        raise InputError("direction must be nonzero")
    return float((body.vertices @ u).max())


def width(body: ConvexBody, direction) -> float:
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    p = body.vertices @ u
    return float(p.max() - p.min())


def distance_to_boundary(body: ConvexBody, x) -> float:
    x = np.asarray(x, dtype=float)
    d = float((body.offsets - body.normals @ x).min())
    if d < -body.eps:
        raise OutsideBody(f"point {x.tolist()} lies outside the body (d = {d:.3e})")
    return max(d, 0.0)


def facet_distances(body: ConvexBody, X: np.ndarray) -> np.ndarray:
    """Signed distances of points ``X (..., n)`` to each facet plane, shape ``(..., m)``."""
    return body.offsets - X @ body.normals.T


def erode(body: ConvexBody, t: float) -> ConvexBody:
    """Inner parallel body ``{x : d(x) > t}`` (closure), as a new polytope."""
    R = body.inradius
    if t < 0:
        raise InputError("erosion depth must be nonnegative")
    if t >= R:
        raise EmptyErosion(f"t = {t} >= inradius {R}")
    if t == 0:
        return body
    b = body.offsets - t
    scale = body.diameter
    V = _enumerate_vertices(body.normals, b, scale, body.vertex_solver)
    if len(V) < body.dim + 1:
        raise EmptyErosion("eroded body has collapsed")
    center = body.incenter
    prov = {"eroded": t, "from": body.provenance}
    try:
        return _assemble(body.normals, b, V, scale, prov, incircle=(center, R - t),
                         bases=body.plane_bases, dedupe=False)
    except DegenerateBody as exc:
        raise EmptyErosion(f"eroded body at t = {t} is numerically collapsed") from exc


def _fibonacci_hemisphere(N: int) -> np.ndarray:
    i = np.arange(N) + 0.5
    z = i / N  # upper hemisphere only: width is even in the direction
    phi = math.pi * (3.0 - math.sqrt(5.0)) * np.arange(N)
    r = np.sqrt(1 - z ** 2)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


_COVER_CACHE: dict = {}


def _covering_radius(U: np.ndarray) -> float:
    """Empirical covering radius of the antipodally symmetric set ``±U``."""
    key = len(U)
    if key not in _COVER_CACHE:
        rng = np.random.default_rng(12345)
        probe = rng.normal(size=(20000, 3))
        probe /= np.linalg.norm(probe, axis=1)[:, None]
        cos = np.abs(probe @ U.T).max(axis=1)
        chord = np.sqrt(np.maximum(0.0, 2 - 2 * cos.min()))
        _COVER_CACHE[key] = float(1.25 * chord)  # safety factor for unprobed gaps
    return _COVER_CACHE[key]


def minimal_width(body: ConvexBody) -> tuple[float, float, np.ndarray]:
    """Return ``(w, error_bound, direction)``.

    Exact for polygons (attained at an edge normal). In 3-D: quasi-uniform
    direction sampling plus Nelder-Mead refinement; the error bound uses the
    fact that the width function is diam-Lipschitz on the sphere.
    """
    V = body.vertices
    if body.dim == 2:
        widths = body.offsets - (V @ body.normals.T).min(axis=0)
        i = int(np.argmin(widths))
        return float(widths[i]), 0.0, body.normals[i]
    U = _fibonacci_hemisphere(N_WIDTH_DIRECTIONS)
    cand = np.vstack([U, body.normals])
    P = V @ cand.T
    widths = P.max(axis=0) - P.min(axis=0)
    sample_min = float(widths[:len(U)].min())

    def wfun(angles):
        th, ph = angles
        u = np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
        p = V @ u
        return p.max() - p.min()

    best_w, best_u = float(widths.min()), cand[int(np.argmin(widths))]
    for j in np.argsort(widths, kind="stable")[:5]:
        u = cand[j]
        x0 = [math.acos(np.clip(u[2], -1, 1)), math.atan2(u[1], u[0])]
        res = minimize(wfun, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 400})
        if res.fun < best_w:
            th, ph = res.x
            best_w = float(res.fun)
            best_u = np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
    lower = max(2.0 * body.inradius, sample_min - body.diameter * _covering_radius(U))
    return best_w, max(0.0, best_w - lower), best_u


def summarize(body: ConvexBody) -> GeometrySummary:
    n = body.dim
    vol, per = body.volume, body.perimeter
    center, R = body.chebyshev
    w, werr, _ = minimal_width(body)
    diam = body.diameter
    ratio = per * R / vol
    return GeometrySummary(
        n=n, volume=vol, perimeter=per, inradius=R, incenter=tuple(float(c) for c in center),
        minwidth=w, minwidth_error=werr, diameter=diam, alpha=w / diam,
        beta=ratio - 1.0, gamma=n - ratio,
    )


def profile_values(body: ConvexBody, t: float) -> tuple[float, float]:
    """(mu(t), P(t)) for the inner parallel body at depth t."""
    if t == 0:
        return body.volume, body.perimeter
    try:
        Bt = erode(body, t)
    except EmptyErosion:
        if t < body.inradius * (1 - 1e-6):
            raise
        return _collapsed_measures(body, t)
    return Bt.volume, Bt.perimeter


def _collapsed_measures(body: ConvexBody, t: float) -> tuple[float, float]:
    """Measures of an inner parallel body within 1e-6 R of collapse.

    Falls back on qhull for the (tiny) hull of the offset vertices; a flat
    remainder counts both of its sides towards the perimeter.
    """
    V = _enumerate_vertices(body.normals, body.offsets - t, body.diameter, body.vertex_solver)
    n = body.dim
    if len(V) < n:
        return 0.0, 0.0
    span = float(np.ptp(V, axis=0).max())
    rank = _affine_rank(V, 1e-3 * span) if span > 0 else 0
    if rank == n:
        try:
            h = ConvexHull(V)
            return float(h.volume), float(h.area)
        except QhullError:
            pass
    if rank >= n - 1 and n == 3:
        c = V.mean(axis=0)
        _, _, vt = np.linalg.svd(V - c)
        q = (V - c) @ vt[:2].T
        try:
            return 0.0, 2.0 * float(ConvexHull(q).volume)
        except QhullError:
            return 0.0, 0.0
    if rank >= 1 and n == 2:
        diff = V[:, None, :] - V[None, :, :]
        return 0.0, 2.0 * float(np.sqrt((diff ** 2).sum(-1).max()))
    return 0.0, 0.0


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def body_from_json(obj: dict) -> ConvexBody:
    if "dim" not in obj:
        raise InputError("polytope JSON needs a 'dim' key")
    dim = int(obj["dim"])
    hs, vs = obj.get("halfspaces"), obj.get("vertices")
    if not hs and not vs:
        raise InputError("polytope JSON needs 'halfspaces' or 'vertices'")
    if vs:
        body = build_body(vertices=vs, dim=dim)
        if hs:
            # both given: they must describe the same body
            other = build_body(halfspaces=hs, dim=dim)
            if abs(other.volume - body.volume) > 1e-7 * body.volume:
                raise InputError("halfspaces and vertices describe different bodies")
        return body
    return build_body(halfspaces=hs, dim=dim)


def load_body(path) -> ConvexBody:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read polytope file {path}: {exc}") from exc
    return body_from_json(obj)


def unit_square() -> ConvexBody:
    return build_body(vertices=[(0, 0), (1, 0), (1, 1), (0, 1)])


def unit_cube() -> ConvexBody:
    return build_body(vertices=list(itertools.product((0.0, 1.0), repeat=3)))


def equilateral_triangle(side: float = 1.0) -> ConvexBody:
    h = side * math.sqrt(3) / 2
    return build_body(vertices=[(0, 0), (side, 0), (side / 2, h)])


def regular_polygon(m: int, circumradius: float = 1.0) -> ConvexBody:
    ang = 2 * math.pi * np.arange(m) / m
    return build_body(vertices=np.stack([np.cos(ang), np.sin(ang)], axis=1) * circumradius)


def circumscribed_polygon(m: int, inradius: float = 1.0) -> ConvexBody:
    ang = 2 * math.pi * np.arange(m) / m
    H = np.stack([np.cos(ang), np.sin(ang), np.full(m, inradius)], axis=1)
    return build_body(halfspaces=H)


def as_points(seq: Sequence) -> np.ndarray:
    return np.asarray(seq, dtype=float)
