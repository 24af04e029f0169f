"""P1 finite elements for the torsion problem -Δu = 1, u = 0 on the boundary.

Conforming linear elements on a mesh that covers the polytope exactly give a
value T_h that can only underestimate the true torsional rigidity, which is
what makes the one-sided inequality checks downstream safe.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, cg

from .errors import InputError, MeshBudgetExceeded, NotThinRepresentable, SolverDiverged
from .families import FamilySpec, ball_volume, box_extent
from .geometry import (
    ConvexBody, _enumerate_vertices, _facet_polygon, _plane_bases, facet_distances, minimal_width,
)

DEFAULT_NODE_CAP = 2_000_000
DEFAULT_CG_TOL = 1e-10


def node_cap() -> int:
    return int(os.environ.get("MAKAI_NODE_CAP", DEFAULT_NODE_CAP))


@dataclass
class Mesh:
    dim: int
    nodes: np.ndarray  # (N, n)
    cells: np.ndarray  # (K, n+1)
    boundary_nodes: np.ndarray = field(default=None)
    level: int = 0

    def __post_init__(self):
        if self.boundary_nodes is None:
            self.boundary_nodes = _boundary_nodes(self.cells, self.dim)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def h_max(self) -> float:
        X = self.nodes[self.cells]
        n = self.dim
        h = 0.0
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                h = max(h, float(np.sqrt(((X[:, i] - X[:, j]) ** 2).sum(axis=1)).max()))
        return h

    def signed_volumes(self) -> np.ndarray:
        X = self.nodes[self.cells]
        D = X[:, 1:] - X[:, :1]
        return np.linalg.det(D) / math.factorial(self.dim)

    def cell_volumes(self) -> np.ndarray:
        return np.abs(self.signed_volumes())

    def to_json(self) -> dict:
        return {"nodes": self.nodes.tolist(), "cells": self.cells.tolist()}


@dataclass
class TorsionSolution:
    mesh: Mesh
    u: np.ndarray
    T_h: float
    residual: float
    refinement_level: int
    energy: float
    iterations: int = 0


# ---------------------------------------------------------------------------
# meshing
# ---------------------------------------------------------------------------

def _faces(cells: np.ndarray, n: int) -> np.ndarray:
    idx = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    F = np.concatenate([cells[:, ix] for ix in idx], axis=0)
    return np.sort(F, axis=1)


def _boundary_nodes(cells: np.ndarray, n: int) -> np.ndarray:
    F = _faces(cells, n)
    uniq, counts = np.unique(F, axis=0, return_counts=True)
    return np.unique(uniq[counts == 1])


def _fan_mesh(body: ConvexBody) -> Mesh:
    """Cone from the incenter over the (triangulated) facets."""
    c = body.incenter
    V = body.vertices
    nodes = np.vstack([V, c[None, :]])
    ci = len(V)
    cells = []
    for f in body.facets:
        if body.dim == 2:
            cells.append((ci, f[0], f[-1]))
        else:
            for j in range(1, len(f) - 1):
                cells.append((ci, f[0], f[j], f[j + 1]))
    cells = np.array(cells, dtype=np.int64)
    mesh = Mesh(body.dim, nodes, cells)
    return _orient(mesh)


def _orient(mesh: Mesh) -> Mesh:
    vol = mesh.signed_volumes()
    flip = vol < 0
    if flip.any():
        cells = mesh.cells.copy()
        cells[flip, -2], cells[flip, -1] = mesh.cells[flip, -1], mesh.cells[flip, -2]
        mesh = Mesh(mesh.dim, mesh.nodes, cells, mesh.boundary_nodes, mesh.level)
    return mesh


def _columns_mesh(body: ConvexBody, h: float, min_layers: int = 4) -> Mesh:
    """Structured mesh of a thin polygon, columns across its minimal width.

    Vertical lines pass through every vertex, so the polygon is covered
    exactly; cells stay close to right triangles however thin the polygon.
    """
    _, _, u = minimal_width(body)
    u = u / np.linalg.norm(u)
    e = np.array([u[1], -u[0]])
    Rot = np.stack([e, u])  # rows: along-length axis, thickness axis
    V = body.vertices @ Rot.T
    A = body.normals @ Rot.T
    b = body.offsets - body.normals @ np.zeros(2)
    xs_v = np.unique(np.round(V[:, 0], 14))
    xs = [xs_v[0]]
    for a, c in zip(xs_v[:-1], xs_v[1:]):
        k = max(1, int(math.ceil((c - a) / h)))
        xs.extend(a + (c - a) * np.arange(1, k + 1) / k)
    xs = np.array(xs)

    def bounds(x):
        up, lo = np.inf, -np.inf
        for (ax, ay), bb in zip(A, b):
            if ay > 1e-14:
                up = min(up, (bb - ax * x) / ay)
            elif ay < -1e-14:
                lo = max(lo, (bb - ax * x) / ay)
        return lo, up

    thick = max(up - lo for lo, up in (bounds(x) for x in xs))
    ny = max(min_layers, int(math.ceil(thick / h)))
    scale = float(np.ptp(V, axis=0).max())
    nodes, line_ids = [], []
    for x in xs:
        lo, up = bounds(x)
        if up - lo <= 1e-12 * scale:
            line_ids.append([len(nodes)] * (ny + 1))
            nodes.append((x, 0.5 * (lo + up)))
        else:
            ids = []
            for j in range(ny + 1):
                ids.append(len(nodes))
                nodes.append((x, lo + (up - lo) * j / ny))
            line_ids.append(ids)
    cells = []
    for L, Rr in zip(line_ids[:-1], line_ids[1:]):
        for j in range(ny):
            for tri in ((L[j], Rr[j], Rr[j + 1]), (L[j], Rr[j + 1], L[j + 1])):
                if len(set(tri)) == 3:
                    cells.append(tri)
    nodes = np.array(nodes) @ Rot  # back to world coordinates
    mesh = Mesh(2, nodes, np.array(cells, dtype=np.int64))
    return _orient(mesh)


def graded_axis(a: float, b: float, h: float, h_min: float, growth: float = 1.5) -> np.ndarray:
    """Breakpoints on [a, b]: spacing h_min at both ends, growing geometrically to h."""
    if h_min >= h:
        k = max(1, int(math.ceil((b - a) / h)))
        return np.linspace(a, b, k + 1)
    steps = []
    s = h_min
    while s < h and 2 * (sum(steps) + s) < (b - a) / 2:
        steps.append(s)
        s *= growth
    edge = sum(steps)
    k = max(1, int(math.ceil((b - a - 2 * edge) / h)))
    left = a + np.cumsum([0.0] + steps)
    middle = np.linspace(a + edge, b - edge, k + 1)[1:-1]
    right = (b - np.cumsum([0.0] + steps))[::-1]
    return np.concatenate([left, middle, right])


def box_mesh(lo, hi, divisions: Sequence[int] = None, axes=None) -> Mesh:
    """Kuhn (Freudenthal) tetrahedral/triangular mesh of an axis-aligned box.

    Either uniform ``divisions`` per axis or explicit breakpoint ``axes``.
    """
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    n = lo.size
    if axes is None:
        axes = [np.linspace(lo[i], hi[i], int(divisions[i]) + 1) for i in range(n)]
    axes = [np.asarray(ax, float) for ax in axes]
    divs = [len(ax) - 1 for ax in axes]
    grid = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([g.ravel() for g in grid], axis=1)
    shape = [d + 1 for d in divs]
    strides = np.array([int(np.prod(shape[i + 1:])) for i in range(n)])
    base = np.stack(np.meshgrid(*[np.arange(d) for d in divs], indexing="ij"), axis=-1).reshape(-1, n)
    base_idx = base @ strides
    import itertools
    cells = []
    for perm in itertools.permutations(range(n)):
        verts = [base_idx]
        cur = base_idx.copy()
        for ax in perm:
            cur = cur + strides[ax]
            verts.append(cur)
        cells.append(np.stack(verts, axis=1))
    mesh = Mesh(n, nodes, np.concatenate(cells, axis=0).astype(np.int64))
    return _orient(mesh)


def refine(mesh: Mesh) -> Mesh:
    """Uniform red refinement (Bey's rule in 3-D); the finite element spaces nest."""
    n = mesh.dim
    cells = mesh.cells
    pairs = [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]
    E = np.stack([np.sort(cells[:, [i, j]], axis=1) for i, j in pairs], axis=1)  # (K, ne, 2)
    flat = E.reshape(-1, 2)
    uniq, inv = np.unique(flat, axis=0, return_inverse=True)
    inv = inv.reshape(len(cells), len(pairs))
    N = len(mesh.nodes)
    mids = 0.5 * (mesh.nodes[uniq[:, 0]] + mesh.nodes[uniq[:, 1]])
    nodes = np.vstack([mesh.nodes, mids])
    m = {p: N + inv[:, k] for k, p in enumerate(pairs)}
    v = [cells[:, i] for i in range(n + 1)]
    if n == 2:
        a, b, c = v
        ab, ac, bc = m[(0, 1)], m[(0, 2)], m[(1, 2)]
        children = [(a, ab, ac), (ab, b, bc), (ac, bc, c), (ab, bc, ac)]
    else:
        x0, x1, x2, x3 = v
        x01, x02, x03 = m[(0, 1)], m[(0, 2)], m[(0, 3)]
        x12, x13, x23 = m[(1, 2)], m[(1, 3)], m[(2, 3)]
        children = [
            (x0, x01, x02, x03), (x01, x1, x12, x13), (x02, x12, x2, x23), (x03, x13, x23, x3),
            (x01, x02, x03, x13), (x01, x02, x12, x13), (x02, x03, x13, x23), (x02, x12, x13, x23),
        ]
    new_cells = np.stack([np.stack(ch, axis=1) for ch in children], axis=1).reshape(-1, n + 1)
    # keep the parent-child ordering intact in 3-D; orientation only matters for 2-D output
    out = Mesh(n, nodes, new_cells, level=mesh.level + 1)
    return _orient(out) if n == 2 else out


def _predicted_nodes(mesh: Mesh) -> int:
    return int(mesh.n_nodes * (2 ** mesh.dim) * 1.05)


def mesh_convex(body: ConvexBody, h_target: float, strategy: str = "auto",
                cap: Optional[int] = None) -> Mesh:
    """Exact simplicial cover of ``body`` with longest edge at most ``h_target``.

    ``strategy``: ``fan`` (cone from the incenter, then red refinement),
    ``columns`` (2-D thin polygons), ``box`` (axis-aligned boxes) or ``auto``.
    """
    if body.dim not in (2, 3):
        raise InputError("meshing needs dim 2 or 3")
    if not 0 < h_target < body.diameter:
        raise InputError("h_target must lie in (0, diam)")
    cap = node_cap() if cap is None else cap
    if strategy == "auto":
        strategy = "fan"
        if box_extent(body) is not None:
            strategy = "box"
        elif body.dim == 2 and minimal_width(body)[0] < 0.3 * body.diameter:
            strategy = "columns"
    if strategy == "fan":
        mesh = _fan_mesh(body)
    elif strategy == "columns":
        if body.dim != 2:
            raise InputError("columns meshing is planar")
        mesh = _columns_mesh(body, h_target)
    elif strategy == "box":
        ext = box_extent(body)
        if ext is None:
            raise InputError("body is not an axis-aligned box")
        lo, hi = ext
        # the thinnest edge gets at least 4 layers; longer edges are graded so
        # the boundary layer along the side faces is resolved at the same scale
        thin = float(np.min(hi - lo))
        h_min = min(h_target, thin / 4)
        axes = []
        for a, b in zip(lo, hi):
            if b - a <= 4 * thin:
                axes.append(np.linspace(a, b, max(4, int(math.ceil((b - a) / h_target))) + 1))
            else:
                axes.append(graded_axis(a, b, h_target, h_min))
        if math.prod(len(ax) for ax in axes) > cap:
            raise MeshBudgetExceeded("box mesh exceeds the node cap")
        mesh = box_mesh(lo, hi, axes=axes)
    else:
        raise InputError(f"unknown mesh strategy {strategy!r}")
    while mesh.h_max > h_target * (1 + 1e-12):
        if _predicted_nodes(mesh) > cap:
            raise MeshBudgetExceeded(f"refinement would exceed the node cap ({cap})")
        mesh = refine(mesh)
    mesh.level = 0
    return mesh


# ---------------------------------------------------------------------------
# assembly and solve
# ---------------------------------------------------------------------------

def _local_gradients(X: np.ndarray):
    n = X.shape[2]
    D = X[:, 1:] - X[:, :1]
    vol = np.abs(np.linalg.det(D)) / math.factorial(n)
    Dinv = np.linalg.inv(D)
    G = np.empty((X.shape[0], n + 1, n))
    G[:, 1:] = np.transpose(Dinv, (0, 2, 1))
    G[:, 0] = -G[:, 1:].sum(axis=1)
    return G, vol


def assemble(mesh: Mesh):
    """Stiffness matrix and unit-load vector for P1 elements."""
    n = mesh.dim
    X = mesh.nodes[mesh.cells]
    G, vol = _local_gradients(X)
    if (vol <= 0).any():
        raise SolverDiverged("mesh has degenerate cells")
    Kloc = vol[:, None, None] * np.einsum("kid,kjd->kij", G, G)
    rows = np.repeat(mesh.cells, n + 1, axis=1).ravel()
    cols = np.tile(mesh.cells, (1, n + 1)).ravel()
    N = mesh.n_nodes
    K = sp.coo_matrix((Kloc.ravel(), (rows, cols)), shape=(N, N)).tocsr()
    f = np.bincount(mesh.cells.ravel(), weights=np.repeat(vol / (n + 1), n + 1), minlength=N)
    return K, f


def solve_torsion(mesh: Mesh, cg_tol: float = DEFAULT_CG_TOL, maxiter: Optional[int] = None,
                  x0: Optional[np.ndarray] = None) -> TorsionSolution:
    if not 0 < cg_tol <= 1e-4:
        raise InputError("cg_tol must lie in (0, 1e-4]")
    K, f = assemble(mesh)
    N = mesh.n_nodes
    interior = np.ones(N, dtype=bool)
    interior[mesh.boundary_nodes] = False
    idx = np.nonzero(interior)[0]
    u = np.zeros(N)
    if idx.size == 0:
        return TorsionSolution(mesh, u, 0.0, 0.0, mesh.level, 0.0)
    A = K[idx][:, idx].tocsr()
    rhs = f[idx]
    dinv = 1.0 / A.diagonal()
    M = LinearOperator(A.shape, matvec=lambda r: dinv * r, dtype=float)
    iters = [0]

    def count(_):
        iters[0] += 1

    maxiter = maxiter or max(2000, 4 * idx.size)
    sol = np.zeros(idx.size) if x0 is None else x0[idx].copy()
    bnorm = float(np.linalg.norm(rhs))
    res = float(np.linalg.norm(rhs - A @ sol)) / bnorm
    # restart from the current iterate when the recursive residual has drifted
    # away from the true one (thin cells make the system ill conditioned)
    for _ in range(6):
        if res <= cg_tol:
            break
        target = min(0.5, cg_tol / res)
        sol, info = cg(A, rhs, x0=sol, rtol=target * res, atol=0.0, M=M,
                       maxiter=maxiter, callback=count)
        new_res = float(np.linalg.norm(rhs - A @ sol)) / bnorm
        if info != 0 or not np.isfinite(new_res) or new_res >= res:
            res = new_res
            break
        res = new_res
    if not np.isfinite(res) or res > 10 * cg_tol:
        raise SolverDiverged(f"CG stopped with residual {res:.3e} after {iters[0]} iterations")
    u[idx] = sol
    T_h = float(f @ u)
    energy = float(sol @ (A @ sol))
    return TorsionSolution(mesh, u, T_h, res, mesh.level, energy, iters[0])


def prolong(coarse: Mesh, fine: Mesh, u: np.ndarray) -> np.ndarray:
    """Interpolate a P1 field onto the red refinement of its mesh (initial guess)."""
    n = coarse.dim
    N = coarse.n_nodes
    out = np.zeros(fine.n_nodes)
    out[:N] = u
    pairs = [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]
    E = np.stack([np.sort(coarse.cells[:, [i, j]], axis=1) for i, j in pairs], axis=1).reshape(-1, 2)
    uniq = np.unique(E, axis=0)
    out[N:N + len(uniq)] = 0.5 * (u[uniq[:, 0]] + u[uniq[:, 1]])
    return out


def torsion_sequence(mesh: Mesh, refinements: int, cg_tol: float = DEFAULT_CG_TOL,
                     cap: Optional[int] = None) -> list[TorsionSolution]:
    """Solve on ``mesh`` and on ``refinements`` successive red refinements."""
    cap = node_cap() if cap is None else cap
    sols = [solve_torsion(mesh, cg_tol)]
    for _ in range(refinements):
        if _predicted_nodes(mesh) > cap:
            raise MeshBudgetExceeded(f"refinement would exceed the node cap ({cap})")
        fine = refine(mesh)
        guess = prolong(mesh, fine, sols[-1].u)
        sols.append(solve_torsion(fine, cg_tol, x0=guess))
        mesh = fine
    return sols


def richardson(T_coarse: float, T_fine: float, order: float = 2.0) -> tuple[float, float]:
    """Extrapolated value and an error bar, assuming error ~ h^order."""
    q = 2.0 ** order - 1.0
    delta = (T_fine - T_coarse) / q
    return T_fine + delta, abs(delta)


# ---------------------------------------------------------------------------
# analytic oracles
# ---------------------------------------------------------------------------

def analytic_torsion_ball(n: int, R: float = 1.0) -> float:
    return ball_volume(n) * R ** (n + 2) / (n * (n + 2))


def analytic_torsion_rectangle(a: float, b: float, rel_tol: float = 1e-12) -> float:
    """Torsional rigidity of an a x b rectangle.

    Separating u = x(a-x)/2 + v and summing the double sine series over one
    index in closed form leaves
    T = a^3 b/12 - (16 a^4/pi^5) sum_{k odd} tanh(k pi b/(2a))/k^5.
    The neglected tail is below (16 a^4/pi^5) / (4 K^4) after K terms.
    """
    if a <= 0 or b <= 0:
        raise InputError("rectangle sides must be positive")
    a, b = min(a, b), max(a, b)
    lead = a ** 3 * b / 12.0
    c = 16.0 * a ** 4 / math.pi ** 5
    # choose K so the tail bound is below rel_tol * (lower bound on T)
    T_lower = lead - c * (math.pi ** 4 / 96.0)  # sum_{k odd} 1/k^5 < pi^4/96
    K = 1
    while c / (4.0 * K ** 4) > rel_tol * max(T_lower, 1e-300):
        K *= 2
    ks = np.arange(1, K + 1, 2, dtype=float)
    s = np.sum(np.tanh(ks * math.pi * b / (2 * a))[::-1] / ks[::-1] ** 5)
    return lead - c * float(s)


def analytic_torsion_box(a: float, b: float, c: float, rel_tol: float = 1e-10) -> float:
    """Torsional rigidity of a box with edges a, b, c.

    With c the longest edge, a sine series over the a x b cross-section leaves
    an ODE along c:
    T = sum_{j,k odd} 64 a b / (pi^4 j^2 k^2 kappa^2) (c - 2 tanh(kappa c/2)/kappa),
    kappa^2 = (j pi/a)^2 + (k pi/b)^2. All terms are positive and below
    64 a b c / (pi^4 j^2 k^2 kappa^2), which gives separate tail bounds in j and k.
    """
    if min(a, b, c) <= 0:
        raise InputError("box edges must be positive")
    c, a, b = sorted((a, b, c), reverse=True)  # c >= a >= b
    pi = math.pi
    coef = 64.0 * a * b * c / pi ** 6 * (pi ** 2 / 8.0) / 6.0
    estimate = a * b ** 3 * c / 12.0 * max(1.0 - 0.63 * b / a, 0.05) * max(1.0 - 0.63 * b / c, 0.05)
    Kj = 2 * int(math.ceil((coef * a * a / (rel_tol * estimate)) ** (1 / 3) / 2)) + 1
    Kk = 2 * int(math.ceil((coef * b * b / (rel_tol * estimate)) ** (1 / 3) / 2)) + 1
    k = np.arange(1, Kk + 1, 2, dtype=float)
    total = 0.0
    for j0 in range(1, Kj + 1, 4096):
        j = np.arange(j0, min(j0 + 4096, Kj + 1), 2, dtype=float)[:, None]
        kap = pi * np.sqrt((j / a) ** 2 + (k / b) ** 2)
        bracket = c - 2.0 * np.tanh(0.5 * kap * c) / kap
        terms = 64.0 * a * b / (pi ** 4 * j ** 2 * k ** 2 * kap ** 2) * bracket
        total += float(np.sum(terms[::-1, ::-1]))
    return total


def analytic_torsion(shape: str, *args) -> float:
    if shape == "ball":
        n, R = (list(args) + [1.0])[:2] if len(args) == 1 else args
        return analytic_torsion_ball(int(n), float(R))
    if shape == "rectangle":
        return analytic_torsion_rectangle(*args)
    if shape == "box":
        return analytic_torsion_box(*args)
    raise InputError(f"no analytic torsion for {shape!r}")


# ---------------------------------------------------------------------------
# integral of the squared boundary distance
# ---------------------------------------------------------------------------

# symmetric degree-4 rules; barycentric points, weights normalised to 1
_TRI_A, _TRI_B = 0.445948490915965, 0.091576213509771
_TRI_WA, _TRI_WB = 0.223381589678011, 0.109951743655322
TRI_RULE = (
    np.array([[_TRI_A, _TRI_A, 1 - 2 * _TRI_A], [_TRI_A, 1 - 2 * _TRI_A, _TRI_A],
              [1 - 2 * _TRI_A, _TRI_A, _TRI_A], [_TRI_B, _TRI_B, 1 - 2 * _TRI_B],
              [_TRI_B, 1 - 2 * _TRI_B, _TRI_B], [1 - 2 * _TRI_B, _TRI_B, _TRI_B]]),
    np.array([_TRI_WA] * 3 + [_TRI_WB] * 3),
)


def _keast4():
    pts, wts = [[0.25] * 4], [-74.0 / 5625.0]
    a, b = 11.0 / 14.0, 1.0 / 14.0
    for i in range(4):
        p = [b] * 4
        p[i] = a
        pts.append(p)
        wts.append(343.0 / 45000.0)
    c = (1 + math.sqrt(5.0 / 14.0)) / 4
    d = (1 - math.sqrt(5.0 / 14.0)) / 4
    for i in range(4):
        for j in range(i + 1, 4):
            p = [d] * 4
            p[i] = p[j] = c
            pts.append(p)
            wts.append(56.0 / 2250.0)
    w = np.array(wts) * 6.0
    return np.array(pts), w


TET_RULE = _keast4()

_CUT_TOL = 1e-11  # relative to the diameter


def _adjacent_facets(body: ConvexBody, i: int) -> np.ndarray:
    own = set(body.facets[i])
    return np.array([j for j, f in enumerate(body.facets)
                     if j != i and len(own.intersection(f)) >= body.dim - 1], dtype=np.intp)


def _medial_cell(body: ConvexBody, i: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Halfspaces and vertices of the set where facet ``i`` is the nearest facet.

    Cutting planes: the start is facet i's halfspace cut by its bisectors with
    the adjacent facets, which is bounded. The body row or bisector most
    violated over the vertices is added until none is violated. Rows not tight
    at any vertex are redundant and stay so as the polytope shrinks, so they
    are dropped after each round.
    """
    A, b = body.normals, body.offsets
    scale = body.diameter
    D, e = A - A[i], b - b[i]
    norms = np.linalg.norm(D, axis=1)
    norms[i] = 1.0
    D, e = D / norms[:, None], e / norms
    pool_A, pool_b = np.vstack([A, D]), np.concatenate([b, e])
    m = len(b)
    adj = _adjacent_facets(body, i)
    used = np.zeros(2 * m, dtype=bool)
    used[i] = True
    used[m + adj] = True
    rows = np.nonzero(used)[0]
    used[m + i] = True  # the bisector of facet i with itself is void
    while True:
        V = _enumerate_vertices(pool_A[rows], pool_b[rows], scale)
        if len(V) <= body.dim:
            break
        tight = (np.abs(V @ pool_A[rows].T - pool_b[rows]) <= _CUT_TOL * scale).any(axis=0)
        rows = rows[tight]
        G = V @ pool_A.T - pool_b
        G[:, used] = -np.inf
        k, j = np.unravel_index(G.argmax(), G.shape)
        if G[k, j] <= _CUT_TOL * scale:
            break
        used[j] = True
        rows = np.append(rows, j)
    return pool_A[rows], pool_b[rows], V


def _cone_simplices(A: np.ndarray, b: np.ndarray, V: np.ndarray, scale: float) -> np.ndarray:
    """Simplices (K, n+1, n) coning the faces of conv(V) from its vertex mean."""
    n = A.shape[1]
    c = V.mean(axis=0)
    tight = np.abs(V @ A.T - b) <= _CUT_TOL * scale
    simplices = []
    for row, basis in zip(tight.T, _plane_bases(A)):
        F = V[row]
        if len(F) < n:
            continue
        order, _ = _facet_polygon(F, basis, 0.0)
        F = F[order]
        if n == 2:
            simplices.append([c, F[0], F[-1]])
        else:
            simplices.extend([c, F[0], F[k], F[k + 1]] for k in range(1, len(F) - 1))
    return np.array(simplices, dtype=float).reshape(-1, n + 1, n)


def integrate_d_squared(body: ConvexBody) -> tuple[float, float]:
    """Integral of d(x, boundary)^2 over the body, with an error bound.

    The body splits into medial cells, one per facet, on which d is that
    facet's distance. Each cell is a polytope, so coning its faces from an
    interior point and applying a degree-4 rule integrates d^2 exactly. The
    error bound charges the mismatch between the cell volumes and the body
    volume at the largest value of d^2.
    """
    n = body.dim
    bary, w = TRI_RULE if n == 2 else TET_RULE
    total, covered = 0.0, 0.0
    for i in range(body.n_facets):
        A, b, V = _medial_cell(body, i)
        if len(V) < n + 1:
            continue
        X = _cone_simplices(A, b, V, body.diameter)
        if len(X) == 0:
            continue
        vol = np.abs(np.linalg.det(X[:, 1:] - X[:, :1])) / math.factorial(n)
        P = np.einsum("qi,kid->kqd", bary, X)
        d = body.offsets[i] - P @ body.normals[i]
        total += float(vol @ ((d ** 2) @ w))
        covered += float(vol.sum())
    err = abs(covered - body.volume) * body.inradius ** 2
    return total, max(err, 1e-13 * abs(total))


# ---------------------------------------------------------------------------
# thin-domain approximation
# ---------------------------------------------------------------------------

def thin_torsion_estimate(obj) -> float:
    """First-order thin-domain torsion (1/12) * integral of height^3 over the base."""
    if isinstance(obj, FamilySpec):
        n, p = obj.dim, obj.params
        if obj.family == "cone":
            k = float(p.get("k", 1.0))
            return ball_volume(n - 1) / (2.0 * n * (n + 1) * (n + 2) * k ** 3)
        if obj.family == "cylinder":
            ell = float(p.get("ell", 10.0))
            return (1.0 / ell) ** 3 / 12.0
        if obj.family == "box":
            edges = sorted(float(e) for e in p.get("edges", [1.0] * n))
            return math.prod(edges[1:]) * edges[0] ** 3 / 12.0
        raise NotThinRepresentable(f"family {obj.family!r} has no height profile")
    body: ConvexBody = obj
    ext = box_extent(body)
    if ext is not None:
        L = sorted(ext[1] - ext[0])
        return float(np.prod(L[1:]) * L[0] ** 3 / 12.0)
    if body.dim != 2:
        raise NotThinRepresentable("height profiles are only available for polygons and boxes")
    _, _, u = minimal_width(body)
    e = np.array([u[1], -u[0]])
    V = body.vertices @ e
    xs = np.unique(V)
    A = body.normals @ np.stack([e, u]).T

    def height(x):
        up, lo = np.inf, -np.inf
        for (ax, ay), bb in zip(A, body.offsets):
            if ay > 1e-14:
                up = min(up, (bb - ax * x) / ay)
            elif ay < -1e-14:
                lo = max(lo, (bb - ax * x) / ay)
        return max(up - lo, 0.0)

    # height is linear between vertex abscissae, so its cube integrates exactly
    gx, gw = np.polynomial.legendre.leggauss(3)
    total = 0.0
    for a, c in zip(xs[:-1], xs[1:]):
        x = 0.5 * (a + c) + 0.5 * (c - a) * gx
        total += 0.5 * (c - a) * sum(wi * height(xi) ** 3 for xi, wi in zip(x, gw))
    return total / 12.0
