"""Small dense two-phase simplex with Bland's rule.

Only meant for the tiny Chebyshev-center problems that show up here (a few
dozen constraints, at most four unknowns), so clarity wins over speed.
"""

from __future__ import annotations

import numpy as np

from .errors import LPFailure

_PIVOT_TOL = 1e-12


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * T[row]


def _run(T: np.ndarray, basis: list[int], allowed: int, max_iter: int) -> None:
    """Maximise the objective stored in the last row (as negated reduced costs).

    The objective row holds ``-c`` so a negative entry marks an improving column.
    """
    m = T.shape[0] - 1
    for _ in range(max_iter):
        obj = T[-1, :allowed]
        candidates = np.nonzero(obj < -_PIVOT_TOL)[0]
        if candidates.size == 0:
            return
        col = int(candidates[0])  # Bland: smallest improving index
        column = T[:m, col]
        rhs = T[:m, -1]
        positive = column > _PIVOT_TOL
        if not positive.any():
            raise LPFailure("linear program is unbounded")
        ratios = np.full(m, np.inf)
        ratios[positive] = rhs[positive] / column[positive]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + _PIVOT_TOL * max(1.0, abs(best)))[0]
        row = int(min(ties, key=lambda r: basis[r]))  # Bland tie-break
        _pivot(T, row, col)
        basis[row] = col
    raise LPFailure("simplex iteration limit reached")


def linprog_max(c, A_ub, b_ub, free=None, max_iter: int = 10_000):
    """Maximise ``c @ x`` subject to ``A_ub @ x <= b_ub``.

    Variables flagged in ``free`` are unrestricted in sign, the rest are
    nonnegative. Returns ``(x, value)``; raises :class:`LPFailure` when the
    problem is infeasible or unbounded.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A_ub, dtype=float)
    b = np.asarray(b_ub, dtype=float)
    nvar = c.size
    free = np.zeros(nvar, dtype=bool) if free is None else np.asarray(free, dtype=bool)

    # split free variables into positive and negative parts
    cols = [A]
    cost = [c]
    free_idx = np.nonzero(free)[0]
    if free_idx.size:
        cols.append(-A[:, free_idx])
        cost.append(-c[free_idx])
    A_s = np.hstack(cols)
    c_s = np.concatenate(cost)
    m, k = A_s.shape

    neg = b < 0
    n_art = int(neg.sum())
    # columns: structural k | slacks m | artificials n_art | rhs
    T = np.zeros((m + 1, k + m + n_art + 1))
    T[:m, :k] = A_s
    T[:m, k:k + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(k, k + m))
    art_col = k + m
    for r in np.nonzero(neg)[0]:
        T[r, :-1] *= -1.0
        T[r, -1] *= -1.0
        T[r, art_col] = 1.0
        basis[r] = art_col
        art_col += 1

    if n_art:
        # phase I: maximise -(sum of artificials)
        T[-1, k + m:k + m + n_art] = 1.0
        for r in np.nonzero(neg)[0]:
            T[-1] -= T[r]
        _run(T, basis, k + m + n_art, max_iter)
        if T[-1, -1] < -1e-9 * max(1.0, np.abs(b).max()):
            raise LPFailure("linear program is infeasible")
        # drive remaining zero-level artificials out of the basis
        for r in range(m):
            if basis[r] >= k + m:
                row = T[r, :k + m]
                nz = np.nonzero(np.abs(row) > _PIVOT_TOL)[0]
                if nz.size:
                    _pivot(T, r, int(nz[0]))
                    basis[r] = int(nz[0])
        T = np.delete(T, np.s_[k + m:k + m + n_art], axis=1)

    T[-1, :] = 0.0
    T[-1, :k] = -c_s
    for r, j in enumerate(basis):
        if j < k + m and T[-1, j] != 0.0:
            T[-1] -= T[-1, j] * T[r]
    _run(T, basis, k + m, max_iter)

    sol = np.zeros(k + m)
    for r, j in enumerate(basis):
        if j < k + m:
            sol[j] = T[r, -1]
    x = sol[:nvar].copy()
    if free_idx.size:
        x[free_idx] -= sol[nvar:nvar + free_idx.size]
    return x, float(c @ x)


def chebyshev_center(normals, offsets):
    """Largest ball inside ``{x : normals @ x <= offsets}`` (unit normals).

    Returns ``(center, radius)``.
    """
    A = np.asarray(normals, dtype=float)
    b = np.asarray(offsets, dtype=float)
    m, n = A.shape
    A_ub = np.hstack([A, np.ones((m, 1))])
    c = np.zeros(n + 1)
    c[-1] = 1.0
    free = np.ones(n + 1, dtype=bool)
    free[-1] = False
    x, r = linprog_max(c, A_ub, b, free=free)
    return x[:n], r
