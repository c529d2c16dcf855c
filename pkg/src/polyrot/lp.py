"""Small dense two-phase simplex.

Solves ``maximize c.x  s.t.  A x <= b`` with each variable either free or
non-negative. Bland's rule is used throughout, so degenerate pivots cannot
cycle. Sizes in this package are tiny (n <= 16 variables, a few dozen rows),
so a full tableau is simplest.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-11
OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
FAILED = "failed"


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    value: float = float("nan")
    duals: np.ndarray | None = None
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run(T: np.ndarray, basis: list[int], ncols: int, max_iter: int) -> tuple[str, int]:
    """Iterate on tableau ``T`` whose last row is the reduced-cost row.

    Only the first ``ncols`` columns may enter. Returns (status, iterations).
    """
    m = T.shape[0] - 1
    for it in range(max_iter):
        z = T[-1, :ncols]
        entering = np.flatnonzero(z < -PIVOT_TOL)
        if entering.size == 0:
            return OPTIMAL, it
        c = int(entering[0])
        col = T[:m, c]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            return UNBOUNDED, it
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, c)
        basis[r] = c
    return FAILED, max_iter


def maximize(c, A_ub, b_ub, free=None, max_iter: int | None = None) -> LPResult:
    """Maximize ``c.x`` subject to ``A_ub x <= b_ub``.

    ``free`` is a boolean mask of unrestricted variables (default: all free).
    ``duals`` are the non-negative multipliers ``y`` of the rows with
    ``A^T y = c`` on free variables at optimality.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A_ub, dtype=float).reshape(-1, c.size)
    b = np.asarray(b_ub, dtype=float).ravel()
    nvar = c.size
    m = A.shape[0]
    free = np.ones(nvar, dtype=bool) if free is None else np.asarray(free, dtype=bool)

    # split free variables: x = x_plus - x_minus
    free_idx = np.flatnonzero(free)
    A_s = np.hstack([A, -A[:, free_idx]])
    c_s = np.concatenate([c, -c[free_idx]])
    ns = A_s.shape[1]

    if m == 0:
        if np.any(c_s > 0):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, np.zeros(nvar), 0.0, np.zeros(0))

    neg = b < 0
    n_art = int(neg.sum())
    ncols = ns + m + n_art
    T = np.zeros((m + 1, ncols + 1))
    sign = np.where(neg, -1.0, 1.0)
    T[:m, :ns] = A_s * sign[:, None]
    T[:m, ns:ns + m] = np.diag(sign)
    T[:m, -1] = b * sign
    basis = list(range(ns, ns + m))
    art_cols = []
    for k, i in enumerate(np.flatnonzero(neg)):
        col = ns + m + k
        T[i, col] = 1.0
        basis[i] = col
        art_cols.append(col)

    limit = max_iter or 50 * (m + ncols) + 100
    iters = 0
    if n_art:
        # phase 1: maximize -sum(artificials)
        T[-1, :] = 0.0
        T[-1, art_cols] = 1.0
        for i in np.flatnonzero(neg):
            T[-1] -= T[i]
        status, it = _run(T, basis, ncols, limit)
        iters += it
        if status != OPTIMAL:
            return LPResult(FAILED, iterations=iters)
        if T[-1, -1] < -1e-9 * max(1.0, float(np.abs(b).max())):
            return LPResult(INFEASIBLE, iterations=iters)
        # drive remaining artificials out of the basis
        keep = []
        for i in range(m):
            if basis[i] >= ns + m:
                row = T[i, :ns + m]
                cand = np.flatnonzero(np.abs(row) > PIVOT_TOL)
                if cand.size:
                    _pivot(T, i, int(cand[0]))
                    basis[i] = int(cand[0])
                    keep.append(i)
                else:
                    logger.debug("dropping redundant row %d", i)
            else:
                keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        basis = [basis[i] for i in keep]
        T = np.hstack([T[:, :ns + m], T[:, -1:]])
        ncols = ns + m

    T[-1, :] = 0.0
    T[-1, :ns] = -c_s
    for i, bi in enumerate(basis):
        if T[-1, bi] != 0.0:
            T[-1] -= T[-1, bi] * T[i]
    status, it = _run(T, basis, ncols, limit)
    iters += it
    if status != OPTIMAL:
        return LPResult(status, iterations=iters)

    xs = np.zeros(ncols)
    for i, bi in enumerate(basis):
        xs[bi] = T[i, -1]
    x = xs[:nvar].copy()
    x[free_idx] -= xs[nvar:ns]
    duals = np.maximum(T[-1, ns:ns + m], 0.0)
    return LPResult(OPTIMAL, x, float(c @ x), duals, iters)


def nontrivial_cone_direction(N: np.ndarray, tol: float = 1e-9) -> np.ndarray | None:
    """Return a unit ``d != 0`` with ``N d >= 0`` if one exists, else None.

    The cone ``{d : N d >= 0}`` is trivial exactly when the rows of ``N``
    positively span the whole space (e.g. inward normals of a bounded polytope).
    """
    N = np.asarray(N, dtype=float)
    n = N.shape[1]
    if N.shape[0] == 0:
        d = np.zeros(n)
        d[0] = 1.0
        return d
    _, sv, vt = np.linalg.svd(N)
    rank = int(np.sum(sv > tol * max(1.0, sv[0])))
    if rank < n:
        return vt[-1] / np.linalg.norm(vt[-1])
    # pointed cone: look for d with 0 <= N d <= 1 maximizing sum(N d)
    k = N.shape[0]
    res = maximize(N.sum(axis=0), np.vstack([N, -N]), np.concatenate([np.ones(k), np.zeros(k)]))
    if res.ok and res.value > tol:
        return res.x / np.linalg.norm(res.x)
    return None
