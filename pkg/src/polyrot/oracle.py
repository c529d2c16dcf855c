"""Numeric ground truth: rotate sigma's vertices for real and look.

Nothing here uses the sign-function theory except ``centre_search``, which
screens grid centres with the pointwise test before confirming each hit by
simulation.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .admissibility import TOL_SIGN, admissible_at, build_constraints
from .geometry import Polytope, incidence
from .skewlin import SkewMatrix, apply_rotation_matrix, exp_map

logger = logging.getLogger(__name__)

SLACK_TOL = 1e-9
CHUNK = 1 << 16


class SimVerdict(enum.Enum):
    STAYS_INSIDE = "StaysInside"
    EXITS = "Exits"


@dataclass(frozen=True, eq=False)
class SimulationResult:
    t_values: np.ndarray
    max_violation: np.ndarray
    verdict: SimVerdict
    exit_t: float | None = None
    exit_vertex: int | None = None
    exit_facet: int | None = None

    @property
    def stays_inside(self) -> bool:
        return self.verdict is SimVerdict.STAYS_INSIDE


def simulate(sigma: Polytope, tau: Polytope, S: SkewMatrix, q, t_max: float = 1e-3, steps: int = 8) -> SimulationResult:
    """Rotate sigma about ``q`` by ``exp(tS)`` for ``t = t_max * 2**-k``, k < steps.

    Stays inside iff every vertex keeps slack >= -1e-9 on every facet of tau
    at every sampled t. The exit reported is at the smallest violating t.
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    q = np.asarray(q, dtype=float)
    ts = t_max * 2.0 ** -np.arange(steps)
    worst = np.zeros(steps)
    exit_info = None
    for k in range(steps - 1, -1, -1):
        moved = apply_rotation_matrix(exp_map(S, ts[k]), q, sigma.vertices)
        slack = tau.slacks(moved)
        worst[k] = max(0.0, -float(slack.min()))
        if exit_info is None and slack.min() < -SLACK_TOL:
            i, j = np.unravel_index(int(np.argmin(slack)), slack.shape)
            exit_info = (float(ts[k]), int(i), int(j))
    if exit_info is None:
        return SimulationResult(ts, worst, SimVerdict.STAYS_INSIDE)
    return SimulationResult(ts, worst, SimVerdict.EXITS, *exit_info)


def schedule_is_monotone(result: SimulationResult) -> bool:
    """Once a sampled t violates, every larger sampled t should too."""
    bad = result.max_violation > SLACK_TOL
    # t_values descend, so violations must form a prefix
    ok = not np.any(~bad[:-1] & bad[1:])
    if not ok:
        logger.info("re-entry observed in schedule %s", result.max_violation)
    return ok


def default_search_box(tau: Polytope, inflate: float = 3.0) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = tau.bounding_box()
    mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
    return mid - inflate * half, mid + inflate * half


@dataclass(frozen=True, eq=False)
class SearchResult:
    found: bool
    q: np.ndarray | None = None
    index: int | None = None
    candidates: int = 0


def centre_search(
    sigma: Polytope,
    tau: Polytope,
    S: SkewMatrix,
    sense: int,
    grid_resolution: int = 64,
    search_box=None,
    t_max: float = 1e-3,
    steps: int = 8,
) -> SearchResult:
    """Row-major grid scan for a centre admitting rotation in direction ``sense * S``.

    Returns the lowest grid index where the pointwise test passes and the
    simulation keeps sigma inside tau.
    """
    if grid_resolution < 8:
        raise ValueError("grid_resolution must be at least 8")
    n = tau.n
    lo, hi = default_search_box(tau) if search_box is None else (np.asarray(b, float) for b in search_box)
    axes = [np.linspace(lo[d], hi[d], grid_resolution) for d in range(n)]
    inc = incidence(sigma, tau)
    cons = build_constraints(sigma, tau, inc, S)
    motion = S.scaled(sense)
    G = np.array([sense * c.unit_gradient for c in cons]).reshape(len(cons), n)
    h = np.array([G[k] @ c.base for k, c in enumerate(cons)])

    total = grid_resolution ** n
    tried = 0
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total))
        sub = np.unravel_index(idx, (grid_resolution,) * n)
        Q = np.stack([axes[d][sub[d]] for d in range(n)], axis=1)
        if len(cons):
            F = Q @ G.T - h
            cand = np.flatnonzero(F.min(axis=1) >= -TOL_SIGN)
        else:
            cand = np.arange(len(idx))
        for k in cand:
            tried += 1
            q = Q[k]
            if not admissible_at(cons, q, tau, sense):
                continue
            if simulate(sigma, tau, motion, q, t_max, steps).stays_inside:
                return SearchResult(True, q, int(idx[k]), tried)
    return SearchResult(False, candidates=tried)
