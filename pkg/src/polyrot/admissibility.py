"""Decide whether sigma can be rotated a little inside tau.

Every vertex ``p_i`` of sigma lying on a facet hyperplane ``j`` of tau yields
an affine sign function ``f_ij(q) = (S n_j) . (q - p_i)`` of the rotation
centre ``q``. To first order the vertex moves inward iff ``f_ij(q) > 0``; when
``f_ij(q) = 0`` the vertex moves tangentially and the side of the wall the
centre sits on decides. A centre is admissible when every pair passes.

The set of centres with all ``f_ij > 0`` (for ``S``) or all ``f_ij < 0``
(for ``-S``) is an open polyhedron; its non-emptiness is decided with a
max-slack LP on unit-normalized constraints.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NumericalFailure, ZeroDirection
from .geometry import EPS_GEOM, IncidenceMap, Polytope, Simplex, VertexClass, contains, incidence
from .lp import maximize, nontrivial_cone_direction
from .skewlin import SkewMatrix, generic_rank, spectral_blocks

logger = logging.getLogger(__name__)

TOL_SIGN = 1e-9
TOL_LP = 1e-9
ZERO_GRADIENT_REL = 1e-9
# normalized residual below which all zero sets count as meeting in one point
CONCURRENCY_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class AffineConstraint:
    """``f(x) = gradient . (x - base)`` for the pair (vertex i, facet j)."""

    gradient: np.ndarray
    base: np.ndarray
    pair: tuple[int, int]
    secondary_gradient: np.ndarray
    is_zero: bool = False

    def value(self, x) -> float:
        return float(self.gradient @ (np.asarray(x, dtype=float) - self.base))

    @property
    def unit_gradient(self) -> np.ndarray:
        if self.is_zero:
            return np.zeros_like(self.gradient)
        return self.gradient / np.linalg.norm(self.gradient)

    def normalized_value(self, x) -> float:
        """Signed distance of ``x`` to the zero set; 0 for a zero gradient."""
        return float(self.unit_gradient @ (np.asarray(x, dtype=float) - self.base))

    def secondary_value(self, x) -> float:
        return float(self.secondary_gradient @ (np.asarray(x, dtype=float) - self.base))


def build_constraints(sigma: Polytope, tau: Polytope, inc: IncidenceMap, S: SkewMatrix) -> list[AffineConstraint]:
    if sigma.n != S.n or tau.n != S.n:
        raise DimensionMismatch(f"S is {S.n}x{S.n} but polytopes live in R^{tau.n}")
    scale = S.norm()
    out = []
    for i, j in inc.pairs:
        normal = tau.normals[j]
        g = S.entries @ normal
        zero = float(np.linalg.norm(g)) <= ZERO_GRADIENT_REL * scale
        out.append(AffineConstraint(g, sigma.vertices[i].copy(), (i, j), normal.copy(), zero))
    return out


class PointVerdict(enum.Enum):
    ADMISSIBLE = "Admissible"
    BOUNDARY_RULE = "AdmissibleViaBoundaryRule"
    NOT_ADMISSIBLE = "NotAdmissible"


@dataclass(frozen=True)
class PointCheck:
    verdict: PointVerdict
    pairs: tuple[tuple[int, int], ...] = ()
    # boundary-rule pairs whose vertex slides within the facet hyperplane
    sliding: tuple[tuple[int, int], ...] = ()

    def __bool__(self) -> bool:
        return self.verdict is not PointVerdict.NOT_ADMISSIBLE


def admissible_at(constraints, q, tau: Polytope, sense: int = 1, tol: float = TOL_SIGN) -> PointCheck:
    """Pointwise admissibility of the centre ``q`` for direction ``sense * S``.

    A pair passes if ``sense * f > tol``; if ``|sense * f| <= tol`` it passes
    only when ``n_j . (q - p_i) >= -tol`` and ``q`` lies in tau.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (tau.n,):
        raise DimensionMismatch(f"centre has shape {q.shape}, expected ({tau.n},)")
    violations, ties = [], []
    for c in constraints:
        v = sense * c.normalized_value(q)
        if v < -tol:
            violations.append(c)
        elif v <= tol:
            ties.append(c)
    if violations:
        return PointCheck(PointVerdict.NOT_ADMISSIBLE, tuple(c.pair for c in violations))
    if not ties:
        return PointCheck(PointVerdict.ADMISSIBLE)
    q_in_tau = bool(contains(tau, q, tau.eps))
    failed = [c for c in ties if not q_in_tau or c.secondary_value(q) < -tol]
    if failed:
        return PointCheck(PointVerdict.NOT_ADMISSIBLE, tuple(c.pair for c in failed))
    sliding = tuple(c.pair for c in ties if abs(c.secondary_value(q)) <= tol)
    return PointCheck(PointVerdict.BOUNDARY_RULE, tuple(c.pair for c in ties), sliding)


class RegionStatus(enum.Enum):
    FEASIBLE = "Feasible"
    BOUNDARY_ONLY = "BoundaryOnly"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True, eq=False)
class Concurrency:
    point: np.ndarray
    inside_tau: bool
    # dimension of the common zero set (0 means a single point R)
    flat_dim: int = 0


@dataclass(frozen=True, eq=False)
class Degeneracy:
    not_full_rank_S: bool = False
    dependent_gradients: bool = False
    concurrent: Concurrency | None = None
    spectral_rank: int = 0
    zero_gradient_pairs: tuple[tuple[int, int], ...] = ()

    @property
    def any(self) -> bool:
        return self.not_full_rank_S or self.dependent_gradients or self.concurrent is not None


@dataclass(frozen=True, eq=False)
class Certificate:
    """Non-negative weights on the normalized constraints ``sense * f_hat``.

    ``sum(w_k * sense * f_hat_k(q)) == constant < 0`` for every ``q``, so no
    centre makes all of them non-negative.
    """

    pairs: tuple[tuple[int, int], ...]
    weights: np.ndarray
    constant: float


@dataclass(eq=False)
class CenterRegion:
    constraints: list[AffineConstraint]
    sense: int
    status: RegionStatus
    witness: np.ndarray | None = None
    slack: float = float("nan")
    lp_value: float = float("nan")
    certificate: Certificate | None = None
    degeneracy: Degeneracy = field(default_factory=Degeneracy)
    resolved: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def rotatable(self) -> bool:
        return self.status is not RegionStatus.INFEASIBLE


def _system(constraints, sense):
    active = [c for c in constraints if not c.is_zero]
    n = constraints[0].gradient.size if constraints else 0
    G = np.array([sense * c.unit_gradient for c in active]).reshape(len(active), n)
    h = np.array([G[k] @ c.base for k, c in enumerate(active)])
    return active, G, h


def _max_slack(G, h, n):
    """max s  s.t.  G q - s >= h,  s <= 1."""
    k = G.shape[0]
    A = np.zeros((k + 1, n + 1))
    A[:k, :n] = -G
    A[:k, n] = 1.0
    A[k, n] = 1.0
    b = np.concatenate([-h, [1.0]])
    c = np.zeros(n + 1)
    c[n] = 1.0
    return maximize(c, A, b)


def _closest_witness(G, h, level, centre):
    """Point with ``G q - h >= level`` nearest (L1) to ``centre``."""
    n = centre.size
    k = G.shape[0]
    A = np.zeros((2 * n + k, 2 * n))
    A[:n, :n] = np.eye(n)
    A[:n, n:] = -np.eye(n)
    A[n:2 * n, :n] = -np.eye(n)
    A[n:2 * n, n:] = -np.eye(n)
    A[2 * n:, :n] = -G
    b = np.concatenate([centre, -centre, -h - level])
    c = np.concatenate([np.zeros(n), -np.ones(n)])
    free = np.concatenate([np.ones(n, bool), np.zeros(n, bool)])
    res = maximize(c, A, b, free)
    return res.x[:n] if res.ok else None


def _boundary_witness(G, h, tau: Polytope, relax: float):
    """Centre in tau with ``G q - h >= -relax`` pushed as deep into tau as possible."""
    n = tau.n
    k = G.shape[0]
    m = tau.num_facets
    A = np.zeros((k + m + 1, n + 1))
    A[:k, :n] = -G
    A[k:k + m, :n] = -tau.normals
    A[k:k + m, n] = 1.0
    A[-1, n] = 1.0
    b = np.concatenate([-h + relax, -tau.offsets, [1.0]])
    c = np.zeros(n + 1)
    c[n] = 1.0
    res = maximize(c, A, b)
    if res.status == "infeasible":
        return None, float("-inf")
    if not res.ok:
        return None, None
    return res.x[:n], res.value


def _certificate(active, G, h, duals) -> Certificate | None:
    if duals is None:
        return None
    y = duals[: G.shape[0]]
    total = y.sum()
    if not total > 0:
        return None
    w = y / total
    if np.linalg.norm(w @ G) > 1e-8:
        return None
    constant = float(-w @ h)
    if not constant < 0:
        return None
    keep = w > 1e-12
    return Certificate(tuple(c.pair for c, kept in zip(active, keep) if kept), w[keep], constant)


def degeneracy_flags(constraints, S: SkewMatrix, tau: Polytope) -> Degeneracy:
    n = S.n
    blocks = spectral_blocks(S)
    not_full = blocks.rank < generic_rank(n)
    zero_pairs = tuple(c.pair for c in constraints if c.is_zero)

    scale = S.norm()
    by_facet = {}
    for c in constraints:
        by_facet.setdefault(c.pair[1], c.gradient / scale)
    dependent = False
    if by_facet:
        Gf = np.array(list(by_facet.values()))
        r = np.linalg.matrix_rank(Gf, tol=1e-9)
        dependent = bool(r < min(len(by_facet), blocks.rank))

    concurrent = None
    active, G, h = _system(constraints, 1)
    if len(active) > 0:
        rank = np.linalg.matrix_rank(G, tol=1e-9)
        if len(active) > rank:
            R, *_ = np.linalg.lstsq(G, h, rcond=None)
            residual = float(np.max(np.abs(G @ R - h)))
            if residual <= CONCURRENCY_TOL * max(1.0, tau.diameter()):
                if rank == n:
                    inside = bool(contains(tau, R, tau.eps))
                else:
                    inside = _flat_meets_tau(G, h, tau)
                concurrent = Concurrency(R, inside, n - rank)
    return Degeneracy(not_full, dependent, concurrent, blocks.rank, zero_pairs)


def _flat_meets_tau(G, h, tau: Polytope) -> bool:
    GG = np.vstack([G, -G])
    hh = np.concatenate([h - CONCURRENCY_TOL, -h - CONCURRENCY_TOL])
    q, r = _boundary_witness(GG, hh, tau, 0.0)
    return q is not None and r >= -tau.eps


def region_feasibility(
    constraints,
    sense: int,
    tau: Polytope,
    S: SkewMatrix | None = None,
    tol_lp: float = TOL_LP,
    degeneracy: Degeneracy | None = None,
) -> CenterRegion:
    """Is there a centre admitting rotation in direction ``sense * S``?

    Feasible: some centre makes every ``sense * f_ij`` strictly positive.
    BoundaryOnly: only centres in tau with some ``f_ij = 0`` work.
    Infeasible: neither; a Farkas-type certificate is attached when the
    strict system is itself infeasible.
    """
    if sense not in (1, -1):
        raise ValueError("sense must be +1 or -1")
    if S is not None:
        if S.is_zero():
            raise ZeroDirection("S is the zero matrix")
        if degeneracy is None:
            degeneracy = degeneracy_flags(constraints, S, tau)
    degeneracy = degeneracy or Degeneracy()
    n = tau.n
    active, G, h = _system(constraints, sense)
    zero = [c for c in constraints if c.is_zero]

    res = _max_slack(G, h, n)
    if not res.ok:
        raise NumericalFailure(f"max-slack LP ended with status {res.status}")
    s_star = res.value
    region = CenterRegion(list(constraints), sense, RegionStatus.INFEASIBLE, lp_value=s_star, degeneracy=degeneracy)

    if s_star > tol_lp and not zero:
        level = min(s_star, 1.0) / 2.0
        q = _closest_witness(G, h, level, tau.centroid())
        if q is None:
            q = res.x[:n]
        region.status = RegionStatus.FEASIBLE
        region.witness = q
        region.slack = min((sense * c.normalized_value(q) for c in active), default=float("inf"))
        return region

    if s_star < -tol_lp:
        region.certificate = _certificate(active, G, h, res.duals)
        if region.certificate is None:
            region.notes.append("no certificate recovered from the LP duals")
        return region

    # marginal strict slack, or zero-gradient pairs: the boundary rule decides
    q, r = _boundary_witness(G, h, tau, tol_lp / 2.0)
    if q is None:
        region.resolved = r is not None
        region.notes.append("boundary rule: no centre in tau satisfies the closed sign system")
        return region
    if r < -tol_lp:
        region.notes.append("boundary rule: the closed sign region misses tau")
        return region
    check = admissible_at(constraints, q, tau, sense)
    if not check:
        region.resolved = False
        region.notes.append("boundary witness failed pointwise re-check")
        return region
    region.status = RegionStatus.BOUNDARY_ONLY
    region.witness = q
    region.slack = float(min((sense * c.normalized_value(q) for c in constraints), default=0.0))
    if zero:
        region.notes.append(f"zero-gradient pairs {[c.pair for c in zero]} slide along their facets")
    return region


class Verdict(enum.Enum):
    ROTATABLE_FORWARD = "RotatableForward"
    ROTATABLE_BACKWARD = "RotatableBackward"
    ROTATABLE_BOTH = "RotatableBoth"
    NOT_ROTATABLE = "NotRotatable"
    DEGENERATE_UNDETERMINED = "DegenerateUndetermined"

    @property
    def rotatable(self) -> bool:
        return self in (Verdict.ROTATABLE_FORWARD, Verdict.ROTATABLE_BACKWARD, Verdict.ROTATABLE_BOTH)


@dataclass(frozen=True, eq=False)
class Translation:
    translatable: bool
    witness: np.ndarray | None = None
    strict: bool = False


@dataclass(eq=False)
class AdmissibilityReport:
    forward: CenterRegion
    backward: CenterRegion
    verdict: Verdict
    incidence: IncidenceMap
    degeneracy: Degeneracy
    translation: Translation
    notes: list[str] = field(default_factory=list)

    def region(self, sense: int) -> CenterRegion:
        return self.forward if sense > 0 else self.backward


def combine_verdict(forward: CenterRegion, backward: CenterRegion, degeneracy: Degeneracy) -> Verdict:
    if forward.rotatable and backward.rotatable:
        return Verdict.ROTATABLE_BOTH
    if forward.rotatable:
        return Verdict.ROTATABLE_FORWARD
    if backward.rotatable:
        return Verdict.ROTATABLE_BACKWARD
    if degeneracy.any and not (forward.resolved and backward.resolved):
        return Verdict.DEGENERATE_UNDETERMINED
    return Verdict.NOT_ROTATABLE


def translation_feasibility(sigma: Polytope, tau: Polytope, inc: IncidenceMap, tol: float = TOL_LP) -> Translation:
    """Can sigma be translated a little inside tau?

    Each touched facet j demands ``v . n_j >= 0``. A strict solution pushes
    every touched vertex off its wall; a merely non-negative one slides some
    vertices along their walls.
    """
    touched = inc.touched_facets()
    n = tau.n
    if not touched:
        v = np.zeros(n)
        v[0] = 1.0
        return Translation(True, v, True)
    N = tau.normals[touched]
    v = N.sum(axis=0)
    if np.linalg.norm(v) > tol and (N @ v).min() > tol * np.linalg.norm(v):
        result = Translation(True, v / np.linalg.norm(v), True)
    else:
        res = _max_slack(N, np.zeros(len(touched)), n)
        if res.ok and res.value > tol:
            w = res.x[:n]
            result = Translation(True, w / np.linalg.norm(w), True)
        else:
            d = nontrivial_cone_direction(N, tol)
            result = Translation(d is not None, d, False)
    if result.translatable and not inc.untouched_facets():
        raise NumericalFailure("found a translation although every facet of tau carries a vertex of sigma")
    return result


def _rotation_theorem_applies(inc: IncidenceMap, S: SkewMatrix, tau: Polytope) -> bool:
    touched = inc.touched_facets()
    if not inc.untouched_facets() or not touched:
        return False
    G = (tau.normals[touched] @ S.entries.T) / S.norm()
    return np.linalg.matrix_rank(G, tol=1e-9) == len(touched)


def _main_theorem_applies(sigma, tau, inc, degeneracy: Degeneracy) -> bool:
    n = tau.n
    return (
        n % 2 == 0
        and isinstance(tau, Simplex)
        and len(sigma.vertices) == n + 1
        and all(c is VertexClass.FACET_INTERIOR for c in inc.classes)
        and all(len(vs) == 1 for vs in inc.facet_vertices)
        and degeneracy.spectral_rank == n
        and degeneracy.concurrent is None
    )


def analyze(sigma: Polytope, tau: Polytope, S: SkewMatrix, tol: float = EPS_GEOM) -> AdmissibilityReport:
    """Full admissibility analysis of sigma inside tau for directions S and -S."""
    if S.is_zero():
        raise ZeroDirection("S is the zero matrix")
    inc = incidence(sigma, tau, tol)
    constraints = build_constraints(sigma, tau, inc, S)
    degeneracy = degeneracy_flags(constraints, S, tau)
    forward = region_feasibility(constraints, 1, tau, S, degeneracy=degeneracy)
    backward = region_feasibility(constraints, -1, tau, S, degeneracy=degeneracy)
    verdict = combine_verdict(forward, backward, degeneracy)
    notes = []

    if _rotation_theorem_applies(inc, S, tau):
        notes.append("untouched facet and independent touched gradients: both directions admit centres")
        if not (forward.status is RegionStatus.FEASIBLE and backward.status is RegionStatus.FEASIBLE):
            raise NumericalFailure("independent-gradient configuration but the LP did not find both regions")
    if _main_theorem_applies(sigma, tau, inc, degeneracy):
        notes.append("even dimension, facet-interior contacts, no concurrency: one direction must admit centres")
        if not verdict.rotatable:
            notes.append("WARNING: expected a rotatable direction but none was found")
            logger.warning("generic even-dimensional instance reported not rotatable")
    if degeneracy.concurrent is not None:
        where = "inside" if degeneracy.concurrent.inside_tau else "outside"
        notes.append(f"all zero sets meet in a common flat {where} tau")
    for region in (forward, backward):
        if region.status is RegionStatus.BOUNDARY_ONLY:
            check = admissible_at(constraints, region.witness, tau, region.sense)
            for i, j in check.sliding:
                if inc.classes[i] is VertexClass.LOWER_FACE:
                    notes.append(
                        f"WARNING: vertex {i} slides in the hyperplane of facet {j} from a lower-dimensional face"
                    )
    return AdmissibilityReport(
        forward, backward, verdict, inc, degeneracy, translation_feasibility(sigma, tau, inc), notes
    )
