"""Scenario constructors: worked examples and seeded random families."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from .admissibility import RegionStatus, Verdict, analyze, build_constraints, region_feasibility
from .errors import ConstructionUnverified, Degenerate, GenerationFailed, NoSolutionOnFacet
from .geometry import Polytope, incidence, simplex_from_vertices
from .skewlin import MAX_DIM, SkewMatrix, generic_rank, make_skew, random_skew, skew_from_axis_3d, spectral_blocks

MARGIN = 0.05
DET_FLOOR = 0.05
LAMBDA_FLOOR = 0.05
MAX_RESAMPLE = 1000


@dataclass(eq=False)
class Scenario:
    name: str
    sigma: Polytope
    tau: Polytope
    S: SkewMatrix
    expected: Verdict | None = None
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        incidence(self.sigma, self.tau)

    def with_sigma_vertex(self, i: int, point, name: str | None = None) -> "Scenario":
        P = self.sigma.vertices.copy()
        P[i] = point
        return replace(self, name=name or self.name, sigma=simplex_from_vertices(P), expected=None, meta={})

    def with_S(self, S: SkewMatrix) -> "Scenario":
        return replace(self, S=S, expected=None)


def _facet_point(tau_vertices: np.ndarray, j: int, rng: np.random.Generator, margin: float = MARGIN) -> np.ndarray:
    """Random point of the open facet opposite vertex j, weights >= margin."""
    corners = np.delete(tau_vertices, j, axis=0)
    k = len(corners)
    w = margin + (1.0 - k * margin) * rng.dirichlet(np.ones(k))
    return w @ corners


def _interior_point(tau_vertices: np.ndarray, rng: np.random.Generator, margin: float = MARGIN) -> np.ndarray:
    k = len(tau_vertices)
    w = margin + (1.0 - k * margin) * rng.dirichlet(np.ones(k))
    return w @ tau_vertices


def _random_simplex(n: int, rng: np.random.Generator):
    for _ in range(MAX_RESAMPLE):
        V = rng.uniform(0.0, 1.0, size=(n + 1, n))
        if abs(np.linalg.det(V[1:] - V[0])) >= DET_FLOOR:
            return simplex_from_vertices(V)
    raise GenerationFailed(f"no simplex with |det| >= {DET_FLOOR} after {MAX_RESAMPLE} draws")


def _random_direction(n: int, rng: np.random.Generator) -> SkewMatrix:
    """Entries uniform in [-1, 1]; every rotation block at least LAMBDA_FLOOR."""
    for _ in range(MAX_RESAMPLE):
        S = random_skew(n, rng)
        blocks = spectral_blocks(S)
        if blocks.rank == generic_rank(n) and min(blocks.lambdas) >= LAMBDA_FLOOR:
            return S
    raise GenerationFailed("no well-conditioned skew matrix found")


def _check_dim(n: int) -> None:
    if not 2 <= n <= MAX_DIM:
        raise ValueError(f"dimension must be in [2, {MAX_DIM}], got {n}")


def random_inscribed_simplex_pair(n: int, seed: int) -> Scenario:
    """Random tau with one sigma-vertex in the relative interior of each facet.

    Vertex ``P_i`` sits on the facet opposite ``A_i``. Deterministic in ``seed``.
    """
    _check_dim(n)
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RESAMPLE):
        tau = _random_simplex(n, rng)
        P = np.array([_facet_point(tau.vertices, j, rng) for j in range(n + 1)])
        try:
            sigma = simplex_from_vertices(P)
        except Degenerate:
            continue
        S = _random_direction(n, rng)
        return Scenario(f"random-inscribed-n{n}-s{seed}", sigma, tau, S, seed=seed)
    raise GenerationFailed(f"could not build a non-degenerate inscribed simplex for n={n}")


def random_partial_contact_pair(n: int, touched: int, seed: int, shared: bool = False) -> Scenario:
    """Random pair where only facets ``0..touched-1`` of tau carry vertices of sigma.

    With ``shared`` an extra vertex of sigma also lands on facet 0, so that
    facet holds two vertices. The remaining vertices are interior to tau.
    """
    _check_dim(n)
    if not 1 <= touched <= n:
        raise ValueError("touched must be between 1 and n")
    if shared and touched + 1 > n + 1:
        raise ValueError("no spare vertex to share facet 0")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RESAMPLE):
        tau = _random_simplex(n, rng)
        P = []
        for i in range(n + 1):
            if i < touched:
                P.append(_facet_point(tau.vertices, i, rng))
            elif shared and i == touched:
                P.append(_facet_point(tau.vertices, 0, rng))
            else:
                P.append(_interior_point(tau.vertices, rng))
        try:
            sigma = simplex_from_vertices(np.array(P))
        except Degenerate:
            continue
        S = _random_direction(n, rng)
        return Scenario(f"partial-n{n}-h{touched}-s{seed}", sigma, tau, S, seed=seed)
    raise GenerationFailed("could not build a partial-contact pair")


UNIT_TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
QUARTER_TURN = ((0.0, -1.0), (1.0, 0.0))


def example_2d_medial() -> Scenario:
    """Medial triangle of the unit right triangle; zero lines meet on the hypotenuse."""
    tau = simplex_from_vertices(UNIT_TRIANGLE)
    sigma = simplex_from_vertices([[0.5, 0.5], [0.0, 0.5], [0.5, 0.0]])
    return Scenario("2d-medial", sigma, tau, make_skew(QUARTER_TURN), Verdict.ROTATABLE_BOTH)


# (height of P1 on the left side, abscissa of P2 on the bottom side)
_CONCURRENT_BASES = [(0.6, 0.7), (0.7, 0.6), (0.55, 0.8), (0.8, 0.55)]


def example_2d_concurrent() -> Scenario:
    """Three concurrent zero lines meeting outside tau.

    tau is the unit right triangle with A0=(0,0), A1=(1,0), A2=(0,1); S is the
    quarter-turn generator. P1=(0, 0.6) and P2=(0.7, 0) are fixed; P0 is then
    solved on the hypotenuse so its zero line passes through R = (0.7, 0.6),
    which gives P0 = (0.55, 0.45). R lies outside tau.
    """
    tau = simplex_from_vertices(UNIT_TRIANGLE)
    S = make_skew(QUARTER_TURN)
    n0, n1, n2 = tau.normals
    g0, g1, g2 = S @ n0, S @ n1, S @ n2
    A1, A2 = tau.vertices[1], tau.vertices[2]
    for a, b in _CONCURRENT_BASES:
        P1 = np.array([0.0, a])
        P2 = np.array([b, 0.0])
        R = np.linalg.solve(np.array([g1, g2]), np.array([g1 @ P1, g2 @ P2]))
        # g0 . (R - A1 - u (A2 - A1)) = 0 is linear in u
        u = float(g0 @ (R - A1)) / float(g0 @ (A2 - A1))
        if not MARGIN < u < 1.0 - MARGIN or contains_point(tau, R):
            continue
        P0 = A1 + u * (A2 - A1)
        sigma = simplex_from_vertices([P0, P1, P2])
        meta = {"R": R, "facet_parameter": u}
        return Scenario("2d-concurrent", sigma, tau, S, Verdict.NOT_ROTATABLE, meta=meta)
    raise NoSolutionOnFacet("no base point put P0 inside its facet with R outside tau")


def contains_point(P: Polytope, x) -> bool:
    return bool(P.slacks(x).min() >= -P.eps)


def facet_direction_2d(tau: Polytope, j: int) -> np.ndarray:
    """Unit vector along facet j of a triangle, from its lower- to higher-indexed vertex."""
    a, b = np.delete(tau.vertices, j, axis=0)
    d = b - a
    return d / np.linalg.norm(d)


def shift_along_facet_2d(sc: Scenario, i: int, delta: float) -> Scenario:
    """Move vertex i of sigma by arc length ``delta`` along facet i of tau."""
    p = sc.sigma.vertices[i] + delta * facet_direction_2d(sc.tau, i)
    return sc.with_sigma_vertex(i, p, name=f"{sc.name}-shift{delta:+g}")


def regular_tetrahedron() -> np.ndarray:
    """Unit-edge regular tetrahedron A0, A1, A2, B3 with A1 A2 B3 in the plane z = 0."""
    r = 1.0 / np.sqrt(3.0)
    base = [np.array([r * np.cos(a), r * np.sin(a), 0.0]) for a in (0.0, 2 * np.pi / 3, 4 * np.pi / 3)]
    apex = np.array([0.0, 0.0, np.sqrt(2.0 / 3.0)])
    return np.array([apex, *base])


# barycentric grid per facet: weights in {0.2, 0.4, 0.6}, summing to one
_BARY = [np.array(w) / 5.0 for w in itertools.product(range(1, 5), repeat=3) if sum(w) == 5]
_P2_NEAR_A3 = (0.025, 0.025, 0.95)
_PERTURBATION_SEED = 20240607
_PERTURBATION_CHECKS = 24


def _strict_slack(sigma, tau, S, sense) -> float:
    inc = incidence(sigma, tau)
    return region_feasibility(build_constraints(sigma, tau, inc, S), sense, tau).lp_value


def _worst_slack(sigma, tau, S) -> float:
    return max(_strict_slack(sigma, tau, S, 1), _strict_slack(sigma, tau, S, -1))


def perturbed_directions(S: SkewMatrix, count: int, rel: float, seed: int) -> list[SkewMatrix]:
    """Random skew perturbations with ``||dS|| <= rel * ||S||`` (spectral norms)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        E = random_skew(S.n, rng).entries
        E = E / np.linalg.norm(E, 2)
        out.append(make_skew(S.entries + rel * rng.uniform(0.0, 1.0) * S.norm() * E))
    return out


def _tetra_tau(epsilon: float):
    A0, A1, A2, B3 = regular_tetrahedron()
    d = (B3 - A0) / np.linalg.norm(B3 - A0)
    A3 = B3 + epsilon * d
    return simplex_from_vertices([A0, A1, A2, A3]), B3


@functools.lru_cache(maxsize=8)
def _tetra_layout(epsilon: float) -> tuple[tuple[float, ...], ...]:
    """Barycentric weights of P0..P3 on their facets, found by grid search.

    Candidates are ranked by how far the worse direction is from admitting a
    centre; the first one that also survives perturbations of S and turns
    rotatable once P2 moves next to A3 is kept.
    """
    tau, _ = _tetra_tau(epsilon)
    S = skew_from_axis_3d([0.0, 0.0, -1.0])
    corners = [np.delete(tau.vertices, i, axis=0) for i in range(4)]
    scored = []
    for combo in itertools.product(range(len(_BARY)), repeat=4):
        P = np.array([_BARY[c] @ corners[i] for i, c in enumerate(combo)])
        try:
            sigma = simplex_from_vertices(P)
        except Degenerate:
            continue
        m = _worst_slack(sigma, tau, S)
        if m < -1e-6:
            scored.append((round(m, 12), combo))
    scored.sort()
    perturbed = perturbed_directions(S, _PERTURBATION_CHECKS, 1e-2, _PERTURBATION_SEED)
    for _, combo in scored:
        P = np.array([_BARY[c] @ corners[i] for i, c in enumerate(combo)])
        sigma = simplex_from_vertices(P)
        if any(_worst_slack(sigma, tau, Sp) >= -1e-9 for Sp in perturbed):
            continue
        moved = P.copy()
        moved[2] = np.array(_P2_NEAR_A3) @ corners[2]
        if _worst_slack(simplex_from_vertices(moved), tau, S) <= 1e-9:
            continue
        return tuple(tuple(float(w) for w in _BARY[c]) for c in combo)
    raise ConstructionUnverified(f"no barycentric layout gives a robust non-rotatable tetrahedron (epsilon={epsilon})")


def example_3d_tetra(epsilon: float = 0.05, p2_near_a3: bool = False) -> Scenario:
    """Odd-dimensional counterexample built on a stretched regular tetrahedron.

    tau = [A0 A1 A2 A3] where A3 lies on the ray A0->B3 at distance
    ``epsilon`` beyond B3 of the unit-edge regular tetrahedron [A0 A1 A2 B3].
    S generates the clockwise rotation seen from above, about the downward
    perpendicular from A0 to the plane z = 0 of A1 A2 B3. P_i lies on the facet
    opposite A_i. For epsilon = 0.05 the layout search settles on barycentric
    weights, listed over the facet's vertices in increasing index order:

        P0 on [A1 A2 A3]: (0.2, 0.6, 0.2)
        P1 on [A0 A2 A3]: (0.2, 0.2, 0.6)
        P2 on [A0 A1 A3]: (0.2, 0.2, 0.6)
        P3 on [A0 A1 A2]: (0.2, 0.6, 0.2)

    ``meta["barycentric"]`` carries the layout actually used.
    """
    if not 0.0 < epsilon <= 0.2:
        raise ValueError("epsilon must lie in (0, 0.2]")
    tau, B3 = _tetra_tau(float(epsilon))
    S = skew_from_axis_3d([0.0, 0.0, -1.0])
    layout = _tetra_layout(float(epsilon))
    corners = [np.delete(tau.vertices, i, axis=0) for i in range(4)]
    P = np.array([np.array(w) @ corners[i] for i, w in enumerate(layout)])
    name = "3d-tetra"
    expected = Verdict.NOT_ROTATABLE
    if p2_near_a3:
        P[2] = np.array(_P2_NEAR_A3) @ corners[2]
        name, expected = "3d-tetra-p2-near-a3", None
    sigma = simplex_from_vertices(P)
    meta = {"barycentric": layout, "epsilon": float(epsilon), "B3": B3}
    sc = Scenario(name, sigma, tau, S, expected, meta=meta)
    if not p2_near_a3:
        verdict = analyze(sigma, tau, S).verdict
        if verdict is not Verdict.NOT_ROTATABLE:
            raise ConstructionUnverified(f"constructed tetrahedron analyzes as {verdict.value}")
    return sc


def tetra_projection_rows(sc: Scenario) -> list[tuple[str, float, float]]:
    """P0..P3 and A0 projected along the rotation axis onto the plane z = 0."""
    rows = [(f"P{i}", float(p[0]), float(p[1])) for i, p in enumerate(sc.sigma.vertices)]
    a0 = sc.tau.vertices[0]
    rows.append(("A0", float(a0[0]), float(a0[1])))
    return rows


@dataclass(frozen=True)
class ParityRow:
    dim: int
    trials: int
    rotatable_both: int = 0
    forward_only: int = 0
    backward_only: int = 0
    not_rotatable: int = 0
    degenerate_excluded: int = 0


def trial_seed(seed: int, n: int, k: int) -> int:
    return int(np.random.SeedSequence([seed, n, k]).generate_state(1)[0])


def parity_scan(n_list, trials: int, seed: int) -> list[ParityRow]:
    """Verdict frequencies of random inscribed pairs per dimension.

    Instances with any degeneracy flag are counted only in
    ``degenerate_excluded``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    for n in n_list:
        counts = dict.fromkeys(("both", "fwd", "bwd", "not", "deg"), 0)
        for k in range(trials):
            sc = random_inscribed_simplex_pair(n, trial_seed(seed, n, k))
            rep = analyze(sc.sigma, sc.tau, sc.S)
            if rep.degeneracy.any:
                counts["deg"] += 1
            elif rep.verdict is Verdict.ROTATABLE_BOTH:
                counts["both"] += 1
            elif rep.verdict is Verdict.ROTATABLE_FORWARD:
                counts["fwd"] += 1
            elif rep.verdict is Verdict.ROTATABLE_BACKWARD:
                counts["bwd"] += 1
            else:
                counts["not"] += 1
        rows.append(ParityRow(n, trials, counts["both"], counts["fwd"], counts["bwd"], counts["not"], counts["deg"]))
    return rows


def feasible_senses(report) -> tuple[bool, bool]:
    return (
        report.forward.status is RegionStatus.FEASIBLE,
        report.backward.status is RegionStatus.FEASIBLE,
    )
