import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import grid, inflated_box, minkowski_constant, random_rotation, sign_values, strict_sign_hits
from polyrot.admissibility import (
    PointVerdict,
    RegionStatus,
    Verdict,
    admissible_at,
    analyze,
    build_constraints,
    region_feasibility,
    translation_feasibility,
)
from polyrot.errors import ZeroDirection
from polyrot.geometry import incidence, polytope_from_h_and_v, simplex_from_vertices
from polyrot.oracle import simulate
from polyrot.scenarios import (
    example_2d_concurrent,
    random_inscribed_simplex_pair,
    random_partial_contact_pair,
)
from polyrot.skewlin import make_skew

UNIT = np.array([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
MEDIAL = np.array([(0.5, 0.0), (0.0, 0.5), (0.5, 0.5)])
J = make_skew([[0, -1], [1, 0]])
R2 = 1 / math.sqrt(2)


def medial_system(P=MEDIAL):
    tau = simplex_from_vertices(UNIT)
    sigma = simplex_from_vertices(P)
    inc = incidence(sigma, tau)
    return sigma, tau, build_constraints(sigma, tau, inc, J)


def by_vertex(constraints):
    return sorted(constraints, key=lambda c: c.pair[0])


# build_constraints


def test_medial_constraints():
    _, _, cons = medial_system()
    cons = by_vertex(cons)
    grads = [(-1, 0), (0, 1), (R2, -R2)]
    for c, g, p in zip(cons, grads, MEDIAL):
        assert np.allclose(c.gradient, g)
        assert np.allclose(c.base, p)
    # the gradient predicts the finite-difference normal velocity
    tau = simplex_from_vertices(UNIT)
    q, t = np.array([0.3, 0.1]), 1e-6
    for c in cons:
        i, j = c.pair
        moved = (np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]]) @ (MEDIAL[i] - q)) + q
        assert tau.normals[j] @ (moved - MEDIAL[i]) / t == pytest.approx(c.value(q), abs=1e-6)


def test_no_contacts_no_constraints():
    tau = simplex_from_vertices(UNIT)
    sigma = simplex_from_vertices([(0.1, 0.1), (0.3, 0.1), (0.1, 0.3)])
    assert build_constraints(sigma, tau, incidence(sigma, tau), J) == []


def test_zero_direction_gives_zero_gradients():
    sigma, tau, _ = medial_system()
    cons = build_constraints(sigma, tau, incidence(sigma, tau), make_skew(np.zeros((2, 2))))
    assert all(np.array_equal(c.gradient, [0, 0]) for c in cons)
    with pytest.raises(ZeroDirection):
        region_feasibility(cons, 1, tau, make_skew(np.zeros((2, 2))))
    with pytest.raises(ZeroDirection):
        analyze(sigma, tau, make_skew(np.zeros((2, 2))))


# admissible_at


def test_boundary_rule_at_medial_corner():
    _, tau, cons = medial_system()
    q = np.array([0.5, 0.5])
    check = admissible_at(cons, q, tau, 1)
    assert check.verdict is PointVerdict.BOUNDARY_RULE
    assert len(check.pairs) == 3
    secondary = [c.secondary_value(q) for c in by_vertex(cons)]
    assert secondary == pytest.approx([0.5, 0.5, 0.0])
    assert admissible_at(cons, q, tau, -1).verdict is PointVerdict.BOUNDARY_RULE


def test_mixed_signs_not_admissible():
    _, tau, cons = medial_system()
    q = (0.2, 0.2)
    assert [c.value(q) for c in by_vertex(cons)] == pytest.approx([0.3, -0.3, 0.0])
    for sense in (1, -1):
        assert admissible_at(cons, q, tau, sense).verdict is PointVerdict.NOT_ADMISSIBLE


def test_empty_constraints_admissible():
    tau = simplex_from_vertices(UNIT)
    assert admissible_at([], (5.0, 5.0), tau).verdict is PointVerdict.ADMISSIBLE


def test_boundary_rule_requires_centre_in_tau():
    # zero lines of the concurrent example meet at R outside tau
    sc = example_2d_concurrent()
    cons = build_constraints(sc.sigma, sc.tau, incidence(sc.sigma, sc.tau), sc.S)
    R = sc.meta["R"]
    assert max(abs(c.normalized_value(R)) for c in cons) < 1e-9
    for sense in (1, -1):
        assert not admissible_at(cons, R, sc.tau, sense)


# region_feasibility


def test_medial_region_boundary_only():
    sigma, tau, cons = medial_system()
    region = region_feasibility(cons, 1, tau, J)
    assert region.status is RegionStatus.BOUNDARY_ONLY
    assert np.allclose(region.witness, [0.5, 0.5], atol=1e-8)
    conc = region.degeneracy.concurrent
    assert conc is not None and conc.inside_tau
    assert np.allclose(conc.point, [0.5, 0.5], atol=1e-12)
    # exhaustive grid over tau: no centre is strictly positive for either sense
    pts = grid((0, 0), (1, 1), 401)
    pts = pts[pts.sum(axis=1) <= 1]
    for sense in (1, -1):
        assert not strict_sign_hits(sigma.vertices, UNIT, J.entries, pts, sense, 1e-12).any()


def test_tilted_hypotenuse_vertex():
    P = MEDIAL.copy()
    P[2] = (0.6, 0.4)
    sigma, tau, cons = medial_system(P)
    back = region_feasibility(cons, -1, tau, J)
    fwd = region_feasibility(cons, 1, tau, J)
    assert back.status is RegionStatus.FEASIBLE
    assert fwd.status is RegionStatus.INFEASIBLE
    assert np.all(sign_values(P, UNIT, J.entries, back.witness) < 0)
    # dense grid oracle over the unit square
    pts = grid((0, 0), (1, 1), 501)
    assert strict_sign_hits(P, UNIT, J.entries, pts, -1).any()
    assert not strict_sign_hits(P, UNIT, J.entries, pts, 1).any()
    # the (---) triangle is bounded by x = 0.5, y = 0.4, y = x - 0.2 around (0.55, 0.45)
    assert strict_sign_hits(P, UNIT, J.entries, [(0.55, 0.42)], -1).all()


def test_single_constraint_feasible_both():
    tau = simplex_from_vertices(UNIT)
    sigma = simplex_from_vertices([(0.3, 0.0), (0.4, 0.2), (0.2, 0.3)])
    inc = incidence(sigma, tau)
    cons = build_constraints(sigma, tau, inc, J)
    assert len(cons) == 1
    for sense in (1, -1):
        region = region_feasibility(cons, sense, tau, J)
        assert region.status is RegionStatus.FEASIBLE
        assert region.slack > 0


def test_feasible_witness_invariant():
    for seed in range(20):
        sc = random_inscribed_simplex_pair(2, seed)
        rep = analyze(sc.sigma, sc.tau, sc.S)
        for region in (rep.forward, rep.backward):
            if region.status is RegionStatus.FEASIBLE:
                vals = [region.sense * c.normalized_value(region.witness) for c in region.constraints]
                assert min(vals) >= region.slack > 0


def test_invalid_sense():
    _, tau, cons = medial_system()
    with pytest.raises(ValueError):
        region_feasibility(cons, 0, tau, J)


# certificates


@pytest.mark.parametrize("seed", range(8))
def test_certificates_are_valid(seed):
    sc = random_inscribed_simplex_pair(3, seed)
    rep = analyze(sc.sigma, sc.tau, sc.S)
    rng = np.random.default_rng(seed)
    for region in (rep.forward, rep.backward):
        if region.status is not RegionStatus.INFEASIBLE or region.lp_value > -1e-6:
            continue
        cert = region.certificate
        assert cert is not None
        assert np.all(cert.weights >= 0) and cert.weights.sum() == pytest.approx(1.0)
        by_pair = {c.pair: c for c in region.constraints}
        for q in rng.normal(size=(5, 3)):
            total = sum(w * region.sense * by_pair[p].normalized_value(q) for p, w in zip(cert.pairs, cert.weights))
            assert total == pytest.approx(cert.constant, abs=1e-8)
        assert cert.constant < 0


# analyze


def test_medial_rotatable_both():
    sigma, tau, _ = medial_system()
    rep = analyze(sigma, tau, J)
    assert rep.verdict is Verdict.ROTATABLE_BOTH
    for region in (rep.forward, rep.backward):
        assert region.status is RegionStatus.BOUNDARY_ONLY
        assert np.allclose(region.witness, [0.5, 0.5], atol=1e-8)
        assert simulate(sigma, tau, J.scaled(region.sense), region.witness, 1e-3, 8).stays_inside


@pytest.mark.parametrize("seed", range(25))
def test_planar_generic_rotatable(seed):
    sc = random_inscribed_simplex_pair(2, seed)
    rep = analyze(sc.sigma, sc.tau, sc.S)
    assert rep.degeneracy.concurrent is None
    assert rep.verdict.rotatable


def test_concurrent_example_not_rotatable():
    sc = example_2d_concurrent()
    rep = analyze(sc.sigma, sc.tau, sc.S)
    assert rep.verdict is Verdict.NOT_ROTATABLE
    conc = rep.degeneracy.concurrent
    assert conc is not None and not conc.inside_tau


def test_rank_deficient_direction_zero_gradient():
    # rotation about the z axis in a box-like simplex: the facet z = 0 has n in ker S
    tau = simplex_from_vertices([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    sigma = simplex_from_vertices([(0.2, 0.2, 0.0), (0.3, 0.2, 0.3), (0.2, 0.3, 0.3), (0.25, 0.25, 0.5)])
    S = make_skew([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    rep = analyze(sigma, tau, S)
    assert rep.degeneracy.zero_gradient_pairs == ((0, 3),)
    assert rep.verdict is Verdict.ROTATABLE_BOTH
    for region in (rep.forward, rep.backward):
        assert simulate(sigma, tau, S.scaled(region.sense), region.witness, 1e-3, 8).stays_inside


# translations


def test_translation_medial_impossible():
    sigma, tau, _ = medial_system()
    t = translation_feasibility(sigma, tau, incidence(sigma, tau))
    assert not t.translatable


def test_translation_single_wall():
    tau = simplex_from_vertices(UNIT)
    sigma = simplex_from_vertices([(0.3, 0.0), (0.4, 0.2), (0.2, 0.3)])
    t = translation_feasibility(sigma, tau, incidence(sigma, tau))
    assert t.translatable and t.strict
    assert np.allclose(t.witness, [0, 1])


def test_translation_square_corner():
    square = polytope_from_h_and_v(
        [(0, 0), (1, 0), (1, 1), (0, 1)], [((1, 0), 0), ((-1, 0), -1), ((0, 1), 0), ((0, -1), -1)]
    )
    sigma = simplex_from_vertices([(0.0, 0.5), (0.5, 0.0), (0.6, 0.6)])
    t = translation_feasibility(sigma, square, incidence(sigma, square))
    assert t.translatable and t.strict
    assert np.allclose(t.witness, [R2, R2])


# invariants


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 4), seed=st.integers(0, 10**6), c=st.sampled_from([1e-3, 0.37, 1.0, 25.0, 1e3]))
def test_scale_invariance(n, seed, c):
    sc = random_inscribed_simplex_pair(n, seed)
    a = analyze(sc.sigma, sc.tau, sc.S)
    b = analyze(sc.sigma, sc.tau, sc.S.scaled(c))
    assert a.verdict is b.verdict
    assert (a.forward.status, a.backward.status) == (b.forward.status, b.backward.status)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 4), seed=st.integers(0, 10**6))
def test_antipodal_symmetry(n, seed):
    sc = random_inscribed_simplex_pair(n, seed)
    a = analyze(sc.sigma, sc.tau, sc.S)
    b = analyze(sc.sigma, sc.tau, -sc.S)
    assert a.forward.status is b.backward.status
    assert a.backward.status is b.forward.status
    assert a.forward.lp_value == pytest.approx(b.backward.lp_value, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_soundness_against_simulation(n):
    checked = 0
    for seed in range(30):
        for sc in (random_inscribed_simplex_pair(n, seed), random_partial_contact_pair(n, 1 + seed % n, seed)):
            rep = analyze(sc.sigma, sc.tau, sc.S)
            for region in (rep.forward, rep.backward):
                if region.witness is None:
                    continue
                S = sc.S.scaled(region.sense / sc.S.norm())
                assert simulate(sc.sigma, sc.tau, S, region.witness, 1e-3, 8).stays_inside
                checked += 1
    assert checked > 40


def test_completeness_on_strict_instances():
    """Infeasible both ways and no flags: a 1/64 grid finds no admissible centre."""
    done = 0
    for seed in range(60):
        sc = random_inscribed_simplex_pair(3, seed)
        rep = analyze(sc.sigma, sc.tau, sc.S)
        if rep.verdict is not Verdict.NOT_ROTATABLE or rep.degeneracy.any:
            continue
        lo, hi = inflated_box(sc.tau.vertices)
        pts = grid(lo, hi, 65)
        for sense in (1, -1):
            # closed version of the sign test, so boundary-rule centres are covered too
            assert not strict_sign_hits(sc.sigma.vertices, sc.tau.vertices, sc.S.entries, pts, sense, -1e-9).any()
        done += 1
        if done == 4:
            break
    assert done == 4


def touched_gradients_independent(sc):
    inc = incidence(sc.sigma, sc.tau)
    facets = inc.touched_facets()
    G = sc.tau.normals[facets] @ sc.S.entries.T
    return bool(inc.untouched_facets()) and np.linalg.matrix_rank(G, tol=1e-9) == len(facets)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rotation_theorem_consistency(n):
    checked = 0
    for seed in range(15):
        for touched in range(1, n + 1):
            for shared in (False, True):
                if shared and touched == n:
                    continue
                sc = random_partial_contact_pair(n, touched, seed, shared)
                if not touched_gradients_independent(sc):
                    continue
                rep = analyze(sc.sigma, sc.tau, sc.S)
                assert rep.forward.status is RegionStatus.FEASIBLE
                assert rep.backward.status is RegionStatus.FEASIBLE
                checked += 1
    assert checked >= 15 * (n - 1)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_main_theorem_and_minkowski_oracle(n):
    for seed in range(20):
        sc = random_inscribed_simplex_pair(n, seed)
        rep = analyze(sc.sigma, sc.tau, sc.S)
        K = minkowski_constant(sc.sigma.vertices, sc.tau.vertices, sc.S.entries)
        assert rep.degeneracy.concurrent is None
        # a constant positive combination of the f's rules out the opposite sense
        expected = Verdict.ROTATABLE_FORWARD if K > 0 else Verdict.ROTATABLE_BACKWARD
        assert rep.verdict is expected


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 4), seed=st.integers(0, 10**6))
def test_rigid_motion_equivariance(n, seed):
    sc = random_inscribed_simplex_pair(n, seed)
    rng = np.random.default_rng(seed + 1)
    R0, shift = random_rotation(n, rng), rng.normal(size=n)
    S2 = make_skew(R0 @ sc.S.entries @ R0.T)
    a = analyze(sc.sigma, sc.tau, sc.S)
    b = analyze(sc.sigma.transformed(R0, shift), sc.tau.transformed(R0, shift), S2)
    assert a.verdict is b.verdict
    for ra, rb in ((a.forward, b.forward), (a.backward, b.backward)):
        assert ra.status is rb.status
        if rb.witness is not None:
            # the moved witness is admissible for the original problem
            back = R0.T @ (rb.witness - shift)
            cons = build_constraints(sc.sigma, sc.tau, a.incidence, sc.S)
            assert admissible_at(cons, back, sc.tau, ra.sense, tol=1e-8)
