from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inlslab import kernels
from inlslab.exponents import (
    ExponentConfig,
    InfeasibleExponents,
    Status,
    ac_membership,
    ad_membership,
    appendix_interp_verify,
    beta_exponent,
    coverage_defect,
    default_gammat0,
    feasible_parameters,
    implication_sweep,
    inhomogeneous_admissible,
    largest_passing_eps,
    necessary_conditions,
    perturb_exponents,
    region_polygon,
    scaling_gap,
    solved_sigma,
    wellposedness_exponents,
    whitney_decompose,
)
from inlslab.exponents.core import as_fraction
from inlslab.exponents.region import config_at
from inlslab.exponents.sweep import decode, encode, random_configs
from inlslab.exponents.whitney import partners

rationals = st.fractions(min_value=0, max_value=1, max_denominator=60)
weights = st.fractions(min_value=F(1, 60), max_value=F(59, 60), max_denominator=60)


# --- conversions -------------------------------------------------------------

def test_as_fraction_forms():
    assert as_fraction("3/8") == F(3, 8)
    assert as_fraction("1.6") == F(8, 5)
    assert as_fraction(1.6) == F(8, 5)
    assert as_fraction(2) == F(2)
    with pytest.raises(TypeError):
        as_fraction(True)
    with pytest.raises(ValueError):
        as_fraction(float("nan"))


def test_config_rejects_out_of_range():
    with pytest.raises(ValueError):
        ExponentConfig(F(-1, 10), F(1, 2), 0, F(1, 2), F(1, 10), F(1, 10))
    with pytest.raises(ValueError):
        ExponentConfig(0, F(3, 2), 0, F(1, 2), F(1, 10), F(1, 10))


# --- homogeneous and inhomogeneous classes -------------------------------------

def test_ad_classical_endpoint_is_reduced_member():
    m = ad_membership(0, F(1, 2), 0, 0)
    # 1/r = 1/2 is tight in the reduced class; the full class needs gamma > 0 for decay
    assert m.reduced.member
    assert m.reduced.status is Status.BOUNDARY
    assert "ad_reduced.r_high" in m.reduced.tight
    assert m.violated == ("ad.decay",)


def test_ad_reduced_member_example():
    m = ad_membership(F(3, 20), F(1, 2), F(3, 10), 0)
    assert m.member and m.reduced.member
    assert m.reduced.condition("ad_reduced.scaling").lhs == F(3, 10)


def test_ad_outside_example():
    m = ad_membership(F(3, 20), F(3, 5), F(3, 10), 0)
    assert m.status is Status.OUTSIDE
    assert "ad.r_high" in m.violated


def test_ad_rejects_negative_reciprocal():
    with pytest.raises(ValueError):
        ad_membership(F(-1, 4), F(1, 2), F(1, 10), 0)


def test_ad_flags_sigma_gap():
    # sigma = 1 is allowed for the homogeneous class only
    m = ad_membership(F(1, 10), F(1, 5), F(3, 10), solved_sigma(F(1, 10), F(1, 5), F(3, 10)))
    assert m.sigma == F(1)
    assert any("sigma" in n for n in m.notes)


def test_ac_examples():
    m = ac_membership(F(3, 40), F(11, 20), F(3, 10), 0)
    assert m.status is Status.INTERIOR
    assert F(11, 20) > F(1, 2)
    assert ac_membership(F(1, 10), F(1, 10), F(3, 10), 0).violated[:1] == ("ac.r_low",)
    assert "ac.scaling" in ac_membership(F(1, 2), F(1, 2), F(3, 10), 0).violated
    with pytest.raises(ValueError):
        ac_membership(F(1, 4), F(1, 3), F(1), 0)
    with pytest.raises(ValueError):
        ac_membership(F(1, 4), F(1, 3), F(1, 2), F(1, 2))


@given(rationals, rationals, weights, st.fractions(min_value=F(-49, 100), max_value=F(49, 100), max_denominator=100))
def test_ad_subset_of_ac(iq, ir, g, sigma):
    m = ad_membership(iq, ir, g, sigma)
    if m.status is Status.INTERIOR and ir < F(1, 2) + g / 3:
        assert ac_membership(iq, ir, g, sigma).member


def test_diagonal_example():
    cfg = ExponentConfig(F(3, 10), F(2, 5), F(3, 10), F(2, 5), F(3, 10), F(3, 10))
    m = inhomogeneous_admissible(cfg)
    assert m.branch == "diagonal" and m.status is Status.INTERIOR and m.sigma == 0


def test_time_sum_one_is_excluded():
    # 1/q + 1/q~ = 1 with sharp scaling
    cfg = ExponentConfig(F(1, 2), F(1, 3), F(1, 2), F(1, 3), F(1, 2), F(1, 2))
    assert scaling_gap(cfg) == 0
    m = inhomogeneous_admissible(cfg)
    assert "main_cond_1.time" in m.violated


def test_inhomogeneous_requires_dim3():
    cfg = ExponentConfig(F(1, 4), F(1, 3), F(1, 4), F(1, 3), F(1, 4), F(1, 4), dim=4)
    with pytest.raises(ValueError):
        inhomogeneous_admissible(cfg)


def test_wellposedness_pair_lower_branch():
    wp = wellposedness_exponents(F(3, 2), F(1, 100), F(1, 4), F(1, 2))
    m = inhomogeneous_admissible(wp.config)
    assert m.member and m.branch == "lower"
    assert m.condition("main_cond_31").verdict.value == "holds"
    assert m.condition("main_cond_32").verdict.value == "holds"


# --- necessary conditions -------------------------------------------------------

def test_necessary_n5_violation():
    # X - Xt = 1/3 + 1/100 with sharp scaling
    g = gt = F(1, 10)
    irt = F(1, 10)
    ir = irt - gt / 3 + g / 3 + F(1, 3) + F(1, 100)
    iq = F(1, 10)
    iqt = F(3, 2) * (1 - ir - irt) + (g + gt) / 2 - iq
    cfg = ExponentConfig(iq, ir, iqt, irt, g, gt)
    assert necessary_conditions(cfg).violated == ("n5.upper",)


def test_necessary_scaling_violation():
    cfg = ExponentConfig(F(3, 10) + F(1, 100), F(2, 5), F(3, 10), F(2, 5), F(3, 10), F(3, 10))
    assert necessary_conditions(cfg).violated == ("n0",)


def test_necessary_general_dimension():
    # dimension 4: the window scales with 1/n
    cfg = ExponentConfig(F(1, 4), F(1, 3), F(1, 4), F(1, 3), F(1, 4), F(1, 4), dim=4)
    m = necessary_conditions(cfg)
    assert m.condition("n1.r_low").rhs == F(1, 3) and m.condition("n1.r_low").lhs == F(1, 16)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**31))
def test_admissible_implies_necessary_random(seed):
    rows, D = random_configs(64, half_denom=24, seed=seed)
    for row in rows:
        cfg = decode(row, D)
        if inhomogeneous_admissible(cfg).member:
            assert necessary_conditions(cfg).member


def test_implication_sweep_small():
    rep = implication_sweep(5000, half_denom=30, seed=3, crosscheck=400)
    assert rep.n_admissible > 0
    assert rep.ok


def test_kernel_backends_agree():
    rows, D = random_configs(20000, half_denom=40, seed=11)
    outs = [b.classify_configs(rows, D, 3) for b in kernels.available_backends().values()]
    for a, n in outs[1:]:
        assert np.array_equal(a, outs[0][0]) and np.array_equal(n, outs[0][1])


def test_encode_roundtrip():
    cfg = ExponentConfig(F(3, 10), F(2, 5), F(3, 10), F(2, 5), F(3, 10), F(3, 10))
    assert decode(encode(cfg, 20), 20) == ExponentConfig(*[getattr(cfg, k) for k in
                                                           ("inv_q", "inv_r", "inv_qt", "inv_rt", "gamma", "gamma_t")])
    with pytest.raises(ValueError):
        encode(cfg, 3)


@settings(max_examples=200, deadline=None)
@given(rationals, rationals, rationals, rationals, weights, weights)
def test_scaling_gap_equals_sigma_defect(iq, ir, iqt, irt, g, gt):
    cfg = ExponentConfig(iq, ir, iqt, irt, g, gt)
    s1 = solved_sigma(iq, ir, g)
    s2 = solved_sigma(iqt, irt, gt)
    # sharp-scaling defect is minus half the failure of s2 = -s1
    assert scaling_gap(cfg) == -(s1 + s2) / 2


# --- beta and perturbations -------------------------------------------------------

def test_beta_examples():
    assert beta_exponent(0, F(1, 2), 0, F(1, 2), 0, 0) == 0
    assert beta_exponent(F(1, 2), F(1, 3), F(1, 2), F(1, 3), F(3, 10), F(3, 10)) == F(-1, 5)


@settings(max_examples=200, deadline=None)
@given(rationals, rationals, rationals, weights, weights)
def test_beta_vanishes_under_sharp_scaling(iq, ir, irt, g, gt):
    iqt = F(3, 2) * (1 - ir - irt) + (g + gt) / 2 - iq
    assert beta_exponent(iq, ir, iqt, irt, g, gt) == 0


@settings(max_examples=100, deadline=None)
@given(rationals, rationals, rationals, rationals, weights, weights, rationals)
def test_beta_affine(ia, ib, iat, ibt, g, gt, h):
    base = beta_exponent(ia, ib, iat, ibt, g, gt)
    assert beta_exponent(ia + h, ib, iat, ibt, g, gt) - base == -h
    assert beta_exponent(ia, ib + h, iat, ibt, g, gt) - base == -F(3, 2) * h
    assert beta_exponent(ia, ib, iat, ibt, g + h, gt) - base == h / 2


def test_perturbation_betas():
    cfg = ExponentConfig(F(3, 10), F(2, 5), F(3, 10), F(2, 5), F(3, 10), F(3, 10))
    p = perturb_exponents(cfg, F(1, 100))
    assert p.betas == (F(1, 50), F(-1, 100), F(-1, 100))
    assert perturb_exponents(cfg, 0).betas == (0, 0, 0)
    bad = ExponentConfig(F(3, 10) + F(1, 20), F(2, 5), F(3, 10), F(2, 5), F(3, 10), F(3, 10))
    with pytest.raises(ValueError):
        perturb_exponents(bad, F(1, 100))
    q = perturb_exponents(bad, F(1, 100), require_sharp=False)
    g = beta_exponent(bad.inv_q, bad.inv_r, bad.inv_qt, bad.inv_rt, bad.gamma, bad.gamma_t)
    assert g == -scaling_gap(bad) == F(-1, 20)
    assert q.base_beta == g
    assert q.betas == (F(1, 50) + g, F(-1, 100) + g, F(-1, 100) + g)
    with pytest.raises(ValueError):
        perturb_exponents(cfg, F(1, 2))


# --- well-posedness exponents -----------------------------------------------------

def _wp_oracle(alpha, delta, g0, gt0):
    # formulas written with 17 - 6 alpha
    k = 17 - 6 * alpha
    b = 4 - 2 * alpha
    return (F(3, 2) / k + F(3, 2) * delta,
            F(1, 2) - 1 / k + g0 / 3 - delta,
            F(1, 2) + 1 / k - F(3, 2) * delta * (5 - 2 * alpha),
            F(1, 6) - F(2, 3) / k + gt0 / 3 + delta * (b + 1))


def test_wellposedness_example_tuple():
    wp = wellposedness_exponents(F(3, 2), F(1, 100), F(1, 4), F(1, 2))
    got = (wp.inv_q0, wp.inv_r0, wp.inv_qt0, wp.inv_rt0)
    assert got == _wp_oracle(F(3, 2), F(1, 100), F(1, 4), F(1, 2))
    assert got == (F(81, 400), F(269, 600), F(119, 200), F(27, 100))
    assert 2 * wp.inv_qt0 == 3 * (F(1, 2) - wp.inv_rt0) + F(1, 2)
    assert wp.beta == 1


def test_wellposedness_errors():
    with pytest.raises(ValueError):
        wellposedness_exponents(F(11, 6), F(1, 100), F(1, 4))
    with pytest.raises(InfeasibleExponents) as ei:
        wellposedness_exponents(F(3, 2), F(1, 100), F(3, 8))
    assert "c1.gamma0_critical" in ei.value.violated
    with pytest.raises(ValueError):
        wellposedness_exponents(F(3, 2), 0, F(1, 4))


def test_default_gammat0_centre():
    assert default_gammat0(F(3, 2), F(1, 4)) == F(1, 2)


@pytest.mark.parametrize("alpha", [F(3, 2), F(8, 5), F(17, 10), F(9, 5), F(11, 6) - F(1, 100)])
def test_feasible_nonempty(alpha):
    fs = feasible_parameters(alpha)
    assert fs
    for wp in fs[:5]:
        assert wp.beta == 4 - 2 * alpha
        assert inhomogeneous_admissible(wp.config).branch == "lower"


# --- region polygon ------------------------------------------------------------------

def _inside_convex(p, verts):
    # closed convex polygon, vertices ordered counter-clockwise
    n = len(verts)
    for i in range(n):
        (x0, y0), (x1, y1) = verts[i], verts[(i + 1) % n]
        if (x1 - x0) * (p[1] - y0) - (y1 - y0) * (p[0] - x0) < 0:
            return False
    return True


def test_region_symmetric_for_equal_weights():
    r = region_polygon(F(3, 10), F(3, 10))
    up = {(y, x) for x, y in r.upper.vertices}
    assert up == set(r.lower.vertices)


def test_region_diagonal_endpoints():
    r = region_polygon(F(3, 10), F(3, 10))
    xs = sorted(v[0] for v in r.diagonal.vertices)
    assert xs == [F(1, 6) + F(1, 10), F(1, 2)]
    # lower endpoint is open, upper endpoint attained
    assert not inhomogeneous_admissible(config_at((xs[0], xs[0]), F(3, 10), F(3, 10), 0)).member
    assert inhomogeneous_admissible(config_at((xs[1], xs[1]), F(3, 10), F(3, 10), 0)).member


@pytest.mark.parametrize("g,gt", [(F(3, 10), F(3, 10)), (F(1, 5), F(2, 5)), (F(2, 5), F(1, 10))])
def test_region_vertices_boundary_and_centroid_interior(g, gt):
    r = region_polygon(g, gt)
    for piece in (r.upper, r.lower):
        assert len(piece.vertices) >= 3
        for v in piece.vertices:
            m = inhomogeneous_admissible(config_at(v, g, gt, 0), closure=True)
            assert m.status is Status.BOUNDARY, (v, m.violated)
        c = piece.centroid()
        assert inhomogeneous_admissible(config_at(c, g, gt, 0)).status is Status.INTERIOR


@pytest.mark.parametrize("g,gt", [(F(3, 10), F(3, 10)), (F(1, 5), F(2, 5))])
def test_region_matches_grid_rejection_sampling(g, gt):
    r = region_polygon(g, gt)
    n = 90
    hits = []
    for i in range(n + 1):
        for j in range(n + 1):
            p = (F(i, n), F(j, n))
            iq, iqt = (3 * (F(1, 2) - p[0]) + g) / 2, (3 * (F(1, 2) - p[1]) + gt) / 2
            if not (0 <= iq <= 1 and 0 <= iqt <= 1):
                continue
            cfg = ExponentConfig(iq, p[0], iqt, p[1], g, gt)
            m = inhomogeneous_admissible(cfg)
            if m.member:
                hits.append((p, m.branch))
    assert hits
    for p, branch in hits:
        piece = getattr(r, branch)
        if branch == "diagonal":
            xs = sorted(v[0] for v in piece.vertices)
            assert xs[0] <= p[0] <= xs[1]
        else:
            assert _inside_convex(p, piece.vertices), (p, branch)
    # every polygon vertex is approached by admissible grid points
    for piece in (r.upper, r.lower):
        for v in piece.vertices:
            d = min(max(abs(p[0] - v[0]), abs(p[1] - v[1])) for p, b in hits if b == piece.branch)
            assert d <= F(3, n)


def test_region_rejects_bad_weights():
    with pytest.raises(ValueError):
        region_polygon(0, F(1, 2))


def test_region_upper_empty_for_large_gamma_t():
    r = region_polygon(F(1, 5), F(3, 5))
    assert r.upper.empty and not r.lower.empty


# --- appendix --------------------------------------------------------------------------

def test_appendix_endpoints_recover_cases():
    from inlslab.exponents.appendix import sample_endpoints, stage_one, stage_two
    e = sample_endpoints(1, seed=5)[0]
    eps = F(1, 100)
    p0 = stage_one(e, F(0), eps)
    assert p0[1] - e.gamma / 3 == p0[3] - e.gamma_t / 3 == e.x1
    p1 = stage_one(e, F(1), eps)
    assert (p1[1], p1[3]) == (F(1, 6) + e.gamma / 3, F(1, 2) + (e.gamma_t - eps) / 3)
    assert (p1[0], p1[2]) == (e.inv_a2, e.inv_at2)
    d = stage_two(e, F(0), eps)
    assert (d[0], d[1], d[2], d[3]) == (F(1, 2), (e.gamma + eps) / 3, F(1, 2), (1 + e.gamma_t) / 3)


def test_appendix_sweep_clean():
    rep = appendix_interp_verify([F(k, 20) for k in range(21)], n_endpoints=10)
    assert rep.n_checked == 2 * 2 * 10 * 21
    assert rep.ok


def test_appendix_empty_and_errors():
    assert appendix_interp_verify([]).n_checked == 0
    with pytest.raises(ValueError):
        appendix_interp_verify([F(3, 2)])


def test_appendix_eps_scan_reports_largest():
    best, counts = largest_passing_eps([F(1, 100), F(1, 2), F(1)], [F(k, 10) for k in range(11)], n_endpoints=10)
    assert counts[F(1, 100)] == 0
    assert counts[F(1)] > 0
    assert best in (F(1, 100), F(1, 2))


# --- Whitney ----------------------------------------------------------------------------

def test_whitney_partner_counts():
    for k in range(50):
        ms = partners(k)
        assert len(ms) == (2 if k % 2 == 0 else 1)
        assert all(m - k >= 2 and m // 2 == k // 2 + 1 for m in ms)


def test_whitney_properties():
    sq = whitney_decompose(-7, 0, 1)
    assert all(q.comparable(4) for q in sq)
    assert all(q.dist_ratio in (1, 2) for q in sq)
    by_j = {}
    for q in sq:
        by_j.setdefault(q.j, []).append(q)
    for j, qs in by_j.items():
        for a in range(len(qs)):
            for b in range(a + 1, len(qs)):
                assert not qs[a].overlaps(qs[b])
    # disjoint across scales too
    for a in range(len(sq)):
        for b in range(a + 1, len(sq)):
            assert not sq[a].overlaps(sq[b])
    assert coverage_defect(sq, 1) >= 0


def test_whitney_defect_vanishes():
    defects = [coverage_defect(whitney_decompose(j, 0, 1), 1) for j in (-4, -6, -8, -10)]
    assert all(a > b for a, b in zip(defects, defects[1:]))
    # collar of width ~ 2^j along the diagonal
    for j, d in zip((-4, -6, -8, -10), defects):
        assert d <= F(2) ** (j + 1)
    assert float(defects[-1]) < 2e-3
