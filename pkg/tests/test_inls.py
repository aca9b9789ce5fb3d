import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from inlslab.exponents import wellposedness_exponents
from inlslab.fields import Field3D, gaussian
from inlslab.inls import (
    EquationParams, ExponentRelationViolated, PicardDivergence, SmallnessViolated, SolverConfig, UnresolvedField,
    equation_residual, free_flow, hdot1_norm, initial_gaussian, nonlinearity, picard_iterate, rescale_solution,
    sobolev_embedding_ratio, splitstep_evolve, strichartz_samples, weight,
)

P = EquationParams()
SMALL = SolverConfig(box_length=10, n=32, dt=1 / 64, final_time=0.5, eta=0.01, cadence=8)


def test_params_validation():
    assert P.beta == 1
    assert EquationParams(alpha="1.6").beta == Fraction(4, 5)
    for bad in (dict(alpha=Fraction(11, 6)), dict(alpha=1), dict(lam=0), dict(eps=-1.0)):
        with pytest.raises(ValueError):
            EquationParams(**bad)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(n=48)
    with pytest.raises(ValueError):
        SolverConfig(dt=0)
    assert SMALL.phase_resolution == pytest.approx(SMALL.dt * (math.pi / SMALL.spacing) ** 2)


def test_nonlinearity_of_zero():
    z = Field3D(10, np.zeros((8, 8, 8)))
    assert np.all(nonlinearity(z, P).samples == 0)


@given(st.floats(0, 2 * math.pi))
@settings(max_examples=20, deadline=None)
def test_nonlinearity_gauge_equivariant(theta):
    u = initial_gaussian(SMALL)
    rot = u.with_samples(np.exp(1j * theta) * u.samples)
    np.testing.assert_allclose(nonlinearity(rot, P).samples, np.exp(1j * theta) * nonlinearity(u, P).samples,
                               rtol=1e-13, atol=1e-30)


def test_nonlinearity_pointwise_formula():
    u = initial_gaussian(SMALL)
    eps = SMALL.spacing
    r = u.radius()
    expected = (r ** 2 + eps ** 2) ** -0.75 * np.abs(u.samples) * u.samples
    np.testing.assert_allclose(nonlinearity(u, P).samples, expected, rtol=1e-14)


def test_eps_zero_requires_vanishing_origin():
    u = initial_gaussian(SMALL)
    with pytest.raises(ValueError):
        nonlinearity(u, EquationParams(eps=0.0))
    c = u.n // 2
    s = u.samples.copy()
    s[c, c, c] = 0
    v = nonlinearity(u.with_samples(s), EquationParams(eps=0.0))
    assert np.all(np.isfinite(v.samples))


def test_regularized_weight_converges_in_eps():
    # value at |x| = 1 against |x|^{-alpha} |u|^beta u; error is O(eps^2)
    g = gaussian(1.0, 0.5)
    exact = 1.0 * abs(g(1.0)) * g(1.0)
    field = g.sample(8.0, 16)
    j = field.n // 2 + 2  # x = 1 on this grid
    errs = []
    epss = [0.2, 0.1, 0.05, 0.025]
    for eps in epss:
        val = nonlinearity(field, EquationParams(eps=eps)).samples[j, field.n // 2, field.n // 2]
        errs.append(abs(val - exact))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 1)


def test_weight_default_eps_is_grid_spacing():
    u = initial_gaussian(SMALL)
    c = u.n // 2
    assert weight(u, P)[c, c, c] == pytest.approx(SMALL.spacing ** -1.5)


def test_mass_conservation():
    tr = splitstep_evolve(initial_gaussian(SMALL), P, replace(SMALL, final_time=1.0))
    assert tr.mass_drift() <= 1e-10


def test_gauge_invariance_of_trajectory():
    u0 = initial_gaussian(SMALL)
    theta = 0.7
    a = splitstep_evolve(u0, P, SMALL)
    b = splitstep_evolve(u0.with_samples(np.exp(1j * theta) * u0.samples), P, SMALL)
    for x, y in zip(a.snapshots, b.snapshots):
        np.testing.assert_allclose(y.samples, np.exp(1j * theta) * x.samples, atol=1e-12 * SMALL.eta)


def test_linear_regime_difference_scales_with_power():
    diffs = []
    for eta in (0.01, 0.02):
        cfg = replace(SMALL, eta=eta)
        u0 = initial_gaussian(cfg)
        diffs.append(np.linalg.norm(splitstep_evolve(u0, P, cfg).final.samples - free_flow(u0, 0.5).samples))
    assert diffs[1] / diffs[0] == pytest.approx(2 ** (float(P.beta) + 1), rel=0.05)


def test_focusing_and_defocusing_agree_at_linear_order():
    u0 = initial_gaussian(SMALL)
    plus = splitstep_evolve(u0, P, SMALL).final.samples
    minus = splitstep_evolve(u0, EquationParams(lam=-1), SMALL).final.samples
    rel = np.linalg.norm(plus - minus) / np.linalg.norm(u0.samples)
    assert rel < 10 * SMALL.eta ** float(P.beta)


def test_strang_second_order():
    cfg = replace(SMALL, eta=0.5, tail_threshold=1e-3, cadence=10 ** 6)
    u0 = initial_gaussian(cfg)
    ref = splitstep_evolve(u0, P, replace(cfg, dt=1 / 2048)).final.samples
    errs = [np.linalg.norm(splitstep_evolve(u0, P, replace(cfg, dt=dt)).final.samples - ref)
            for dt in (1 / 64, 1 / 128)]
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.15)


def test_resolution_guard():
    cfg = replace(SMALL, box_length=12.0, tail_threshold=1e-7)
    with pytest.raises(UnresolvedField):
        splitstep_evolve(initial_gaussian(cfg), P, cfg)


def test_snapshots_follow_cadence():
    tr = splitstep_evolve(initial_gaussian(SMALL), P, SMALL)
    np.testing.assert_allclose(tr.times, np.arange(5) * 8 / 64)
    assert len(tr.rows()) == 5


def test_energy_is_nearly_conserved():
    tr = splitstep_evolve(initial_gaussian(SMALL), P, SMALL)
    assert np.max(np.abs(tr.energy / tr.energy[0] - 1)) < 1e-3


def test_picard_first_iterate_is_free_flow():
    u0 = initial_gaussian(SMALL)
    res = picard_iterate(u0, P, 0.5, 1, SMALL)
    np.testing.assert_allclose(res.final.samples, free_flow(u0, 0.5).samples, atol=1e-16)
    assert res.traces[0].ratio is None


def test_picard_contraction():
    res = picard_iterate(initial_gaussian(SMALL), P, 0.5, 5, SMALL)
    assert len(res.ratios) == 4
    assert all(r <= 0.1 for r in res.ratios)
    d = [t.difference for t in res.traces]
    assert all(a > b for a, b in zip(d, d[1:]))


def test_picard_ratio_scales_with_eta():
    ratios = []
    for eta in (0.01, 0.02):
        cfg = replace(SMALL, eta=eta)
        ratios.append(picard_iterate(initial_gaussian(cfg), P, 0.5, 2, cfg).ratios[0])
    assert ratios[1] / ratios[0] == pytest.approx(2 ** float(P.beta), rel=0.3)


def test_picard_limit_matches_splitstep():
    u0 = initial_gaussian(SMALL)
    pic = picard_iterate(u0, P, 0.5, 5, SMALL).final.samples
    free = free_flow(u0, 0.5).samples
    same = splitstep_evolve(u0, P, SMALL).final.samples
    fine = splitstep_evolve(u0, P, replace(SMALL, dt=1 / 1024, cadence=10 ** 6)).final.samples
    scale = np.linalg.norm(fine - free)
    assert np.linalg.norm(pic - same) / scale < 1e-4
    assert np.linalg.norm(pic - fine) / scale < 1e-2


def test_picard_smallness_check():
    cfg = replace(SMALL, eta=1.0)
    with pytest.raises(SmallnessViolated):
        picard_iterate(initial_gaussian(cfg), P, 0.5, 2, cfg)


def test_picard_divergence_reported():
    cfg = replace(SMALL, eta=5.0)
    with pytest.raises(PicardDivergence):
        picard_iterate(initial_gaussian(cfg), EquationParams(lam=-1), 0.5, 6, cfg, smallness=math.inf)


def test_strichartz_samples_on_scaling_line():
    wp = wellposedness_exponents(Fraction(3, 2), Fraction(1, 100), Fraction(1, 4), Fraction(1, 2))
    pairs = strichartz_samples(wp)
    assert len(pairs) == 3
    for iq, ir in pairs:
        assert 2 * iq + 3 * ir == Fraction(3, 2) + wp.gamma0


def test_rescaling_invariants():
    tr = splitstep_evolve(initial_gaussian(SMALL), P, SMALL)
    for delta in (0.5, 2.0):
        sc = rescale_solution(tr, delta)
        for a, b in zip(tr.snapshots, sc.snapshots):
            assert hdot1_norm(b) == pytest.approx(hdot1_norm(a), rel=1e-6)
            assert b.l2_norm() == pytest.approx(a.l2_norm() / delta, rel=1e-12)
        np.testing.assert_allclose(sc.times, tr.times / delta ** 2)


def test_rescaled_residual():
    tr = splitstep_evolve(initial_gaussian(SMALL), P, replace(SMALL, dt=1 / 256, cadence=8))
    base = equation_residual(tr)
    assert equation_residual(rescale_solution(tr, 2.0)) <= 2 * base


def test_rescale_rejects_bad_delta():
    tr = splitstep_evolve(initial_gaussian(SMALL), P, SMALL)
    for d in (0, -1, math.inf):
        with pytest.raises(ValueError):
            rescale_solution(tr, d)


DILATIONS = (0.25, 0.5, 1.0, 2.0, 4.0)


def test_embedding_classical_sobolev():
    scan = sobolev_embedding_ratio(DILATIONS, 0, 0, Fraction(1, 2), Fraction(1, 6))
    assert scan.spread < 1e-6
    lhs = (4 * math.pi * math.gamma(1.5) / (2 * 6 ** 1.5)) ** (1 / 6)
    rhs = math.sqrt(3) * (math.pi / 2) ** 0.75
    assert scan.max_ratio == pytest.approx(lhs / rhs, rel=1e-8)


def test_embedding_hardy():
    scan = sobolev_embedding_ratio(DILATIONS, 0, -1, Fraction(1, 2), Fraction(1, 2))
    lhs = math.sqrt(4 * math.pi * math.sqrt(math.pi / 8))
    rhs = math.sqrt(3) * (math.pi / 2) ** 0.75
    assert scan.max_ratio == pytest.approx(lhs / rhs, rel=1e-8)
    assert scan.max_ratio < 2


def test_embedding_wellposedness_instance():
    wp = wellposedness_exponents(Fraction(3, 2), Fraction(1, 100), Fraction(1, 4), Fraction(1, 2))
    a, b = -wp.gamma0, wp.b_embed
    assert a - b - 1 == 3 * wp.inv_p_embed - 3 * wp.inv_r0
    scan = sobolev_embedding_ratio(DILATIONS, a, b, wp.inv_r0, wp.inv_p_embed)
    assert np.isfinite(scan.max_ratio) and scan.spread < 1e-6


@pytest.mark.parametrize("args", [
    (0, 0, Fraction(1, 2), Fraction(1, 5)),
    (0, 1, Fraction(1, 2), Fraction(1, 2)),
    (0, 0, Fraction(1, 6), Fraction(1, 2)),
])
def test_embedding_rejects_bad_exponents(args):
    with pytest.raises(ExponentRelationViolated):
        sobolev_embedding_ratio(DILATIONS, *args)
