import math

import numpy as np
import pytest
from scipy.integrate import quad

from inlslab.dispersive import (
    HypothesisViolated,
    TimeBump,
    decay_rate_fit,
    default_forcing,
    homogeneous_strichartz_ratio,
    inhomogeneous_strichartz_ratio,
    pitt_ratio_scan,
    predicted_decay_slope,
)
from inlslab.exponents import ExponentConfig, wellposedness_exponents
from inlslab.fields import gaussian
from inlslab.fitting import loglog_fit
from inlslab.propagator import duhamel

DECAY_SETS = [(6, "6/5", 0, 0), (2, 2, "3/10", "3/10"), (3, "3/2", "3/10", "3/10")]


@pytest.mark.parametrize("q,pp,g,gt,expected", [
    (6, "6/5", 0, 0, -1), (2, 2, "3/10", "3/10", "-3/10"), (3, "3/2", "3/10", "3/10", "-4/5")])
def test_predicted_slopes(q, pp, g, gt, expected):
    from fractions import Fraction
    assert predicted_decay_slope(q, pp, g, gt) == Fraction(expected)


@pytest.mark.parametrize("args", DECAY_SETS)
def test_decay_fit_matches_prediction(args):
    e = decay_rate_fit(gaussian(1), *args)
    assert e.slope_error < 0.02
    assert e.times[0] == 10 and e.times[-1] == 1000


def test_decay_fit_other_gaussian():
    e = decay_rate_fit(gaussian(0.5 + 0.5j, 3), 4, "6/5", "1/2", "1/4")
    assert e.slope_error < 0.02


def test_decay_hypotheses_checked_exactly():
    with pytest.raises(HypothesisViolated):
        decay_rate_fit(gaussian(1), 2, 2, "3/10", "1/5")
    with pytest.raises(HypothesisViolated):
        decay_rate_fit(gaussian(1), "3/2", 2, 0, 0)
    with pytest.raises(HypothesisViolated):
        decay_rate_fit(gaussian(1), 2, 2, "3/2", "3/2")


def test_decay_fit_requires_two_decades():
    with pytest.raises(ValueError):
        decay_rate_fit(gaussian(1), 2, 2, 0, 0, times=np.geomspace(10, 500, 8))
    with pytest.raises(ValueError):
        decay_rate_fit(gaussian(1), 2, 2, 0, 0, times=[10, 100, 1000])


def test_loglog_fit_exact_power():
    x = np.geomspace(1, 100, 7)
    f = loglog_fit(x, 3 * x ** -1.25)
    assert f.slope == pytest.approx(-1.25, abs=1e-12)
    assert f.residual < 1e-12


def test_pitt_scale_invariance():
    s = pitt_ratio_scan([0.25, 0.5, 1, 2, 4], 2, 2, "3/10", "3/10")
    assert s.spread < 1e-6


def test_pitt_plancherel():
    s = pitt_ratio_scan([0.5, 1, 2], 2, 2, 0, 0)
    np.testing.assert_allclose(s.ratios, 1.0, rtol=1e-9)


def test_pitt_baseline_against_closed_form():
    s = pitt_ratio_scan([1.0], 2, 2, "3/10", "3/10")
    g = gaussian(1)
    oracle = g.fourier().weighted_norm(2, 0.3) / g.weighted_norm(2, -0.3)
    assert s.ratios[0] == pytest.approx(oracle, rel=1e-9)
    assert s.ratios[0] == pytest.approx(0.99288036, rel=1e-7)


def test_pitt_hypotheses():
    with pytest.raises(HypothesisViolated):
        pitt_ratio_scan([1.0], 2, 2, "3/10", "1/5")
    with pytest.raises(HypothesisViolated):
        pitt_ratio_scan([1.0], 2, 2, "3/2", "3/2")


def _homogeneous_oracle(T):
    g = gaussian(1)
    q = 10 / 3
    val = quad(lambda t: g.evolve(t).weighted_norm(2.5, 0.3) ** q, 0, T, limit=400, epsabs=1e-13, epsrel=1e-12)[0]
    return val ** (1 / q) / g.l2_norm()


def test_homogeneous_ratio_stabilizes_and_matches_oracle():
    r = homogeneous_strichartz_ratio(gaussian(1), "3/10", "2/5", "3/10", 0)
    assert r.stabilization < 1e-3
    assert r.ratio == pytest.approx(_homogeneous_oracle(1000.0), rel=1e-6)
    assert r.ratio == pytest.approx(0.725904, rel=1e-5)


def test_homogeneous_ratio_dilation_invariant():
    a = homogeneous_strichartz_ratio(gaussian(1), "3/10", "2/5", "3/10", 0, windows=(100.0,))
    for d in (0.5, 2.0):
        b = homogeneous_strichartz_ratio(gaussian(1).dilate(d), "3/10", "2/5", "3/10", 0, windows=(100.0 / d ** 2,))
        assert b.ratio == pytest.approx(a.ratio, rel=1e-4)


def test_homogeneous_empty_window():
    r = homogeneous_strichartz_ratio(gaussian(1), "3/10", "2/5", "3/10", 0, windows=(0.0,))
    assert r.ratio == 0.0


def test_homogeneous_rejects_non_admissible():
    with pytest.raises(HypothesisViolated):
        homogeneous_strichartz_ratio(gaussian(1), "1/2", "2/5", "3/10", 0)


def test_duhamel_profile_matches_spectral_route():
    F = default_forcing()
    grid = F.space.sample(24.0, 64)
    forcing = lambda s: grid.with_samples(grid.samples * F.time(s))
    # the box must hold the spreading wave: keep t - s small
    for t in (0.3, 0.6):
        coarse, fine = duhamel(forcing, t, 150), duhamel(forcing, t, 300)
        spectral = (4 * fine.samples - coarse.samples) / 3
        prof = F.duhamel_profile(t)
        c = 32
        x = fine.axis()[c:c + 20]
        np.testing.assert_allclose(prof(x), spectral[c:c + 20, c, c], atol=1e-8)


def test_inhomogeneous_zero_forcing():
    cfg = wellposedness_exponents("3/2", "1/100", "1/4", "1/2").config
    F = default_forcing().scale(0)
    r = inhomogeneous_strichartz_ratio(F, cfg, windows=(10.0,))
    assert r.lhs == (0.0,)


@pytest.fixture(scope="module")
def wp_ratio():
    cfg = wellposedness_exponents("3/2", "1/100", "1/4", "1/2").config
    return cfg, inhomogeneous_strichartz_ratio(default_forcing(), cfg)


def test_inhomogeneous_ratio_finite_and_stable(wp_ratio):
    _, r = wp_ratio
    assert math.isfinite(r.ratio) and r.ratio > 0
    assert r.stabilization < 2e-3
    assert r.ratio == pytest.approx(0.312000, rel=1e-4)


def test_inhomogeneous_ratio_dilation_invariant(wp_ratio):
    cfg, base = wp_ratio
    for d in (0.5, 2.0):
        r = inhomogeneous_strichartz_ratio(default_forcing().dilate(d), cfg,
                                           windows=tuple(T / d ** 2 for T in base.windows))
        assert r.ratio == pytest.approx(base.ratio, rel=1e-3)


def test_inhomogeneous_rejects_non_admissible():
    cfg = ExponentConfig("1/2", "1/2", "1/2", "1/2", "3/10", "3/10")
    with pytest.raises(HypothesisViolated):
        inhomogeneous_strichartz_ratio(default_forcing(), cfg)


def test_time_bump():
    b = TimeBump(0, 1)
    assert b(0.5) == pytest.approx(math.exp(-1))
    assert b(0.0) == 0 and b(1.0) == 0
    assert b.dilate(2)(0.125) == pytest.approx(b(0.5))
