import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import dblquad, quad

from inlslab.fields import (
    DivergentNorm,
    Field3D,
    RadialProfile,
    WeightSpec,
    gaussian,
    geometric_grid,
    hs_norm,
    load_field,
    mixed_norm,
    radial_fourier,
    save_field,
    time_quadrature,
    to_csv,
    weighted_lebesgue_norm,
)
from inlslab.quadrature import power_integral

L2_UNIT = (math.pi / 2) ** 0.75


def test_gaussian_value_at_origin():
    assert gaussian(1, 1)(0.0) == pytest.approx(1.0)


def test_gaussian_rejects_non_decaying_width():
    with pytest.raises(ValueError):
        gaussian(-1 + 2j)
    with pytest.raises(ValueError):
        gaussian(3j)


def test_gaussian_l2_closed_form():
    g = gaussian(1, 1)
    assert g.l2_norm() == pytest.approx(L2_UNIT, rel=1e-15)
    assert L2_UNIT == pytest.approx(1.4031041455, rel=1e-10)


def test_gaussian_l2_quadrature_256_points():
    g = gaussian(1, 1)
    p = g.profile(n=256)
    assert abs(weighted_lebesgue_norm(p, WeightSpec(2)) - g.l2_norm()) < 1e-10


def test_zero_field_has_zero_norm():
    p = RadialProfile(geometric_grid(1e-3, 5, 64), np.zeros(64))
    assert weighted_lebesgue_norm(p, WeightSpec(2, 0.3)) == 0.0
    f = Field3D(4.0, np.zeros((8, 8, 8)))
    assert weighted_lebesgue_norm(f, WeightSpec(3, 0.5)) == 0.0


def test_weighted_norm_matches_adaptive_quadrature():
    g = gaussian(1, 1)
    oracle = math.sqrt(4 * math.pi * quad(lambda r: r ** 1.4 * math.exp(-2 * r * r), 0, np.inf,
                                           epsabs=1e-14, epsrel=1e-13)[0])
    val = weighted_lebesgue_norm(g.profile(), WeightSpec(2, 0.3))
    assert abs(val - oracle) < 1e-8
    assert abs(g.weighted_norm(2, 0.3) - oracle) < 1e-12


@pytest.mark.parametrize("r,gamma", [(6, 0.45), (3, 0.9), (1.2, 2.4), (10 / 3, 0.3)])
def test_weighted_norm_closed_form(r, gamma):
    g = gaussian(0.7 + 0.4j, 2 - 1j)
    val = weighted_lebesgue_norm(g.profile(), WeightSpec(r, gamma))
    assert val == pytest.approx(g.weighted_norm(r, gamma), rel=1e-10)


def test_divergent_weight_reported():
    g = gaussian(1)
    with pytest.raises(DivergentNorm):
        weighted_lebesgue_norm(g.profile(), WeightSpec(2, 1.5))
    with pytest.raises(DivergentNorm):
        weighted_lebesgue_norm(g.sample(8, 16), WeightSpec(2, 1.6))


def test_vanishing_data_tolerates_strong_weight():
    r = geometric_grid(1e-3, 8, 256)
    v = np.where(r > 1, np.exp(-r * r), 0.0)
    p = RadialProfile(r, v)
    assert np.isfinite(weighted_lebesgue_norm(p, WeightSpec(2, 2.0)))


def test_weight_spec_validation():
    with pytest.raises(ValueError):
        WeightSpec(0.5)
    assert WeightSpec.from_reciprocal("3/10", "1/4").r_exponent == pytest.approx(10 / 3)


def test_radial_profile_invariants():
    with pytest.raises(ValueError):
        RadialProfile(np.array([1.0, 2.0, 3.0]), np.ones(3))
    with pytest.raises(ValueError):
        RadialProfile(geometric_grid(1, 2, 4), np.array([1, np.nan, 0, 0]))


def test_field3d_invariants():
    with pytest.raises(ValueError):
        Field3D(1.0, np.zeros((6, 6, 6)))
    with pytest.raises(ValueError):
        Field3D(1.0, np.zeros((4, 4, 8)))


@pytest.mark.parametrize("delta", [0.25, 0.5, 2.0, 4.0])
@pytest.mark.parametrize("r,gamma", [(2, 0.3), (4, 0.5), (3, 0.0)])
def test_dilation_law(delta, r, gamma):
    g = gaussian(1.3 + 0.2j)
    spec = WeightSpec(r, gamma)
    base = weighted_lebesgue_norm(g.profile(), spec)
    dil = weighted_lebesgue_norm(g.dilate(delta).profile(), spec)
    assert dil == pytest.approx(delta ** (-3 / r + gamma) * base, rel=1e-10)


def test_refinement_within_error_model():
    g = gaussian(1)
    for spec in (WeightSpec(2), WeightSpec(2, 0.3), WeightSpec(5, 0.5)):
        prev_err = None
        for n in (65, 129, 257):
            r = g.natural_grid(n)
            est = weighted_lebesgue_norm(g.profile(r), spec, with_error=True)
            fine = weighted_lebesgue_norm(g.profile(g.natural_grid(2 * n - 1)), spec)
            assert abs(fine - est.value) <= est.error
            err = abs(est.value - g.weighted_norm(spec.r_exponent, spec.gamma))
            if prev_err is not None and prev_err > 1e-13:
                assert math.log2(prev_err / max(err, 1e-16)) >= 4
            prev_err = err


def test_power_integral_exact_for_monomials():
    r = geometric_grid(1e-2, 3, 40)
    val = power_integral(r, r ** 2, 0.5)
    assert val == pytest.approx(3 ** 3.5 / 3.5, rel=1e-12)


def test_grid_norm_converges():
    g = gaussian(1)
    spec = WeightSpec(2, 0.3)
    errs = [abs(weighted_lebesgue_norm(g.sample(12, n), spec) / g.weighted_norm(2, 0.3) - 1) for n in (32, 64)]
    assert errs[1] < errs[0] < 0.05


def test_grid_l2_is_spectrally_accurate():
    g = gaussian(1)
    assert weighted_lebesgue_norm(g.sample(12, 64), WeightSpec(2)) == pytest.approx(g.l2_norm(), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(-3, 3))
def test_triangle_inequality_and_homogeneity(seed, lam):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(8, 8, 8)) + 1j * rng.normal(size=(8, 8, 8))
    b = rng.normal(size=(8, 8, 8)) + 1j * rng.normal(size=(8, 8, 8))
    r = 1 + 3 * rng.random()
    spec = WeightSpec(r, 0.9 * rng.random() * 3 / r)
    fa, fb = Field3D(2.0, a), Field3D(2.0, b)
    na, nb = weighted_lebesgue_norm(fa, spec), weighted_lebesgue_norm(fb, spec)
    nab = weighted_lebesgue_norm(Field3D(2.0, a + b), spec)
    assert nab <= na + nb + 1e-10 * (na + nb)
    nl = weighted_lebesgue_norm(Field3D(2.0, lam * a), spec)
    assert nl == pytest.approx(abs(lam) * na, rel=1e-10, abs=1e-12)


def test_mixed_norm_single_snapshot_sup():
    g = gaussian(1)
    spec = WeightSpec(2, 0.3)
    assert mixed_norm([g.profile()], 0, spec) == pytest.approx(weighted_lebesgue_norm(g.profile(), spec))


def test_mixed_norm_constant_in_time():
    g = gaussian(1)
    spec = WeightSpec(3, 0.2)
    t, w = time_quadrature(0, 1, panels=2, order=4)
    snaps = [g.profile()] * len(t)
    for iq in ("1/2", "1/5", "1/9"):
        assert mixed_norm(snaps, iq, spec, w) == pytest.approx(weighted_lebesgue_norm(g.profile(), spec), rel=1e-12)


def test_mixed_norm_empty():
    with pytest.raises(ValueError):
        mixed_norm([], "1/2", WeightSpec(2))


def test_mixed_norm_free_evolution_against_nested_quadrature():
    g = gaussian(1)
    spec = WeightSpec(2, 0.3)
    t, w = time_quadrature(1, 10, panels=6, order=16, geometric=True)
    snaps = [g.evolve(s).profile() for s in t]
    val = mixed_norm(snaps, "1/2", spec, w)

    def dens(rho, s):
        return 4 * math.pi * rho ** 1.4 * abs(g.evolve(s)(rho)) ** 2

    oracle = math.sqrt(dblquad(dens, 1, 10, 0, np.inf, epsabs=1e-14, epsrel=1e-11)[0])
    assert val == pytest.approx(oracle, rel=1e-6)


def test_hs_plancherel():
    g = gaussian(1)
    p = g.profile()
    assert hs_norm(p, 0) == pytest.approx(weighted_lebesgue_norm(p, WeightSpec(2)), rel=1e-9)
    f = g.sample(12, 32)
    assert hs_norm(f, 0) == pytest.approx(f.l2_norm(), rel=1e-12)


def test_hs_gradient_closed_form():
    g = gaussian(1)
    grad_norm = math.sqrt(3) * L2_UNIT
    oracle = math.sqrt(4 * math.pi * quad(lambda r: 4 * r ** 4 * math.exp(-2 * r * r), 0, np.inf, epsabs=1e-14)[0])
    assert grad_norm == pytest.approx(oracle, rel=1e-12)
    assert g.hs_norm(1) == pytest.approx(grad_norm, rel=1e-14)
    assert hs_norm(g.profile(), 1) == pytest.approx(grad_norm, rel=1e-8)
    f = g.sample(12, 32)
    assert hs_norm(f, 1) == pytest.approx(f.gradient_magnitude().l2_norm(), rel=1e-10)


@pytest.mark.parametrize("sigma", [-1.2, -0.5, 0.5, 1.4])
def test_hs_radial_matches_closed_form(sigma):
    g = gaussian(1.5)
    assert hs_norm(g.profile(), sigma) == pytest.approx(g.hs_norm(sigma), rel=1e-8)


@pytest.mark.parametrize("delta", [0.5, 2.0])
def test_hs_dilation_covariance(delta):
    g = gaussian(1)
    s = 0.7
    ratio = hs_norm(g.dilate(delta).profile(), s) / hs_norm(g.profile(), s)
    assert ratio == pytest.approx(delta ** (s - 1.5), rel=1e-8)


def test_hs_sigma_range():
    with pytest.raises(ValueError):
        hs_norm(gaussian(1), 1.5)
    with pytest.raises(ValueError):
        hs_norm(gaussian(1).profile(), -1.5)


def test_radial_fourier_of_gaussian():
    g = gaussian(1)
    k = geometric_grid(1e-3, 10, 50)
    fh = radial_fourier(g.profile(), k)
    assert np.max(np.abs(fh.values - g.fourier()(k))) < 1e-10


def test_gaussian_product_sums_widths():
    a, b = gaussian(1 + 1j, 2), gaussian(0.5, 1j)
    c = a * b
    assert c.width == pytest.approx(1.5 + 1j)
    rho = np.linspace(0, 2, 7)
    np.testing.assert_allclose(c(rho), a(rho) * b(rho), rtol=1e-14)


def test_binary_container_roundtrip(tmp_path):
    g = gaussian(1 + 0.5j)
    p = g.profile(n=64)
    save_field(tmp_path / "p.bin", p)
    q = load_field(tmp_path / "p.bin")
    np.testing.assert_allclose(q.radii, p.radii, rtol=1e-14)
    np.testing.assert_array_equal(q.values, p.values)
    f = g.sample(6, 8)
    save_field(tmp_path / "f.bin", f)
    h = load_field(tmp_path / "f.bin")
    np.testing.assert_array_equal(h.samples, f.samples)
    assert h.box_length == f.box_length
    (tmp_path / "bad.bin").write_bytes(b"XXXXXXXX" + bytes(40))
    with pytest.raises(ValueError):
        load_field(tmp_path / "bad.bin")


def test_csv_export(tmp_path):
    p = gaussian(1).profile(n=16)
    to_csv(p, tmp_path / "p.csv")
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert lines[0] == "rho,re,im,abs"
    assert len(lines) == 17
