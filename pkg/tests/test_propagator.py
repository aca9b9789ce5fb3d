import math

import numpy as np
import pytest

from inlslab.fields import Field3D, gaussian
from inlslab.propagator import (
    CompactSource,
    PropagatorConfig,
    UnresolvedOscillation,
    duhamel,
    duhamel_closed_form,
    duhamel_convergence,
    propagate,
    propagate_gaussian,
    propagate_kernel,
    propagate_spectral,
)


def test_gaussian_identity_at_zero():
    g = gaussian(1 + 0.3j, 2)
    h = propagate_gaussian(g, 0.0)
    assert h.width == g.width and h.amplitude == g.amplitude


@pytest.mark.parametrize("t", [-3.0, 0.1, 1.0, 50.0, 1e4])
def test_gaussian_unitary(t):
    g = gaussian(0.8 + 0.2j, 1.5)
    assert propagate_gaussian(g, t).l2_norm() == pytest.approx(g.l2_norm(), rel=1e-12)


def test_gaussian_group_law():
    g = gaussian(1)
    a = propagate_gaussian(propagate_gaussian(g, 0.7), 1.9)
    b = propagate_gaussian(g, 2.6)
    assert a.width == pytest.approx(b.width, rel=1e-13)
    assert a.amplitude == pytest.approx(b.amplitude, rel=1e-13)


def test_gaussian_sup_decay_slope():
    g = gaussian(1)
    t = np.geomspace(10, 1e4, 12)
    sup = np.array([abs(propagate_gaussian(g, s).amplitude) for s in t])
    slope = np.polyfit(np.log(t), np.log(sup), 1)[0]
    assert slope == pytest.approx(-1.5, abs=0.01)


def test_gaussian_solves_schroedinger():
    # i u_t + Delta u = 0 checked by finite differences at a point
    g = gaussian(1)
    t, r, h = 0.4, 0.7, 1e-4
    u = lambda s, rho: propagate_gaussian(g, s)(rho)
    ut = (u(t + h, r) - u(t - h, r)) / (2 * h)
    urr = (u(t, r + h) - 2 * u(t, r) + u(t, r - h)) / h ** 2
    ur = (u(t, r + h) - u(t, r - h)) / (2 * h)
    assert abs(1j * ut + urr + 2 * ur / r) < 1e-5


def test_spectral_unitary_and_semigroup():
    rng = np.random.default_rng(1)
    f = Field3D(6.0, rng.normal(size=(16, 16, 16)) + 1j * rng.normal(size=(16, 16, 16)))
    a = propagate_spectral(f, 0.37)
    assert a.l2_norm() == pytest.approx(f.l2_norm(), rel=1e-13)
    b = propagate_spectral(propagate_spectral(f, 0.2), 0.17)
    assert np.max(np.abs(a.samples - b.samples)) < 1e-13 * np.max(np.abs(f.samples)) * 10


def test_spectral_matches_gaussian():
    g = gaussian(1)
    u = propagate_spectral(g.sample(40, 128), 1.0)
    exact = propagate_gaussian(g, 1.0).sample(40, 128)
    assert np.max(np.abs(u.samples - exact.samples)) < 1e-6


def test_spectral_preserves_radial_symmetry():
    g = gaussian(0.5)
    u = propagate_spectral(g.sample(20, 32), 0.8).samples
    c = 16
    assert u[c + 3, c, c] == pytest.approx(u[c, c - 3, c], abs=1e-12)
    assert u[c + 2, c + 1, c] == pytest.approx(u[c - 1, c, c + 2], abs=1e-12)


def test_kernel_matches_gaussian():
    g = gaussian(1)
    src = CompactSource.from_gaussian(g)
    x = np.random.default_rng(0).uniform(-1.2, 1.2, (10, 3))
    exact = propagate_gaussian(g, 2.0).at(x)
    for method in ("separable", "direct"):
        v = propagate_kernel(src, 2.0, x, method=method)
        assert np.max(np.abs(v - exact)) < 1e-6


def test_kernel_linearity_and_conjugation():
    g1, g2 = gaussian(1 + 0.5j), gaussian(2, 1j)
    s1, s2 = CompactSource.from_gaussian(g1), CompactSource.from_gaussian(g2)
    x = np.array([[0.3, -0.2, 0.5], [1.0, 0.0, 0.1]])
    lhs = propagate_kernel(s1.scale(2 - 1j) + s2, 1.5, x)
    rhs = (2 - 1j) * propagate_kernel(s1, 1.5, x, cells=60) + propagate_kernel(s2, 1.5, x, cells=60)
    assert np.max(np.abs(lhs - rhs)) < 1e-8
    a = propagate_kernel(s1.conj(), -1.5, x)
    b = np.conj(propagate_kernel(s1, 1.5, x))
    assert np.max(np.abs(a - b)) < 1e-12


def test_kernel_guard():
    src = CompactSource.from_gaussian(gaussian(1))
    with pytest.raises(UnresolvedOscillation):
        propagate_kernel(src, 0.5, [[1.0, 0, 0]], cells=4)
    with pytest.raises(ValueError):
        propagate_kernel(src, 0.0, [[1.0, 0, 0]])


def test_propagate_dispatch():
    g = gaussian(1)
    assert propagate(g, 1.0, PropagatorConfig("gaussian_exact")).width == g.evolve(1.0).width
    with pytest.raises(ValueError):
        PropagatorConfig("fourier")


def test_duhamel_zero_forcing():
    z = Field3D(4.0, np.zeros((8, 8, 8)))
    assert np.all(duhamel(lambda s: z, 1.0, 5).samples == 0)
    with pytest.raises(ValueError):
        duhamel(lambda s: z, 1.0, 0)


def test_duhamel_constant_forcing_closed_form():
    G = gaussian(0.25).sample(20, 32)
    d = duhamel(lambda s: G, 1.0, 1000)
    exact = duhamel_closed_form(G, 1.0)
    assert np.max(np.abs(d.samples - exact.samples)) < 1e-6 * np.max(np.abs(exact.samples))


def test_duhamel_second_order():
    G = gaussian(0.5).sample(16, 32)
    forcing = lambda s: G.with_samples(G.samples * math.cos(3 * s))
    ratios = duhamel_convergence(forcing, 1.0, [8, 16, 32, 64])
    for r in ratios:
        assert r == pytest.approx(4.0, rel=0.1)
