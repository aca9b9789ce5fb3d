"""Numerical checks of the weighted dispersive, Pitt and Strichartz estimates.

Every experiment reports ratios or fitted exponents; the underlying
constants are never estimated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exponents import ExponentConfig, Status, ad_membership, as_fraction, inhomogeneous_admissible
from .fields import GaussianHandle, WeightSpec, geometric_grid, mixed_norm, RadialProfile, weighted_lebesgue_norm
from .fitting import loglog_fit
from .quadrature import gauss_legendre, gauss_legendre_breaks

__all__ = [
    "DecayExperiment", "HypothesisViolated", "InhomogeneousRatio", "PittScan", "SeparableForcing",
    "StrichartzRatio", "TimeBump", "decay_rate_fit", "default_forcing", "predicted_decay_slope",
    "default_decay_times", "homogeneous_strichartz_ratio", "inhomogeneous_strichartz_ratio", "pitt_ratio_scan",
]


class HypothesisViolated(ValueError):
    """Exponents outside the range where the estimate is asserted."""


def default_decay_times() -> np.ndarray:
    return np.geomspace(10.0, 1000.0, 9)


@dataclass(frozen=True)
class DecayExperiment:
    q: Fraction
    p_prime: Fraction
    gamma: Fraction
    gamma_t: Fraction
    times: np.ndarray
    norms: np.ndarray
    input_norm: float
    fitted_slope: float
    predicted_slope: Fraction
    residual: float

    @property
    def slope_error(self) -> float:
        return abs(self.fitted_slope - float(self.predicted_slope))

    def rows(self) -> list[dict]:
        return [{"t": float(t), "norm": float(n), "fitted_slope": self.fitted_slope,
                 "predicted_slope": float(self.predicted_slope)} for t, n in zip(self.times, self.norms)]


def _decay_hypotheses(q: Fraction, pp: Fraction, g: Fraction, gt: Fraction) -> None:
    bad = []
    if not 1 < pp <= q:
        bad.append("need 1 < p' <= q < infinity")
    if not 0 <= g < 3 / q:
        bad.append("need 0 <= gamma < 3/q")
    if gt < 0:
        bad.append("need gamma~ >= 0")
    inv_p = 1 - 1 / pp
    if gt - g != 3 * (inv_p - 1 / q):
        bad.append("need gamma~ - gamma = 3(1/p - 1/q)")
    if bad:
        raise HypothesisViolated("; ".join(bad))


def predicted_decay_slope(q, p_prime, gamma, gamma_t) -> Fraction:
    q, pp, g, gt = (as_fraction(v) for v in (q, p_prime, gamma, gamma_t))
    return Fraction(3, 2) * (1 / q - 1 / pp) - (g + gt) / 2


def decay_rate_fit(family: GaussianHandle, q, p_prime, gamma, gamma_t,
                   times: Sequence[float] | None = None) -> DecayExperiment:
    """Fit the decay exponent of ``|| |x|^{-gamma} e^{it Delta} f ||_q`` in ``t``.

    Each time sample uses the exact Gaussian evolution and the radial
    weighted quadrature. The prediction is
    ``(3/2)(1/q - 1/p') - (gamma + gamma~)/2``.

    Raises:
        HypothesisViolated: exponent hypotheses fail (checked exactly).
        ValueError: fewer than 6 times or under 2 decades.
    """
    q, pp, g, gt = (as_fraction(v) for v in (q, p_prime, gamma, gamma_t))
    _decay_hypotheses(q, pp, g, gt)
    t = default_decay_times() if times is None else np.asarray(times, dtype=float)
    input_norm = family.weighted_norm(float(pp), -float(gt))
    if not math.isfinite(input_norm):
        raise ValueError("input norm diverges")
    spec = WeightSpec(float(q), float(g))
    norms = np.array([weighted_lebesgue_norm(family.evolve(s).profile(), spec) for s in t])
    fit = loglog_fit(t, norms, min_points=6, min_decades=2)
    return DecayExperiment(q, pp, g, gt, t, norms, input_norm, fit.slope,
                           predicted_decay_slope(q, pp, g, gt), fit.residual)


@dataclass(frozen=True)
class PittScan:
    dilations: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def ratios(self) -> np.ndarray:
        return self.lhs / self.rhs

    @property
    def max_ratio(self) -> float:
        return float(self.ratios.max())

    @property
    def spread(self) -> float:
        """``max |ratio / ratio(first) - 1|`` over the family."""
        r = self.ratios
        return float(np.max(np.abs(r / r[0] - 1)))


def pitt_ratio_scan(dilations: Sequence[float], q, p_prime, gamma, gamma_t,
                    base: GaussianHandle | None = None) -> PittScan:
    """``|| |xi|^{-gamma} f_hat ||_q / || |x|^{gamma~} f ||_{p'}`` over ``f(delta x)``.

    Both sides use radial quadrature of the sampled profiles.

    Raises:
        HypothesisViolated: outside ``gamma~ - gamma = 3(1/p - 1/q)``,
            ``0 <= gamma < 3/q``, ``0 <= gamma~ < 3/p``, ``1 < p' <= q``.
    """
    q, pp, g, gt = (as_fraction(v) for v in (q, p_prime, gamma, gamma_t))
    inv_p = 1 - 1 / pp
    bad = []
    if not 1 < pp <= q:
        bad.append("need 1 < p' <= q")
    if gt - g != 3 * (inv_p - 1 / q):
        bad.append("need gamma~ - gamma = 3(1/p - 1/q)")
    if not 0 <= g < 3 / q:
        bad.append("need 0 <= gamma < 3/q")
    if not 0 <= gt < 3 * inv_p:
        bad.append("need 0 <= gamma~ < 3/p")
    if bad:
        raise HypothesisViolated("; ".join(bad))
    f0 = GaussianHandle(1.0) if base is None else base
    lspec = WeightSpec(float(q), float(g))
    rspec = WeightSpec(float(pp), -float(gt))
    d = np.asarray(dilations, dtype=float)
    lhs, rhs = [], []
    for delta in d:
        f = f0.dilate(delta)
        lhs.append(weighted_lebesgue_norm(f.fourier().profile(), lspec))
        rhs.append(weighted_lebesgue_norm(f.profile(), rspec))
    return PittScan(d, np.array(lhs), np.array(rhs))


def _time_rule(t0: float, t1: float, scale: float, panels: int = 8, order: int = 16):
    """Gauss rule on ``[t0, t1]``: uniform panels up to ``scale``, geometric beyond."""
    if t1 <= t0:
        return np.zeros(0), np.zeros(0)
    knee = min(max(scale, t0), t1)
    breaks = list(np.linspace(t0, knee, panels + 1)) if knee > t0 else [t0]
    if t1 > knee:
        n = max(1, math.ceil(2 * math.log10(t1 / knee)) + 1)
        breaks += list(knee * (t1 / knee) ** (np.arange(1, n * 2 + 1) / (n * 2)))
    return gauss_legendre_breaks(np.array(breaks), order)


@dataclass(frozen=True)
class StrichartzRatio:
    windows: tuple[float, ...]
    lhs: tuple[float, ...]
    rhs: float

    @property
    def ratios(self) -> tuple[float, ...]:
        return tuple(l / self.rhs for l in self.lhs)

    @property
    def ratio(self) -> float:
        return self.ratios[-1]

    @property
    def stabilization(self) -> float:
        """Relative change of the ratio between the last two windows."""
        r = self.ratios
        if len(r) < 2 or r[-2] == 0:
            return float("nan")
        return abs(r[-1] / r[-2] - 1)


def homogeneous_strichartz_ratio(family: GaussianHandle, inv_q, inv_r, gamma, sigma,
                                 windows: Sequence[float] = (10.0, 100.0, 1000.0)) -> StrichartzRatio:
    """``|| e^{it Delta} f ||_{L^q_t L^r_x(|x|^{-r gamma})}`` over ``[0, T]`` divided by ``||f||_{H^sigma}``.

    One ratio per window end ``T``; the last is the reported value.

    Raises:
        HypothesisViolated: ``(q, r)`` outside the weighted admissible class.
    """
    m = ad_membership(inv_q, inv_r, gamma, sigma)
    if m.status is Status.OUTSIDE:
        raise HypothesisViolated(f"non-admissible exponents: {', '.join(m.violated)}")
    iq = as_fraction(inv_q)
    spec = WeightSpec(1 / float(as_fraction(inv_r)), float(as_fraction(gamma)))
    rhs = family.hs_norm(float(as_fraction(sigma)))
    scale = family.length_scale ** 2
    lhs = []
    for T in windows:
        if T <= 0:
            lhs.append(0.0)
            continue
        t, w = _time_rule(0.0, float(T), scale)
        snaps = [family.evolve(s).profile() for s in t]
        lhs.append(mixed_norm(snaps, iq, spec, w))
    return StrichartzRatio(tuple(float(T) for T in windows), tuple(lhs), rhs)


@dataclass(frozen=True)
class TimeBump:
    """Smooth bump ``exp(-1/(1 - u^2))`` on ``(start, end)``, ``u`` the centred coordinate."""

    start: float = 0.0
    end: float = 1.0
    amplitude: float = 1.0

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        u = (2 * s - self.start - self.end) / (self.end - self.start)
        out = np.zeros_like(u)
        inside = np.abs(u) < 1
        out[inside] = self.amplitude * np.exp(-1 / (1 - u[inside] ** 2))
        return out

    def dilate(self, delta: float) -> "TimeBump":
        """Bump of ``psi(delta^2 s)``."""
        return TimeBump(self.start / delta ** 2, self.end / delta ** 2, self.amplitude)

    def lp_norm(self, p: float, panels: int = 16) -> float:
        s, w = gauss_legendre(self.start, self.end, panels, 16)
        return float(np.dot(w, self(s) ** p) ** (1 / p))


@dataclass(frozen=True)
class SeparableForcing:
    """``F(x, s) = psi(s) G(x)`` with a time bump and a Gaussian."""

    time: TimeBump
    space: GaussianHandle

    def dilate(self, delta: float) -> "SeparableForcing":
        """Forcing ``F(delta x, delta^2 s)``."""
        return SeparableForcing(self.time.dilate(delta), self.space.dilate(delta))

    def scale(self, c: complex) -> "SeparableForcing":
        return SeparableForcing(self.time, self.space.scale(c))

    def dual_norm(self, inv_qt, inv_rt, gamma_t) -> float:
        """``|| |x|^{gamma~} F ||_{L^{q~'}_t L^{r~'}_x}`` in closed form (space) and Gauss rule (time)."""
        qd = 1 / (1 - float(as_fraction(inv_qt)))
        rd = 1 / (1 - float(as_fraction(inv_rt)))
        return self.time.lp_norm(qd) * self.space.weighted_norm(rd, -float(as_fraction(gamma_t)))

    def duhamel_profile(self, t: float, n: int = 768, panels: int = 8, order: int = 16) -> RadialProfile | None:
        """Radial profile of ``int_0^t e^{i(t-s) Delta} F(s) ds``."""
        a, b = self.time.start, min(self.time.end, t)
        if b <= a:
            return None
        s, w = gauss_legendre(a, b, panels, order)
        amp = w * self.time(s)
        handles = [self.space.evolve(t - si) for si in s]
        ells = [h.length_scale for h in handles]
        r = geometric_grid(1e-3 * min(ells), 8.0 * max(ells), n)
        vals = np.zeros(r.size, dtype=complex)
        for c, h in zip(amp, handles):
            if c != 0:
                vals += c * h(r)
        return RadialProfile(r, vals)


@dataclass(frozen=True)
class InhomogeneousRatio(StrichartzRatio):
    pass


def default_forcing() -> SeparableForcing:
    return SeparableForcing(TimeBump(0.0, 1.0), GaussianHandle(1.0))


def inhomogeneous_strichartz_ratio(forcing: SeparableForcing, cfg: ExponentConfig,
                                   windows: Sequence[float] = (10.0, 100.0, 1000.0),
                                   check: bool = True) -> InhomogeneousRatio:
    """Duhamel term in ``L^q_t L^r_x(|x|^{-r gamma})`` over ``[0, T]`` divided by the dual forcing norm.

    Args:
        check: require ``cfg`` to pass the inhomogeneous criterion.

    Raises:
        HypothesisViolated: ``check`` is set and ``cfg`` fails the criterion.
    """
    if check:
        m = inhomogeneous_admissible(cfg)
        if m.status is Status.OUTSIDE:
            raise HypothesisViolated(f"non-admissible exponents: {', '.join(m.violated)}")
    spec = WeightSpec(1 / float(cfg.inv_r), float(cfg.gamma))
    rhs = forcing.dual_norm(cfg.inv_qt, cfg.inv_rt, cfg.gamma_t)
    support = forcing.time.end
    lhs = []
    for T in windows:
        t, w = _time_rule(0.0, float(T), support, panels=8, order=16)
        keep = [(ti, wi) for ti, wi in zip(t, w) if ti > forcing.time.start]
        if not keep:
            lhs.append(0.0)
            continue
        snaps = [forcing.duhamel_profile(ti) for ti, _ in keep]
        lhs.append(mixed_norm(snaps, cfg.inv_q, spec, np.array([wi for _, wi in keep])))
    return InhomogeneousRatio(tuple(float(T) for T in windows), tuple(lhs), rhs)
