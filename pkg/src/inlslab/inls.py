"""Split-step solver and Picard iteration for the energy-critical INLS.

The equation is ``i u_t + Delta u = lambda |x|^{-alpha} |u|^beta u`` on
``R^3`` with ``beta = 4 - 2 alpha``. On a grid the weight is regularized to
``(|x|^2 + eps^2)^{-alpha/2}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .exponents import as_fraction, wellposedness_exponents
from .exponents.core import Number
from .exponents.wellposedness import ALPHA_MAX, ALPHA_MIN, WPExponents
from .fields import Field3D, GaussianHandle, RadialProfile, WeightSpec, gaussian, weighted_lebesgue_norm

__all__ = [
    "EquationParams", "ExponentRelationViolated", "PicardDivergence", "PicardResult", "PicardTrace",
    "SmallnessViolated", "SolverConfig", "Trajectory", "UnresolvedField", "EmbeddingScan", "energy",
    "equation_residual", "free_flow", "hdot1_norm", "initial_gaussian", "nonlinearity", "picard_iterate",
    "rescale_solution", "sobolev_embedding_ratio", "splitstep_evolve", "strichartz_samples", "weight",
]


class UnresolvedField(ValueError):
    """Spectral tail above the configured threshold."""


class PicardDivergence(RuntimeError):
    """Iterate norms grew beyond the allowed factor: the data is not small enough."""


class SmallnessViolated(ValueError):
    """The free evolution of the data is not small in the solution norm."""


class ExponentRelationViolated(ValueError):
    """Exponents of a weighted Sobolev embedding violate its hypotheses."""


@dataclass(frozen=True)
class EquationParams:
    """Coefficients of the equation.

    Attributes:
        alpha: singularity order in ``[3/2, 11/6)``.
        lam: ``+1`` (defocusing) or ``-1`` (focusing).
        eps: weight regularization; ``None`` means one grid spacing.
    """

    alpha: Fraction = Fraction(3, 2)
    lam: int = 1
    eps: float | None = None

    def __post_init__(self):
        a = as_fraction(self.alpha)
        if not ALPHA_MIN <= a < ALPHA_MAX:
            raise ValueError(f"alpha={a} outside [3/2, 11/6)")
        if self.lam not in (-1, 1):
            raise ValueError("lam must be +1 or -1")
        if self.eps is not None and not self.eps >= 0:
            raise ValueError("eps must be non-negative")
        object.__setattr__(self, "alpha", a)

    @property
    def beta(self) -> Fraction:
        return 4 - 2 * self.alpha

    def eps_for(self, spacing: float) -> float:
        return spacing if self.eps is None else float(self.eps)


@dataclass(frozen=True)
class SolverConfig:
    """Grid, time step and diagnostics cadence.

    ``cadence`` is the number of steps between stored snapshots;
    ``tail_threshold`` bounds the spectral tail of every snapshot.
    """

    box_length: float = 16.0
    n: int = 64
    dt: float = 1e-2
    final_time: float = 1.0
    eta: float = 1e-2
    cadence: int = 10
    tail_threshold: float = 1e-6

    def __post_init__(self):
        if self.n < 4 or self.n & (self.n - 1):
            raise ValueError(f"n={self.n} must be a power of two")
        if not (self.box_length > 0 and self.dt > 0 and self.final_time > 0 and self.eta > 0):
            raise ValueError("box_length, dt, final_time and eta must be positive")
        if self.cadence < 1:
            raise ValueError("cadence must be positive")

    @property
    def spacing(self) -> float:
        return self.box_length / self.n

    @property
    def steps(self) -> int:
        return max(1, round(self.final_time / self.dt))

    @property
    def phase_resolution(self) -> float:
        """``dt * k_max^2``, the free-flight phase increment of the highest mode."""
        return self.dt * (math.pi / self.spacing) ** 2


def initial_gaussian(cfg: SolverConfig, width: float = 1.0) -> Field3D:
    """``eta * exp(-width |x|^2)`` on the configured grid."""
    return gaussian(width, cfg.eta).sample(cfg.box_length, cfg.n)


def weight(field_: Field3D, params: EquationParams) -> np.ndarray:
    """``(|x|^2 + eps^2)^{-alpha/2}``; with ``eps = 0`` the origin sample is set to zero."""
    eps = params.eps_for(field_.spacing)
    r2 = field_.radius() ** 2 + eps * eps
    with np.errstate(divide="ignore"):
        w = r2 ** (-float(params.alpha) / 2)
    if eps == 0:
        w = np.where(r2 == 0, 0.0, w)
    return w


def _check_origin(u: Field3D, params: EquationParams) -> None:
    if params.eps_for(u.spacing) == 0:
        c = u.n // 2
        if u.samples[c, c, c] != 0:
            raise ValueError("eps=0 requires data vanishing at the origin sample")


def nonlinearity(u: Field3D, params: EquationParams) -> Field3D:
    """``lambda (|x|^2 + eps^2)^{-alpha/2} |u|^beta u`` pointwise.

    Raises:
        ValueError: ``eps = 0`` and ``u`` is nonzero at the origin sample.
    """
    _check_origin(u, params)
    s = u.samples
    return u.with_samples(params.lam * weight(u, params) * np.abs(s) ** float(params.beta) * s)


def energy(u: Field3D, params: EquationParams) -> float:
    """``1/2 ||grad u||^2 + lambda/(beta+2) int w |u|^{beta+2}`` (drift diagnostic)."""
    b = float(params.beta)
    h3 = u.spacing ** 3
    kin = 0.5 * sum(float(np.sum(np.abs(g) ** 2)) for g in u.gradient()) * h3
    pot = params.lam / (b + 2) * float(np.sum(weight(u, params) * np.abs(u.samples) ** (b + 2))) * h3
    return kin + pot


def hdot1_norm(u: Field3D) -> float:
    """Spectral ``||grad u||_2`` on the grid."""
    return math.sqrt(sum(float(np.sum(np.abs(g) ** 2)) for g in u.gradient()) * u.spacing ** 3)


@dataclass
class Trajectory:
    """Snapshots of a split-step run with their diagnostics."""

    params: EquationParams
    config: SolverConfig
    times: np.ndarray
    snapshots: list[Field3D]
    mass: np.ndarray
    energy: np.ndarray
    tail: np.ndarray

    @property
    def final(self) -> Field3D:
        return self.snapshots[-1]

    def mass_drift(self) -> float:
        """Largest relative deviation of ``||u||_2`` from its initial value."""
        return float(np.max(np.abs(self.mass / self.mass[0] - 1)))

    def rows(self) -> list[dict]:
        return [{"t": float(t), "mass": float(m), "energy": float(e), "tail": float(s)}
                for t, m, e, s in zip(self.times, self.mass, self.energy, self.tail)]


def _free_step(samples: np.ndarray, k2: np.ndarray, dt: float) -> np.ndarray:
    return np.ascontiguousarray(np.fft.ifftn(np.exp(-1j * dt * k2) * np.fft.fftn(samples)))


def splitstep_evolve(u0: Field3D, params: EquationParams, cfg: SolverConfig) -> Trajectory:
    """Strang splitting: half nonlinear rotation, exact free flight, half rotation.

    Both substeps are exact and unitary; the nonlinear one is the pointwise
    rotation ``exp(-i lambda tau w |u|^beta)`` since it preserves ``|u|``.
    Snapshots are stored every ``cfg.cadence`` steps and at the final time.

    Raises:
        UnresolvedField: a snapshot's spectral tail exceeds ``cfg.tail_threshold``.
    """
    if u0.n != cfg.n or abs(u0.box_length - cfg.box_length) > 1e-12 * cfg.box_length:
        raise ValueError("initial data does not live on the configured grid")
    _check_origin(u0, params)
    w = weight(u0, params)
    k2 = u0.wavenumber_sq()
    b = float(params.beta)
    half = 0.5 * params.lam * cfg.dt
    u = np.array(u0.samples, dtype=np.complex128, order="C")
    times, snaps = [0.0], [u0.copy()]
    for step in range(1, cfg.steps + 1):
        kernels.nonlinear_phase(u, w, b, half)
        u = _free_step(u, k2, cfg.dt)
        kernels.nonlinear_phase(u, w, b, half)
        if step % cfg.cadence == 0 or step == cfg.steps:
            snap = u0.with_samples(u.copy())
            tail = snap.spectral_tail()
            if tail > cfg.tail_threshold:
                raise UnresolvedField(f"spectral tail {tail:.2e} at t={step * cfg.dt:.4g}")
            times.append(step * cfg.dt)
            snaps.append(snap)
    return Trajectory(params, cfg, np.array(times), snaps,
                      np.array([s.l2_norm() for s in snaps]),
                      np.array([energy(s, params) for s in snaps]),
                      np.array([s.spectral_tail() for s in snaps]))


def free_flow(u0: Field3D, t: float) -> Field3D:
    """Exact spectral ``e^{it Delta} u0``."""
    return u0.with_samples(_free_step(u0.samples, u0.wavenumber_sq(), t))


def equation_residual(traj: Trajectory) -> float:
    """Largest relative residual of the equation at interior snapshots.

    ``i (u_{k+1} - u_{k-1}) / (t_{k+1} - t_{k-1}) + Delta u_k - F(u_k)``
    in ``L^2``, divided by ``||Delta u_k||_2``. Needs equally spaced snapshots.
    """
    t = traj.times
    if len(t) < 3:
        raise ValueError("need at least three snapshots")
    worst = 0.0
    for k in range(1, len(t) - 1):
        u = traj.snapshots[k]
        lap = np.fft.ifftn(-u.wavenumber_sq() * u.fft())
        dudt = (traj.snapshots[k + 1].samples - traj.snapshots[k - 1].samples) / (t[k + 1] - t[k - 1])
        res = 1j * dudt + lap - nonlinearity(u, traj.params).samples
        worst = max(worst, float(np.linalg.norm(res) / np.linalg.norm(lap)))
    return worst


def rescale_solution(traj: Trajectory, delta: float) -> Trajectory:
    """``u(t, x) -> delta^{1/2} u(delta^2 t, delta x)`` represented exactly on a rescaled grid.

    The samples keep their indices: the box becomes ``L/delta``, times and
    the step become ``t/delta^2`` and the weight regularization
    ``eps/delta``, so the rescaled run solves the same discrete problem.

    Raises:
        ValueError: ``delta`` is not a positive finite number.
    """
    d = float(delta)
    if not (d > 0 and math.isfinite(d)):
        raise ValueError("delta must be positive and finite")
    p = traj.params
    eps = p.eps_for(traj.config.spacing) / d
    params = EquationParams(p.alpha, p.lam, eps)
    cfg = replace(traj.config, box_length=traj.config.box_length / d, dt=traj.config.dt / d ** 2,
                  final_time=traj.config.final_time / d ** 2)
    snaps = [Field3D(cfg.box_length, math.sqrt(d) * s.samples) for s in traj.snapshots]
    return Trajectory(params, cfg, traj.times / d ** 2, snaps,
                      np.array([s.l2_norm() for s in snaps]),
                      np.array([energy(s, params) for s in snaps]),
                      np.array([s.spectral_tail() for s in snaps]))


# --- Picard iteration ----------------------------------------------------------------------------

@dataclass(frozen=True)
class PicardTrace:
    """One Picard iterate.

    Attributes:
        m: iterate index (``u^{(0)} = 0``).
        norm: solution-space norm of ``grad u^{(m)}``.
        difference: ``d_m``, Strichartz-space norm of ``u^{(m)} - u^{(m-1)}``.
        ratio: ``d_m / d_{m-1}`` when ``d_{m-1} > 0``.
        sampled_difference: maximum of ``d_m`` over the sampled exponent pairs.
    """

    m: int
    norm: float
    difference: float
    ratio: float | None
    sampled_difference: float


@dataclass
class PicardResult:
    traces: list[PicardTrace]
    times: np.ndarray
    final: Field3D
    free_norm: float
    exponents: WPExponents

    @property
    def ratios(self) -> list[float]:
        return [t.ratio for t in self.traces if t.ratio is not None]

    def rows(self) -> list[dict]:
        return [{"m": t.m, "norm": t.norm, "difference": t.difference,
                 "ratio": "" if t.ratio is None else t.ratio, "sampled_difference": t.sampled_difference}
                for t in self.traces]


def strichartz_samples(wp: WPExponents, count: int = 3) -> list[tuple[Fraction, Fraction]]:
    """``count`` pairs ``(1/q, 1/r)`` inside the open ``1/r`` window with ``2/q + 3/r = 3/2 + gamma0``."""
    lo, hi = wp.strichartz_r_window()
    out = []
    for j in range(1, count + 1):
        ir = lo + (hi - lo) * Fraction(j, count + 1)
        iq = (Fraction(3, 2) + wp.gamma0 - 3 * ir) / 2
        if 0 <= iq <= Fraction(1, 2):
            out.append((iq, ir))
    return out


def _trapezoid(n: int, dt: float) -> np.ndarray:
    w = np.full(n, dt)
    w[0] = w[-1] = dt / 2
    return w


def _space_time_norm(fields: Sequence[Field3D], inv_q: Fraction, spec: WeightSpec, tw: np.ndarray) -> float:
    vals = np.array([weighted_lebesgue_norm(f, spec) for f in fields])
    if inv_q == 0:
        return float(vals.max())
    q = 1 / float(inv_q)
    return float(np.dot(tw, vals ** q) ** (1 / q))


def picard_iterate(u0: Field3D, params: EquationParams, interval: float, m_max: int,
                   cfg: SolverConfig, delta: Number = Fraction(1, 100), gamma0: Number = Fraction(1, 4),
                   gammat0: Number | None = None, growth_limit: float = 10.0,
                   smallness: float = 0.1) -> PicardResult:
    """Iterate ``u^{(m)} = e^{it Delta} u0 - i int_0^t e^{i(t-s) Delta} F(u^{(m-1)}(s)) ds``.

    Time nodes are ``t_j = j * cfg.dt`` on ``[0, interval]``; the Duhamel
    integral is a cumulative trapezoid rule in the interaction picture, so
    every iterate is exact for the discrete fixed-point map. Norms use the
    well-posedness exponents: ``||grad u||`` in ``L^{q0}_t L^{r0}_x(|x|^{-r0 gamma0})``
    and ``d_m`` in the same space without the gradient.

    Raises:
        SmallnessViolated: the free evolution's norm exceeds ``smallness``.
        PicardDivergence: an iterate's norm exceeds ``growth_limit`` times the first.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    _check_origin(u0, params)
    wp = wellposedness_exponents(params.alpha, delta, gamma0, gammat0)
    spec = WeightSpec.from_reciprocal(wp.inv_r0, wp.gamma0)
    samples = [(iq, WeightSpec.from_reciprocal(ir, wp.gamma0)) for iq, ir in strichartz_samples(wp)]
    steps = max(1, round(interval / cfg.dt))
    dt = interval / steps
    times = dt * np.arange(steps + 1)
    tw = _trapezoid(steps + 1, dt)
    k2 = u0.wavenumber_sq()
    w = weight(u0, params)
    b = float(params.beta)
    phase = [np.exp(-1j * t * k2) for t in times]
    u0h = u0.fft()

    def grad_norm(us):
        return _space_time_norm([u.gradient_magnitude() for u in us], wp.inv_q0, spec, tw)

    prev = [u0.with_samples(np.zeros_like(u0.samples)) for _ in times]
    traces: list[PicardTrace] = []
    free_norm = None
    first = None
    last_d = None
    for m in range(1, m_max + 1):
        acc = np.zeros_like(u0h)
        Fprev = None
        cur = []
        for j, t in enumerate(times):
            F = params.lam * w * np.abs(prev[j].samples) ** b * prev[j].samples
            Fh = np.conj(phase[j]) * np.fft.fftn(F)
            if j == 0:
                acc_j = acc
            else:
                acc = acc + 0.5 * dt * (Fprev + Fh)
                acc_j = acc
            Fprev = Fh
            cur.append(u0.with_samples(np.fft.ifftn(phase[j] * (u0h - 1j * acc_j))))
        norm = grad_norm(cur)
        if m == 1:
            free_norm = norm
            if norm > smallness:
                raise SmallnessViolated(f"free evolution norm {norm:.3g} exceeds {smallness}")
            first = norm
        elif norm > growth_limit * first:
            raise PicardDivergence(f"iterate {m} norm {norm:.3g} exceeds {growth_limit} x {first:.3g}")
        diff = [c.with_samples(c.samples - p.samples) for c, p in zip(cur, prev)]
        d = _space_time_norm(diff, wp.inv_q0, spec, tw)
        sampled = max([_space_time_norm(diff, iq, sp, tw) for iq, sp in samples], default=d)
        ratio = d / last_d if last_d else None
        traces.append(PicardTrace(m, norm, d, ratio, sampled))
        last_d = d
        prev = cur
    return PicardResult(traces, times, prev[-1], free_norm, wp)


# --- weighted Sobolev embedding ------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingScan:
    dilations: np.ndarray
    ratios: np.ndarray

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.ratios))

    @property
    def spread(self) -> float:
        return float(np.max(self.ratios) / np.min(self.ratios) - 1)


def _check_embedding(a: Fraction, b: Fraction, ip: Fraction, iq: Fraction) -> None:
    bad = []
    if not (0 < iq <= ip <= 1):
        bad.append("1 <= p <= q < infinity")
    if not -3 * iq < b:
        bad.append("-3/q < b")
    if not b <= a:
        bad.append("b <= a")
    if a - b - 1 != 3 * iq - 3 * ip:
        bad.append("a - b - 1 = 3/q - 3/p")
    if bad:
        raise ExponentRelationViolated("violated: " + ", ".join(bad))


def sobolev_embedding_ratio(dilations: Sequence[float], a: Number, b: Number, inv_p: Number, inv_q: Number,
                            base: GaussianHandle | None = None, n: int = 512) -> EmbeddingScan:
    """``|| |x|^b f ||_{L^q} / || |x|^a grad f ||_{L^p}`` over dilates of a Gaussian.

    The exponent relations are checked exactly before any quadrature.

    Raises:
        ExponentRelationViolated: ``1 <= p <= q < inf``, ``-3/q < b <= a`` or
            ``a - b - 1 = 3/q - 3/p`` fails.
    """
    a, b, ip, iq = (as_fraction(v) for v in (a, b, inv_p, inv_q))
    _check_embedding(a, b, ip, iq)
    g0 = gaussian() if base is None else base
    lhs_spec = WeightSpec(1 / float(iq), -float(b))
    rhs_spec = WeightSpec(1 / float(ip), -float(a))
    d = np.asarray(dilations, dtype=float)
    ratios = np.empty(d.size)
    for i, delta in enumerate(d):
        g = g0.dilate(delta)
        r = g.natural_grid(n)
        lhs = weighted_lebesgue_norm(RadialProfile(r, g(r)), lhs_spec)
        rhs = weighted_lebesgue_norm(RadialProfile(r, np.abs(g.radial_derivative(r))), rhs_spec)
        ratios[i] = lhs / rhs
    return EmbeddingScan(d, ratios)
