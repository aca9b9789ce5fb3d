"""Spatial data containers, weighted norms and analytic Gaussian data.

Two containers are used throughout:

* :class:`RadialProfile` - a radial function sampled on a geometric grid
  ``rho_k = rho_0 q^k``; optionally tagged with the closed-form Gaussian it
  came from.
* :class:`Field3D` - samples on an ``N^3`` periodic grid of side ``L``
  with the origin at index ``N // 2``.

Fourier conventions: ``f_hat(xi) = (2 pi)^{-3/2} int f(x) e^{-i x.xi} dx``
and the free flow ``e^{it Delta}`` multiplies ``f_hat`` by ``e^{-it|xi|^2}``.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import gamma as gamma_fn

from .quadrature import (
    DivergentNorm,
    gauss_legendre,
    geometric_ratio,
    interpolate_radial,
    power_integral,
)

__all__ = [
    "DivergentNorm", "Field3D", "GaussianHandle", "NormEstimate", "RadialProfile", "WeightSpec",
    "gaussian", "geometric_grid", "hs_norm", "load_field", "mixed_norm", "radial_fourier",
    "save_field", "time_quadrature", "to_csv", "weighted_lebesgue_norm",
]


@dataclass(frozen=True)
class WeightSpec:
    """Exponent ``r`` and weight power ``gamma`` of ``L^r(|x|^{-r gamma})``.

    ``gamma`` may be negative (growing weights such as ``|x|^{r b}``).
    """

    r_exponent: float
    gamma: float = 0.0

    def __post_init__(self):
        r = float(self.r_exponent)
        if not r >= 1 or math.isinf(r):
            raise ValueError(f"r_exponent={self.r_exponent} must be finite and >= 1")
        object.__setattr__(self, "r_exponent", r)
        object.__setattr__(self, "gamma", float(self.gamma))

    @classmethod
    def from_reciprocal(cls, inv_r, gamma=0) -> "WeightSpec":
        return cls(1 / float(Fraction(inv_r)), float(Fraction(gamma)))

    @property
    def power(self) -> float:
        """Exponent of ``|x|`` in the integrand weight ``|x|^{-r gamma}``."""
        return -self.r_exponent * self.gamma


@dataclass(frozen=True)
class NormEstimate:
    value: float
    error: float


def geometric_grid(r_min: float, r_max: float, n: int) -> np.ndarray:
    """``n`` geometrically spaced radii from ``r_min`` to ``r_max``."""
    if not 0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    if n < 2:
        raise ValueError("need at least two radii")
    return r_min * (r_max / r_min) ** (np.arange(n) / (n - 1))


@dataclass(frozen=True)
class RadialProfile:
    """Radial function sampled on a geometric grid."""

    radii: np.ndarray
    values: np.ndarray
    analytic: "GaussianHandle | None" = None

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if r.shape != v.shape:
            raise ValueError("radii and values must have the same shape")
        geometric_ratio(r)
        if not np.all(np.isfinite(v)):
            raise ValueError("profile values must be finite")
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "values", v)

    @property
    def ratio(self) -> float:
        return geometric_ratio(self.radii)

    def __call__(self, rho) -> np.ndarray:
        return interpolate_radial(self.radii, self.values, np.asarray(rho, dtype=float))

    def resample(self, radii: np.ndarray) -> "RadialProfile":
        return RadialProfile(radii, self(radii), self.analytic)

    def coarsened(self) -> "RadialProfile":
        """Every other grid point (ratio squared)."""
        return RadialProfile(self.radii[::2], self.values[::2], self.analytic)

    def dilate(self, delta: float) -> "RadialProfile":
        """Profile of ``f(delta x)``, on the grid scaled by ``1/delta``."""
        a = None if self.analytic is None else self.analytic.dilate(delta)
        return RadialProfile(self.radii / delta, self.values.copy(), a)

    def scale(self, c: complex) -> "RadialProfile":
        a = None if self.analytic is None else self.analytic.scale(c)
        return RadialProfile(self.radii, c * self.values, a)

    def derivative(self) -> "RadialProfile":
        """Radial derivative ``f'(rho)``; exact for analytic profiles, otherwise
        by differentiating the local interpolant in ``log rho``."""
        if self.analytic is not None:
            return RadialProfile(self.radii, self.analytic.radial_derivative(self.radii))
        s = np.log(self.radii)
        dv = np.gradient(self.values, s, edge_order=2)
        return RadialProfile(self.radii, dv / self.radii)

    def rms_radius(self) -> float:
        """``sqrt(int rho^4 |f|^2 / int rho^2 |f|^2)``, a length scale of the data."""
        a2 = np.abs(self.values) ** 2
        num = power_integral(self.radii, a2, 4.0)
        den = power_integral(self.radii, a2, 2.0)
        if den <= 0:
            return float(self.radii[-1])
        return math.sqrt(num / den)


@dataclass
class Field3D:
    """Complex samples on a periodic ``N^3`` grid of side ``box_length``.

    Grid points are ``x_j = -L/2 + j h`` with ``h = L/N``; index ``N // 2``
    is the origin.
    """

    box_length: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 3 or len(set(s.shape)) != 1:
            raise ValueError("samples must be an N x N x N array")
        n = s.shape[0]
        if n < 2 or n & (n - 1):
            raise ValueError(f"N={n} must be a power of two")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        if not self.box_length > 0:
            raise ValueError("box_length must be positive")
        self.samples = s
        self.box_length = float(self.box_length)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def spacing(self) -> float:
        return self.box_length / self.n

    def axis(self) -> np.ndarray:
        return -0.5 * self.box_length + self.spacing * np.arange(self.n)

    def radius(self) -> np.ndarray:
        return radius_grid(self.box_length, self.n)

    def wavenumber_sq(self) -> np.ndarray:
        return wavenumber_sq(self.box_length, self.n)

    def copy(self) -> "Field3D":
        return Field3D(self.box_length, self.samples.copy())

    def with_samples(self, samples: np.ndarray) -> "Field3D":
        return Field3D(self.box_length, samples)

    def fft(self) -> np.ndarray:
        return np.fft.fftn(self.samples)

    def gradient(self) -> list[np.ndarray]:
        """Spectral partial derivatives along the three axes."""
        k = 2 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)
        fh = self.fft()
        out = []
        for ax in range(3):
            shape = [1, 1, 1]
            shape[ax] = self.n
            out.append(np.fft.ifftn(1j * k.reshape(shape) * fh))
        return out

    def gradient_magnitude(self) -> "Field3D":
        g = self.gradient()
        return Field3D(self.box_length, np.sqrt(sum(np.abs(c) ** 2 for c in g)))

    def l2_norm(self) -> float:
        return float(math.sqrt(self.spacing ** 3 * np.sum(np.abs(self.samples) ** 2)))

    def spectral_tail(self, fraction: float = 2 / 3) -> float:
        """Share of the discrete L^2 mass above ``fraction`` of the Nyquist wavenumber."""
        fh = np.abs(self.fft()) ** 2
        k2 = self.wavenumber_sq()
        kmax = np.pi / self.spacing
        tot = fh.sum()
        if tot == 0:
            return 0.0
        return float(fh[k2 > (fraction * kmax) ** 2].sum() / tot)


@lru_cache(maxsize=16)
def _radius_grid(box_length: float, n: int) -> np.ndarray:
    h = box_length / n
    x = -0.5 * box_length + h * np.arange(n)
    r = np.sqrt(x[:, None, None] ** 2 + x[None, :, None] ** 2 + x[None, None, :] ** 2)
    r.setflags(write=False)
    return r


def radius_grid(box_length: float, n: int) -> np.ndarray:
    return _radius_grid(float(box_length), int(n))


@lru_cache(maxsize=16)
def _wavenumber_sq(box_length: float, n: int) -> np.ndarray:
    k = 2 * np.pi * np.fft.fftfreq(n, d=box_length / n)
    k2 = k[:, None, None] ** 2 + k[None, :, None] ** 2 + k[None, None, :] ** 2
    k2.setflags(write=False)
    return k2


def wavenumber_sq(box_length: float, n: int) -> np.ndarray:
    return _wavenumber_sq(float(box_length), int(n))


@lru_cache(maxsize=64)
def cube_power_constant(m: float) -> float:
    """``int_{[-1/2, 1/2]^3} |u|^{-m} du`` for ``m < 3``.

    Uses the pyramid decomposition over the six faces:
    ``3/(3-m) * int_{[-1/2,1/2]^2} (u^2 + v^2 + 1/4)^{-m/2} du dv``.
    """
    if m >= 3:
        raise DivergentNorm("cube integral of |u|^-m diverges for m >= 3")
    x, w = gauss_legendre(-0.5, 0.5, 4, 20)
    face = np.sum(w[:, None] * w[None, :] * (x[:, None] ** 2 + x[None, :] ** 2 + 0.25) ** (-m / 2))
    return 3.0 / (3.0 - m) * float(face)


# --- weighted norms ------------------------------------------------------------

def _radial_power_norm(radii, absval, spec: WeightSpec) -> float:
    r = spec.r_exponent
    p = 2.0 + spec.power
    integral = 4 * math.pi * power_integral(radii, absval ** r, p)
    return max(integral, 0.0) ** (1.0 / r)


def weighted_lebesgue_norm(f, spec: WeightSpec, with_error: bool = False):
    """``(int |x|^{-r gamma} |f|^r dx)^{1/r}`` for a profile, grid or Gaussian.

    Radial profiles: cell-wise Lagrange quadrature against the power
    weight with an analytic origin cell. 3D grids: midpoint rule away from
    the origin, exact power-weight integral over the origin cell against
    the constant interpolant.

    Args:
        with_error: also return a Richardson-type error estimate (radial:
            full grid against every-other-point grid; 3D: full grid against
            the grid subsampled by two).

    Raises:
        DivergentNorm: the weight is not integrable at the origin and the
            data do not vanish there.
    """
    if isinstance(f, GaussianHandle):
        v = f.weighted_norm(spec.r_exponent, spec.gamma)
        return NormEstimate(v, 0.0) if with_error else v
    if isinstance(f, RadialProfile):
        a = np.abs(f.values)
        val = _radial_power_norm(f.radii, a, spec)
        if not with_error:
            return val
        c = f.coarsened()
        coarse = _radial_power_norm(c.radii, np.abs(c.values), spec)
        return NormEstimate(val, abs(val - coarse) / 15.0)
    if isinstance(f, Field3D):
        val = _grid_norm(f.samples, f.box_length, spec)
        if not with_error:
            return val
        coarse = _grid_norm(f.samples[::2, ::2, ::2], f.box_length, spec) if f.n >= 4 else val
        return NormEstimate(val, abs(val - coarse) / 3.0)
    raise TypeError(f"unsupported field type {type(f).__name__}")


def _grid_norm(samples: np.ndarray, box_length: float, spec: WeightSpec) -> float:
    n = samples.shape[0]
    h = box_length / n
    r = spec.r_exponent
    m = -spec.power  # integrand ~ |x|^{-m}
    rad = radius_grid(box_length, n)
    a = np.abs(samples) ** r
    c = n // 2
    a0 = a[c, c, c]
    with np.errstate(divide="ignore"):
        w = rad ** (-m) if m != 0 else np.ones_like(rad)
    w = np.array(w)
    w[c, c, c] = 0.0
    total = h ** 3 * float(np.sum(w * a))
    if a0 != 0:
        total += float(a0) * h ** (3 - m) * cube_power_constant(m)
    return total ** (1.0 / r)


def time_quadrature(t0: float, t1: float, panels: int = 8, order: int = 16,
                    geometric: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[t0, t1]``.

    With ``geometric=True`` panel breaks are geometric (needs ``t0 > 0``).
    """
    if not t1 > t0:
        raise ValueError("need t1 > t0")
    if geometric:
        if t0 <= 0:
            raise ValueError("geometric panels need t0 > 0")
        breaks = t0 * (t1 / t0) ** (np.arange(panels + 1) / panels)
        x, w = np.polynomial.legendre.leggauss(order)
        half = 0.5 * np.diff(breaks)
        mid = 0.5 * (breaks[1:] + breaks[:-1])
        return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()
    return gauss_legendre(t0, t1, panels, order)


def mixed_norm(snapshots: Sequence, inv_q, spec: WeightSpec, time_weights=None) -> float:
    """``L^q_t L^r_x(|x|^{-r gamma})`` norm of time samples.

    Args:
        snapshots: fields (or Gaussian handles) at the quadrature nodes.
        inv_q: reciprocal time exponent; ``0`` gives the maximum.
        time_weights: quadrature weights matching ``snapshots``.
    """
    if len(snapshots) == 0:
        raise ValueError("empty snapshot list")
    iq = float(Fraction(inv_q)) if not isinstance(inv_q, float) else inv_q
    vals = np.array([weighted_lebesgue_norm(s, spec) for s in snapshots])
    if iq == 0:
        return float(vals.max())
    if time_weights is None:
        raise ValueError("time_weights required for finite q")
    w = np.asarray(time_weights, dtype=float)
    if w.shape != vals.shape:
        raise ValueError("time_weights must match snapshots")
    q = 1.0 / iq
    return float(np.dot(w, vals ** q) ** iq)


# --- Sobolev norms ------------------------------------------------------------------

def radial_fourier(profile: RadialProfile, k_grid: np.ndarray, order: int = 8) -> RadialProfile:
    """Radial Fourier transform ``sqrt(2/pi) int rho^2 f(rho) j0(k rho) d rho``.

    ``f`` is interpolated to Gauss-Legendre nodes on every grid cell (split
    so that each sub-panel spans at most two radians of ``k_max rho``) and
    on the cell below the first radius.
    """
    r = profile.radii
    k = np.asarray(k_grid, dtype=float)
    kmax = float(k.max())
    edges = np.concatenate(([0.0], r))
    widths = np.diff(edges)
    sub = np.maximum(1, np.ceil(kmax * widths / 2.0)).astype(int)
    x, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for s in np.unique(sub):
        sel = np.flatnonzero(sub == s)
        a, b = edges[sel], edges[sel + 1]
        for j in range(s):
            aa = a + (b - a) * j / s
            bb = a + (b - a) * (j + 1) / s
            half = 0.5 * (bb - aa)
            mid = 0.5 * (bb + aa)
            nodes.append((mid[:, None] + half[:, None] * x).ravel())
            weights.append((half[:, None] * w).ravel())
    rho = np.concatenate(nodes)
    wt = np.concatenate(weights)
    fv = profile(rho) * wt * rho ** 2
    out = np.empty(k.size, dtype=complex)
    chunk = max(1, (1 << 22) // rho.size)
    for i in range(0, k.size, chunk):
        kr = k[i:i + chunk, None] * rho[None, :]
        out[i:i + chunk] = np.sinc(kr / np.pi) @ fv
    return RadialProfile(k, math.sqrt(2 / math.pi) * out)


def default_k_grid(profile: RadialProfile, n: int = 600) -> np.ndarray:
    rs = profile.rms_radius()
    return geometric_grid(1e-6 / rs, 40.0 / rs, n)


def hs_norm(f, sigma, k_grid: np.ndarray | None = None, with_error: bool = False):
    """Homogeneous Sobolev norm ``|| |xi|^sigma f_hat ||_2``.

    Radial profiles go through :func:`radial_fourier`; 3D grids through the
    FFT (for ``sigma != 0`` the zero mode is dropped); Gaussian handles use the closed form.

    Raises:
        ValueError: ``sigma`` outside ``(-3/2, 3/2)``.
    """
    s = float(Fraction(sigma)) if not isinstance(sigma, float) else sigma
    if not -1.5 < s < 1.5:
        raise ValueError(f"sigma={sigma} outside (-3/2, 3/2)")
    if isinstance(f, GaussianHandle):
        v = f.hs_norm(s)
        return NormEstimate(v, 0.0) if with_error else v
    if isinstance(f, RadialProfile):
        k = default_k_grid(f) if k_grid is None else np.asarray(k_grid, dtype=float)
        fh = radial_fourier(f, k)
        val = _hs_from_transform(fh, s)
        if not with_error:
            return val
        coarse = _hs_from_transform(radial_fourier(f.coarsened(), k), s)
        return NormEstimate(val, abs(val - coarse) / 15.0)
    if isinstance(f, Field3D):
        fh = f.fft()
        k2 = f.wavenumber_sq()
        with np.errstate(divide="ignore"):
            m = np.where(k2 > 0, k2 ** s, 1.0 if s == 0 else 0.0)
        val = math.sqrt(f.spacing ** 3 / f.n ** 3 * float(np.sum(m * np.abs(fh) ** 2)))
        return NormEstimate(val, 0.0) if with_error else val
    raise TypeError(f"unsupported field type {type(f).__name__}")


def _hs_from_transform(fh: RadialProfile, s: float) -> float:
    a2 = np.abs(fh.values) ** 2
    return math.sqrt(max(4 * math.pi * power_integral(fh.radii, a2, 2 + 2 * s), 0.0))


# --- Gaussian handles -------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianHandle:
    """``amplitude * exp(-width |x|^2)`` with complex ``width``, ``Re(width) > 0``."""

    width: complex
    amplitude: complex = 1.0

    def __post_init__(self):
        a = complex(self.width)
        if not a.real > 0:
            raise ValueError(f"Gaussian width {self.width} does not decay (Re <= 0)")
        object.__setattr__(self, "width", a)
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @property
    def length_scale(self) -> float:
        return 1.0 / math.sqrt(self.width.real)

    def __call__(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        return self.amplitude * np.exp(-self.width * rho ** 2)

    def at(self, x: np.ndarray) -> np.ndarray:
        """Values at points ``x`` of shape ``(..., 3)``."""
        return self(np.linalg.norm(np.asarray(x, dtype=float), axis=-1))

    def radial_derivative(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        return -2 * self.width * rho * self(rho)

    def __mul__(self, other: "GaussianHandle") -> "GaussianHandle":
        if not isinstance(other, GaussianHandle):
            return NotImplemented
        return GaussianHandle(self.width + other.width, self.amplitude * other.amplitude)

    def scale(self, c: complex) -> "GaussianHandle":
        return GaussianHandle(self.width, self.amplitude * c)

    def dilate(self, delta: float) -> "GaussianHandle":
        """Handle of ``f(delta x)``."""
        return GaussianHandle(self.width * delta ** 2, self.amplitude)

    def evolve(self, t: float) -> "GaussianHandle":
        """Closed-form free Schroedinger evolution ``e^{it Delta}``."""
        z = 1 + 4j * self.width * t
        return GaussianHandle(self.width / z, self.amplitude * z ** (-1.5))

    def fourier(self) -> "GaussianHandle":
        """Handle of the unitary Fourier transform."""
        a = self.width
        return GaussianHandle(1 / (4 * a), self.amplitude * (2 * a) ** (-1.5))

    def natural_grid(self, n: int = 512, lo: float = 1e-3, hi: float = 8.0) -> np.ndarray:
        ell = self.length_scale
        return geometric_grid(lo * ell, hi * ell, n)

    def profile(self, radii: np.ndarray | None = None, n: int = 512) -> RadialProfile:
        r = self.natural_grid(n) if radii is None else np.asarray(radii, dtype=float)
        return RadialProfile(r, self(r), self)

    def sample(self, box_length: float, n: int) -> Field3D:
        return Field3D(box_length, self(radius_grid(box_length, n)))

    def l2_norm(self) -> float:
        return abs(self.amplitude) * (math.pi / (2 * self.width.real)) ** 0.75

    def weighted_norm(self, r: float, gamma: float = 0.0) -> float:
        """Closed form of ``(int |x|^{-r gamma} |f|^r)^{1/r}``."""
        e = (3 - r * gamma) / 2
        if e <= 0:
            raise DivergentNorm("weight not integrable at the origin")
        val = 4 * math.pi * abs(self.amplitude) ** r * gamma_fn(e) / (2 * (r * self.width.real) ** e)
        return val ** (1 / r)

    def hs_norm(self, sigma: float) -> float:
        """Closed form of ``|| |xi|^sigma f_hat ||_2``."""
        a = self.width
        c = (1 / (2 * a)).real
        e = (3 + 2 * sigma) / 2
        val = 4 * math.pi * abs(self.amplitude) ** 2 * abs(2 * a) ** (-3) * gamma_fn(e) / (2 * c ** e)
        return math.sqrt(val)


def gaussian(width: complex = 1.0, amplitude: complex = 1.0) -> GaussianHandle:
    """Factory for :class:`GaussianHandle`."""
    return GaussianHandle(width, amplitude)


# --- serialization --------------------------------------------------------------------------

_MAGIC = b"INLSFLD1"
_RADIAL, _GRID = 1, 2


def save_field(path, f) -> None:
    """Write a profile or grid to the flat binary container.

    Layout (little endian): magic, kind (u8), grid descriptor
    (radial: n u64, r_min f64, r_max f64; grid: N u64, L f64, 0 f64),
    element count (u64), then complex128 values.
    """
    path = Path(path)
    if isinstance(f, RadialProfile):
        head = struct.pack("<8sBQddQ", _MAGIC, _RADIAL, f.radii.size, f.radii[0], f.radii[-1], f.values.size)
        data = f.values
    elif isinstance(f, Field3D):
        head = struct.pack("<8sBQddQ", _MAGIC, _GRID, f.n, f.box_length, 0.0, f.samples.size)
        data = f.samples.ravel()
    else:
        raise TypeError(f"cannot serialize {type(f).__name__}")
    with open(path, "wb") as fh:
        fh.write(head)
        fh.write(np.ascontiguousarray(data, dtype="<c16").tobytes())


def load_field(path):
    """Inverse of :func:`save_field`."""
    raw = Path(path).read_bytes()
    size = struct.calcsize("<8sBQddQ")
    magic, kind, n, a, b, count = struct.unpack("<8sBQddQ", raw[:size])
    if magic != _MAGIC:
        raise ValueError("not a field container")
    data = np.frombuffer(raw[size:], dtype="<c16")
    if data.size != count:
        raise ValueError("truncated field container")
    if kind == _RADIAL:
        return RadialProfile(geometric_grid(a, b, int(n)), data.astype(complex))
    if kind == _GRID:
        return Field3D(a, data.astype(complex).reshape(int(n), int(n), int(n)))
    raise ValueError(f"unknown container kind {kind}")


def to_csv(f, path) -> None:
    """CSV export: radial profiles as ``rho,re,im,abs``; grids along the x axis through the origin."""
    if isinstance(f, RadialProfile):
        x, v = f.radii, f.values
        head = "rho"
    elif isinstance(f, Field3D):
        c = f.n // 2
        x, v = f.axis(), f.samples[:, c, c]
        head = "x"
    else:
        raise TypeError(f"cannot export {type(f).__name__}")
    with open(path, "w") as fh:
        fh.write(f"{head},re,im,abs\n")
        for xi, vi in zip(x, v):
            fh.write(f"{xi:.17g},{vi.real:.17g},{vi.imag:.17g},{abs(vi):.17g}\n")
