"""Free Schroedinger evolution ``e^{it Delta}`` and the Duhamel integral.

Three routes are provided:

* ``gaussian_exact`` - closed-form evolution of Gaussian handles;
* ``spectral`` - Fourier multiplier ``e^{-it|xi|^2}`` on a periodic grid;
* ``kernel`` - product quadrature of
  ``(4 pi i t)^{-3/2} int e^{i|x-y|^2/(4t)} f(y) dy`` for compactly
  supported sources, guarded against unresolved oscillation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .fields import Field3D, GaussianHandle

__all__ = [
    "CompactSource", "PropagatorConfig", "UnresolvedOscillation", "duhamel", "duhamel_closed_form",
    "duhamel_convergence", "kernel_cells_needed", "propagate", "propagate_gaussian", "propagate_kernel", "propagate_spectral",
]

PHASE_LIMIT = math.pi / 4


class UnresolvedOscillation(ValueError):
    """The kernel phase varies too fast across a quadrature cell."""


@dataclass(frozen=True)
class CompactSource:
    """Source ``func`` restricted to the closed ball of radius ``radius``.

    ``func`` maps an array of points of shape ``(..., 3)`` to complex values.
    """

    func: Callable[[np.ndarray], np.ndarray]
    radius: float

    @classmethod
    def from_gaussian(cls, g: GaussianHandle, tol: float = 1e-9) -> "CompactSource":
        """Gaussian truncated where it has dropped below ``tol`` of its peak."""
        return cls(g.at, math.sqrt(-math.log(tol) / g.width.real))

    def conj(self) -> "CompactSource":
        f = self.func
        return CompactSource(lambda x: np.conj(f(x)), self.radius)

    def scale(self, c: complex) -> "CompactSource":
        f = self.func
        return CompactSource(lambda x: c * f(x), self.radius)

    def __add__(self, other: "CompactSource") -> "CompactSource":
        f, g = self.func, other.func
        return CompactSource(lambda x: f(x) + g(x), max(self.radius, other.radius))


@dataclass(frozen=True)
class PropagatorConfig:
    """Route selection and kernel quadrature parameters."""

    route: str = "spectral"
    dealias: bool = False
    kernel_cells: int | None = None
    kernel_order: int = 4

    def __post_init__(self):
        if self.route not in ("gaussian_exact", "spectral", "kernel"):
            raise ValueError(f"unknown route {self.route!r}")
        if self.kernel_order < 1:
            raise ValueError("kernel_order must be positive")


def propagate_gaussian(g: GaussianHandle, t: float) -> GaussianHandle:
    """Exact ``e^{it Delta} g``: width ``a -> a/(1+4iat)``, amplitude times ``(1+4iat)^{-3/2}``."""
    return g.evolve(t)


def _dealias_mask(field: Field3D) -> np.ndarray:
    k2 = field.wavenumber_sq()
    kmax = math.pi / field.spacing
    return k2 <= (2 * kmax / 3) ** 2


def propagate_spectral(field: Field3D, t: float, dealias: bool = False) -> Field3D:
    """``e^{it Delta}`` on the periodic box via the multiplier ``e^{-it|xi|^2}``."""
    fh = field.fft()
    fh *= np.exp(-1j * t * field.wavenumber_sq())
    if dealias:
        fh *= _dealias_mask(field)
    return field.with_samples(np.fft.ifftn(fh))


def _kernel_nodes(radius: float, cells: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-radius, radius, cells + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def kernel_cells_needed(radius: float, t: float, target_radius: float) -> int:
    """Smallest per-axis cell count that keeps the phase variation per cell below ``pi/4``."""
    grad = (target_radius + radius) / (2 * abs(t))
    h = PHASE_LIMIT / (grad * math.sqrt(3))
    return max(1, math.ceil(2 * radius / h))


def propagate_kernel(source: CompactSource, t: float, targets, cells: int | None = None,
                     order: int = 4, method: str = "separable") -> np.ndarray:
    """Evaluate ``e^{it Delta} f`` at ``targets`` by direct kernel quadrature.

    The support cube ``[-R, R]^3`` is split into ``cells^3`` cells with an
    ``order``-point Gauss rule per axis; the source is zero outside the ball
    of radius ``R``. ``method="separable"`` contracts the factorized kernel
    axis by axis; ``method="direct"`` sums over the nodes inside the ball with
    the compiled kernel.

    Raises:
        ValueError: ``t == 0``.
        UnresolvedOscillation: the phase ``|x-y|^2/(4t)`` varies by more than
            ``pi/4`` across a cell for some target.
    """
    if t == 0:
        raise ValueError("kernel route needs t != 0")
    tg = np.atleast_2d(np.asarray(targets, dtype=float))
    if tg.shape[-1] != 3:
        raise ValueError("targets must have shape (K, 3)")
    R = float(source.radius)
    reach = float(np.max(np.linalg.norm(tg, axis=1)))
    if cells is None:
        cells = kernel_cells_needed(R, t, reach)
    h = 2 * R / cells
    worst = (reach + R) / (2 * abs(t)) * h * math.sqrt(3)
    if worst >= PHASE_LIMIT:
        raise UnresolvedOscillation(
            f"phase varies by {worst:.3f} > pi/4 per cell; use at least {kernel_cells_needed(R, t, reach)} cells")
    y, w = _kernel_nodes(R, cells, order)
    Y = np.stack(np.meshgrid(y, y, y, indexing="ij"), axis=-1)
    inside = np.sum(Y ** 2, axis=-1) <= R * R
    vals = np.where(inside, source.func(Y), 0.0) * (w[:, None, None] * w[None, :, None] * w[None, None, :])
    pref = (4j * math.pi * t) ** -1.5
    inv4t = 1.0 / (4 * t)
    if method == "direct":
        sel = inside & (vals != 0)
        out = kernels.kernel_sum(np.ascontiguousarray(Y[sel]), np.ascontiguousarray(vals[sel]),
                                 np.ascontiguousarray(tg), inv4t)
        return pref * out
    if method != "separable":
        raise ValueError(f"unknown method {method!r}")
    out = np.empty(tg.shape[0], dtype=complex)
    for k, x in enumerate(tg):
        k1, k2, k3 = (np.exp(1j * inv4t * (x[i] - y) ** 2) for i in range(3))
        out[k] = k1 @ (k2 @ (vals @ k3))
    return pref * out


def propagate(data, t: float, config: PropagatorConfig = PropagatorConfig(), targets=None):
    """Dispatch to the route named in ``config``."""
    if config.route == "gaussian_exact":
        return propagate_gaussian(data, t)
    if config.route == "spectral":
        return propagate_spectral(data, t, config.dealias)
    return propagate_kernel(data, t, targets, config.kernel_cells, config.kernel_order)


def duhamel(forcing: Callable[[float], Field3D], t: float, steps: int) -> Field3D:
    """Midpoint rule for ``int_0^t e^{i(t-s) Delta} F(s) ds`` on the periodic box.

    Nodes are ``s_k = (k + 1/2) t / steps``, so neither endpoint is used.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    ds = t / steps
    acc = ref = last = fh = None
    for k in range(steps):
        s = (k + 0.5) * ds
        F = forcing(s)
        if ref is None:
            ref = F
            acc = np.zeros_like(F.samples)
            k2 = F.wavenumber_sq()
        if F is not last:
            fh = np.fft.fftn(F.samples)
            last = F
        acc += np.exp(-1j * (t - s) * k2) * fh
    return ref.with_samples(np.fft.ifftn(acc * ds))


def duhamel_closed_form(F: Field3D, t: float) -> Field3D:
    """Mode-wise exact ``int_0^t e^{i(t-s) Delta} F ds`` for time-independent ``F``."""
    k2 = F.wavenumber_sq()
    with np.errstate(divide="ignore", invalid="ignore"):
        m = np.where(k2 > 0, (np.exp(-1j * t * k2) - 1) / (-1j * k2), t)
    return F.with_samples(np.fft.ifftn(m * F.fft()))


def duhamel_convergence(forcing: Callable[[float], Field3D], t: float, steps: Sequence[int]) -> list[float]:
    """Successive-difference ratios ``|D_n - D_2n| / |D_2n - D_4n|`` (about 4 for second order)."""
    sols = [duhamel(forcing, t, n) for n in steps]
    diffs = [np.linalg.norm((a.samples - b.samples).ravel()) for a, b in zip(sols, sols[1:])]
    return [d0 / d1 for d0, d1 in zip(diffs, diffs[1:])]
