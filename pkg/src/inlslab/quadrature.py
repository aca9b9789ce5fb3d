"""Quadrature rules shared by the numerical modules.

* Composite Gauss-Legendre panels.
* Power-weighted integrals ``int_0^R rho^p g(rho) d rho`` of samples on a
  geometric grid: on every cell ``g`` is replaced by its degree-9 local
  Lagrange interpolant and the product with ``rho^p`` is integrated exactly
  (up to a 24-point Gauss rule on the cell, which is exact to machine
  precision for these smooth integrands). The cell below the first grid
  point is integrated analytically against an even quadratic model.
* Local Lagrange interpolation on geometric grids.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

STENCIL = 10
_CELL_NODES = 24


class DivergentNorm(ArithmeticError):
    """A weighted integral diverges at the origin for the given data."""


def gauss_legendre(a: float, b: float, panels: int, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite Gauss-Legendre rule on ``[a, b]``."""
    if panels < 1:
        raise ValueError("need at least one panel")
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def gauss_legendre_breaks(breaks, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule with one panel per consecutive pair of ``breaks``."""
    b = np.asarray(breaks, dtype=float)
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * np.diff(b)
    mid = 0.5 * (b[1:] + b[:-1])
    return (mid[:, None] + half[:, None] * x[None, :]).ravel(), (half[:, None] * w[None, :]).ravel()


def geometric_ratio(radii: np.ndarray, rtol: float = 1e-9) -> float:
    """Constant ratio of a geometric grid; raises if the grid is not geometric."""
    r = np.asarray(radii, dtype=float)
    if r.ndim != 1 or r.size < 2:
        raise ValueError("grid needs at least two points")
    if np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise ValueError("radii must be positive and strictly increasing")
    ratios = r[1:] / r[:-1]
    q = float(np.exp(np.mean(np.log(ratios))))
    if np.max(np.abs(ratios / q - 1)) > rtol:
        raise ValueError("radii are not geometrically spaced")
    return q


def _stencil_size(n: int) -> int:
    return min(STENCIL, n)


@lru_cache(maxsize=512)
def _cell_weights(p: float, q: float, m: int) -> np.ndarray:
    """``W[o, k] = int_1^q u^p L_k(u) du`` for nodes ``u_k = q^(k - o)``.

    Row ``o`` serves cells whose left end is the ``o``-th stencil node.
    """
    x, w = np.polynomial.legendre.leggauss(_CELL_NODES)
    u = 0.5 * (q - 1) * x + 0.5 * (q + 1)
    wu = 0.5 * (q - 1) * w * u ** p
    W = np.zeros((m - 1, m))
    for o in range(m - 1):
        nodes = q ** (np.arange(m) - o)
        for k in range(m):
            L = np.ones_like(u)
            for l in range(m):
                if l != k:
                    L *= (u - nodes[l]) / (nodes[k] - nodes[l])
            W[o, k] = np.dot(wu, L)
    return W


def stencil_start(cells: np.ndarray, n: int, m: int) -> np.ndarray:
    """First stencil index for each cell (cell ``i`` spans nodes ``i, i+1``)."""
    return np.clip(cells - (m // 2 - 1), 0, n - m)


def power_weights(radii: np.ndarray, p: float) -> tuple[np.ndarray, float]:
    """Weights ``w`` with ``int_{r_0}^{r_end} rho^p g d rho ~ sum w_i g_i``.

    Returns the weight vector and the grid ratio.
    """
    r = np.asarray(radii, dtype=float)
    n = r.size
    q = geometric_ratio(r)
    m = _stencil_size(n)
    W = _cell_weights(float(p), float(q), m)
    w = np.zeros(n)
    cells = np.arange(n - 1)
    j0 = stencil_start(cells, n, m)
    off = cells - j0
    scale = r[:-1] ** (p + 1)
    for o in np.unique(off):
        sel = off == o
        idx = j0[sel][:, None] + np.arange(m)[None, :]
        np.add.at(w, idx, scale[sel][:, None] * W[o][None, :])
    return w, q


def origin_cell(radii: np.ndarray, g: np.ndarray, p: float) -> float:
    """``int_0^{r_0} rho^p g`` with ``g`` modelled as ``c0 + c2 rho^2``."""
    r0, r1 = float(radii[0]), float(radii[1])
    g0, g1 = g[0], g[1]
    c2 = (g1 - g0) / (r1 * r1 - r0 * r0)
    c0 = g0 - c2 * r0 * r0
    if p <= -1:
        if np.all(np.asarray(g[:2]) == 0):
            return 0.0
        raise DivergentNorm(f"rho^{p} is not integrable at the origin for data with g(0) != 0")
    return c0 * r0 ** (p + 1) / (p + 1) + c2 * r0 ** (p + 3) / (p + 3)


def power_integral(radii: np.ndarray, g: np.ndarray, p: float) -> float:
    """``int_0^{r_end} rho^p g(rho) d rho`` from samples on a geometric grid."""
    g = np.asarray(g)
    w, _ = power_weights(radii, p)
    return origin_cell(radii, g, p) + np.dot(w, g)


def lagrange_matrix(radii: np.ndarray, targets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Local Lagrange interpolation weights in the log-radius variable.

    Returns ``(idx, L)`` of shape ``(T, m)`` so that the interpolant at
    ``targets[t]`` is ``sum_k L[t, k] * values[idx[t, k]]``. Targets outside
    ``[r_0, r_end]`` are handled by the caller.
    """
    r = np.asarray(radii, dtype=float)
    n = r.size
    q = geometric_ratio(r)
    m = _stencil_size(n)
    s = np.log(np.asarray(targets, dtype=float) / r[0]) / np.log(q)
    cells = np.clip(np.floor(s).astype(np.int64), 0, n - 2)
    j0 = stencil_start(cells, n, m)
    tau = s - j0
    k = np.arange(m)
    L = np.ones((tau.size, m))
    for a in range(m):
        for b in range(m):
            if a != b:
                L[:, a] *= (tau - b) / (a - b)
    idx = j0[:, None] + k[None, :]
    return idx, L


def interpolate_radial(radii: np.ndarray, values: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Evaluate a sampled radial function at ``targets``.

    Inside the grid: local Lagrange interpolation in ``log rho``. Below the
    first point: even quadratic model. Beyond the last point: zero.
    """
    r = np.asarray(radii, dtype=float)
    v = np.asarray(values)
    t = np.asarray(targets, dtype=float)
    out = np.zeros(t.shape, dtype=v.dtype if np.iscomplexobj(v) else float)
    inside = (t >= r[0]) & (t <= r[-1])
    if np.any(inside):
        idx, L = lagrange_matrix(r, t[inside])
        out[inside] = np.sum(L * v[idx], axis=1)
    low = t < r[0]
    if np.any(low):
        c2 = (v[1] - v[0]) / (r[1] ** 2 - r[0] ** 2)
        out[low] = v[0] + c2 * (t[low] ** 2 - r[0] ** 2)
    return out
