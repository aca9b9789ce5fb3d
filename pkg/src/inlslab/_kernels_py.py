"""Pure numpy implementations of the compiled kernels.

Signatures and results match ``_kernels`` (up to floating-point summation
order for the complex sums; the integer classifier agrees exactly).
"""
from __future__ import annotations

import numpy as np

_CHUNK = 1 << 21


def classify_configs(cfg: np.ndarray, denom: int, dim: int = 3):
    """Vectorized twin of the compiled exponent classifier."""
    c = np.asarray(cfg, dtype=np.int64)
    iq, ir, iqt, irt, ig, igt = (c[:, k] for k in range(6))
    D = np.int64(denom)
    nd = np.int64(dim)

    ok = (0 < ig) & (ig < D) & (0 < igt) & (igt < D)
    ok &= 2 * (iq + iqt) == 3 * (D - ir - irt) + ig + igt
    s1 = 3 * D - 6 * ir + 2 * ig - 4 * iq
    ok &= (-D < s1) & (s1 < D)
    ok &= (0 <= iq) & (iq <= D) & (ig < 3 * ir)
    ok &= 6 * ir < 3 * D + 2 * ig
    ok &= 2 * iq < 3 * D - 6 * ir + 2 * ig
    ok &= (0 <= iqt) & (iqt <= D) & (igt < 3 * irt)
    ok &= 6 * irt < 3 * D + 2 * igt
    ok &= 2 * iqt < 3 * D - 6 * irt + 2 * igt
    ok &= iq + iqt < D
    X = 3 * ir - ig
    Xt = 3 * irt - igt
    ok &= np.abs(Xt - X) < D
    G = ig + igt
    diag = (D + 2 * ig < 6 * ir) & (6 * ir <= 3 * D - igt + ig)
    upper = (G * X + (2 * D - G) * Xt <= (3 * D - G) * D)
    upper &= (2 * iq < 3 * D + 2 * (X - Xt)) & (2 * igt < D)
    lower = (G * Xt + (2 * D - G) * X <= (3 * D - G) * D)
    lower &= (2 * iqt < 3 * D + 2 * (Xt - X)) & (2 * ig < D)
    branch = np.where(X == Xt, diag, np.where(X < Xt, upper, lower))
    adm = ok & branch

    nec = 2 * (iq + iqt) == nd * (D - ir - irt) + ig + igt
    nec &= (ig < nd * ir) & (2 * nd * ir < nd * D + 2 * ig)
    nec &= (igt < nd * irt) & (2 * nd * irt < nd * D + 2 * igt)
    nec &= iq + iqt <= D
    nec &= 2 * iq < nd * D - 2 * nd * ir + 2 * ig
    nec &= 2 * iqt < nd * D - 2 * nd * irt + 2 * igt
    nec &= np.abs((nd * ir - ig) - (nd * irt - igt)) <= D
    return adm.astype(np.uint8), nec.astype(np.uint8)


def expsum(amp: np.ndarray, base: np.ndarray, coef: np.ndarray, p: np.ndarray) -> np.ndarray:
    """``out[j] = sum_m amp[m] * exp(i * (base[m] + p[j] * coef[m]))``."""
    amp = np.asarray(amp, dtype=np.complex128)
    base = np.asarray(base, dtype=np.float64)
    coef = np.asarray(coef, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    out = np.empty(p.size, dtype=np.complex128)
    step = max(1, _CHUNK // max(1, amp.size))
    for j0 in range(0, p.size, step):
        ph = base[None, :] + p[j0:j0 + step, None] * coef[None, :]
        out[j0:j0 + step] = np.exp(1j * ph) @ amp
    return out


def kernel_sum(nodes: np.ndarray, weights: np.ndarray, targets: np.ndarray, inv4t: float) -> np.ndarray:
    """``out[k] = sum_m weights[m] * exp(i * inv4t * |targets[k] - nodes[m]|^2)``."""
    nodes = np.asarray(nodes, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.complex128)
    targets = np.asarray(targets, dtype=np.float64)
    out = np.empty(targets.shape[0], dtype=np.complex128)
    step = max(1, _CHUNK // max(1, nodes.shape[0]))
    for k0 in range(0, targets.shape[0], step):
        d = targets[k0:k0 + step, None, :] - nodes[None, :, :]
        ph = inv4t * np.einsum("kmi,kmi->km", d, d)
        out[k0:k0 + step] = np.exp(1j * ph) @ weights
    return out


def nonlinear_phase(u: np.ndarray, weight: np.ndarray, beta: float, factor: float) -> None:
    """In place ``u *= exp(-i * factor * weight * |u|**beta)``."""
    u *= np.exp(-1j * factor * weight * np.abs(u) ** beta)
