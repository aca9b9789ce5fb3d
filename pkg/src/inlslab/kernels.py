"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback is used. Setting ``INLSLAB_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_force_pure = os.environ.get("INLSLAB_PURE_PYTHON", "") not in ("", "0")
_compiled = None
if not _force_pure:
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "cython" if _compiled is not None else "python"


def classify_configs(cfg, denom: int, dim: int = 3):
    """Admissible and necessary flags for integer-encoded exponent rows."""
    return _impl.classify_configs(np.ascontiguousarray(cfg, dtype=np.int64), int(denom), int(dim))


def expsum(amp, base, coef, p) -> np.ndarray:
    """``out[j] = sum_m amp[m] * exp(i * (base[m] + p[j] * coef[m]))``."""
    return _impl.expsum(np.ascontiguousarray(amp, dtype=np.complex128),
                        np.ascontiguousarray(base, dtype=np.float64),
                        np.ascontiguousarray(coef, dtype=np.float64),
                        np.ascontiguousarray(np.atleast_1d(p), dtype=np.float64))


def kernel_sum(nodes, weights, targets, inv4t: float) -> np.ndarray:
    """``out[k] = sum_m weights[m] * exp(i * inv4t * |targets[k] - nodes[m]|^2)``."""
    return _impl.kernel_sum(np.ascontiguousarray(nodes, dtype=np.float64),
                            np.ascontiguousarray(weights, dtype=np.complex128),
                            np.ascontiguousarray(targets, dtype=np.float64), float(inv4t))


def nonlinear_phase(u: np.ndarray, weight, beta: float, factor: float) -> None:
    """In place ``u *= exp(-i * factor * weight * |u|**beta)``; ``u`` must be contiguous complex128."""
    if u.dtype != np.complex128 or not u.flags.c_contiguous:
        raise TypeError("u must be a C-contiguous complex128 array")
    flat = u.reshape(-1)
    _impl.nonlinear_phase(flat, np.ascontiguousarray(weight, dtype=np.float64).reshape(-1), float(beta), float(factor))


def available_backends() -> dict:
    """Map backend name to module for every importable implementation."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        return out
    out["cython"] = _kernels
    return out
