"""Large sweeps over exponent tuples with the integer kernel.

Tuples are stored as integer numerators over a common even denominator, so
the compiled classifier decides membership exactly. A random subset is
re-decided through the rational path as an independent cross-check.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import kernels
from .classes import inhomogeneous_admissible, necessary_conditions
from .core import ExponentConfig

COLUMNS = ("inv_q", "inv_r", "inv_qt", "inv_rt", "gamma", "gamma_t")


def encode(cfg: ExponentConfig, denom: int) -> np.ndarray:
    """Integer numerators of ``cfg`` over ``denom`` (must divide exactly)."""
    row = []
    for name in COLUMNS:
        v = getattr(cfg, name) * denom
        if v.denominator != 1:
            raise ValueError(f"{name} is not a multiple of 1/{denom}")
        row.append(int(v))
    return np.array(row, dtype=np.int64)


def decode(row: np.ndarray, denom: int, dim: int = 3) -> ExponentConfig:
    vals = [Fraction(int(v), denom) for v in row]
    return ExponentConfig(*vals, None, dim)


def random_configs(n: int, half_denom: int = 60, seed: int = 0) -> tuple[np.ndarray, int]:
    """Random tuples obeying the sharp scaling identity.

    ``1/r, 1/r~, gamma, gamma~`` are drawn on the grid ``k/half_denom`` and
    ``1/q`` on the finer grid ``k/(2 half_denom)``; ``1/q~`` is then fixed
    by the scaling identity and rows with ``1/q~`` outside ``[0, 1]`` are
    redrawn.

    Returns:
        ``(rows, denom)`` with ``denom = 2 * half_denom``.
    """
    rng = np.random.default_rng(seed)
    D = 2 * half_denom
    rows = []
    have = 0
    while have < n:
        m = 2 * (n - have) + 64
        ir = 2 * rng.integers(1, half_denom, m)
        irt = 2 * rng.integers(1, half_denom, m)
        ig = 2 * rng.integers(1, half_denom, m)
        igt = 2 * rng.integers(1, half_denom, m)
        iq = rng.integers(0, D + 1, m)
        iqt = (3 * (D - ir - irt) + ig + igt) // 2 - iq
        ok = (iqt >= 0) & (iqt <= D)
        block = np.stack([iq, ir, iqt, irt, ig, igt], axis=1)[ok]
        rows.append(block)
        have += block.shape[0]
    return np.ascontiguousarray(np.concatenate(rows)[:n], dtype=np.int64), D


@dataclass
class SweepReport:
    n_configs: int
    denom: int
    n_admissible: int
    n_necessary: int
    counterexamples: list[ExponentConfig]
    crosscheck_size: int
    crosscheck_mismatches: list[tuple[ExponentConfig, str]]
    backend: str
    elapsed: float
    admissible: np.ndarray = field(repr=False, default=None)
    necessary: np.ndarray = field(repr=False, default=None)

    @property
    def ok(self) -> bool:
        return not self.counterexamples and not self.crosscheck_mismatches


def implication_sweep(n_configs: int = 100_000, half_denom: int = 60, seed: int = 0,
                      crosscheck: int = 2000, dim: int = 3) -> SweepReport:
    """Check that admissibility implies the necessary conditions on random tuples.

    Args:
        n_configs: number of tuples.
        half_denom: grid resolution (see :func:`random_configs`).
        seed: RNG seed.
        crosscheck: how many rows to re-decide with exact rationals; half
            are drawn from the admissible rows so both outcomes are covered.
    """
    t0 = time.perf_counter()
    rows, D = random_configs(n_configs, half_denom, seed)
    adm, nec = kernels.classify_configs(rows, D, dim)
    adm = np.asarray(adm, dtype=bool)
    nec = np.asarray(nec, dtype=bool)
    bad_idx = np.flatnonzero(adm & ~nec)
    counter = [decode(rows[i], D, dim) for i in bad_idx[:100]]

    rng = np.random.default_rng(seed + 1)
    adm_idx = np.flatnonzero(adm)
    pick = list(rng.choice(rows.shape[0], size=min(crosscheck // 2, rows.shape[0]), replace=False))
    if adm_idx.size:
        pick += list(rng.choice(adm_idx, size=min(crosscheck - len(pick), adm_idx.size), replace=False))
    mism = []
    for i in pick:
        cfg = decode(rows[i], D, dim)
        a_exact = inhomogeneous_admissible(cfg).member if dim == 3 else False
        n_exact = necessary_conditions(cfg).member
        if a_exact != bool(adm[i]):
            mism.append((cfg, "admissible"))
        if n_exact != bool(nec[i]):
            mism.append((cfg, "necessary"))
    return SweepReport(
        n_configs=int(rows.shape[0]), denom=D,
        n_admissible=int(adm.sum()), n_necessary=int(nec.sum()),
        counterexamples=counter, crosscheck_size=len(pick), crosscheck_mismatches=mism,
        backend=kernels.BACKEND, elapsed=time.perf_counter() - t0,
        admissible=adm, necessary=nec,
    )
