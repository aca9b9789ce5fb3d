"""Log-log slope fits used by the decay and growth experiments."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LogLogFit:
    slope: float
    intercept: float
    residual: float

    def predict(self, x) -> np.ndarray:
        return np.exp(self.intercept) * np.asarray(x, dtype=float) ** self.slope


def loglog_fit(x, y, min_points: int = 2, min_decades: float = 0.0) -> LogLogFit:
    """Unweighted least-squares fit of ``log y = slope * log x + intercept``.

    ``residual`` is the root-mean-square deviation in ``log y``.

    Raises:
        ValueError: too few points, too short a range, or non-positive data.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < min_points:
        raise ValueError(f"need at least {min_points} samples, got {x.size}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    if math.log10(x.max() / x.min()) < min_decades - 1e-12:
        raise ValueError(f"samples must span at least {min_decades} decades")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    res = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return LogLogFit(float(slope), float(intercept), res)
