"""Exact check that interpolating the endpoint cases lands in the localized region.

Upper family: a diagonal endpoint (case a) is interpolated with the corner
``X = 1/6, Xt = 1/2 - eps/3`` (case b); the result is interpolated again
with ``X = eps/3, Xt = 1/3`` at ``a = at = 2`` (case d). The lower family
is the mirror image (cases a, c, e), obtained by swapping the two pairs.
Every interpolated tuple is tested against the localized conditions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .classes import localized_conditions
from .core import Number, as_fraction

Tuple6 = tuple[Fraction, Fraction, Fraction, Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class Endpoints:
    """Random endpoint data for one interpolation chain (upper orientation)."""

    gamma: Fraction
    gamma_t: Fraction
    x1: Fraction          # shifted coordinate of the diagonal endpoint
    inv_a1: Fraction
    inv_at1: Fraction
    inv_a2: Fraction
    inv_at2: Fraction
    theta1: Fraction      # position of the second-stage endpoint along stage one


@dataclass(frozen=True)
class Violation:
    family: str
    stage: int
    theta: Fraction
    point: Tuple6
    branch: str
    failed: tuple[str, ...]


@dataclass
class AppendixReport:
    eps: Fraction
    n_checked: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _rand_unit(rng: random.Random, den: int, lo: int = 0) -> Fraction:
    return Fraction(rng.randint(lo, den), den)


def sample_endpoints(n: int, seed: int = 0, den: int = 97) -> list[Endpoints]:
    """Random rational endpoints obeying the case constraints.

    The larger-coordinate weight is drawn below 1/2 as required by case (d).
    """
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        g = Fraction(rng.randint(1, den - 1), den)
        gt = Fraction(rng.randint(1, (den - 1) // 2), den)
        x_max = Fraction(1, 2) - (g + gt) / 6
        x1 = x_max * _rand_unit(rng, den, lo=1)
        iat1 = _rand_unit(rng, den)
        ia1 = (1 - iat1) * _rand_unit(rng, den)
        ia2 = Fraction(1, 2) + _rand_unit(rng, den) / 2
        iat2 = (1 - ia2) * _rand_unit(rng, den)
        theta1 = _rand_unit(rng, den)
        out.append(Endpoints(g, gt, x1, ia1, iat1, ia2, iat2, theta1))
    return out


def stage_one(e: Endpoints, theta: Fraction, eps: Fraction) -> Tuple6:
    """Interpolate case (a) with case (b) at ``theta``."""
    g, gt = e.gamma, e.gamma_t
    ib1 = e.x1 + g / 3
    ibt1 = e.x1 + gt / 3
    ib = (1 - theta) * ib1 + theta / 6 + g * theta / 3
    ibt = (1 - theta) * ibt1 + theta / 2 + gt * theta / 3 - eps * theta / 3
    ia = (1 - theta) * e.inv_a1 + theta * e.inv_a2
    iat = (1 - theta) * e.inv_at1 + theta * e.inv_at2
    return ia, ib, iat, ibt, g, gt


def stage_two(e: Endpoints, theta: Fraction, eps: Fraction) -> Tuple6:
    """Interpolate case (d) with a stage-one point at ``theta``."""
    ia2, ib2, iat2, ibt2, g, gt = stage_one(e, e.theta1, eps)
    ib = (1 - theta) * (g + eps) / 3 + theta * ib2
    ibt = (1 - theta) * (1 + gt) / 3 + theta * ibt2
    ia = (1 - theta) / 2 + theta * ia2
    iat = (1 - theta) / 2 + theta * iat2
    return ia, ib, iat, ibt, g, gt


def mirror(p: Tuple6) -> Tuple6:
    ia, ib, iat, ibt, g, gt = p
    return iat, ibt, ia, ib, gt, g


def appendix_interp_verify(theta_samples: Sequence[Number],
                           n_endpoints: int = 50,
                           eps: Number = Fraction(1, 100),
                           seed: int = 0,
                           families: Iterable[str] = ("upper", "lower")) -> AppendixReport:
    """Check every interpolated point against the localized conditions.

    Args:
        theta_samples: interpolation parameters in ``[0, 1]``.
        n_endpoints: number of random endpoint chains per family.
        eps: the offset of the corner cases.
        seed: RNG seed for the endpoints.
        families: ``"upper"`` and/or ``"lower"``.
    """
    e_ = as_fraction(eps)
    thetas = [as_fraction(t) for t in theta_samples]
    for t in thetas:
        if not 0 <= t <= 1:
            raise ValueError(f"theta={t} outside [0, 1]")
    report = AppendixReport(eps=e_)
    if not thetas:
        return report
    fams = tuple(families)
    for fam in fams:
        if fam not in ("upper", "lower"):
            raise ValueError(f"unknown family {fam!r}")
        for e in sample_endpoints(n_endpoints, seed=seed + (0 if fam == "upper" else 7919)):
            for stage, fn in ((1, stage_one), (2, stage_two)):
                for t in thetas:
                    p = fn(e, t, e_)
                    if fam == "lower":
                        p = mirror(p)
                    branch, conds = localized_conditions(*p)
                    report.n_checked += 1
                    bad = tuple(c.name for c in conds if c.verdict.value == "violated")
                    if bad:
                        report.violations.append(Violation(fam, stage, t, p, branch, bad))
    return report


def largest_passing_eps(eps_values: Sequence[Number], theta_samples: Sequence[Number],
                        n_endpoints: int = 20, seed: int = 0) -> tuple[Fraction | None, dict]:
    """Largest sampled ``eps`` whose sweep has no violation.

    Returns the winner (``None`` if none passes) and the violation count of
    each sampled value.
    """
    counts = {}
    best = None
    for ev in sorted(as_fraction(v) for v in eps_values):
        rep = appendix_interp_verify(theta_samples, n_endpoints, ev, seed)
        counts[ev] = len(rep.violations)
        if rep.ok:
            best = ev
    return best, counts
