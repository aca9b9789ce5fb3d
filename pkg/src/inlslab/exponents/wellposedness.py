"""Exponents of the well-posedness spaces and their constraint chain."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .classes import ac_membership, ad_membership, inhomogeneous_admissible
from .core import Condition, ExponentConfig, Membership, Number, as_fraction, eq, le, lt

ALPHA_MIN = Fraction(3, 2)
ALPHA_MAX = Fraction(11, 6)
DEFAULT_DELTAS = (Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000))


class InfeasibleExponents(ValueError):
    """Raised when the constraint chain fails; carries the failing names."""

    def __init__(self, violated: Sequence[str], conditions: Sequence[Condition]):
        self.violated = tuple(violated)
        self.conditions = tuple(conditions)
        super().__init__("infeasible exponents, violated: " + ", ".join(self.violated))


@dataclass(frozen=True)
class WPExponents:
    """Exponent pairs of the solution and forcing spaces.

    ``(inv_q0, inv_r0)`` carries weight ``gamma0`` (solution side),
    ``(inv_qt0, inv_rt0)`` carries ``gammat0`` (forcing side, dual
    exponents). ``inv_p_embed`` and ``b_embed`` are the Lebesgue exponent
    and power weight of the intermediate embedding space.
    """

    alpha: Fraction
    beta: Fraction
    delta: Fraction
    gamma0: Fraction
    gammat0: Fraction
    inv_q0: Fraction
    inv_r0: Fraction
    inv_qt0: Fraction
    inv_rt0: Fraction
    inv_p_embed: Fraction
    b_embed: Fraction
    conditions: tuple[Condition, ...]
    admissibility: Membership

    @property
    def config(self) -> ExponentConfig:
        return ExponentConfig(self.inv_q0, self.inv_r0, self.inv_qt0, self.inv_rt0,
                              self.gamma0, self.gammat0, Fraction(0))

    def strichartz_r_window(self, gamma: Number | None = None) -> tuple[Fraction, Fraction]:
        """Open window for ``1/r`` of the pairs in the supremum norm."""
        g = self.gamma0 if gamma is None else as_fraction(gamma)
        k = 3 * self.beta + 5
        b1 = self.beta + 1
        lo = Fraction(1, 6) + g / 3 + Fraction(2, 3) / k - self.delta * b1
        hi = Fraction(1, 2) + g / 3 - 1 / k + Fraction(3, 2) * self.delta * b1
        return lo, min(hi, Fraction(1, 2))

    def as_dict(self) -> dict:
        keys = ("alpha", "beta", "delta", "gamma0", "gammat0", "inv_q0", "inv_r0",
                "inv_qt0", "inv_rt0", "inv_p_embed", "b_embed")
        return {k: str(getattr(self, k)) for k in keys}


def gammat0_window(alpha: Number, gamma0: Number) -> tuple[Fraction, Fraction]:
    """Closed sandwich for the forcing weight, intersected with ``[0, 1]``."""
    a, g0 = as_fraction(alpha), as_fraction(gamma0)
    b = 4 - 2 * a
    lo = -g0 * (b + 1) - b + a
    hi = -g0 * (b + 1) + a
    return max(lo, Fraction(0)), min(hi, Fraction(1))


def default_gammat0(alpha: Number, gamma0: Number) -> Fraction:
    """Centre of the feasible forcing-weight window."""
    lo, hi = gammat0_window(alpha, gamma0)
    return (lo + hi) / 2


def wellposedness_exponents(alpha: Number, delta: Number, gamma0: Number,
                            gammat0: Number | None = None) -> WPExponents:
    """Build and validate the well-posedness exponents.

    Args:
        alpha: singularity order, ``3/2 <= alpha < 11/6``.
        delta: small positive shift.
        gamma0: weight of the solution space.
        gammat0: weight of the forcing space; defaults to the centre of its
            feasible window.

    Raises:
        ValueError: ``alpha`` outside ``[3/2, 11/6)`` or ``delta <= 0``.
        InfeasibleExponents: any constraint of the chain fails.
    """
    a = as_fraction(alpha)
    d = as_fraction(delta)
    g0 = as_fraction(gamma0)
    if not ALPHA_MIN <= a < ALPHA_MAX:
        raise ValueError(f"alpha={a} outside [3/2, 11/6)")
    if d <= 0:
        raise ValueError("delta must be positive")
    gt0 = default_gammat0(a, g0) if gammat0 is None else as_fraction(gammat0)
    b = 4 - 2 * a
    k = 3 * b + 5
    b1 = b + 1

    iq0 = Fraction(3, 2) / k + Fraction(3, 2) * d
    ir0 = Fraction(1, 2) - 1 / k + g0 / 3 - d
    iqt0 = Fraction(1, 2) + 1 / k - Fraction(3, 2) * d * b1
    irt0 = Fraction(1, 6) - Fraction(2, 3) / k + gt0 / 3 + d * b1
    b_emb = (gt0 - a + g0) / b
    ip = ir0 - g0 / 3 - Fraction(1, 3) - b_emb / 3

    conds: list[Condition] = [
        lt("c1.gamma0_low", 0, g0),
        lt("c1.gamma0_half", g0, Fraction(1, 2)),
        lt("c1.gamma0_critical", g0, 3 / k),
        lt("c1.gammat0_low", 0, gt0),
        lt("c1.gammat0_high", gt0, 1),
        le("c5.low", -g0 * b1 - b + a, gt0),
        le("c5.high", gt0, -g0 * b1 + a),
        lt("c6.low", -1 + a / b1, g0),
        lt("c6.high", g0, a / b1),
        le("delta.ad", d, Fraction(1, 3) - 1 / k),
        lt("delta.ac", d * b1, Fraction(1, 3) + Fraction(2, 3) / k),
        lt("cond_4", irt0, Fraction(1, 6) + gt0 / 3),
        lt("nonlinear.r0", (g0 + 1) / 3, ir0),
        le("embedding.order", ip, ir0),
        lt("embedding.positive", 0, ip),
    ]
    # class memberships of both pairs
    ad = ad_membership(iq0, ir0, g0, 0)
    conds += [c for c in ad.conditions]
    if ad.reduced is not None:
        conds += list(ad.reduced.conditions)
    if 0 < gt0 < 1:
        ac = ac_membership(iqt0, irt0, gt0, 0)
        conds += [Condition("ac_t" + c.name[2:], c.relation, c.lhs, c.rhs) for c in ac.conditions]

    cfg_ok = all(0 <= v <= 1 for v in (iq0, ir0, iqt0, irt0)) and g0 >= 0 and gt0 >= 0
    if cfg_ok:
        cfg = ExponentConfig(iq0, ir0, iqt0, irt0, g0, gt0, Fraction(0))
        adm = inhomogeneous_admissible(cfg)
        conds += [Condition("thm:" + c.name, c.relation, c.lhs, c.rhs) for c in adm.conditions]
        # the solution pair must sit below the diagonal
        conds.append(eq("thm:branch_lower", int(adm.branch == "lower"), 1))
    else:
        adm = Membership.from_conditions([lt("reciprocals_in_range", 1, 0)])
        conds.append(lt("reciprocals_in_range", 1, 0))

    failing = [c.name for c in conds if c.verdict.value == "violated"]
    if failing:
        raise InfeasibleExponents(failing, conds)
    return WPExponents(a, b, d, g0, gt0, iq0, ir0, iqt0, irt0, ip, b_emb, tuple(conds), adm)


def feasible_parameters(alpha: Number,
                        deltas: Iterable[Number] = DEFAULT_DELTAS,
                        gamma0_grid: Iterable[Number] | None = None,
                        n_grid: int = 40) -> list[WPExponents]:
    """All feasible ``(delta, gamma0)`` on a rational grid, forcing weight centred.

    The default ``gamma0`` grid is ``k/n_grid * min(1/2, 3/(3 beta + 5))``
    for ``k = 1..n_grid-1``.
    """
    a = as_fraction(alpha)
    b = 4 - 2 * a
    cap = min(Fraction(1, 2), 3 / (3 * b + 5))
    if gamma0_grid is None:
        gamma0_grid = [cap * Fraction(k, n_grid) for k in range(1, n_grid)]
    out = []
    for d in deltas:
        for g0 in gamma0_grid:
            try:
                out.append(wellposedness_exponents(a, d, g0))
            except InfeasibleExponents:
                continue
    return out
