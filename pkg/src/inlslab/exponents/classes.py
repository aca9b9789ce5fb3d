"""Admissibility classes, the inhomogeneous criterion and necessary conditions.

Conventions: every exponent enters through its reciprocal, and infinity is
the reciprocal ``0``. In dimension ``n`` the shifted coordinate of a pair is
``X = 1/r - gamma/n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Condition,
    ExponentConfig,
    Membership,
    Number,
    as_fraction,
    closed,
    eq,
    le,
    lt,
)

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
SIXTH = Fraction(1, 6)


def _check_reciprocals(**kw) -> dict[str, Fraction]:
    out = {}
    for k, v in kw.items():
        f = as_fraction(v)
        if k.startswith("inv_") and f < 0:
            raise ValueError(f"{k}={f} is negative")
        out[k] = f
    return out


def ad_conditions(inv_q, inv_r, gamma, sigma, prefix="ad") -> list[Condition]:
    """Conditions of the weighted homogeneous class with smoothing ``sigma``."""
    return [
        le(f"{prefix}.q_low", 0, inv_q),
        le(f"{prefix}.q_high", inv_q, HALF),
        lt(f"{prefix}.r_low", gamma / 3, inv_r),
        le(f"{prefix}.r_high", inv_r, HALF),
        lt(f"{prefix}.decay", inv_q, Fraction(3, 2) * (HALF - inv_r) + gamma),
        eq(f"{prefix}.scaling", sigma, 3 * (HALF - inv_r) - 2 * inv_q + gamma),
        lt(f"{prefix}.sigma_low", -HALF, sigma),
        lt(f"{prefix}.sigma_high", sigma, Fraction(3, 2)),
    ]


def reduced_ad_conditions(inv_q, inv_r, gamma, prefix="ad_reduced") -> list[Condition]:
    """Conditions of the reduced class (smoothing index zero)."""
    return [
        le(f"{prefix}.r_low", SIXTH + gamma / 3, inv_r),
        le(f"{prefix}.r_high", inv_r, HALF),
        eq(f"{prefix}.scaling", 2 * inv_q, 3 * (HALF - inv_r) + gamma),
    ]


def ad_membership(inv_q: Number, inv_r: Number, gamma: Number, sigma: Number = 0) -> Membership:
    """Membership of ``(q, r)`` in the weighted homogeneous class.

    For ``sigma == 0`` the companion test against the reduced class is
    attached as ``Membership.reduced``. Configurations whose ``sigma`` lies
    in ``[1/2, 3/2)`` are flagged, because the inhomogeneous class only
    admits ``|sigma| < 1/2``.

    Raises:
        ValueError: for a negative reciprocal or a negative weight.
    """
    a = _check_reciprocals(inv_q=inv_q, inv_r=inv_r, gamma=gamma, sigma=sigma)
    if a["gamma"] < 0:
        raise ValueError("gamma must be non-negative")
    conds = ad_conditions(a["inv_q"], a["inv_r"], a["gamma"], a["sigma"])
    notes = []
    if HALF <= a["sigma"] < Fraction(3, 2):
        notes.append("sigma in [1/2, 3/2): allowed here, outside the inhomogeneous class range")
    if a["gamma"] == 0:
        notes.append("gamma = 0: unweighted reference mode")
    reduced = None
    if a["sigma"] == 0:
        reduced = Membership.from_conditions(reduced_ad_conditions(a["inv_q"], a["inv_r"], a["gamma"]))
    return Membership.from_conditions(conds, sigma=a["sigma"], reduced=reduced, notes=tuple(notes))


def ac_conditions(inv_q, inv_r, gamma, sigma, prefix="ac") -> list[Condition]:
    """Conditions of the inhomogeneous class for one pair."""
    return [
        le(f"{prefix}.q_low", 0, inv_q),
        le(f"{prefix}.q_high", inv_q, 1),
        lt(f"{prefix}.r_low", gamma / 3, inv_r),
        lt(f"{prefix}.r_high", inv_r, HALF + gamma / 3),
        lt(f"{prefix}.decay", inv_q, 3 * (HALF - inv_r) + gamma),
        eq(f"{prefix}.scaling", 2 * inv_q, 3 * (HALF - inv_r) + gamma - sigma),
    ]


def ac_membership(inv_q: Number, inv_r: Number, gamma: Number, sigma: Number = 0) -> Membership:
    """Membership of ``(q, r)`` in the inhomogeneous admissible class.

    Raises:
        ValueError: if ``gamma`` is outside ``(0, 1)``, ``sigma`` outside
            ``(-1/2, 1/2)``, or a reciprocal is negative.
    """
    a = _check_reciprocals(inv_q=inv_q, inv_r=inv_r, gamma=gamma, sigma=sigma)
    if not 0 < a["gamma"] < 1:
        raise ValueError(f"gamma={a['gamma']} outside (0, 1)")
    if not -HALF < a["sigma"] < HALF:
        raise ValueError(f"sigma={a['sigma']} outside (-1/2, 1/2)")
    conds = ac_conditions(a["inv_q"], a["inv_r"], a["gamma"], a["sigma"])
    return Membership.from_conditions(conds, sigma=a["sigma"])


def solved_sigma(inv_q: Fraction, inv_r: Fraction, gamma: Fraction, dim: int = 3) -> Fraction:
    """Smoothing index making ``(q, r)`` satisfy the scaling relation of its class."""
    return Fraction(dim) * (HALF - inv_r) + gamma - 2 * inv_q


def scaling_gap(cfg: ExponentConfig) -> Fraction:
    """Defect of the sharp scaling identity (zero when it holds)."""
    n = cfg.dim
    return (cfg.inv_q + cfg.inv_qt
            - Fraction(n, 2) * (1 - cfg.inv_r - cfg.inv_rt)
            - (cfg.gamma + cfg.gamma_t) / 2)


def _upper_line(X: Fraction, Xt: Fraction, G: Fraction) -> tuple[Fraction, Fraction]:
    """Sides of ``X <= -(2-G)/G * Xt + (3-G)/(3G)``."""
    return X, -(2 - G) / G * Xt + (3 - G) / (3 * G)


def branch_of(X: Fraction, Xt: Fraction) -> str:
    if X == Xt:
        return "diagonal"
    return "upper" if X < Xt else "lower"


def criterion_conditions(inv_q, inv_r, inv_qt, inv_rt, gamma, gamma_t,
                         branch: str | None = None) -> tuple[str, Fraction, list[Condition]]:
    """Raw condition list of the 3D inhomogeneous criterion.

    No range validation is done, so the conditions can be evaluated at any
    rational point (the polygon builder relies on this). ``branch`` forces
    a case; by default it follows the sign of ``X - Xt``.

    Returns:
        ``(branch, sigma, conditions)``.
    """
    iq, ir, iqt, irt, g, gt = map(as_fraction, (inv_q, inv_r, inv_qt, inv_rt, gamma, gamma_t))
    sigma = solved_sigma(iq, ir, g)
    X, Xt = ir - g / 3, irt - gt / 3
    G = g + gt
    gap = iq + iqt - Fraction(3, 2) * (1 - ir - irt) - G / 2
    conds: list[Condition] = [
        lt("weights.gamma_low", 0, g),
        lt("weights.gamma_high", g, 1),
        lt("weights.gamma_t_low", 0, gt),
        lt("weights.gamma_t_high", gt, 1),
        lt("sigma.low", -HALF, sigma),
        lt("sigma.high", sigma, HALF),
        eq("sc", gap, 0),
    ]
    conds += ac_conditions(iq, ir, g, sigma, prefix="acad")
    conds += ac_conditions(iqt, irt, gt, -sigma, prefix="acad_t")
    conds += [
        lt("main_cond_1.time", iq + iqt, 1),
        lt("main_cond_1.gap_upper", Xt - X, THIRD),
        lt("main_cond_1.gap_lower", X - Xt, THIRD),
    ]
    if branch is None:
        branch = branch_of(X, Xt)
    if branch == "diagonal":
        conds += [
            lt("main_cond_11.low", SIXTH + g / 3, ir),
            le("main_cond_11.high", ir, HALF - (gt - g) / 6),
        ]
    elif G <= 0:
        conds += [lt("weights.sum_positive", 0, G)]
    elif branch == "upper":
        lhs, rhs = _upper_line(X, Xt, G)
        conds += [
            le("main_cond_21", lhs, rhs),
            lt("main_cond_22", iq, Fraction(3, 2) + 3 * X - 3 * Xt),
            lt("main_cond_22.gamma_t", gt, HALF),
        ]
    elif branch == "lower":
        lhs, rhs = _upper_line(Xt, X, G)
        conds += [
            le("main_cond_31", lhs, rhs),
            lt("main_cond_32", iqt, Fraction(3, 2) + 3 * Xt - 3 * X),
            lt("main_cond_32.gamma", g, HALF),
        ]
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return branch, sigma, conds


def inhomogeneous_admissible(cfg: ExponentConfig, closure: bool = False) -> Membership:
    """Sufficient criterion for the weighted inhomogeneous estimate in 3D.

    The smoothing index is solved from the first pair; the second pair must
    carry the opposite index, which is the sharp scaling identity. With
    ``closure=True`` strict inequalities holding with equality are reported
    as tight instead of violated (used for polygon vertices).

    Raises:
        ValueError: if ``cfg.dim != 3``.
    """
    if cfg.dim != 3:
        raise ValueError("the branch conditions are available in dimension 3 only")
    branch, sigma, conds = criterion_conditions(cfg.inv_q, cfg.inv_r, cfg.inv_qt, cfg.inv_rt,
                                              cfg.gamma, cfg.gamma_t)
    if closure:
        conds = closed(conds)
    notes = ()
    if cfg.sigma is not None and cfg.sigma != sigma:
        notes = (f"supplied sigma {cfg.sigma} differs from solved sigma {sigma}",)
    return Membership.from_conditions(conds, branch=branch, sigma=sigma, notes=notes)


def necessary_conditions(cfg: ExponentConfig) -> Membership:
    """Necessary conditions for the inhomogeneous estimate in dimension ``n >= 3``."""
    n = cfg.dim
    if n < 3:
        raise ValueError("necessary conditions are stated for n >= 3")
    inv_n = Fraction(1, n)
    conds = [
        eq("n0", scaling_gap(cfg), 0),
        lt("n1.r_low", cfg.gamma * inv_n, cfg.inv_r),
        lt("n1.r_high", cfg.inv_r, HALF + cfg.gamma * inv_n),
        lt("n1.rt_low", cfg.gamma_t * inv_n, cfg.inv_rt),
        lt("n1.rt_high", cfg.inv_rt, HALF + cfg.gamma_t * inv_n),
        le("n1.time", cfg.inv_q + cfg.inv_qt, 1),
        lt("n2.q", cfg.inv_q, n * (HALF - cfg.inv_r) + cfg.gamma),
        lt("n2.qt", cfg.inv_qt, n * (HALF - cfg.inv_rt) + cfg.gamma_t),
        le("n5.upper", cfg.X - cfg.Xt, inv_n),
        le("n5.lower", cfg.Xt - cfg.X, inv_n),
    ]
    return Membership.from_conditions(conds)


def beta_exponent(inv_a: Number, inv_b: Number, inv_at: Number, inv_bt: Number,
                  gamma: Number, gamma_t: Number) -> Fraction:
    """Scaling exponent of a localized bilinear piece; zero under sharp scaling."""
    ia, ib, iat, ibt, g, gt = map(as_fraction, (inv_a, inv_b, inv_at, inv_bt, gamma, gamma_t))
    return -(ia + iat) + Fraction(3, 2) * (1 - ib - ibt) + (g + gt) / 2


@dataclass(frozen=True)
class PerturbedExponents:
    """The three time-exponent perturbations around a configuration.

    ``configs`` holds the pairs ``(q0, qt0)``, ``(q0, qt1)`` and
    ``(q1, qt0)`` (space exponents unchanged); ``betas`` the matching
    scaling exponents.
    """

    base: ExponentConfig
    eps0: Fraction
    inv_q0: Fraction
    inv_q1: Fraction
    inv_qt0: Fraction
    inv_qt1: Fraction
    configs: tuple[ExponentConfig, ExponentConfig, ExponentConfig]
    betas: tuple[Fraction, Fraction, Fraction]
    base_beta: Fraction


def perturb_exponents(cfg: ExponentConfig, eps0: Number, require_sharp: bool = True) -> PerturbedExponents:
    """Shift the time exponents by ``-eps0`` and ``+2 eps0``.

    ``1/q0 = 1/q - eps0`` and ``1/q1 = 1/q + 2 eps0`` (likewise for the
    second pair). Under sharp scaling the betas are exactly
    ``(2 eps0, -eps0, -eps0)``. Otherwise all three are shifted by the
    beta value ``g`` of the unperturbed tuple.

    Args:
        require_sharp: reject configurations violating sharp scaling.

    Raises:
        ValueError: negative ``eps0``, a shifted reciprocal outside
            ``[0, 1]``, or a scaling defect while ``require_sharp`` is set.
    """
    e = as_fraction(eps0)
    if e < 0:
        raise ValueError("eps0 must be non-negative")
    g = beta_exponent(cfg.inv_q, cfg.inv_r, cfg.inv_qt, cfg.inv_rt, cfg.gamma, cfg.gamma_t)
    if require_sharp and scaling_gap(cfg) != 0:
        raise ValueError(f"configuration violates sharp scaling (gap {scaling_gap(cfg)})")
    q0, q1 = cfg.inv_q - e, cfg.inv_q + 2 * e
    qt0, qt1 = cfg.inv_qt - e, cfg.inv_qt + 2 * e
    for name, v in (("1/q0", q0), ("1/q1", q1), ("1/qt0", qt0), ("1/qt1", qt1)):
        if not 0 <= v <= 1:
            raise ValueError(f"perturbed reciprocal {name}={v} leaves [0, 1]")

    def mk(a, at):
        return ExponentConfig(a, cfg.inv_r, at, cfg.inv_rt, cfg.gamma, cfg.gamma_t, None, cfg.dim)

    configs = (mk(q0, qt0), mk(q0, qt1), mk(q1, qt0))
    betas = tuple(beta_exponent(c.inv_q, c.inv_r, c.inv_qt, c.inv_rt, c.gamma, c.gamma_t)
                  for c in configs)
    expected = (2 * e + g, -e + g, -e + g)
    if betas != expected:  # pragma: no cover - algebraic identity
        raise AssertionError(f"beta bookkeeping broken: {betas} != {expected}")
    return PerturbedExponents(cfg, e, q0, q1, qt0, qt1, configs, betas, g)


def localized_conditions(inv_a, inv_b, inv_at, inv_bt, gamma, gamma_t,
                         prefix: str = "loc") -> tuple[str, list[Condition]]:
    """Conditions for the localized bilinear estimate on one Whitney square.

    The exponent tuple need not obey any scaling relation. Returns the case
    (``diagonal``/``upper``/``lower``) and its conditions.
    """
    ia, ib, iat, ibt, g, gt = map(as_fraction, (inv_a, inv_b, inv_at, inv_bt, gamma, gamma_t))
    X, Xt = ib - g / 3, ibt - gt / 3
    G = g + gt
    conds = [
        le(f"{prefix}.a_low", 0, ia),
        le(f"{prefix}.a_high", ia, 1),
        le(f"{prefix}.at_low", 0, iat),
        le(f"{prefix}.at_high", iat, 1),
        lt(f"{prefix}.b_low", g / 3, ib),
        lt(f"{prefix}.bt_low", gt / 3, ibt),
        lt(f"{prefix}.gap_upper", Xt - X, THIRD),
        lt(f"{prefix}.gap_lower", X - Xt, THIRD),
    ]
    if X == Xt:
        conds += [le(f"{prefix}.diag_high", ib, HALF + (g - gt) / 6)]
        return "diagonal", conds

    def side(Xa, Xb, ga_t, i_lo, i_hi, tag):
        # Xa < Xb; ga_t is the weight of the larger coordinate
        return [
            lt(f"{prefix}.{tag}.line", G * Xa + (2 - G) * Xb, (3 - G) / 3),
            le(f"{prefix}.{tag}.time_gap", Fraction(3, 2) * (Xb - Xa), i_lo),
            le(f"{prefix}.{tag}.time_order", i_lo, 1 - i_hi),
            lt(f"{prefix}.{tag}.decay", Fraction(3, 2) * Xb - Fraction(9, 2) * Xa, i_hi),
            lt(f"{prefix}.{tag}.weight", ga_t, HALF),
        ]

    if X < Xt:
        conds += side(X, Xt, gt, ia, iat, "upper")
        return "upper", conds
    conds += side(Xt, X, g, iat, ia, "lower")
    return "lower", conds
