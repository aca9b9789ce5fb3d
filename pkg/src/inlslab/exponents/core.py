"""Exact rationals, condition records and tri-state membership."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

Number = int | Fraction | str | float


def as_fraction(x: Number) -> Fraction:
    """Convert ``x`` to an exact :class:`Fraction`.

    Strings may be ``"p/q"`` or decimal literals. Floats are read through
    their shortest ``repr``, so ``1.6`` becomes ``8/5`` rather than the
    binary approximation.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite exponent {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Relation(str, enum.Enum):
    LT = "<"
    LE = "<="
    EQ = "=="


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    TIGHT = "tight"
    VIOLATED = "violated"


@dataclass(frozen=True)
class Condition:
    """One named inequality ``lhs <relation> rhs`` with exact sides."""

    name: str
    relation: Relation
    lhs: Fraction
    rhs: Fraction
    closure: bool = False

    @property
    def verdict(self) -> Verdict:
        d = self.lhs - self.rhs
        if self.relation is Relation.EQ:
            return Verdict.HOLDS if d == 0 else Verdict.VIOLATED
        if d < 0:
            return Verdict.HOLDS
        if d == 0:
            if self.relation is Relation.LE or self.closure:
                return Verdict.TIGHT
            return Verdict.VIOLATED
        return Verdict.VIOLATED

    @property
    def strict(self) -> bool:
        return self.relation is Relation.LT

    @property
    def slack(self) -> Fraction:
        return self.rhs - self.lhs

    def __str__(self) -> str:
        return f"{self.name}: {self.lhs} {self.relation.value} {self.rhs} [{self.verdict.value}]"


def lt(name: str, lhs, rhs, closure: bool = False) -> Condition:
    return Condition(name, Relation.LT, Fraction(lhs), Fraction(rhs), closure)


def le(name: str, lhs, rhs) -> Condition:
    return Condition(name, Relation.LE, Fraction(lhs), Fraction(rhs))


def eq(name: str, lhs, rhs) -> Condition:
    return Condition(name, Relation.EQ, Fraction(lhs), Fraction(rhs))


def closed(conds: Iterable[Condition]) -> list[Condition]:
    """Relax every strict inequality to its closure (equality reads as tight)."""
    return [replace(c, closure=True) for c in conds]


class Status(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Membership:
    """Outcome of a membership test.

    Attributes:
        status: interior, boundary (some closed inequality is tight) or
            outside (some condition fails).
        conditions: every condition that was evaluated, in order.
        branch: for the inhomogeneous test, ``"diagonal"``, ``"upper"`` or
            ``"lower"``.
        sigma: the regularity index implied by the first pair, when solved.
        reduced: the companion test against the reduced class, if any.
        notes: free-form remarks.
    """

    status: Status
    conditions: tuple[Condition, ...]
    branch: str | None = None
    sigma: Fraction | None = None
    reduced: "Membership | None" = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @classmethod
    def from_conditions(cls, conds: Sequence[Condition], **kw) -> "Membership":
        verdicts = [c.verdict for c in conds]
        if Verdict.VIOLATED in verdicts:
            status = Status.OUTSIDE
        elif Verdict.TIGHT in verdicts:
            status = Status.BOUNDARY
        else:
            status = Status.INTERIOR
        return cls(status=status, conditions=tuple(conds), **kw)

    @property
    def member(self) -> bool:
        return self.status is not Status.OUTSIDE

    @property
    def violated(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.conditions if c.verdict is Verdict.VIOLATED)

    @property
    def tight(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.conditions if c.verdict is Verdict.TIGHT)

    def condition(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def report(self) -> str:
        lines = [f"status: {self.status.value}"]
        if self.branch:
            lines.append(f"branch: {self.branch}")
        if self.sigma is not None:
            lines.append(f"sigma: {self.sigma}")
        lines += [f"  {c}" for c in self.conditions]
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


@dataclass(frozen=True)
class ExponentConfig:
    """Exponent tuple of an inhomogeneous estimate.

    Reciprocal exponents are stored exactly. ``sigma`` is optional since
    the admissibility test solves for it.
    """

    inv_q: Fraction
    inv_r: Fraction
    inv_qt: Fraction
    inv_rt: Fraction
    gamma: Fraction
    gamma_t: Fraction
    sigma: Fraction | None = None
    dim: int = 3

    def __post_init__(self):
        for name in ("inv_q", "inv_r", "inv_qt", "inv_rt", "gamma", "gamma_t"):
            v = as_fraction(getattr(self, name))
            object.__setattr__(self, name, v)
        if self.sigma is not None:
            object.__setattr__(self, "sigma", as_fraction(self.sigma))
        for name in ("inv_q", "inv_r", "inv_qt", "inv_rt"):
            v = getattr(self, name)
            if v < 0 or v > 1:
                raise ValueError(f"{name}={v} is not a reciprocal exponent in [0, 1]")
        if self.gamma < 0 or self.gamma_t < 0:
            raise ValueError("weights gamma, gamma_t must be non-negative")
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    @classmethod
    def make(cls, inv_q, inv_r, inv_qt, inv_rt, gamma, gamma_t, sigma=None, dim=3) -> "ExponentConfig":
        return cls(inv_q, inv_r, inv_qt, inv_rt, gamma, gamma_t, sigma, dim)

    @property
    def X(self) -> Fraction:
        return self.inv_r - self.gamma / self.dim

    @property
    def Xt(self) -> Fraction:
        return self.inv_rt - self.gamma_t / self.dim

    def swapped(self) -> "ExponentConfig":
        """Exchange the two exponent pairs (and negate sigma)."""
        sig = None if self.sigma is None else -self.sigma
        return ExponentConfig(self.inv_qt, self.inv_rt, self.inv_q, self.inv_r,
                              self.gamma_t, self.gamma, sig, self.dim)

    def as_dict(self) -> dict:
        d = {k: str(getattr(self, k)) for k in ("inv_q", "inv_r", "inv_qt", "inv_rt", "gamma", "gamma_t")}
        d["sigma"] = None if self.sigma is None else str(self.sigma)
        d["dim"] = self.dim
        return d
