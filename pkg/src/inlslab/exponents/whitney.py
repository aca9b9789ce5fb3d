"""Dyadic Whitney squares of the region below the diagonal ``{s < t}``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Number, as_fraction


@dataclass(frozen=True)
class WhitneySquare:
    """Square ``I x J`` with ``I = s_interval``, ``J = t_interval`` at scale ``j``.

    ``dist_ratio`` is ``dist(I, J) / 2^j``; it is 1 or 2 for every square the
    decomposition produces.
    """

    j: int
    s_interval: tuple[Fraction, Fraction]
    t_interval: tuple[Fraction, Fraction]

    @property
    def side(self) -> Fraction:
        return Fraction(2) ** self.j

    @property
    def area(self) -> Fraction:
        return self.side ** 2

    @property
    def dist(self) -> Fraction:
        return self.t_interval[0] - self.s_interval[1]

    @property
    def dist_ratio(self) -> Fraction:
        return self.dist / self.side

    def comparable(self, factor: Number = 4) -> bool:
        """Sides equal ``2^j`` and ``dist / 2^j`` lies in ``[1/factor, factor]``."""
        c = as_fraction(factor)
        s = self.side
        sides_ok = (self.s_interval[1] - self.s_interval[0] == s
                    and self.t_interval[1] - self.t_interval[0] == s)
        return sides_ok and 1 / c <= self.dist_ratio <= c

    def overlaps(self, other: "WhitneySquare") -> bool:
        """True when the interiors intersect."""
        def ov(a, b):
            return max(a[0], b[0]) < min(a[1], b[1])
        return ov(self.s_interval, other.s_interval) and ov(self.t_interval, other.t_interval)


def partners(k: int) -> list[int]:
    """Indices ``m`` of the intervals ``J`` paired with ``I = [k, k+1)`` at one scale.

    Parents must be adjacent (``m // 2 == k // 2 + 1``) while ``I`` and ``J``
    are not (``m - k >= 2``); this leaves two partners for even ``k``
    and one for odd ``k``.
    """
    p = k // 2 + 1
    return [m for m in (2 * p, 2 * p + 1) if m - k >= 2]


def whitney_decompose(j_min: int, j_max: int, time_bound: Number) -> list[WhitneySquare]:
    """Whitney squares of ``{0 <= s < t <= T}`` with scales in ``[j_min, j_max]``.

    Only squares contained in ``[0, T]^2`` are kept. The uncovered part is
    a collar along the diagonal (scales below ``j_min``) plus, for
    non-dyadic ``T``, slivers along the edges.
    """
    if j_min > j_max:
        raise ValueError("j_min must not exceed j_max")
    T = as_fraction(time_bound)
    if T <= 0:
        raise ValueError("time_bound must be positive")
    out: list[WhitneySquare] = []
    for j in range(j_min, j_max + 1):
        h = Fraction(2) ** j
        kmax = int(T / h)
        for k in range(kmax):
            for m in partners(k):
                if (m + 1) * h > T:
                    continue
                out.append(WhitneySquare(j, (k * h, (k + 1) * h), (m * h, (m + 1) * h)))
    return out


def coverage_defect(squares: list[WhitneySquare], time_bound: Number) -> Fraction:
    """Area of the triangle ``{0 <= s < t <= T}`` not covered by ``squares``."""
    T = as_fraction(time_bound)
    return T * T / 2 - sum((q.area for q in squares), Fraction(0))
