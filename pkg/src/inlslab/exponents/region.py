"""Feasible region of the inhomogeneous criterion in the ``(1/r, 1/r~)`` plane.

With the smoothing index fixed, the time exponents follow from the scaling
relations and every condition becomes an affine inequality in
``(x, y) = (1/r, 1/r~)``. Each off-diagonal case is then a convex polygon
and the diagonal case a segment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .classes import criterion_conditions
from .core import Condition, ExponentConfig, Number, Relation, as_fraction

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Line:
    """Affine constraint ``a x + b y + c (<, <=, ==) 0``."""

    name: str
    a: Fraction
    b: Fraction
    c: Fraction
    relation: Relation

    def value(self, p: Point) -> Fraction:
        return self.a * p[0] + self.b * p[1] + self.c


@dataclass
class RegionPiece:
    """One case of the region: ordered vertices and tagged edges."""

    branch: str
    vertices: list[Point]
    edges: list[tuple[Point, Point, tuple[str, ...]]] = field(default_factory=list)
    vertex_tags: list[tuple[str, ...]] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.vertices

    def centroid(self) -> Point:
        n = len(self.vertices)
        return (sum(v[0] for v in self.vertices) / n, sum(v[1] for v in self.vertices) / n)

    def area(self) -> Fraction:
        v = self.vertices
        s = Fraction(0)
        for i in range(len(v)):
            x0, y0 = v[i]
            x1, y1 = v[(i + 1) % len(v)]
            s += x0 * y1 - x1 * y0
        return abs(s) / 2


@dataclass
class Region:
    """Feasible set at fixed weights and smoothing index."""

    gamma: Fraction
    gamma_t: Fraction
    sigma: Fraction
    upper: RegionPiece
    lower: RegionPiece
    diagonal: RegionPiece
    lines: list[Line]

    @property
    def empty(self) -> bool:
        return self.upper.empty and self.lower.empty and self.diagonal.empty

    def pieces(self) -> list[RegionPiece]:
        return [self.upper, self.lower, self.diagonal]

    def vertices(self) -> list[Point]:
        out: list[Point] = []
        for p in self.pieces():
            for v in p.vertices:
                if v not in out:
                    out.append(v)
        return out

    def config_at(self, p: Point) -> ExponentConfig:
        return config_at(p, self.gamma, self.gamma_t, self.sigma)


def time_reciprocals(x: Fraction, y: Fraction, g: Fraction, gt: Fraction, sigma: Fraction) -> Point:
    """``(1/q, 1/q~)`` from the scaling relations with indices ``sigma`` and ``-sigma``."""
    half = Fraction(1, 2)
    return (3 * (half - x) + g - sigma) / 2, (3 * (half - y) + gt + sigma) / 2


def config_at(p: Point, g: Fraction, gt: Fraction, sigma: Fraction) -> ExponentConfig:
    iq, iqt = time_reciprocals(p[0], p[1], g, gt, sigma)
    return ExponentConfig(iq, p[0], iqt, p[1], g, gt, sigma)


def _conditions_at(p: Point, g, gt, sigma, branch) -> list[Condition]:
    iq, iqt = time_reciprocals(p[0], p[1], g, gt, sigma)
    return criterion_conditions(iq, p[0], iqt, p[1], g, gt, branch=branch)[2]


def affine_lines(g: Fraction, gt: Fraction, sigma: Fraction, branch: str) -> tuple[list[Line], list[Condition]]:
    """Affine form of every condition of one case.

    Returns the non-constant lines and the constant conditions (weight
    ranges, identities) separately.
    """
    o = (Fraction(0), Fraction(0))
    ex = (Fraction(1), Fraction(0))
    ey = (Fraction(0), Fraction(1))
    c0 = _conditions_at(o, g, gt, sigma, branch)
    cx = _conditions_at(ex, g, gt, sigma, branch)
    cy = _conditions_at(ey, g, gt, sigma, branch)
    lines, consts = [], []
    for k0, kx, ky in zip(c0, cx, cy):
        d0 = k0.lhs - k0.rhs
        a = (kx.lhs - kx.rhs) - d0
        b = (ky.lhs - ky.rhs) - d0
        if a == 0 and b == 0:
            consts.append(k0)
        else:
            lines.append(Line(k0.name, a, b, d0, k0.relation))
    # reciprocal box
    one = Fraction(1)
    lines += [
        Line("box.x_low", -one, Fraction(0), Fraction(0), Relation.LE),
        Line("box.x_high", one, Fraction(0), -one, Relation.LE),
        Line("box.y_low", Fraction(0), -one, Fraction(0), Relation.LE),
        Line("box.y_high", Fraction(0), one, -one, Relation.LE),
    ]
    return lines, consts


def _intersect(l1: Line, l2: Line) -> Point | None:
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        return None
    x = (-l1.c * l2.b + l2.c * l1.b) / det
    y = (-l1.a * l2.c + l2.a * l1.c) / det
    return x, y


def _order(points: list[Point]) -> list[Point]:
    cx = sum(float(p[0]) for p in points) / len(points)
    cy = sum(float(p[1]) for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx))


def _polygon(lines: list[Line], branch: str) -> RegionPiece:
    ineqs = [l for l in lines if l.relation is not Relation.EQ]
    eqs = [l for l in lines if l.relation is Relation.EQ]
    cands: list[Point] = []
    pool = eqs + ineqs
    for l1, l2 in combinations(pool, 2):
        p = _intersect(l1, l2)
        if p is None:
            continue
        if all(l.value(p) <= 0 for l in ineqs) and all(l.value(p) == 0 for l in eqs):
            if p not in cands:
                cands.append(p)
    if not cands:
        return RegionPiece(branch, [])
    verts = _order(cands) if len(cands) > 2 else cands
    vtags = [tuple(l.name for l in ineqs if l.value(p) == 0) for p in verts]
    edges = []
    for i in range(len(verts)):
        p, q = verts[i], verts[(i + 1) % len(verts)]
        if p == q:
            continue
        tags = tuple(l.name for l in ineqs if l.value(p) == 0 and l.value(q) == 0)
        edges.append((p, q, tags))
    if len(verts) == 2:
        edges = edges[:1]
    return RegionPiece(branch, verts, edges, vtags)


def region_polygon(gamma: Number, gamma_t: Number, sigma: Number = 0) -> Region:
    """Vertices of the feasible ``(1/r, 1/r~)`` region for fixed weights.

    Vertices are pairwise intersections of constraint lines that satisfy the
    closure of all constraints, ordered counter-clockwise. Strict
    constraints are closed, so vertices and edges lie on the boundary. An
    empty piece has no vertices.

    Raises:
        ValueError: if a weight is outside ``(0, 1)``.
    """
    g, gt, s = as_fraction(gamma), as_fraction(gamma_t), as_fraction(sigma)
    if not (0 < g < 1 and 0 < gt < 1):
        raise ValueError("weights must lie in (0, 1)")
    pieces = {}
    all_lines: list[Line] = []
    for branch in ("upper", "lower", "diagonal"):
        lines, consts = affine_lines(g, gt, s, branch)
        if any(c.verdict.value == "violated" and c.relation is not Relation.LT for c in consts) or any(
                c.lhs >= c.rhs and c.relation is Relation.LT for c in consts):
            pieces[branch] = RegionPiece(branch, [])
            continue
        # case selector: X - Xt = x - y - g/3 + gt/3
        d = gt / 3 - g / 3
        if branch == "upper":
            lines.append(Line("case.upper", Fraction(1), Fraction(-1), d, Relation.LE))
        elif branch == "lower":
            lines.append(Line("case.lower", Fraction(-1), Fraction(1), -d, Relation.LE))
        else:
            lines.append(Line("case.diagonal", Fraction(1), Fraction(-1), d, Relation.EQ))
        pieces[branch] = _polygon(lines, branch)
        all_lines += [l for l in lines if l not in all_lines]
    return Region(g, gt, s, pieces["upper"], pieces["lower"], pieces["diagonal"], all_lines)
