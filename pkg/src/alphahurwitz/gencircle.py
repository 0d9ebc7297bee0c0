"""Generalized circles ``M(a, b, c) = {z : a z z̄ - b̄ z - b z̄ + c = 0}``.

``a`` and ``c`` are rational, ``b`` is a Gaussian rational, and ``|b|^2 > ac``.
``a == 0`` gives a line, otherwise a circle with center ``b/a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .exact_arith import GaussianInt, GaussianRational


class InvalidCircleError(ValueError):
    pass


@dataclass(frozen=True)
class GenCircle:
    a: Fraction
    b: GaussianRational
    c: Fraction

    def __init__(self, a, b, c, *, check: bool = True):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", GaussianRational.coerce(b))
        object.__setattr__(self, "c", Fraction(c))
        if check:
            self.validate()

    def validate(self) -> None:
        if self.b.norm() <= self.a * self.c:
            raise InvalidCircleError(f"degenerate circle: |b|^2 <= ac for {self}")

    @property
    def is_line(self) -> bool:
        return self.a == 0

    def form(self, z) -> Fraction:
        """Exact value of ``a|z|^2 - 2 Re(conj(b) z) + c`` at ``z``."""
        z = GaussianRational.coerce(z)
        return self.a * z.norm() - 2 * (self.b.re * z.re + self.b.im * z.im) + self.c

    def to_float(self) -> tuple[float, float, float, float]:
        return float(self.a), float(self.b.re), float(self.b.im), float(self.c)

    def to_json(self) -> dict:
        a, br, bi, c = integer_quadruple(self)
        return {"a": a, "b_re": br, "b_im": bi, "c": c}

    @classmethod
    def from_json(cls, d: dict) -> "GenCircle":
        return cls(d["a"], GaussianRational(d["b_re"], d["b_im"]), d["c"])

    def __str__(self):
        return f"M({self.a}, {self.b}, {self.c})"


class CircleKind(Enum):
    LINE = "line"
    CIRCLE = "circle"


@dataclass(frozen=True)
class CircleGeometry:
    kind: CircleKind
    center: Optional[GaussianRational] = None
    radius_sq: Optional[Fraction] = None
    # Line: points z with Re(conj(normal) * z) == offset
    normal: Optional[GaussianRational] = None
    offset: Optional[Fraction] = None


@dataclass(frozen=True)
class RationalBox:
    x_min: Fraction
    x_max: Fraction
    y_min: Fraction
    y_max: Fraction

    def __post_init__(self):
        for name in ("x_min", "x_max", "y_min", "y_max"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError("empty box")

    def corners(self) -> list[GaussianRational]:
        return [
            GaussianRational(x, y)
            for x in (self.x_min, self.x_max)
            for y in (self.y_min, self.y_max)
        ]

    def contains(self, z) -> bool:
        z = GaussianRational.coerce(z)
        return self.x_min <= z.re <= self.x_max and self.y_min <= z.im <= self.y_max


def classify(g: GenCircle) -> CircleGeometry:
    g.validate()
    if g.a == 0:
        return CircleGeometry(CircleKind.LINE, normal=g.b, offset=g.c / 2)
    return CircleGeometry(
        CircleKind.CIRCLE,
        center=g.b / GaussianRational(g.a),
        radius_sq=(g.b.norm() - g.a * g.c) / (g.a * g.a),
    )


def reciprocal(g: GenCircle) -> GenCircle:
    """Image of ``g`` under ``z -> 1/z``."""
    return GenCircle(g.c, g.b.conj(), g.a, check=False)


def translate(g: GenCircle, w) -> GenCircle:
    """The set ``{z - w : z in g}``."""
    w = GaussianRational.coerce(w)
    b = g.b
    new_b = b - w * g.a
    # conj(b) w + b conj(w) = 2 Re(conj(b) w)
    new_c = g.a * w.norm() - 2 * (b.re * w.re + b.im * w.im) + g.c
    return GenCircle(g.a, new_b, new_c, check=False)


def integer_quadruple(g: GenCircle) -> tuple[int, int, int, int]:
    """Coprime integers ``(a, Re b, Im b, c)``, first nonzero entry positive."""
    vals = (g.a, g.b.re, g.b.im, g.c)
    lcm = 1
    for v in vals:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in vals]
    g_ = 0
    for v in ints:
        g_ = math.gcd(g_, v)
    ints = [v // g_ for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-u for u in ints]
            break
    return tuple(ints)


def canonical_form(g: GenCircle) -> GenCircle:
    a, br, bi, c = integer_quadruple(g)
    return GenCircle(a, GaussianRational(br, bi), c, check=False)


def _form_extremes(g: GenCircle, q: RationalBox) -> tuple[Fraction, Fraction]:
    """Min and max of the defining form over the closed box.

    For ``a >= 0`` the form is convex, so the max sits at a corner and the min
    at the point of the box closest to the center (corners for lines).
    """
    sign = 1
    if g.a < 0:
        g = GenCircle(-g.a, -g.b, -g.c, check=False)
        sign = -1
    corner_vals = [g.form(z) for z in q.corners()]
    hi = max(corner_vals)
    if g.a == 0:
        lo = min(corner_vals)
    else:
        cx, cy = g.b.re / g.a, g.b.im / g.a
        nx = min(max(cx, q.x_min), q.x_max)
        ny = min(max(cy, q.y_min), q.y_max)
        lo = g.form(GaussianRational(nx, ny))
    if sign < 0:
        return -hi, -lo
    return lo, hi


def intersects_box(g: GenCircle, q: RationalBox) -> bool:
    """Exact test whether the curve ``g`` meets the closed box ``q``.

    A circle strictly enclosing the box does not count: only the curve matters.
    Since the box is connected, this is the same as the form taking both signs
    (zero included) on it, which for circles is ``dmin^2 <= r^2 <= dmax^2``.
    """
    lo, hi = _form_extremes(g, q)
    return lo <= 0 <= hi


def contains_point(g: GenCircle, z) -> bool:
    return g.form(z) == 0


def point_on_circle(g: GenCircle, t: Fraction) -> GaussianRational:
    """Rational point on ``g`` from rational parameter ``t``.

    Circles use the rational parametrization of the unit circle, which only
    yields rational points when the radius is rational; otherwise raise.
    Lines use ``t`` as the coordinate along the line direction.
    """
    geo = classify(g)
    t = Fraction(t)
    if geo.kind is CircleKind.LINE:
        n = geo.normal
        base = GaussianRational(n.re * geo.offset / n.norm(), n.im * geo.offset / n.norm())
        return base + GaussianRational(-n.im, n.re) * GaussianRational(t)
    r2 = geo.radius_sq
    r = Fraction(math.isqrt(r2.numerator), math.isqrt(r2.denominator))
    if r * r != r2:
        raise ValueError("circle radius is irrational")
    d = 1 + t * t
    return geo.center + GaussianRational(r * (1 - t * t) / d, r * 2 * t / d)


__all__ = [
    "GenCircle",
    "CircleGeometry",
    "CircleKind",
    "RationalBox",
    "InvalidCircleError",
    "classify",
    "reciprocal",
    "translate",
    "canonical_form",
    "integer_quadruple",
    "intersects_box",
    "contains_point",
    "point_on_circle",
    "GaussianInt",
]
