from __future__ import annotations

import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from alphahurwitz.exact_arith import GaussianRational as GR
from alphahurwitz.gencircle import (
    CircleKind,
    GenCircle,
    InvalidCircleError,
    RationalBox,
    canonical_form,
    classify,
    contains_point,
    integer_quadruple,
    intersects_box,
    point_on_circle,
    reciprocal,
    translate,
)

HALF = RationalBox(F(-1, 2), F(1, 2), F(-1, 2), F(1, 2))
small = st.integers(-12, 12)
rats = st.fractions(min_value=-5, max_value=5, max_denominator=30)


@st.composite
def circles(draw):
    a, br, bi, c = draw(small), draw(small), draw(small), draw(small)
    assume(br * br + bi * bi > a * c)
    return GenCircle(a, GR(br, bi), c)


@st.composite
def rational_radius_circles(draw):
    """Circles with rational radius, so rational points can be put on them."""
    a = draw(st.integers(1, 6)) * draw(st.sampled_from([1, -1]))
    center = GR(draw(rats), draw(rats))
    r = draw(st.fractions(min_value=F(1, 10), max_value=3, max_denominator=20))
    # a|z|^2 - 2 Re(conj(b) z) + c with b = a * center, c = a(|center|^2 - r^2)
    return GenCircle(a, center * a, a * (center.norm() - r * r))


def test_classify_examples():
    line = classify(GenCircle(0, 2, 2))
    assert line.kind is CircleKind.LINE
    assert contains_point(GenCircle(0, 2, 2), GR(F(1, 2), 3))
    assert line.offset == 1 and line.normal == GR(2)
    circ = classify(GenCircle(2, 2, 0))
    assert circ.kind is CircleKind.CIRCLE
    assert circ.center == GR(1) and circ.radius_sq == 1
    with pytest.raises(InvalidCircleError):
        GenCircle(1, 0, 1)


def test_reciprocal_examples():
    assert reciprocal(GenCircle(0, 2, 2)) == GenCircle(2, 2, 0)
    assert reciprocal(GenCircle(1, 0, -1)) == GenCircle(-1, 0, 1)


def test_translate_examples():
    assert translate(GenCircle(2, 2, 0), 1) == GenCircle(2, 0, -2)
    assert translate(GenCircle(0, 2, 2), GR(0, 1)) == GenCircle(0, 2, 2)
    g = GenCircle(3, GR(1, -2), -4)
    assert translate(g, 0) == g


def test_canonical_examples():
    ref = canonical_form(GenCircle(2, 2, 0))
    assert canonical_form(GenCircle(-2, -2, 0)) == ref
    assert canonical_form(GenCircle(4, 4, 0)) == ref
    assert canonical_form(ref) == ref
    assert integer_quadruple(GenCircle(F(1, 3), GR(F(1, 3)), 0)) == (1, 1, 0, 0)


def test_intersects_box_examples():
    assert not intersects_box(GenCircle(2, 0, -2), HALF)
    assert intersects_box(GenCircle(2, 2, 0), HALF)
    assert intersects_box(GenCircle(0, 2, 2), HALF)


def test_contains_point_examples():
    assert contains_point(GenCircle(0, 2, 2), GR(F(1, 2), 7))
    assert contains_point(GenCircle(2, 2, 0), GR(0))
    assert not contains_point(GenCircle(2, 2, 0), GR(F(1, 2)))


def test_json_round_trip():
    g = GenCircle(F(2, 3), GR(F(1, 3), -1), F(-4, 3))
    d = g.to_json()
    assert d == {"a": 2, "b_re": 1, "b_im": -3, "c": -4}
    assert canonical_form(GenCircle.from_json(d)) == canonical_form(g)


@given(circles())
def test_reciprocal_is_involution(g):
    assert reciprocal(reciprocal(g)) == g


@given(rational_radius_circles(), st.fractions(max_denominator=50))
def test_reciprocal_maps_points(g, t):
    z = point_on_circle(g, t)
    assert contains_point(g, z)
    assume(z)
    assert contains_point(reciprocal(g), z.reciprocal())


@given(st.integers(-5, 5).filter(bool), st.integers(-5, 5), st.integers(-9, 9), st.fractions(max_denominator=50))
def test_reciprocal_maps_line_points(br, bi, c, t):
    g = GenCircle(0, GR(br, bi), c)
    z = point_on_circle(g, t)
    assert contains_point(g, z)
    assume(z)
    assert contains_point(reciprocal(g), z.reciprocal())


@given(rational_radius_circles(), st.fractions(max_denominator=50), rats, rats)
def test_translation_consistency(g, t, wr, wi):
    w = GR(wr, wi)
    z = point_on_circle(g, t)
    h = translate(g, w)
    assert contains_point(h, z - w)
    off = z + GR(F(1, 997))
    assert contains_point(g, off) == contains_point(h, off - w)


@given(circles().filter(lambda g: not g.is_line), rats, rats)
def test_translate_moves_center_keeps_radius(g, wr, wi):
    w = GR(wr, wi)
    before, after = classify(g), classify(translate(g, w))
    assert after.radius_sq == before.radius_sq
    assert after.center == before.center - w


@given(circles(), st.fractions(min_value=-3, max_value=3, max_denominator=9).filter(bool))
def test_canonical_form_ignores_scaling(g, lam):
    scaled = GenCircle(g.a * lam, g.b * lam, g.c * lam)
    assert canonical_form(scaled) == canonical_form(g)


def _sample_curve(g: GenCircle, n: int) -> np.ndarray:
    a, br, bi, c = (float(v) for v in (g.a, g.b.re, g.b.im, g.c))
    t = np.linspace(0, 2 * math.pi, n, endpoint=False)
    if a == 0:
        nrm = math.hypot(br, bi)
        base = complex(br, bi) * (c / 2) / (nrm * nrm)
        s = np.linspace(-20, 20, n)
        return base + s * complex(-bi, br) / nrm
    center = complex(br, bi) / a
    r = math.sqrt(br * br + bi * bi - a * c) / abs(a)
    return center + r * np.exp(1j * t)


def _gap(g: GenCircle, box: RationalBox) -> float:
    """Signed float distance from the exact decision (how close to tangency we are)."""
    geo = classify(g)
    if geo.kind is CircleKind.LINE:
        n = complex(geo.normal)
        vals = [(complex(z) * n.conjugate()).real - float(geo.offset) for z in box.corners()]
        return min(abs(v) for v in vals) / abs(n)
    cx, cy = float(geo.center.re), float(geo.center.im)
    r = math.sqrt(float(geo.radius_sq))
    dx = max(float(box.x_min) - cx, 0, cx - float(box.x_max))
    dy = max(float(box.y_min) - cy, 0, cy - float(box.y_max))
    dmin = math.hypot(dx, dy)
    dmax = max(math.hypot(float(z.re) - cx, float(z.im) - cy) for z in box.corners())
    return min(abs(r - dmin), abs(dmax - r))


def test_intersects_box_agrees_with_sampling_oracle():
    rng = random.Random(20240601)
    disagreements, near = 0, 0
    for _ in range(100):
        while True:
            a, br, bi, c = (rng.randint(-6, 6) for _ in range(4))
            if br * br + bi * bi > a * c:
                break
        g = GenCircle(F(a), GR(br, bi), F(c))
        x0, y0 = F(rng.randint(-20, 20), 10), F(rng.randint(-20, 20), 10)
        box = RationalBox(x0, x0 + F(rng.randint(1, 20), 10), y0, y0 + F(rng.randint(1, 20), 10))
        z = _sample_curve(g, 10**4)
        tol = 1e-9
        hit = bool(
            (
                (z.real >= float(box.x_min) - tol)
                & (z.real <= float(box.x_max) + tol)
                & (z.imag >= float(box.y_min) - tol)
                & (z.imag <= float(box.y_max) + tol)
            ).any()
        )
        if hit != intersects_box(g, box):
            disagreements += 1
            # sampling misses only a sliver of width about r * (pi / 10**4)**2
            assert _gap(g, box) < 1e-6, (g, box)
            near += 1
    assert disagreements == near


def test_intersects_box_is_closed_at_tangency():
    # unit circle about 1 touches the box [-1, 0] x [-1, 1] exactly at 0
    box = RationalBox(F(-1), F(0), F(-1), F(1))
    assert intersects_box(GenCircle(1, 1, 0), box)
    # nudged away it no longer touches
    assert not intersects_box(translate(GenCircle(1, 1, 0), GR(F(-1, 10**9))), box)
