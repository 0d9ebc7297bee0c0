from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from alphahurwitz.cf_core import (
    Alpha,
    DomainError,
    convergents,
    cylinder_digit,
    evaluate_cf,
    evaluate_cf_float,
    expand,
    floor_alpha,
    in_domain_D,
    t_alpha_step_exact,
)
from alphahurwitz.exact_arith import GaussianInt as GI, GaussianRational as GR

H = Alpha(F(1, 2), F(1, 2))


def _brute_floor(z: GR, alpha: Alpha) -> GI:
    """Search the Gaussian integers around z for the one shifting it into U."""
    hits = []
    base_re, base_im = int(z.re), int(z.im)
    for dx in range(-3, 4):
        for dy in range(-3, 4):
            w = GI(base_re + dx, base_im + dy)
            if alpha.contains(z - w):
                hits.append(w)
    assert len(hits) == 1
    return hits[0]


def _brute_float_digit(z: complex, a1: float, a2: float) -> tuple[int, int]:
    y = 1 / z
    found = [
        (m, n)
        for m in range(int(y.real) - 3, int(y.real) + 4)
        for n in range(int(y.imag) - 3, int(y.imag) + 4)
        if a1 - 1 <= y.real - m < a1 and a2 - 1 <= y.imag - n < a2
    ]
    assert len(found) == 1
    return found[0]


@pytest.mark.parametrize(
    "a1, a2, expected",
    [(F(1, 2), F(1, 2), True), (F(1, 5), F(3, 5), True), (F(0), F(0), False), (F(1), F(1), False), (F(1, 2), F(0), False)],
)
def test_in_domain_D(a1, a2, expected):
    assert in_domain_D(a1, a2) is expected


def test_D_open_at_origin_closed_elsewhere():
    # |alpha| = 1 fails the open ball about 0
    assert not in_domain_D(F(3, 5), F(4, 5))
    # distance exactly 1 from 1 + i is allowed
    assert in_domain_D(F(2, 5), F(1, 5))
    assert in_domain_D(F(4, 5), F(2, 5))


def test_floor_alpha_examples():
    assert floor_alpha(GR(F(5, 2)), H) == GI(3)
    assert floor_alpha(GR(0), H) == GI(0)
    assert floor_alpha(GR(F(1, 2)), Alpha(F(9, 20), F(3, 5))) == GI(1)


@given(st.fractions(min_value=-20, max_value=20, max_denominator=40), st.fractions(min_value=-20, max_value=20, max_denominator=40))
def test_floor_alpha_matches_brute_force(x, y):
    for alpha in (H, Alpha(F(2, 3), F(1, 2)), Alpha(F(1, 5), F(3, 5))):
        z = GR(x, y)
        assert floor_alpha(z, alpha) == _brute_floor(z, alpha)


def test_step_examples():
    assert t_alpha_step_exact(GR(F(2, 5)), H) == (GI(3), GR(F(-1, 2)))
    assert t_alpha_step_exact(GR(F(-1, 2)), H) == (GI(-2), GR(0))
    assert t_alpha_step_exact(GR(0, F(1, 2)), H) == (GI(0, -2), GR(0))


def test_step_rejects_points_outside():
    with pytest.raises(DomainError):
        t_alpha_step_exact(GR(F(3, 5)), H)
    with pytest.raises(DomainError):
        t_alpha_step_exact(GR(0), H)


def test_step_from_open_edge_lands_in_U():
    d, w = t_alpha_step_exact(GR(F(1, 2), F(1, 3)), H)
    assert H.contains(w) and not H.contains(GR(F(1, 2), F(1, 3)))


def test_expand_examples():
    e = expand(GR(F(2, 5)), H)
    assert e.digits == [GI(3), GI(-2)] and e.terminated
    assert evaluate_cf(e.digits) == GR(F(2, 5))
    e = expand(GR(0, F(1, 2)), H)
    assert e.digits == [GI(0, -2)] and e.terminated


def test_float_expansion_of_a_rational_point_terminates():
    # 0.1 + 0.2i = 1/(2 - 4i), so the float orbit hits zero after one step
    e = expand(complex(0.1, 0.2), H, 30)
    assert e.digits == [GI(2, -4)] and e.terminated


def test_float_expansion_alphabet():
    e = expand(complex(0.1, 0.2 + 1e-7), H, 30)
    assert len(e.digits) == 30 and not e.terminated
    assert all(d.norm() > 1 for d in e.digits)


def test_expand_refuses_outside_D():
    bad = Alpha(F(1), F(1))
    with pytest.raises(DomainError):
        expand(GR(F(1, 2), F(1, 2)), bad)
    e = expand(GR(F(1, 2), F(1, 2)), bad, force=True)
    assert e.digits[0] == floor_alpha(GR(1, -1), bad)


def test_expansion_json():
    e = expand(GR(F(2, 5)), H)
    assert e.to_json(H, GR(F(2, 5))) == {
        "alpha": ["1/2", "1/2"],
        "z": ["2/5", "0"],
        "digits": [[3, 0], [-2, 0]],
        "terminated": True,
    }


def test_evaluate_examples():
    assert evaluate_cf([GI(-2)]) == GR(F(-1, 2))
    assert evaluate_cf([GI(3), GI(-2)]) == GR(F(2, 5))
    assert evaluate_cf([GI(7)]) == GR(F(1, 7))
    with pytest.raises(ZeroDivisionError):
        evaluate_cf([GI(0)])


def test_convergent_examples():
    cs = convergents([GI(3), GI(-2)])
    assert [(c.p, c.q) for c in cs] == [(GI(1), GI(3)), (GI(-2), GI(-5))]
    cs = convergents([GI(7), GI(15), GI(1)])
    assert [(c.p, c.q) for c in cs] == [(GI(1), GI(7)), (GI(15), GI(106)), (GI(16), GI(113))]
    assert convergents([]) == []


def test_convergents_unimodular_and_match_evaluation():
    rng = random.Random(7)
    for _ in range(200):
        digits = [GI(rng.randint(-6, 6), rng.randint(-6, 6)) for _ in range(rng.randint(1, 10))]
        if any(d.norm() < 2 for d in digits):
            continue
        cs = convergents(digits)
        prev = (GI(0), GI(1))
        for n, c in enumerate(cs, start=1):
            det = c.p * prev[1] - prev[0] * c.q
            assert det.norm() == 1
            assert c.value() == evaluate_cf(digits[:n])
            prev = (c.p, c.q)


def test_cylinder_digit_examples():
    assert cylinder_digit(GR(F(2, 5)), H) == GI(3)
    assert cylinder_digit(GR(F(-1, 2)), H) == GI(-2)
    assert cylinder_digit(complex(0.3, 0.4), H) == GI(1, -2)
    assert _brute_float_digit(complex(0.3, 0.4), 0.5, 0.5) == (1, -2)
    with pytest.raises(DomainError):
        cylinder_digit(GR(0), H)


def test_orbit_stays_in_U():
    rng = random.Random(3)
    for alpha in (H, Alpha(F(1, 5), F(3, 5))):
        for _ in range(100):
            z = GR(alpha.a1 - 1 + F(rng.randint(0, 96), 97), alpha.a2 - 1 + F(rng.randint(0, 88), 89))
            if not alpha.contains(z):
                continue
            e = expand(z, alpha, keep_iterates=True)
            assert e.terminated
            assert all(alpha.contains(w) for w in e.iterates)


def test_float_digits_match_float_oracle():
    rng = random.Random(11)
    for _ in range(300):
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        e = expand(z, H, 1)
        assert e.digits[0].to_pair() == list(_brute_float_digit(z, 0.5, 0.5))


def test_float_reconstruction_small():
    rng = random.Random(5)
    for _ in range(50):
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        e = expand(z, H, 40)
        assert min(abs(evaluate_cf_float(e.digits[:n]) - z) for n in range(1, len(e.digits) + 1)) < 1e-8
