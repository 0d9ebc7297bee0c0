"""Real continued fractions: the Gauss map and the nearest integer algorithm.

Rational inputs are iterated exactly and terminate.  Float and ``mpmath.mpf``
inputs are iterated in ``mpmath`` at ``prec`` bits, which keeps a few dozen
digits of e.g. ``pi - 3`` trustworthy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

import mpmath

from .cf_core import DomainError

DEFAULT_PREC = 256

RealLike = Union[Fraction, int, float, "mpmath.mpf"]


class Flavor(Enum):
    CLASSICAL = "classical"
    NEAREST_INTEGER = "nearest_integer"


@dataclass
class RealCFExpansion:
    digits: list[int]
    flavor: Flavor
    terminated: bool

    def convergents(self) -> list[tuple[int, int]]:
        return real_convergents(self.digits)


def real_convergents(digits) -> list[tuple[int, int]]:
    """``(p_n, q_n)`` with ``p_n/q_n = 1/(a1 + 1/(a2 + ... + 1/an))``."""
    p_prev, p, q_prev, q = 1, 0, 0, 1
    out = []
    for a in digits:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return out


def evaluate_real_cf(digits) -> Fraction:
    acc = Fraction(0)
    for a in reversed(digits):
        acc = 1 / (acc + a)
    return acc


def _iterate(x, max_steps: int, digit_of, prec: int):
    """Shared driver; ``digit_of(y)`` returns the integer digit of ``y = 1/x``."""
    digits: list[int] = []
    if isinstance(x, (Fraction, int)):
        cur = Fraction(x)
        while cur and len(digits) < max_steps:
            y = 1 / cur
            a = digit_of(y)
            digits.append(a)
            cur = y - a
        return digits, cur == 0
    with mpmath.workprec(prec):
        cur = mpmath.mpf(x)
        # remainders below this are rounding noise at the working precision
        eps = mpmath.mpf(2) ** (-(prec // 2))
        while len(digits) < max_steps:
            if abs(cur) < eps:
                return digits, True
            y = 1 / cur
            a = digit_of(y)
            digits.append(a)
            cur = y - a
        return digits, abs(cur) < eps


def gauss_expand(x: RealLike, max_steps: int = 64, prec: int = DEFAULT_PREC) -> RealCFExpansion:
    if not 0 < x < 1:
        raise DomainError(f"Gauss map needs 0 < x < 1, got {x}")
    digits, done = _iterate(x, max_steps, _floor, prec)
    return RealCFExpansion(digits, Flavor.CLASSICAL, done)


def _floor(y) -> int:
    if isinstance(y, Fraction):
        return math.floor(y)
    return int(mpmath.floor(y))


def _nearest(y) -> int:
    # the remainder y - a must land in [-1/2, 1/2)
    if isinstance(y, Fraction):
        return math.floor(y + Fraction(1, 2))
    return int(mpmath.floor(y + mpmath.mpf(0.5)))


def nearest_int_expand(x: RealLike, max_steps: int = 64, prec: int = DEFAULT_PREC) -> RealCFExpansion:
    if not (-0.5 <= x < 0.5) or x == 0:  # 0.5 is exact, so this is exact for Fractions too
        raise DomainError(f"nearest integer algorithm needs x in [-1/2, 1/2) minus 0, got {x}")
    digits, done = _iterate(x, max_steps, _nearest, prec)
    return RealCFExpansion(digits, Flavor.NEAREST_INTEGER, done)


def euclid_digits(u: int, v: int) -> list[int]:
    """Quotients of Euclid's algorithm on ``(u, v)`` by division with remainder."""
    out = []
    while v:
        a, r = divmod(u, v)
        out.append(a)
        u, v = v, r
    return out


def best_approx_check(x: RealLike, p: int, q: int, q_bound: int, prec: int = DEFAULT_PREC) -> bool:
    """Brute force: is ``p/q`` strictly closer to ``x`` than every other ``p'/q'``, ``q' <= q_bound``?

    Fractions equal in value to ``p/q`` (like ``2p/2q``) are not competitors.
    """
    if not 1 <= q <= q_bound:
        raise ValueError("need 1 <= q <= q_bound")
    target = Fraction(p, q)
    with mpmath.workprec(prec):
        xm = mpmath.mpf(x) if not isinstance(x, Fraction) else mpmath.mpf(x.numerator) / x.denominator
        best = abs(mpmath.mpf(p) / q - xm)
        for qq in range(1, q_bound + 1):
            base = int(mpmath.floor(qq * xm))
            for pp in (base, base + 1):
                if Fraction(pp, qq) == target:
                    continue
                if abs(mpmath.mpf(pp) / qq - xm) <= best:
                    return False
    return True
