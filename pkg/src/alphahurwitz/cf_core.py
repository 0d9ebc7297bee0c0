"""The alpha-Hurwitz map on the shifted square U_alpha.

``U_alpha = {z : a1 - 1 <= Re z < a1, a2 - 1 <= Im z < a2}``; the floor
``floor_alpha(z)`` is the unique Gaussian integer ``w`` with ``z - w`` in
``U_alpha``, and ``T_alpha(z) = 1/z - floor_alpha(1/z)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .exact_arith import GaussianInt, GaussianRational, format_rational, parse_rational
from .gencircle import RationalBox

ZERO_EPSILON = 1e-12


class DomainError(ValueError):
    """Raised when a point or parameter lies outside the admissible domain."""


def in_domain_D(a1, a2) -> bool:
    """Membership in the open unit ball at 0 and the closed unit balls at 1, i, 1+i."""
    a1, a2 = Fraction(a1), Fraction(a2)
    return (
        a1 * a1 + a2 * a2 < 1
        and (a1 - 1) ** 2 + a2 * a2 <= 1
        and a1 * a1 + (a2 - 1) ** 2 <= 1
        and (a1 - 1) ** 2 + (a2 - 1) ** 2 <= 1
    )


@dataclass(frozen=True)
class Alpha:
    a1: Fraction
    a2: Fraction
    in_D: bool = field(init=False)

    def __init__(self, a1, a2):
        object.__setattr__(self, "a1", Fraction(a1))
        object.__setattr__(self, "a2", Fraction(a2))
        object.__setattr__(self, "in_D", in_domain_D(self.a1, self.a2))

    @classmethod
    def parse(cls, s1: str, s2: str) -> "Alpha":
        return cls(parse_rational(s1), parse_rational(s2))

    @property
    def box(self) -> RationalBox:
        """The closed square, closure of U_alpha."""
        return RationalBox(self.a1 - 1, self.a1, self.a2 - 1, self.a2)

    def require_D(self) -> None:
        if not self.in_D:
            raise DomainError(f"alpha = {self} is not in D")

    def contains(self, z) -> bool:
        """Exact membership in the half-open square U_alpha."""
        z = GaussianRational.coerce(z)
        return self.a1 - 1 <= z.re < self.a1 and self.a2 - 1 <= z.im < self.a2

    def closure_contains(self, z) -> bool:
        """Exact membership in the closed square."""
        z = GaussianRational.coerce(z)
        return self.a1 - 1 <= z.re <= self.a1 and self.a2 - 1 <= z.im <= self.a2

    def contains_float(self, z: complex) -> bool:
        a1, a2 = float(self.a1), float(self.a2)
        return a1 - 1 <= z.real < a1 and a2 - 1 <= z.imag < a2

    def to_strings(self) -> list[str]:
        return [format_rational(self.a1), format_rational(self.a2)]

    def __str__(self):
        return f"({format_rational(self.a1)}, {format_rational(self.a2)})"


def _as_alpha(alpha) -> Alpha:
    if isinstance(alpha, Alpha):
        return alpha
    return Alpha(*alpha)


def _floor_shift(x: Fraction, a: Fraction) -> int:
    # unique k with a - 1 <= x - k < a
    return math.floor(x - a) + 1


def floor_alpha(z, alpha) -> GaussianInt:
    alpha = _as_alpha(alpha)
    if isinstance(z, complex):
        return floor_alpha_float(z, alpha)
    z = GaussianRational.coerce(z)
    return GaussianInt(_floor_shift(z.re, alpha.a1), _floor_shift(z.im, alpha.a2))


def floor_alpha_float(z: complex, alpha) -> GaussianInt:
    alpha = _as_alpha(alpha)
    return GaussianInt(
        math.floor(z.real - float(alpha.a1)) + 1, math.floor(z.imag - float(alpha.a2)) + 1
    )


def t_alpha_step_exact(z, alpha) -> tuple[GaussianInt, GaussianRational]:
    """One step of T_alpha.  The result always lies in the half-open U_alpha.

    Points on the two open edges of U_alpha are accepted as well: the map is
    defined there and boundary orbits start on those edges.
    """
    alpha = _as_alpha(alpha)
    z = GaussianRational.coerce(z)
    if not z:
        raise DomainError("T_alpha is undefined at 0")
    if not alpha.closure_contains(z):
        raise DomainError(f"{z} is not in the closed square of alpha = {alpha}")
    inv = z.reciprocal()
    digit = floor_alpha(inv, alpha)
    return digit, inv - digit


def t_alpha_step_float(z: complex, alpha) -> tuple[GaussianInt, complex]:
    alpha = _as_alpha(alpha)
    inv = 1 / z
    digit = floor_alpha_float(inv, alpha)
    return digit, inv - complex(digit)


@dataclass
class CFExpansion:
    digits: list[GaussianInt]
    terminated: bool
    truncated_at: int
    iterates: list = field(default_factory=list, repr=False)

    def to_json(self, alpha: Alpha, z) -> dict:
        if isinstance(z, complex):
            z_out = [z.real, z.imag]
        else:
            z_out = GaussianRational.coerce(z).to_strings()
        return {
            "alpha": alpha.to_strings(),
            "z": z_out,
            "digits": [d.to_pair() for d in self.digits],
            "terminated": self.terminated,
        }


def expand(
    z: Union[GaussianRational, complex],
    alpha,
    max_steps: int = 64,
    *,
    force: bool = False,
    zero_epsilon: float = ZERO_EPSILON,
    keep_iterates: bool = False,
) -> CFExpansion:
    """Digits of the alpha-Hurwitz expansion of ``z``.

    Exact inputs iterate in Gaussian rationals and stop when the orbit hits 0.
    The starting point may lie anywhere on the closed square; every later
    iterate is in U_alpha.
    Complex floats stop once ``|T^n z| < zero_epsilon``.  Parameters outside D
    are refused unless ``force`` is set, since the digits need not represent
    ``z`` there.
    """
    alpha = _as_alpha(alpha)
    if not alpha.in_D and not force:
        raise DomainError(f"alpha = {alpha} is not in D; pass force=True to expand anyway")
    digits: list[GaussianInt] = []
    iterates = []
    if isinstance(z, complex):
        a1, a2 = float(alpha.a1), float(alpha.a2)
        if not (a1 - 1 <= z.real <= a1 and a2 - 1 <= z.imag <= a2):
            raise DomainError(f"{z} is not in the closed square of alpha")
        cur = z
        for _ in range(max_steps):
            if abs(cur) < zero_epsilon:
                return CFExpansion(digits, True, len(digits), iterates)
            d, cur = t_alpha_step_float(cur, alpha)
            digits.append(d)
            if keep_iterates:
                iterates.append(cur)
        return CFExpansion(digits, abs(cur) < zero_epsilon, max_steps, iterates)

    cur = GaussianRational.coerce(z)
    if not alpha.closure_contains(cur):
        raise DomainError(f"{cur} is not in the closed square of alpha")
    for _ in range(max_steps):
        if not cur:
            return CFExpansion(digits, True, len(digits), iterates)
        d, cur = t_alpha_step_exact(cur, alpha)
        digits.append(d)
        if keep_iterates:
            iterates.append(cur)
    return CFExpansion(digits, not cur, max_steps, iterates)


def evaluate_cf(digits: Sequence) -> GaussianRational:
    """Exact value of ``1/(a1 + 1/(a2 + ... + 1/an))``."""
    if not digits:
        raise ValueError("empty digit string")
    acc = GaussianRational(0)
    for d in reversed(digits):
        s = acc + GaussianInt.coerce(d)
        if not s:
            raise ZeroDivisionError("degenerate digit string")
        acc = s.reciprocal()
    return acc


def evaluate_cf_float(digits: Sequence) -> complex:
    acc = 0j
    for d in reversed(digits):
        acc = 1 / (acc + complex(GaussianInt.coerce(d)))
    return acc


@dataclass(frozen=True)
class ConvergentPair:
    p: GaussianInt
    q: GaussianInt

    def value(self) -> GaussianRational:
        return GaussianRational.coerce(self.p) / GaussianRational.coerce(self.q)


def convergents(digits: Sequence) -> list[ConvergentPair]:
    """``p_n/q_n = [a1, ..., an]`` via the continuant recurrence.

    Starts from ``p_0 = 0, p_-1 = 1, q_0 = 1, q_-1 = 0`` so that there is no
    leading integer part.
    """
    p_prev, p = GaussianInt(1), GaussianInt(0)
    q_prev, q = GaussianInt(0), GaussianInt(1)
    out = []
    for d in digits:
        d = GaussianInt.coerce(d)
        p_prev, p = p, d * p + p_prev
        q_prev, q = q, d * q + q_prev
        out.append(ConvergentPair(p, q))
    return out


def cylinder_digit(z, alpha) -> GaussianInt:
    """The digit ``b`` with ``z`` in the cylinder set ``[b]_alpha``."""
    alpha = _as_alpha(alpha)
    if isinstance(z, complex):
        if z == 0 or not alpha.contains_float(z):
            raise DomainError(f"{z} is not in U_alpha minus 0")
        return floor_alpha_float(1 / z, alpha)
    z = GaussianRational.coerce(z)
    if not z or not alpha.contains(z):
        raise DomainError(f"{z} is not in U_alpha minus 0")
    return floor_alpha(z.reciprocal(), alpha)
