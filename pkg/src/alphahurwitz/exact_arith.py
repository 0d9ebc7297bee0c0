"""Exact rationals, Gaussian integers and Gaussian rationals.

Rationals are :class:`fractions.Fraction`, which already keeps values reduced
with a positive denominator.  The two Gaussian types are small immutable value
classes on top of ``int`` and ``Fraction``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal string exactly."""
    m = _RATIONAL_RE.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    try:
        return Fraction(text.strip())
    except ValueError:
        raise ValueError(f"not a rational number: {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class GaussianInt:
    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianInt is immutable")

    @classmethod
    def coerce(cls, v) -> "GaussianInt":
        if isinstance(v, GaussianInt):
            return v
        if isinstance(v, int):
            return cls(v, 0)
        if isinstance(v, complex) and v.real.is_integer() and v.imag.is_integer():
            return cls(int(v.real), int(v.imag))
        if isinstance(v, (tuple, list)) and len(v) == 2:
            return cls(v[0], v[1])
        raise TypeError(f"cannot interpret {v!r} as a Gaussian integer")

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return NotImplemented
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return NotImplemented
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianInt.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return NotImplemented
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re or self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return other == self
        try:
            o = GaussianInt.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_pair(self) -> list[int]:
        return [self.re, self.im]

    def __complex__(self):
        return complex(self.re, self.im)

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"

    def __str__(self):
        return _format_complex(self.re, self.im)


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, GaussianInt):
            return cls(v.re, v.im)
        if isinstance(v, (int, Fraction)):
            return cls(v, 0)
        if isinstance(v, (tuple, list)) and len(v) == 2:
            return cls(v[0], v[1])
        raise TypeError(f"cannot interpret {v!r} as a Gaussian rational")

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``"x"``, ``"x,y"`` or ``"x+yi"`` with rational components."""
        t = text.replace(" ", "")
        if "," in t:
            x, y = t.split(",", 1)
            return cls(parse_rational(x), parse_rational(y))
        if t.endswith("i") or t.endswith("j"):
            body = t[:-1]
            # split at the last sign that is not the leading one or part of an exponent
            for k in range(len(body) - 1, 0, -1):
                if body[k] in "+-" and body[k - 1] not in "eE":
                    re_part, im_part = body[:k], body[k:]
                    break
            else:
                re_part, im_part = "0", body
            if im_part in ("", "+"):
                im_part = "1"
            elif im_part == "-":
                im_part = "-1"
            return cls(parse_rational(re_part), parse_rational(im_part))
        return cls(parse_rational(t), 0)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def reciprocal(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def is_gaussian_int(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def to_gaussian_int(self) -> GaussianInt:
        if not self.is_gaussian_int():
            raise ValueError(f"{self} is not a Gaussian integer")
        return GaussianInt(self.re.numerator, self.im.numerator)

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.reciprocal()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re or self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.is_gaussian_int():
            return hash((self.re.numerator, self.im.numerator))
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self):
        return _format_complex(self.re, self.im)

    def to_strings(self) -> list[str]:
        return [format_rational(self.re), format_rational(self.im)]


Number = Union[int, Fraction, GaussianInt, GaussianRational]


def _format_complex(re, im) -> str:
    if im == 0:
        return format_rational(re)
    im_s = format_rational(abs(im))
    im_s = "" if im_s == "1" else im_s
    if re == 0:
        return f"{'-' if im < 0 else ''}{im_s}i"
    return f"{format_rational(re)}{'-' if im < 0 else '+'}{im_s}i"


def gi_norm(w: GaussianInt) -> int:
    """Squared modulus ``re**2 + im**2`` of a Gaussian integer."""
    return GaussianInt.coerce(w).norm()


def gr_reciprocal(z) -> GaussianRational:
    return GaussianRational.coerce(z).reciprocal()
