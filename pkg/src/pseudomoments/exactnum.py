"""Exact scalars: rationals (backed by :class:`fractions.Fraction`) and Q(sqrt 2)."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction

Scalar = Union[int, Fraction, "QuadExt"]


def rat(num, den=1) -> Fraction:
    """Reduced fraction ``num/den``; the sign lives on the numerator."""
    if den == 0:
        raise ZeroDivisionError("division by zero")
    return Fraction(num, den)


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently smuggle rounding into a
    certificate.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, QuadExt):
        if x.surd:
            raise ValueError(f"{x} is irrational")
        return x.rat
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num, den = m.group(1), m.group(2)
    return rat(int(num), int(den) if den is not None else 1)


def format_rational(x) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class QuadExt:
    """Element ``rat + surd*sqrt(2)`` with rational parts."""

    __slots__ = ("rat", "surd")

    def __init__(self, rat_part=0, surd_part=0):
        object.__setattr__(self, "rat", as_rational(rat_part))
        object.__setattr__(self, "surd", as_rational(surd_part))

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, QuadExt):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return cls(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.rat + o.rat, self.surd + o.surd)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.rat, -self.surd)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.rat - o.rat, self.surd - o.surd)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(
            self.rat * o.rat + 2 * self.surd * o.surd,
            self.rat * o.surd + self.surd * o.rat,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadExt:
        return QuadExt(self.rat, -self.surd)

    def norm(self) -> Fraction:
        """Field norm ``rat**2 - 2*surd**2``."""
        return self.rat * self.rat - 2 * self.surd * self.surd

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        num = self * o.conjugate()
        return QuadExt(num.rat / n, num.surd / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out, base = QuadExt(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sign(self) -> int:
        return sign_quadext(self)

    def __bool__(self):
        return bool(self.rat) or bool(self.surd)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.rat == o.rat and self.surd == o.surd

    def __hash__(self):
        if not self.surd:
            return hash(self.rat)
        return hash((self.rat, self.surd))

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        return sign_quadext(self - o)

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __float__(self):
        return float(self.rat) + float(self.surd) * 2**0.5

    def __repr__(self):
        return f"QuadExt({format_rational(self.rat)!r}, {format_rational(self.surd)!r})"

    def __str__(self):
        return format_quadext(self)


def sign_quadext(x: QuadExt) -> int:
    """Exact sign of ``a + b*sqrt(2)`` using rational comparisons only."""
    a, b = x.rat, x.surd
    sa, sb = _sign(a), _sign(b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the larger of a**2 and 2*b**2 wins
    return sa * _sign(a * a - 2 * b * b)


_QUAD_RE = re.compile(
    r"^\s*([+-]?\s*\d+(?:\s*/\s*\d+)?)?\s*"
    r"(?:([+-])\s*(\d+(?:\s*/\s*\d+)?)\s*\*\s*sqrt2)?\s*$"
)


def parse_quadext(text: str) -> QuadExt:
    """Parse ``"p/q + r/s*sqrt2"``; either part may be omitted."""
    m = _QUAD_RE.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ValueError(f"not a Q(sqrt2) literal: {text!r}")
    r = parse_rational(m.group(1).replace(" ", "")) if m.group(1) else Fraction(0)
    s = Fraction(0)
    if m.group(2):
        s = parse_rational(m.group(3).replace(" ", ""))
        if m.group(2) == "-":
            s = -s
    return QuadExt(r, s)


def format_quadext(x: QuadExt) -> str:
    if not x.surd:
        return format_rational(x.rat)
    op = "-" if x.surd < 0 else "+"
    return f"{format_rational(x.rat)} {op} {format_rational(abs(x.surd))}*sqrt2"


def parse_scalar(text: str):
    """Rational when possible, otherwise Q(sqrt2)."""
    if "sqrt2" in text:
        q = parse_quadext(text)
        return q if q.surd else q.rat
    return parse_rational(text)


def format_scalar(x) -> str:
    if isinstance(x, QuadExt):
        return format_quadext(x)
    return format_rational(x)
