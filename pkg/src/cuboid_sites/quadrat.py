"""Exact arithmetic in Q(sqrt 2).

Elements are stored as ``a + b*sqrt(2)`` with rational ``a`` and ``b``.
Rationals are :class:`fractions.Fraction`; ordering and sign are decided
exactly by comparing ``a**2`` against ``2*b**2``, never through floats.
"""

from __future__ import annotations

import decimal
import math
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

Scalar = Union[int, Fraction, "QuadRat"]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Square root of a non-negative rational if it is a rational square."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class QuadRat:
    """An element ``a + b*sqrt(2)`` of Q(sqrt 2). Immutable."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction) -> "QuadRat":
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QuadRat is immutable")

    def __reduce__(self):
        return (QuadRat._raw, (self.a, self.b))

    @classmethod
    def coerce(cls, x: Scalar) -> "QuadRat":
        if isinstance(x, QuadRat):
            return x
        return cls._raw(_as_fraction(x), Fraction(0))

    # ------------------------------------------------------------------ ring
    def __add__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadRat._raw(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadRat._raw(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self):
        return QuadRat._raw(-self.a, -self.b)

    def __pos__(self):
        return self

    def __mul__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.a, self.b, o.a, o.b
        if not b and not d:
            return QuadRat._raw(a * c, b)
        return QuadRat._raw(a * c + 2 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadRat":
        return QuadRat._raw(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - 2*b**2``; zero only for the zero element."""
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadRat division by zero")
        return QuadRat._raw(self.a / n, -self.b / n)

    def __truediv__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.b:
            if not o.a:
                raise ZeroDivisionError("QuadRat division by zero")
            return QuadRat._raw(self.a / o.a, self.b / o.a)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QuadRat.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadRat._raw(Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ------------------------------------------------------------- ordering
    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger of a**2 and 2*b**2 wins
        return sa if self.a * self.a > 2 * self.b * self.b else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b))

    def _cmp(self, other) -> int:
        return (self - QuadRat.coerce(other)).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # ---------------------------------------------------------- conversions
    @property
    def is_rational(self) -> bool:
        return not self.b

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2.0)

    def floor(self) -> int:
        """Exact floor, using integer square roots for the irrational part."""
        if not self.b:
            return math.floor(self.a)
        den = self.a.denominator * self.b.denominator // math.gcd(self.a.denominator, self.b.denominator)
        num_a = self.a.numerator * (den // self.a.denominator)
        num_b = self.b.numerator * (den // self.b.denominator)
        # num_b*sqrt2 is irrational, so it lies strictly between s and s + 1
        s = math.isqrt(2 * num_b * num_b)
        low = num_a + s if num_b > 0 else num_a - s - 1
        return low // den

    def sqrt(self) -> Optional["QuadRat"]:
        """Non-negative square root in Q(sqrt 2), or None if there is none."""
        if self.sign() < 0:
            return None
        if not self:
            return self
        a, b = self.a, self.b
        if not b:
            r = rational_sqrt(a)
            if r is not None:
                return QuadRat._raw(r, Fraction(0))
            r = rational_sqrt(a / 2)
            if r is not None:
                return QuadRat._raw(Fraction(0), r)
            return None
        # (x + y*sqrt2)**2 = a + b*sqrt2  <=>  x**2 + 2y**2 = a, 2xy = b
        disc = rational_sqrt(a * a - 2 * b * b)
        if disc is None:
            return None
        for x2 in ((a + disc) / 2, (a - disc) / 2):
            x = rational_sqrt(x2)
            if not x:
                continue
            cand = QuadRat._raw(x, b / (2 * x))
            if cand.sign() < 0:
                cand = -cand
            if cand * cand == self:
                return cand
        return None

    def to_decimal(self, digits: int = 20) -> str:
        """Decimal rendering with ``digits`` significant digits (display only)."""
        if digits < 1:
            raise ValueError("precision must be >= 1")
        if not self:
            return "0"
        mag = max(abs(self.a), abs(self.b), Fraction(1))
        extra = len(str(mag.numerator)) + len(str(mag.denominator)) + 10
        with decimal.localcontext() as ctx:
            ctx.prec = digits + extra
            val = decimal.Decimal(self.a.numerator) / decimal.Decimal(self.a.denominator)
            if self.b:
                val += (decimal.Decimal(self.b.numerator) / decimal.Decimal(self.b.denominator)
                        * decimal.Decimal(2).sqrt())
            ctx.prec = digits
            val = +val
            if abs(val.adjusted()) > 30:
                return format(val, "e")
            return format(val, "f")

    def __repr__(self):
        return f"QuadRat({self.a!s}, {self.b!s})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*sqrt2"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {abs(self.b)}*sqrt2"


SQRT2 = QuadRat(0, 1)
ZERO = QuadRat(0, 0)
ONE = QuadRat(1, 0)
