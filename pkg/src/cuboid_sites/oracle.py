"""Certified real root isolation by Sturm sequences over the rationals.

Polynomials are dense ascending coefficient lists.  Internally everything is
scaled to primitive integer form; evaluation at dyadic points ``n / 2**k``
uses homogenized integer Horner so that the huge coefficients of the cuboid
polynomial never create large fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .multipoly import MultiPoly
from .quadrat import QuadRat

Coeffs = List[Fraction]


# ------------------------------------------------------------ dense helpers
def _trim(a: Sequence) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _primitive(a: Sequence) -> List[int]:
    """Positive multiple of ``a`` with coprime integer coefficients."""
    a = _trim(a)
    if not a:
        return []
    den = 1
    for x in a:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in a]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [x // g for x in ints]


def derivative(a: Sequence) -> list:
    return [i * a[i] for i in range(1, len(a))]


def _divmod(a: Sequence, b: Sequence) -> Tuple[Coeffs, Coeffs]:
    a = [Fraction(x) for x in _trim(a)]
    b = [Fraction(x) for x in _trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, y in enumerate(b):
            a[i + k] -= f * y
        a = _trim(a)
    return _trim(q), a


def _rem(a, b) -> Coeffs:
    return _divmod(a, b)[1]


def poly_gcd(a: Sequence, b: Sequence) -> List[int]:
    a, b = _primitive(a), _primitive(b)
    while b:
        a, b = b, _primitive(_rem(a, b))
    return a


def squarefree_part(a: Sequence) -> List[int]:
    g = poly_gcd(a, derivative(a))
    return _primitive(_divmod(a, g)[0]) if len(g) > 1 else _primitive(a)


def yun_factors(a: Sequence) -> List[Tuple[List[int], int]]:
    """Squarefree decomposition ``a = c * prod g_i**i`` as ``[(g_i, i)]``."""
    a = _primitive(a)
    da = derivative(a)
    b = poly_gcd(a, da)
    out = []
    if len(b) <= 1:
        return [(a, 1)] if len(a) > 1 else []
    c = _divmod(a, b)[0]
    d = [x - y for x, y in _zip_pad(_divmod(da, b)[0], derivative(c))]
    i = 1
    while len(_trim(c)) > 1:
        g = poly_gcd(c, d) if _trim(d) else _primitive(c)
        if len(g) > 1:
            out.append((g, i))
        c = _divmod(c, g)[0]
        d = [x - y for x, y in _zip_pad(_divmod(d, g)[0] if _trim(d) else [], derivative(c))]
        i += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


def sign_at(a: Sequence[int], x: Fraction) -> int:
    """Exact sign of an integer polynomial at a rational point."""
    n, d = x.numerator, x.denominator
    acc = 0
    dp = 1
    for c in reversed(a):
        acc = acc * n + c * dp
        dp *= d
    # acc = d**deg * a(x) with a spurious d**0..; sign unaffected since d > 0
    return (acc > 0) - (acc < 0)


def value_at(a: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def sturm_chain(a: Sequence) -> List[List[int]]:
    chain = [_primitive(a)]
    if len(chain[0]) <= 1:
        return chain
    chain.append(_primitive(derivative(chain[0])))
    while len(chain[-1]) > 1:
        r = _rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_primitive([-x for x in r]))
    return chain


def variations(chain: Sequence[Sequence[int]], x: Fraction) -> int:
    signs = [s for s in (sign_at(p, x) for p in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def cauchy_bound(a: Sequence) -> Fraction:
    """Dyadic ``2**k`` strictly above ``1 + max |a_i / a_n|``."""
    a = _trim(a)
    lead = abs(Fraction(a[-1]))
    m = max((abs(Fraction(x)) / lead for x in a[:-1]), default=Fraction(0))
    bound = 1 + m
    k = max(0, math.ceil(math.log2(bound)) if bound > 0 else 0)
    r = Fraction(2) ** k
    while r <= bound:
        r *= 2
    return r


# ---------------------------------------------------------------- isolation
@dataclass(frozen=True)
class IsolatedRoot:
    """Exactly one distinct root lies in the open interval ``(lo, hi)``."""

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1
    variations_lo: int = 0
    variations_hi: int = 0
    axis: str = "real"

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains_integer(self) -> Optional[int]:
        k = math.floor(self.lo) + 1
        return k if k < self.hi else None


def _split_point(sqf: Sequence[int], lo: Fraction, hi: Fraction) -> Fraction:
    mid = (lo + hi) / 2
    if sign_at(sqf, mid):
        return mid
    step = (hi - lo) / 8
    for num in (1, 3, 5, 7):
        cand = lo + step * num
        if sign_at(sqf, cand) and cand != mid:
            return cand
    raise ArithmeticError("no non-root split point found")  # pragma: no cover


def _isolate(sqf: List[int], chain, lo: Fraction, hi: Fraction, v_lo: int, v_hi: int, out: list) -> None:
    n = v_lo - v_hi
    if n == 0:
        return
    if n == 1:
        out.append((lo, hi, v_lo, v_hi))
        return
    mid = _split_point(sqf, lo, hi)
    v_mid = variations(chain, mid)
    _isolate(sqf, chain, lo, mid, v_lo, v_mid, out)
    _isolate(sqf, chain, mid, hi, v_mid, v_hi, out)


def refine(sqf: Sequence[int], lo: Fraction, hi: Fraction, width: Fraction) -> Tuple[Fraction, Fraction]:
    """Shrink an isolating interval of a simple root below ``width``."""
    s_lo = sign_at(sqf, lo)
    while hi - lo >= width:
        mid = (lo + hi) / 2
        s = sign_at(sqf, mid)
        if s == 0:
            eps = min(width, hi - lo) / 4
            return mid - eps, mid + eps
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def sturm_isolate(coeffs: Sequence, target_width=Fraction(1), axis: str = "real") -> List[IsolatedRoot]:
    """Isolate every distinct real root of a univariate rational polynomial."""
    a = _trim([Fraction(x) for x in coeffs])
    if not a:
        raise ValueError("cannot isolate roots of the zero polynomial")
    target_width = Fraction(target_width)
    if target_width <= 0:
        raise ValueError("target width must be positive")
    if len(a) == 1:
        return []
    sqf = squarefree_part(a)
    chain = sturm_chain(sqf)
    r = cauchy_bound(sqf)
    v_lo, v_hi = variations(chain, -r), variations(chain, r)
    raw: list = []
    _isolate(sqf, chain, -r, r, v_lo, v_hi, raw)
    assert len(raw) == v_lo - v_hi
    factors = yun_factors(a)
    roots = []
    for lo, hi, vl, vh in sorted(raw):
        lo, hi = refine(sqf, lo, hi, target_width)
        mult = 1
        for g, i in factors:
            if len(factors) == 1 or _count(g, lo, hi) == 1:
                mult = i
                break
        roots.append(IsolatedRoot(lo, hi, mult, variations(chain, lo), variations(chain, hi), axis))
    return roots


def _count(a: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    chain = sturm_chain(a)
    return variations(chain, lo) - variations(chain, hi)


def count_roots(coeffs: Sequence, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in ``(lo, hi]``."""
    return _count(squarefree_part(coeffs), Fraction(lo), Fraction(hi))


# --------------------------------------------------------------- axis split
def even_part(coeffs: Sequence) -> Coeffs:
    """``S`` with ``f(t) = S(t**2)`` for an even polynomial ``f``."""
    if any(coeffs[i] for i in range(1, len(coeffs), 2)):
        raise ValueError("odd power of t present: polynomial is not even")
    return [Fraction(coeffs[i]) for i in range(0, len(coeffs), 2)]


@dataclass(frozen=True)
class AxisRoot:
    """A positive real root ``t`` or a positive imaginary part ``u`` of a root
    of an even polynomial, stored through ``x = t**2`` (``x = -u**2``)."""

    axis: str
    x_lo: Fraction
    x_hi: Fraction
    multiplicity: int

    @property
    def square_bounds(self) -> Tuple[Fraction, Fraction]:
        """Open interval containing ``t**2`` (real) or ``u**2`` (imaginary)."""
        if self.axis == "real":
            return self.x_lo, self.x_hi
        return -self.x_hi, -self.x_lo

    def bounds(self, digits: int = 40) -> Tuple[Fraction, Fraction]:
        """Outer rational bounds on ``t`` (or ``u``)."""
        lo, hi = self.square_bounds
        return _sqrt_floor(lo, digits), _sqrt_ceil(hi, digits)

    def inside(self, lower: QuadRat, upper: QuadRat) -> bool:
        """True iff the root lies strictly in ``(lower, upper)``, for ``lower >= 0``."""
        lo, hi = self.square_bounds
        return lower * lower <= lo and QuadRat(hi) <= upper * upper and lower.sign() >= 0


def _sqrt_floor(x: Fraction, digits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    scale = 10 ** digits
    v = math.isqrt(x.numerator * scale * scale // x.denominator)
    return Fraction(v, scale)


def _sqrt_ceil(x: Fraction, digits: int) -> Fraction:
    f = _sqrt_floor(x, digits)
    return f if f * f == x else f + Fraction(1, 10 ** digits)


def univariate(poly, var: str = "t") -> Coeffs:
    if isinstance(poly, MultiPoly):
        cs = poly.univariate_coefficients(var)
        out = []
        for c in cs:
            out.append(c.to_fraction())
        return out
    return [Fraction(x) for x in poly]


def axis_split_roots(poly, target_width=Fraction(1)) -> Tuple[List[AxisRoot], List[AxisRoot]]:
    """Positive real roots and positive imaginary parts of purely imaginary
    roots of an even polynomial in ``t``."""
    s = even_part(univariate(poly))
    real, imag = [], []
    for r in sturm_isolate(s, target_width):
        if r.lo >= 0:
            real.append(AxisRoot("real", r.lo, r.hi, r.multiplicity))
        elif r.hi <= 0:
            imag.append(AxisRoot("imaginary", r.lo, r.hi, r.multiplicity))
        else:
            # straddles zero; x = 0 itself is t = 0, on neither axis
            sqf = squarefree_part(s)
            s0 = sign_at(sqf, Fraction(0))
            if s0 == 0:
                continue
            if sign_at(sqf, r.lo) != s0:
                lo, hi = refine(sqf, r.lo, Fraction(0), target_width)
                imag.append(AxisRoot("imaginary", lo, hi, r.multiplicity))
            else:
                lo, hi = refine(sqf, Fraction(0), r.hi, target_width)
                real.append(AxisRoot("real", lo, hi, r.multiplicity))
    imag.reverse()
    return real, imag


def refine_axis_root(poly, root: AxisRoot, width: Fraction) -> AxisRoot:
    """Narrow ``root`` so that its ``x`` interval is shorter than ``width``."""
    s = squarefree_part(even_part(univariate(poly)))
    lo, hi = refine(s, root.x_lo, root.x_hi, Fraction(width))
    return AxisRoot(root.axis, lo, hi, root.multiplicity)


def refine_until_inside(poly, root: AxisRoot, lower: QuadRat, upper: QuadRat, max_steps: int = 600) -> bool:
    """Bisect the root's interval until it sits inside ``(lower, upper)``.

    Returns False if it is still not inside after ``max_steps`` halvings or
    once the interval leaves the enclosure entirely.
    """
    s = squarefree_part(even_part(univariate(poly)))
    lo, hi = root.x_lo, root.x_hi
    s_lo = sign_at(s, lo)
    for _ in range(max_steps):
        cur = AxisRoot(root.axis, lo, hi, root.multiplicity)
        if cur.inside(lower, upper):
            return True
        mid = (lo + hi) / 2
        sm = sign_at(s, mid)
        if sm == 0:
            eps = (hi - lo) / 2 ** 40
            lo, hi = mid - eps, mid + eps
            s_lo = sign_at(s, lo)
            continue
        if sm == s_lo:
            lo = mid
        else:
            hi = mid
    return False
