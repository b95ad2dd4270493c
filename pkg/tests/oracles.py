"""Independent reference computations used by the tests.

Nothing here imports the package under test: values come from plain integer
arithmetic, ``decimal`` or sympy.
"""

import decimal
from fractions import Fraction

import sympy


def qpq_int(p, q, t):
    """The tenth-degree cuboid polynomial, evaluated with plain integers."""
    p2, q2, t2 = p * p, q * q, t * t
    return (t2 ** 5
            + (2 * q2 + p2) * (3 * q2 - 2 * p2) * t2 ** 4
            + (q2 ** 4 + 10 * p2 * q2 ** 3 + 4 * p2 ** 2 * q2 ** 2 - 14 * p2 ** 3 * q2 + p2 ** 4) * t2 ** 3
            - p2 * q2 * (q2 ** 4 - 14 * p2 * q2 ** 3 + 4 * p2 ** 2 * q2 ** 2 + 10 * p2 ** 3 * q2 + p2 ** 4) * t2 ** 2
            - p2 ** 3 * q2 ** 3 * (q2 + 2 * p2) * (3 * p2 - 2 * q2) * t2
            - q2 ** 5 * p2 ** 5)


def qtilde_int(pt, qt, B, t):
    return qpq_int(B * qt ** 3 - pt, qt, t)


T, P, Q, PT, QT, BB = sympy.symbols("t p q pt qt B")


def qpq_sympy():
    return sympy.expand(qpq_int(P, Q, T))


def qtilde_sympy(B=BB):
    return sympy.expand(qpq_int(B * QT ** 3 - PT, QT, T))


def decimal_value(a: Fraction, b: Fraction, digits: int = 100) -> decimal.Decimal:
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        two = decimal.Decimal(2).sqrt()
        return (decimal.Decimal(a.numerator) / a.denominator
                + decimal.Decimal(b.numerator) / b.denominator * two)


def sympy_real_roots(coeffs_low_first, var=T):
    """Exact real roots (as sympy CRootOf objects) of an integer polynomial."""
    poly = sympy.Poly(list(reversed([int(c) for c in coeffs_low_first])), var)
    return poly.real_roots()
