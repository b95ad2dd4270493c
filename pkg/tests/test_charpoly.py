import io
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from cuboid_sites.charpoly import (
    ANCILLARY_HEADER, ShapeMismatch, axis_polynomial, build_exceptional, build_qpq, build_qtilde,
    check_identity, derive_remainder_equation, export_ancillary, identity_residual, load_ancillary,
)
from cuboid_sites.families import FAMILIES
from cuboid_sites.multipoly import MultiPoly, PolyError, variables
from cuboid_sites.quadrat import QuadRat

from oracles import BB, P, PT, Q, QT, T, qpq_int, qpq_sympy, qtilde_int, qtilde_sympy


def test_qpq_coefficients():
    body = build_qpq().body
    t8 = body.coefficient("t", 8)
    assert t8.eval_exact({"p": 1, "q": 1}) == 3
    p, q = variables("p q", body.variables)
    assert body.coefficient("t", 0) == -(q ** 10) * p ** 10
    assert body.eval_exact({"p": 1, "q": 1, "t": 1}) == 0
    assert body.eval_exact({"p": 1, "q": 1, "t": 0}) == -1


def test_qpq_matches_independent_expansion():
    body = build_qpq().body
    ref = sympy.Poly(qpq_sympy(), T, P, Q)
    assert len(body) == len(ref.terms())
    for (i, j, k), c in ref.terms():
        assert body.terms[(i, j, k)] == int(c)


def test_qpq_is_even_of_degree_ten():
    body = build_qpq().body
    assert body.degree("t") == 10
    assert all(e[0] % 2 == 0 for e in body.terms)


def test_transformed_symbolic_count_matches_independent_expansion():
    body = build_qtilde().body
    ref = sympy.Poly(qtilde_sympy(), T, PT, QT, BB)
    assert len(body) == 108 == len(ref.terms())
    for (i, j, k, l), c in ref.terms():
        assert body.terms[(i, j, k, l)] == int(c)


def test_build_qtilde_rejects_bad_b():
    with pytest.raises(ValueError):
        build_qtilde(0)
    with pytest.raises(ValueError):
        build_qtilde(10)


def test_exceptional_is_transformed_at_zero_offset():
    for B in (None, 1, 9):
        ex = build_exceptional(B).body
        assert ex == build_qtilde(B).body.partial_eval({"pt": 0})
    ex = build_exceptional().body
    t, qt, B = variables("t qt B", ex.variables)
    assert ex.coefficient("t", 0) == -(qt ** 40) * B ** 10


def test_exceptional_lies_on_the_parabola():
    # pt = 0 at B = 9 sits on p = 9 q**3, the upper edge of the nonlinear zone
    for q in (1, 2, 5):
        val = build_exceptional(9).body.eval_exact({"t": 3, "qt": q})
        assert val == qpq_int(9 * q ** 3, q, 3)


@given(st.integers(1, 9), st.integers(-50, 50), st.integers(1, 40), st.integers(-60, 60))
def test_transform_preserves_values(B, pt, qt, t):
    body = build_qtilde().body
    assert body.eval_exact({"t": t, "pt": pt, "qt": qt, "B": B}) == qtilde_int(pt, qt, B, t)


def test_axis_polynomial_imaginary():
    body = build_qtilde(1).body.partial_eval({"pt": 1, "qt": 3})
    u_poly = axis_polynomial(body, "imaginary")
    for u in (1, 2, 7):
        # Q(i*u) with an even polynomial only sees (i*u)**2 = -u**2
        direct = sum(int(c.a) * (-(u * u)) ** (e[0] // 2) for e, c in body.terms.items())
        assert u_poly.eval_exact({"u": u}) == direct
    with pytest.raises(ValueError):
        axis_polynomial(body, "sideways")
    t, = variables("t")
    with pytest.raises(PolyError):
        axis_polynomial(t ** 3, "imaginary")


LEADING = {
    "T1": ("16*B^37", "80*pt*B^35", 1612),
    "T2": ("16*B^37", "- 80*pt*B^35", 1612),
    "T3": ("2*B^23", "32*pt*B^21", 490),
    "T4": ("16*B^30", "(-320 - 224*sqrt2)*pt*B^27", 1031),
    "T5": ("16*B^30", "(320 - 224*sqrt2)*pt*B^27", 1031),
}


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_remainder_leading_forms(name):
    eq = derive_remainder_equation(name)
    lhs, center, count = LEADING[name]
    assert str(eq.lhs_coeff) == lhs
    assert str(eq.center) == center
    assert eq.tail_monomials == count
    assert set(eq.tail.variables) <= {"c", "z", "pt", "B"}
    assert not eq.tail.has_negative_exponents


def test_imaginary_tails_store_fewer_terms_than_split_count():
    for name in ("T4", "T5"):
        eq = derive_remainder_equation(name)
        assert eq.tail_terms < eq.tail_monomials
        assert eq.tail_terms == 539


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_remainder_identity(name):
    eq = derive_remainder_equation(name)
    assert check_identity(eq, samples=4, seed=7)
    rng = random.Random(11)
    for _ in range(3):
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        qt = Fraction(rng.randint(2, 40))
        pt = Fraction(rng.choice([-3, -1, 2, 5]))
        assert identity_residual(eq, c, qt, pt, rng.randint(1, 9)) == 0


def test_tail_at_origin_is_reported():
    # the tail may or may not vanish at c = z = pt = 0; check it is well defined
    for name in FAMILIES:
        eq = derive_remainder_equation(name)
        value = eq.tail.partial_eval({"c": 0, "z": 0, "pt": 0})
        assert value.variables == ("B",) or not value


def test_unknown_family():
    with pytest.raises((ValueError, KeyError)):
        derive_remainder_equation("T9")


def test_shape_mismatch_is_a_poly_error():
    assert issubclass(ShapeMismatch, PolyError)


def test_ancillary_round_trip_and_determinism():
    eqs = [derive_remainder_equation(n) for n in sorted(FAMILIES)]
    a, b = io.StringIO(), io.StringIO()
    export_ancillary(eqs, a)
    export_ancillary(eqs, b)
    assert a.getvalue() == b.getvalue()
    loaded = load_ancillary(a.getvalue().splitlines())
    for eq in eqs:
        assert loaded[eq.family]["tail"] == eq.tail
        assert loaded[eq.family]["lhs"] == eq.lhs_coeff
        assert loaded[eq.family]["center"] == eq.center
    counts, section = {}, None
    for ln in a.getvalue().splitlines():
        word = ln.split(" ", 1)[0]
        if word in ("LHS", "CENTER", "TAIL", "END"):
            section = word
        elif word == "RAT" and section == "TAIL":
            counts[section] = counts.get(section, 0) + 1
    assert counts["TAIL"] == 1612 + 1612 + 490 + 1031 + 1031
    assert a.getvalue().count("\nTAIL ") == 5


def test_ancillary_empty():
    out = io.StringIO()
    export_ancillary([], out)
    assert out.getvalue().strip().splitlines() == [ANCILLARY_HEADER]
    assert load_ancillary(out.getvalue().splitlines()) == {}
