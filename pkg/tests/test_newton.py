from fractions import Fraction

import pytest

from cuboid_sites.charpoly import build_qtilde
from cuboid_sites.multipoly import MultiPoly, variables
from cuboid_sites.newton import (
    EdgeSolution, candidate_exponents, edge_polynomial, newton_polygon, solve_all, solve_edge,
)
from cuboid_sites.oracle import axis_split_roots
from cuboid_sites.quadrat import QuadRat


@pytest.fixture(scope="module")
def polygon():
    return newton_polygon(build_qtilde().body)


def test_upper_nodes_and_coefficients(polygon):
    assert polygon.upper_nodes == ((0, 40), (2, 36), (4, 32), (6, 24), (8, 12), (10, 0))
    (B,) = variables("B")
    expected = [-(B ** 10), -6 * B ** 10, -(B ** 10), B ** 8, -2 * B ** 4, MultiPoly.constant(1)]
    for node, coeff in zip(polygon.upper_nodes, expected):
        assert polygon.coefficient(node) == coeff


def test_slopes_and_exponents(polygon):
    assert [s.slope for s in polygon.upper_segments] == [-2, -4, -6]
    assert candidate_exponents(polygon) == [2, 4, 6]
    # slopes decrease moving right
    slopes = [s.slope for s in polygon.upper_segments]
    assert slopes == sorted(slopes, reverse=True)


def test_every_node_is_below_the_hull(polygon):
    assert all(polygon.below_hull(n) for n in polygon.nodes)
    assert not polygon.below_hull((4, 33))


def test_single_monomial_polygon():
    t, qt = variables("t qt")
    np_ = newton_polygon(3 * t ** 2 * qt ** 5)
    assert list(np_.nodes) == [(2, 5)]
    assert np_.upper_segments == ()
    assert candidate_exponents(np_) == []


def test_one_segment_slope_minus_one():
    t, qt = variables("t qt")
    np_ = newton_polygon(t + qt + 1)
    assert candidate_exponents(np_) == [1]


EDGES = {0: "C^4 + 6*C^2 + 1", 1: "C^2 - B^2", 2: "C^4 - 2*C^2*B^4 + B^8"}


@pytest.mark.parametrize("index", [0, 1, 2])
def test_edge_polynomials(polygon, index):
    assert str(edge_polynomial(polygon, index).edge_poly) == EDGES[index]


def _edge_value(edge: EdgeSolution, root, B: int) -> QuadRat:
    # C = coeff * B**k (times i); the edge polynomial is even in C
    c2 = root.coeff * root.coeff * QuadRat(B) ** (2 * root.b_power)
    if root.axis == "imaginary":
        c2 = -c2
    total = QuadRat()
    for (m, b), coeff in edge.edge_poly.terms.items():
        assert m % 2 == 0
        total = total + coeff * c2 ** (m // 2) * QuadRat(B) ** b
    return total


def test_retained_roots(polygon):
    edges = solve_all(polygon)
    assert [e.alpha for e in edges] == [2, 4, 6]
    top, mid, low = edges
    assert [(r.coeff, r.axis, r.multiplicity) for r in top.roots] == [
        (QuadRat(1, 1), "imaginary", 1), (QuadRat(-1, 1), "imaginary", 1)]
    assert [(r.coeff, r.b_power, r.axis, r.multiplicity) for r in mid.roots] == [(QuadRat(1), 1, "real", 1)]
    assert [(r.coeff, r.b_power, r.axis, r.multiplicity) for r in low.roots] == [(QuadRat(1), 2, "real", 2)]
    for e in edges:
        for r in e.roots:
            for B in range(1, 10):
                assert _edge_value(e, r, B) == 0


def test_solve_edge_fills_roots(polygon):
    raw = edge_polynomial(polygon, 1)
    assert raw.roots == ()
    solved = solve_edge(raw)
    assert len(solved.roots) == 1 and solved.discarded == 1


@pytest.mark.parametrize("qt", [50, 100])
def test_growth_rates_match_oracle(qt):
    poly = build_qtilde(1).body.partial_eval({"pt": 1, "qt": qt})
    real, imag = axis_split_roots(poly, Fraction(1, 10))
    mags = sorted([float(r.bounds(10)[0]) for r in real] + [float(r.bounds(10)[0]) for r in imag])
    # imaginary pair ~ qt**2 (two roots), real ~ qt**4 and two near qt**6
    expected = sorted([0.414 * qt ** 2, 2.414 * qt ** 2, qt ** 4, qt ** 6, qt ** 6])
    for got, want in zip(mags, expected):
        assert want / 1.5 < got < want * 1.5
