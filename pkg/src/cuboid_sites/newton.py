"""Newton polygon of the transformed polynomial in the ``(t, qt)`` plane.

A node ``(m, r)`` is present when the coefficient of ``t**m * qt**r`` is a
nonzero polynomial in the remaining parameters.  Only the upper boundary is
needed: an edge of slope ``-alpha`` produces roots growing like
``C * qt**alpha``, and ``C`` solves the edge polynomial built from the nodes on
that edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .multipoly import MultiPoly, PolyError
from .quadrat import QuadRat

Node = Tuple[int, int]


@dataclass(frozen=True)
class Segment:
    nodes: Tuple[Node, ...]

    @property
    def start(self) -> Node:
        return self.nodes[0]

    @property
    def end(self) -> Node:
        return self.nodes[-1]

    @property
    def slope(self) -> Fraction:
        (m0, r0), (m1, r1) = self.start, self.end
        return Fraction(r1 - r0, m1 - m0)


@dataclass(frozen=True)
class NewtonPolygon:
    nodes: Dict[Node, MultiPoly]
    upper_nodes: Tuple[Node, ...]
    upper_segments: Tuple[Segment, ...]

    def coefficient(self, node: Node) -> MultiPoly:
        return self.nodes[node]

    def below_hull(self, node: Node) -> bool:
        """True iff ``node`` lies on or below the upper boundary."""
        m, r = node
        for seg in self.upper_segments:
            (m0, r0), (m1, r1) = seg.start, seg.end
            if m0 <= m <= m1:
                # r <= r0 + slope*(m - m0), exactly
                return (r - r0) * (m1 - m0) <= (r1 - r0) * (m - m0)
        if len(self.upper_nodes) == 1:
            return node[0] == self.upper_nodes[0][0] and r <= self.upper_nodes[0][1]
        return False


def _cross(o: Node, a: Node, b: Node) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(poly: MultiPoly, t: str = "t", q: str = "qt") -> NewtonPolygon:
    nodes: Dict[Node, MultiPoly] = {}
    for m, coeff in poly.collect(t).items():
        for r, inner in coeff.collect(q).items():
            if inner:
                nodes[(m, r)] = inner.restrict()
    tops: Dict[int, int] = {}
    for m, r in nodes:
        if m not in tops or r > tops[m]:
            tops[m] = r
    hull: List[Node] = []
    for pt in sorted(tops.items()):
        # strict left turns break concavity; collinear nodes stay on the boundary
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) > 0:
            hull.pop()
        hull.append(pt)
    segments: List[Segment] = []
    run: List[Node] = hull[:1]
    for pt in hull[1:]:
        if len(run) >= 2 and _cross(run[0], run[-1], pt) != 0:
            segments.append(Segment(tuple(run)))
            run = [run[-1]]
        run.append(pt)
    if len(run) >= 2:
        segments.append(Segment(tuple(run)))
    return NewtonPolygon(nodes, tuple(hull), tuple(segments))


def candidate_exponents(np: NewtonPolygon) -> List[Fraction]:
    """Growth exponents ``alpha = -slope``, increasing."""
    return sorted(-s.slope for s in np.upper_segments)


@dataclass(frozen=True)
class EdgeRoot:
    """A root ``C = coeff * B**b_power`` (times ``i`` on the imaginary axis)."""

    coeff: QuadRat
    b_power: int
    axis: str
    multiplicity: int

    def __str__(self):
        mono = "" if self.b_power == 0 else ("*B" if self.b_power == 1 else f"*B^{self.b_power}")
        unit = "*i" if self.axis == "imaginary" else ""
        return f"({self.coeff}){mono}{unit}"


@dataclass(frozen=True)
class EdgeSolution:
    alpha: Fraction
    edge_poly: MultiPoly
    roots: Tuple[EdgeRoot, ...] = field(default=())
    discarded: int = 0


def edge_polynomial(np: NewtonPolygon, segment_index: int) -> EdgeSolution:
    seg = np.upper_segments[segment_index]
    universe = ("C", "B")
    terms: Dict[Tuple[int, int], QuadRat] = {}
    for m, r in seg.nodes:
        coeff = np.nodes[(m, r)]
        extra = [v for v in coeff.used_variables() if v != "B"]
        if extra:
            raise PolyError(f"edge coefficient depends on {extra}")
        for e, c in coeff.extend(("B",)).terms.items():
            terms[(m, e[0])] = terms.get((m, e[0]), QuadRat()) + c
    # "we can cancel": common C power, common B power, integer content, sign
    min_c = min(e[0] for e in terms)
    min_b = min(e[1] for e in terms)
    shifted = {(e[0] - min_c, e[1] - min_b): c for e, c in terms.items() if c}
    poly = MultiPoly(universe, shifted)
    content = poly.content()
    lead_sign = max(shifted.items())[1].sign()
    poly = poly.scale(QuadRat(Fraction(lead_sign) / content))
    return EdgeSolution(alpha=-seg.slope, edge_poly=poly)


def _weight(poly: MultiPoly) -> int:
    """``w`` such that every term ``C**m * B**l`` has the same ``m*w + l``."""
    items = list(poly.terms)
    (m0, l0) = max(items)
    (m1, l1) = min(items)
    if m0 == m1:
        raise PolyError("edge polynomial is a single power of C")
    w = Fraction(l1 - l0, m0 - m1)
    if w.denominator != 1 or any(m * w + l != m0 * w + l0 for m, l in items):
        raise PolyError("edge polynomial is not weighted homogeneous with an integer weight")
    return int(w)


def _verify(poly: MultiPoly, root: EdgeRoot) -> bool:
    """Exact check through the ``C**2`` sub-equation (imaginary roots stay real).

    The polynomial is weighted homogeneous, so after ``C = D * B**w`` every term
    carries the same power of ``B`` and only the ``D`` part has to vanish.
    """
    d2 = root.coeff * root.coeff
    if root.axis == "imaginary":
        d2 = -d2
    val = QuadRat()
    for (m, _l), c in poly.terms.items():
        val = val + c * d2 ** (m // 2)
    return not val


def solve_edge(edge: EdgeSolution) -> EdgeSolution:
    poly = edge.edge_poly
    if any(m % 2 for m, _ in poly.terms):
        raise PolyError("only even edge polynomials are supported")
    deg = max(m for m, _ in poly.terms)
    if deg not in (2, 4):
        raise PolyError(f"unsupported edge polynomial degree {deg}")
    w = _weight(poly)
    # D = C / B**w satisfies a polynomial with rational coefficients; y = D**2
    ycoef = [QuadRat()] * (deg // 2 + 1)
    for (m, _l), c in poly.terms.items():
        ycoef[m // 2] = ycoef[m // 2] + c
    if deg == 2:
        y_roots = [(-ycoef[0] / ycoef[1], 1)]
    else:
        a, b, c = ycoef[2], ycoef[1], ycoef[0]
        disc = b * b - 4 * a * c
        if not disc:
            y_roots = [(-b / (2 * a), 2)]
        else:
            s = disc.sqrt()
            if s is None:
                raise PolyError("discriminant has no square root in Q(sqrt 2)")
            y_roots = [((-b + s) / (2 * a), 1), ((-b - s) / (2 * a), 1)]
    kept: List[EdgeRoot] = []
    total = 0
    for y, mult in y_roots:
        total += 2
        axis = "real" if y.sign() > 0 else "imaginary"
        r = abs(y).sqrt()
        if r is None:
            raise PolyError(f"{y} has no square root in Q(sqrt 2)")
        # of the pair +-r keep the one with positive real / imaginary part
        root = EdgeRoot(r, w, axis, mult)
        if not _verify(poly, root):
            raise PolyError(f"root {root} fails the edge polynomial")
        kept.append(root)
    kept.sort(key=lambda e: (e.axis, -e.coeff))
    return EdgeSolution(edge.alpha, poly, tuple(kept), total - len(kept))


def solve_all(np: NewtonPolygon) -> List[EdgeSolution]:
    out = [solve_edge(edge_polynomial(np, i)) for i in range(len(np.upper_segments))]
    return sorted(out, key=lambda e: e.alpha)

