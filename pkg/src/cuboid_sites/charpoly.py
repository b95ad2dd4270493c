"""The tenth degree cuboid polynomial, its parabolic transform and the
remainder equations of the five tracked root families.

``Q_pq(t)`` lives in the variables ``(t, p, q)``.  Along a cubic parabola
``p = B*q**3 - pt`` it becomes ``Q~`` in ``(t, pt, qt, B)``.  For each family
the truncated expansion plus ``c / qt**k`` is substituted for ``t`` (for the
imaginary families ``t = i*u`` first), then ``qt = 1/z`` and denominators are
cleared; the result is normalized to ``L*c*B**a = center + tail``.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, TextIO

from .families import B_RANGE, EXPANSION_VARS, FAMILIES, REMAINDER_VARS, FamilySpec, family
from .multipoly import MultiPoly, PolyError, dumps, format_term, load_lines
from .quadrat import QuadRat

ORIGINAL_VARS = ("t", "p", "q")
TRANSFORMED_VARS = ("t", "pt", "qt", "B")
KINDS = ("original", "transformed", "exceptional")

ANCILLARY_HEADER = "# cuboid-sites remainder tails v1"


class ShapeMismatch(PolyError):
    """The cleared equation does not have the expected leading form."""


@dataclass(frozen=True)
class CharPoly:
    body: MultiPoly
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")

    def t_coefficients(self) -> Dict[int, MultiPoly]:
        return self.body.collect("t")

    def monomial_count(self) -> int:
        return len(self.body)


def _qpq_coefficients(p: MultiPoly, q: MultiPoly) -> Dict[int, MultiPoly]:
    p2, q2 = p * p, q * q
    p4, q4 = p2 * p2, q2 * q2
    p6, q6 = p4 * p2, q4 * q2
    p8, q8 = p4 * p4, q4 * q4
    one = MultiPoly.constant(1, p.variables)
    return {
        10: one,
        8: (q2.scale(2) + p2) * (q2.scale(3) - p2.scale(2)),
        6: q8 + (p2 * q6).scale(10) + (p4 * q4).scale(4) - (p6 * q2).scale(14) + p8,
        4: -(p2 * q2) * (q8 - (p2 * q6).scale(14) + (p4 * q4).scale(4) + (p6 * q2).scale(10) + p8),
        2: -(p6 * q6) * (q2 + p2.scale(2)) * (p2.scale(3) - q2.scale(2)),
        0: -(p8 * p2 * q8 * q2),
    }


def _assemble(coeffs: Dict[int, MultiPoly], universe: Sequence[str]) -> MultiPoly:
    t = MultiPoly.variable("t", universe)
    out = MultiPoly(universe)
    for m, a in coeffs.items():
        out = out + a.extend(universe) * t ** m
    return out


def build_qpq() -> CharPoly:
    """``Q_pq(t)`` in ``(t, p, q)``."""
    p = MultiPoly.variable("p", ("p", "q"))
    q = MultiPoly.variable("q", ("p", "q"))
    return CharPoly(_assemble(_qpq_coefficients(p, q), ORIGINAL_VARS), "original")


def _check_b(B: Optional[int]) -> None:
    if B is None:
        return
    if not isinstance(B, int) or isinstance(B, bool) or B not in B_RANGE:
        raise ValueError(f"B must be an integer in 1..9, got {B!r}")


@lru_cache(maxsize=None)
def _qtilde_symbolic() -> MultiPoly:
    universe = ("pt", "qt", "B")
    pt, qt, b = (MultiPoly.variable(v, universe) for v in universe)
    p = b * qt ** 3 - pt
    return _assemble(_qpq_coefficients(p, qt), TRANSFORMED_VARS)


def build_qtilde(B: Optional[int] = None) -> CharPoly:
    """``Q~`` after ``p = B*qt**3 - pt``; ``B`` stays symbolic when omitted."""
    _check_b(B)
    body = _qtilde_symbolic()
    if B is not None:
        body = body.partial_eval({"B": B})
    return CharPoly(body, "transformed")


def build_exceptional(B: Optional[int] = None) -> CharPoly:
    """The transformed polynomial on the parabola itself (``pt = 0``)."""
    _check_b(B)
    body = _qtilde_symbolic().partial_eval({"pt": 0})
    if B is not None:
        body = body.partial_eval({"B": B})
    return CharPoly(body, "exceptional")


def axis_polynomial(poly: MultiPoly, axis: str) -> MultiPoly:
    """Rewrite an even polynomial in ``t`` for one axis.

    ``real`` returns it unchanged; ``imaginary`` applies ``t = i*u`` and
    returns a real polynomial in ``u``.
    """
    if axis == "real":
        return poly
    if axis != "imaginary":
        raise ValueError(f"axis must be 'real' or 'imaginary', got {axis!r}")
    i = poly._index("t")
    terms = {}
    for e, c in poly.terms.items():
        if e[i] % 2:
            raise PolyError("odd power of t: the polynomial is not even")
        terms[e] = -c if e[i] % 4 == 2 else c
    return MultiPoly(poly.variables, terms).rename({"t": "u"})


@dataclass(frozen=True)
class RemainderEquation:
    """``lhs_coeff * c = center + tail`` for one root family."""

    family: str
    lhs_coeff: MultiPoly
    center: MultiPoly
    tail: MultiPoly
    clearing: MultiPoly
    scale: QuadRat

    @property
    def spec(self) -> FamilySpec:
        return family(self.family)

    @property
    def tail_monomials(self) -> int:
        """Monomial count with ``sqrt2`` treated as a separate symbol."""
        return self.tail.monomial_count(split_sqrt2=True)

    @property
    def tail_terms(self) -> int:
        return len(self.tail)

    @property
    def tail_sha256(self) -> str:
        return hashlib.sha256(dumps(self.tail).encode()).hexdigest()

    def residual(self) -> MultiPoly:
        c = MultiPoly.variable("c", REMAINDER_VARS)
        return self.lhs_coeff.extend(REMAINDER_VARS) * c - self.center.extend(REMAINDER_VARS) - self.tail


def _substituted(fam: FamilySpec) -> MultiPoly:
    body = axis_polynomial(build_qtilde().body, fam.axis)
    var = "u" if fam.axis == "imaginary" else "t"
    poly = body.substitute(var, fam.expansion_with_remainder())
    poly = poly.substitute("qt", MultiPoly(("z",), {(-1,): 1}))
    return poly.extend(REMAINDER_VARS)


@lru_cache(maxsize=None)
def derive_remainder_equation(name: str) -> RemainderEquation:
    fam = family(name)
    cleared, clearing = _substituted(fam).clear_denominators()

    lhs_target = MultiPoly(("B",), {(fam.lhs_b_power,): fam.lhs_coeff})
    c_z0 = cleared.coefficient("c", 1).coefficient("z", 0).extend(("pt", "B")).coefficient("pt", 0)
    if len(c_z0) != 1:
        raise ShapeMismatch(f"{name}: c*z^0 coefficient {c_z0} is not a monomial in B")
    (raw_exp,), raw_coeff = next(iter(c_z0.terms.items()))
    scale = QuadRat(fam.lhs_coeff) / raw_coeff
    b_shift = fam.lhs_b_power - raw_exp
    if b_shift < 0:
        raise ShapeMismatch(f"{name}: leading B power {raw_exp} exceeds {fam.lhs_b_power}")
    shift = MultiPoly(REMAINDER_VARS, {(0, 0, 0, b_shift): scale})
    normalized = cleared * shift

    lhs = lhs_target
    center = MultiPoly(("pt", "B"), {(1, fam.center_b_power): fam.center_coeff})
    c = MultiPoly.variable("c", REMAINDER_VARS)
    leading = lhs.extend(REMAINDER_VARS) * c - center.extend(REMAINDER_VARS)
    z0 = normalized.coefficient("z", 0)
    if z0 != leading.coefficient("z", 0):
        raise ShapeMismatch(f"{name}: z^0 part {z0} differs from leading form {leading.coefficient('z', 0)}")
    tail = leading - normalized
    return RemainderEquation(
        family=name,
        lhs_coeff=lhs,
        center=center,
        tail=tail,
        clearing=clearing * MultiPoly(REMAINDER_VARS, {(0, 0, 0, b_shift): 1}),
        scale=scale,
    )


def derive_all() -> List[RemainderEquation]:
    return [derive_remainder_equation(n) for n in FAMILIES]


def _qpq_value(p: Fraction, q: Fraction, t_squared: QuadRat) -> QuadRat:
    """``Q_pq`` evaluated through ``x = t**2`` so imaginary ``t`` stays real."""
    x = t_squared
    coeffs = {
        k // 2: v.eval_exact({"p": p, "q": q})
        for k, v in _qpq_coefficients(
            MultiPoly.variable("p", ("p", "q")), MultiPoly.variable("q", ("p", "q"))).items()
    }
    total = QuadRat()
    for k in range(5, -1, -1):
        total = total * x + coeffs.get(k, QuadRat())
    return total


def identity_residual(eq: RemainderEquation, c: Fraction, qt: Fraction, pt: Fraction, B: int) -> QuadRat:
    """Difference between the normalized equation and a direct evaluation of
    ``Q_pq`` at the substituted point; zero when the derivation is right."""
    fam = eq.spec
    t_val = fam.truncated.eval_exact({"qt": qt, "pt": pt, "B": B}) + QuadRat(c) / QuadRat(qt) ** fam.remainder_exponent
    p = B * qt ** 3 - pt
    t_sq = t_val * t_val
    if fam.axis == "imaginary":
        t_sq = -t_sq
    direct = _qpq_value(Fraction(p), Fraction(qt), t_sq)
    point = {"c": c, "z": 1 / Fraction(qt), "pt": pt, "B": B}
    factor = eq.clearing.eval_exact(point) * eq.scale
    return direct * factor - eq.residual().eval_exact(point)


def check_identity(eq: RemainderEquation, samples: int = 8, seed: int = 0) -> bool:
    rng = random.Random(seed)
    for _ in range(samples):
        c = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        qt = Fraction(rng.randint(1, 40), rng.randint(1, 5))
        pt = Fraction(rng.randint(-30, 30), rng.randint(1, 4))
        B = rng.randint(1, 9)
        if identity_residual(eq, c, qt, pt, B):
            return False
    return True


# ------------------------------------------------------------- ancillary file
def _split_lines(poly: MultiPoly) -> Iterable[str]:
    """Canonical lines with rational and ``sqrt2`` parts on separate lines."""
    yield "VARS " + " ".join(poly.variables)
    for e, coeff in poly.sorted_terms():
        if coeff.a:
            yield format_term(poly.variables, e, QuadRat(coeff.a))
        if coeff.b:
            yield format_term(poly.variables, e, QuadRat(0, coeff.b))


def export_ancillary(eqs: Sequence[RemainderEquation], out: TextIO) -> None:
    out.write(ANCILLARY_HEADER + "\n")
    for eq in eqs:
        out.write(f"FAMILY {eq.family}\n")
        for label, poly in (("LHS", eq.lhs_coeff), ("CENTER", eq.center)):
            out.write(f"{label} {len(poly)}\n")
            for line in _split_lines(poly):
                out.write(line + "\n")
        out.write(f"TAIL {eq.tail_monomials}\n")
        for line in _split_lines(eq.tail):
            out.write(line + "\n")
        out.write("END\n")


def load_ancillary(lines: Iterable[str]) -> Dict[str, Dict[str, MultiPoly]]:
    """Inverse of :func:`export_ancillary`: ``{family: {lhs, center, tail}}``."""
    it = iter(line.rstrip("\n") for line in lines)
    header = next(it, None)
    if header != ANCILLARY_HEADER:
        raise PolyError(f"unexpected ancillary header {header!r}")
    result: Dict[str, Dict[str, MultiPoly]] = {}
    current: Optional[Dict[str, MultiPoly]] = None
    section: Optional[str] = None
    buf: List[str] = []

    def flush():
        if current is not None and section is not None:
            current[section] = load_lines(buf)

    for line in it:
        if line.startswith("FAMILY "):
            current = result.setdefault(line.split()[1], {})
            section, buf = None, []
        elif line.split(" ", 1)[0] in ("LHS", "CENTER", "TAIL"):
            flush()
            section, buf = line.split()[0].lower(), []
        elif line == "END":
            flush()
            current, section, buf = None, None, []
        elif line:
            buf.append(line)
    return result
