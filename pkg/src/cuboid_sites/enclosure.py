"""Exact root enclosures for the five families and the certificates behind them.

An enclosure is ``center`` to ``center + offset`` where ``center`` is the
truncated expansion and ``offset = direction * c_box * pt / qt**k``.  It is
backed by two certificates:

* a majorant ``M(B)`` with ``|tail| <= M(B) * |pt| * B**b`` on the c-box;
* a sign change of the remainder equation over the c-box, which follows once
  ``|K0| - M > 0`` and ``|K0| + M < span``.

Disjointness of the five enclosures is checked by exact endpoint comparison.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .charpoly import RemainderEquation, derive_remainder_equation
from .families import B_RANGE, FAMILIES, STRONGEST_THRESHOLD, FamilySpec, all_applicable, family
from .quadrat import SQRT2, QuadRat

VERDICTS = ("certified", "certified_above_paper_constant", "failed")


# ----------------------------------------------------------------- enclosures
def applicability(name: str, pt: int, qt: int, B: int) -> bool:
    _check_point(pt, qt, B)
    return family(name).applicable(pt, qt)


def _check_point(pt, qt, B) -> None:
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (pt, qt, B)):
        raise TypeError("pt, qt and B must be integers")
    if qt < 1:
        raise ValueError("qt must be a positive integer")
    if B not in B_RANGE:
        raise ValueError(f"B must be in 1..9, got {B}")


class NotApplicable(ValueError):
    """The growth condition of a family fails at the requested point."""


@dataclass(frozen=True)
class RootEnclosure:
    family: str
    lower: QuadRat
    upper: QuadRat
    axis: str
    pt: int
    qt: int
    B: int
    center: QuadRat

    @property
    def width(self) -> QuadRat:
        return self.upper - self.lower

    def contains(self, value) -> bool:
        return self.lower < value < self.upper


def enclosure_bounds(name: str, pt: int, qt: int, B: int) -> RootEnclosure:
    if not applicability(name, pt, qt, B):
        raise NotApplicable(f"{name} does not apply at pt={pt}, qt={qt}")
    fam = family(name)
    center = fam.center(pt, qt, B)
    far = center + fam.offset(pt, qt, B)
    lower, upper = (center, far) if far > center else (far, center)
    return RootEnclosure(name, lower, upper, fam.axis, pt, qt, B, center)


def all_enclosures(pt: int, qt: int, B: int) -> Dict[str, RootEnclosure]:
    return {name: enclosure_bounds(name, pt, qt, B) for name in FAMILIES}


# ------------------------------------------------------------- certificates
@dataclass(frozen=True)
class CertificationReport:
    kind: str
    subject: str
    B: int
    witnessed_constant: QuadRat
    threshold: QuadRat
    verdict: str
    paper_constant: Optional[QuadRat] = None
    pt_sign: Optional[int] = None
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict != "failed"


@dataclass(frozen=True)
class Majorant:
    value: QuadRat
    max_pt_exponent: Fraction
    violations: Tuple[Tuple[int, ...], ...]


def tail_majorant(eq: RemainderEquation, B: int) -> Majorant:
    """Monomial-wise bound of ``|tail| / (|pt| * B**b)`` over the c-box.

    Uses ``|c| <= c_box * |pt|``, ``z = 1/qt <= |pt|**(-1/3) / K`` and
    ``|pt| >= 1``; a monomial ``c**i z**j pt**k`` then scales like
    ``|pt|**(i + k - j/3)``, which must not exceed one.
    """
    fam = eq.spec
    box = fam.c_box(B)
    inv_k = Fraction(1, fam.threshold_coeff)
    total = QuadRat()
    worst = None
    bad = []
    for (i, j, k, l), coeff in eq.tail.terms.items():
        p_exp = Fraction(3 * (i + k) - j, 3)
        worst = p_exp if worst is None or p_exp > worst else worst
        if p_exp > 1:
            bad.append((i, j, k, l))
            continue
        total = total + abs(coeff) * (box ** i * inv_k ** j * Fraction(B) ** (l - fam.center_b_power))
    return Majorant(total, worst if worst is not None else Fraction(0), tuple(sorted(bad)))


def certify_majorant(eq: RemainderEquation, B: int, pt_sign: int = 1) -> CertificationReport:
    fam = eq.spec
    maj = tail_majorant(eq, B)
    threshold = fam.sign_change_threshold
    paper = QuadRat(fam.published_majorant)
    if maj.violations or maj.value >= threshold:
        verdict = "failed"
    elif maj.value <= paper:
        verdict = "certified"
    else:
        verdict = "certified_above_paper_constant"
    return CertificationReport(
        kind="majorant", subject=fam.name, B=B, witnessed_constant=maj.value,
        threshold=threshold, verdict=verdict, paper_constant=paper, pt_sign=pt_sign,
        details={"max_pt_exponent": maj.max_pt_exponent, "violations": len(maj.violations),
                 "tail_monomials": eq.tail_monomials},
    )


def certify_sign_change(eq: RemainderEquation, B: int, pt: int, qt: Optional[int] = None) -> CertificationReport:
    """Show that ``L*c*B**a - (K0*pt*B**b + tail)`` changes sign on the c-box.

    The range argument works in units of ``|pt| * B**b``: the left side sweeps
    ``0 .. span`` while the right side stays within ``|K0| +- M``.  When ``qt``
    is supplied the residual is also evaluated exactly at both box endpoints.
    """
    fam = eq.spec
    if pt == 0:
        raise NotApplicable("pt = 0 has no remainder box")
    if qt is not None and not fam.applicable(pt, qt):
        raise NotApplicable(f"{fam.name} does not apply at pt={pt}, qt={qt}")
    maj = tail_majorant(eq, B)
    k0 = abs(fam.center_coeff)
    span = QuadRat(fam.lhs_span)
    rhs_low, rhs_high = k0 - maj.value, k0 + maj.value
    low_ok = rhs_low > 0
    high_ok = rhs_high < span
    side = fam.direction * (1 if pt > 0 else -1)
    details: Dict[str, object] = {
        "lhs_range": [min(QuadRat(), span * side), max(QuadRat(), span * side)],
        "rhs_range": sorted([rhs_low * side, rhs_high * side]),
        "rhs_above_zero": low_ok,
        "rhs_below_span": high_ok,
    }
    ok = low_ok and high_ok and not maj.violations
    if qt is not None:
        point = {"z": Fraction(1, qt), "pt": pt, "B": B}
        res = eq.residual()
        at_zero = res.eval_exact(dict(point, c=0))
        at_far = res.eval_exact(dict(point, c=fam.direction * fam.c_box(B) * pt))
        details["residual_sign_at_box_ends"] = [at_zero.sign(), at_far.sign()]
        ok = ok and at_zero.sign() * at_far.sign() < 0
    return CertificationReport(
        kind="sign_change", subject=fam.name, B=B, witnessed_constant=maj.value,
        threshold=fam.sign_change_threshold, verdict="certified" if ok else "failed",
        paper_constant=QuadRat(fam.published_majorant), pt_sign=1 if pt > 0 else -1, details=details,
    )


# ---------------------------------------------------------------- disjointness
ORDERINGS = (
    ("T3.lower > 0", None, "T3"),
    ("T3.upper < T2.lower", "T3", "T2"),
    ("T2.upper < T1.lower", "T2", "T1"),
    ("T5.lower > 0", None, "T5"),
    ("T5.upper < T4.lower", "T5", "T4"),
)


def disjointness(pt: int, qt: int, B: int) -> CertificationReport:
    _check_point(pt, qt, B)
    if not all_applicable(pt, qt):
        raise NotApplicable(f"qt**3 >= {STRONGEST_THRESHOLD}**3 * |pt| fails at pt={pt}, qt={qt}")
    encs = all_enclosures(pt, qt, B)
    gaps: Dict[str, QuadRat] = {}
    for label, below, above in ORDERINGS:
        floor = encs[below].upper if below else QuadRat()
        gaps[label] = encs[above].lower - floor
    smallest = min(gaps.values())
    failed = [label for label, g in gaps.items() if g.sign() <= 0]
    return CertificationReport(
        kind="disjointness", subject="T1..T5", B=B, witnessed_constant=smallest,
        threshold=QuadRat(), verdict="failed" if failed else "certified",
        pt_sign=1 if pt > 0 else -1,
        details={"pt": pt, "qt": qt, "gaps": gaps, "overlapping": failed},
    )


def intervals_overlap(a: RootEnclosure, b: RootEnclosure) -> bool:
    """Plain interval intersection test, independent of the ordering table."""
    return not (a.upper <= b.lower or b.upper <= a.lower)


@dataclass(frozen=True)
class WorstCaseBound:
    name: str
    description: str
    value: QuadRat
    published: float

    @property
    def relative_error(self) -> float:
        return abs(float(self.value) - self.published) / self.published


def worst_case_gap_bounds(q: int = STRONGEST_THRESHOLD) -> List[WorstCaseBound]:
    """Lower bounds on every gap, evaluated at the extreme ``qt = q``,
    ``|pt| / qt**3 = 1 / q**3`` and ``B = 1`` (or ``B = 9`` for ``1/B`` terms)."""
    Q = Fraction(q)
    one = QuadRat(1)
    s = SQRT2
    t3_center = Q ** 4 * (1 - 1 / Q ** 3) + Fraction(16, 9)
    real_gap = 1 - 3 / Q ** 2 - 2 / Q ** 3 - 2 / Q ** 4 - 3 / Q ** 5 - 21 / Q ** 6 - 20 / Q ** 8
    t1_gap = 1 - 1 / Q ** 3 - Fraction(5, 2) / Q ** 4
    t5 = (s - one) * Q ** 2
    rows = [
        ("t3-lower-with-offset", "lower end of T3 with the remainder offset",
         QuadRat(t3_center - 32 / Q ** 3), 1.68e14),
        ("t3-lower-center", "lower end of T3 at the expansion center",
         QuadRat(t3_center), 1.67e14),
        ("t2-above-t3-inner", "gap between T3 and T2, centers on the near sides",
         QuadRat(Q ** 6 * real_gap), 2.18e21),
        ("t2-above-t3-outer", "gap between T3 and T2, offsets on the near sides",
         QuadRat(Q ** 6 * (real_gap - 42 / Q ** 9)), 2.17e21),
        ("t1-above-t2-outer", "gap between T2 and T1 with both offsets",
         QuadRat(4 * Q ** 4 * (t1_gap - 5 / Q ** 7)), 6.71e14),
        ("t1-above-t2-inner", "gap between T2 and T1 at the centers",
         QuadRat(4 * Q ** 4 * t1_gap), 6.71e14),
        ("t5-lower-with-offset", "lower end of T5 with the remainder offset",
         t5 * (one - (3 * s - 4) / Q ** 4 - (s + one) / (2 * Q ** 7)), 5.31e6),
        ("t5-lower-center", "lower end of T5 at the expansion center",
         t5 * (one - (3 * s - 4) / Q ** 4), 5.31e6),
        ("t4-above-t5-center", "gap between T5 and T4 at the centers",
         QuadRat(2 * Q ** 2 * (1 - 10 / Q ** 4)), 2.59e7),
        ("t4-above-t5-outer", "gap between T5 and T4 with both offsets",
         QuadRat(2 * Q ** 2 * (1 - 10 / Q ** 4 - Fraction(81, 2) / Q ** 7)), 2.59e7),
    ]
    return [WorstCaseBound(*r) for r in rows]


# ------------------------------------------------------------------ batch run
def _certify_one(args) -> List[CertificationReport]:
    name, B = args
    eq = derive_remainder_equation(name)
    fam = eq.spec
    out = []
    for sign in (-1, 1):
        out.append(certify_majorant(eq, B, sign))
        out.append(certify_sign_change(eq, B, sign, fam.threshold_coeff))
    return out


def certify_all(families: Sequence[str] = tuple(FAMILIES), bs: Sequence[int] = tuple(B_RANGE),
                workers: int = 1) -> List[CertificationReport]:
    """Majorant and sign-change reports for every (family, B, sign of pt)."""
    jobs = [(n, b) for n in families for b in bs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_certify_one, jobs))
    else:
        chunks = [_certify_one(j) for j in jobs]
    return [r for chunk in chunks for r in chunk]


def family_spec(name: str) -> FamilySpec:
    return family(name)
