"""The five tracked root families along the cubic parabolas ``p = B*q**3 - pt``.

Three real roots (``T1``, ``T2`` of order ``q**6`` and ``T3`` of order
``q**4``) and two purely imaginary ones (``T4``, ``T5`` of order ``q**2``).
Each family carries its truncated expansion, the box for the rescaled
remainder ``c``, the growth threshold ``q >= K * |pt|**(1/3)`` and the
normalized leading form of its remainder equation
``L*c*B**a = K0*pt*B**b + tail``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from .multipoly import MultiPoly
from .quadrat import QuadRat

EXPANSION_VARS = ("qt", "pt", "B")
REMAINDER_VARS = ("c", "z", "pt", "B")
B_RANGE = range(1, 10)


def _laurent(terms: Dict[Tuple[int, int, int], object]) -> MultiPoly:
    return MultiPoly(EXPANSION_VARS, terms)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    axis: str
    threshold_coeff: int
    box_numerator: Fraction
    box_b_power: int
    remainder_exponent: int
    truncated: MultiPoly
    lhs_coeff: int
    lhs_b_power: int
    center_coeff: QuadRat
    center_b_power: int
    published_majorant: int

    @property
    def direction(self) -> int:
        """+1 if the remainder offset has the sign of ``pt``, else -1."""
        return self.center_coeff.sign()

    @property
    def alpha(self) -> int:
        """Growth exponent: the family's roots scale like ``qt**alpha``."""
        return self.truncated.degree("qt")

    def leading_coefficient(self, B: int) -> QuadRat:
        top = self.truncated.coefficient("qt", self.alpha)
        return top.eval_exact({"pt": 0, "B": B})

    def c_box(self, B: int) -> Fraction:
        return self.box_numerator / Fraction(B) ** self.box_b_power

    def expansion_with_remainder(self) -> MultiPoly:
        """``truncated + c / qt**k`` in the universe ``(c, qt, pt, B)``."""
        base = self.truncated.extend(("c",) + EXPANSION_VARS)
        rem = MultiPoly(("c",) + EXPANSION_VARS, {(1, -self.remainder_exponent, 0, 0): 1})
        return base + rem

    @property
    def lhs_span(self) -> Fraction:
        """Length of the left-hand side's range over the c-box, in units of |pt|*B**center_b_power."""
        return self.lhs_coeff * self.box_numerator

    @property
    def sign_change_threshold(self) -> QuadRat:
        """Largest tail majorant that still forces a sign change of the residual over the c-box."""
        k0 = abs(self.center_coeff)
        return min(k0, QuadRat(self.lhs_span) - k0)

    def center(self, pt: int, qt: int, B: int) -> QuadRat:
        return self.truncated.eval_exact({"qt": qt, "pt": pt, "B": B})

    def offset(self, pt: int, qt: int, B: int) -> Fraction:
        """Signed far endpoint offset ``direction * c_box * pt / qt**k``."""
        return self.direction * self.c_box(B) * pt / Fraction(qt) ** self.remainder_exponent

    def applicable(self, pt: int, qt: int) -> bool:
        if pt == 0 or qt <= 0:
            return False
        return qt ** 3 >= self.threshold_coeff ** 3 * abs(pt)


FAMILIES: Dict[str, FamilySpec] = {
    "T1": FamilySpec(
        name="T1", axis="real", threshold_coeff=20,
        box_numerator=Fraction(10), box_b_power=2, remainder_exponent=3,
        truncated=_laurent({
            (6, 0, 2): 1, (4, 0, 1): 2, (3, 1, 1): -2, (2, 0, 0): -2,
            (1, 1, 0): -2, (0, 2, 0): 1, (0, 0, -1): 5, (-2, 0, -2): -20,
        }),
        lhs_coeff=16, lhs_b_power=37, center_coeff=QuadRat(80), center_b_power=35,
        published_majorant=72,
    ),
    "T2": FamilySpec(
        name="T2", axis="real", threshold_coeff=20,
        box_numerator=Fraction(10), box_b_power=2, remainder_exponent=3,
        truncated=_laurent({
            (6, 0, 2): 1, (4, 0, 1): -2, (3, 1, 1): -2, (2, 0, 0): -2,
            (1, 1, 0): 2, (0, 2, 0): 1, (0, 0, -1): -5, (-2, 0, -2): -20,
        }),
        lhs_coeff=16, lhs_b_power=37, center_coeff=QuadRat(-80), center_b_power=35,
        published_majorant=72,
    ),
    "T3": FamilySpec(
        name="T3", axis="real", threshold_coeff=7,
        box_numerator=Fraction(32), box_b_power=2, remainder_exponent=3,
        truncated=_laurent({(4, 0, 1): 1, (1, 1, 0): -1, (0, 0, -1): 16}),
        lhs_coeff=2, lhs_b_power=23, center_coeff=QuadRat(32), center_b_power=21,
        published_majorant=26,
    ),
    "T4": FamilySpec(
        name="T4", axis="imaginary", threshold_coeff=15,
        box_numerator=Fraction(80), box_b_power=3, remainder_exponent=5,
        truncated=_laurent({(2, 0, 0): QuadRat(1, 1), (-2, 0, -2): QuadRat(-10, -7)}),
        lhs_coeff=16, lhs_b_power=30, center_coeff=QuadRat(-320, -224), center_b_power=27,
        published_majorant=512,
    ),
    "T5": FamilySpec(
        name="T5", axis="imaginary", threshold_coeff=3600,
        box_numerator=Fraction(1, 2), box_b_power=3, remainder_exponent=5,
        truncated=_laurent({(2, 0, 0): QuadRat(-1, 1), (-2, 0, -2): QuadRat(10, -7)}),
        lhs_coeff=16, lhs_b_power=30, center_coeff=QuadRat(320, -224), center_b_power=27,
        published_majorant=2,
    ),
}

REAL_FAMILIES = ("T1", "T2", "T3")
IMAGINARY_FAMILIES = ("T4", "T5")
# every family's growth condition is implied by the strongest one
STRONGEST_THRESHOLD = max(f.threshold_coeff for f in FAMILIES.values())


def family(name: str) -> FamilySpec:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; expected one of {sorted(FAMILIES)}") from None


def all_applicable(pt: int, qt: int) -> bool:
    return pt != 0 and qt > 0 and qt ** 3 >= STRONGEST_THRESHOLD ** 3 * abs(pt)
