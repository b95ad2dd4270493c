"""Integer points of the real enclosures, the ``pt = 0`` case, the region map
of the ``(p, q)`` quadrant and the strip scans built on top of them."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, TextIO, Tuple

from .charpoly import build_exceptional, build_qpq, build_qtilde
from .enclosure import RootEnclosure, enclosure_bounds
from .families import B_RANGE, REAL_FAMILIES, STRONGEST_THRESHOLD, all_applicable
from .oracle import axis_split_roots, even_part, sign_at, squarefree_part, sturm_isolate, univariate

OUTCOMES = ("no_integer_points", "exceptional_candidate", "integer_points", "not_applicable")


# --------------------------------------------------------- integer exclusion
@dataclass(frozen=True)
class ExclusionVerdict:
    family: str
    outcome: str
    reason: str
    candidate: Optional[int] = None
    integers: Tuple[int, ...] = ()


def integers_inside(lower: Fraction, upper: Fraction) -> range:
    """Integers ``k`` with ``lower < k < upper``."""
    return range(math.floor(lower) + 1, math.ceil(upper))


def candidate_formula(name: str, pt: int, qt: int) -> int:
    """The only integer that can sit in a ``B = 5`` real site of order ``qt**6``."""
    q, p = qt, pt
    if name == "T1":
        return 25 * q ** 6 + 10 * q ** 4 - 10 * p * q ** 3 - 2 * q ** 2 - 2 * p * q + p ** 2 + 1
    if name == "T2":
        return 25 * q ** 6 - 10 * q ** 4 - 10 * p * q ** 3 - 2 * q ** 2 + 2 * p * q + p ** 2 - 1
    raise ValueError(f"no candidate formula for family {name}")


# pt sign for which each family's B = 5 site may hold an integer
_CANDIDATE_SIGN = {"T1": 1, "T2": -1}


def _reason(name: str, pt: int, qt: int, B: int) -> str:
    if name == "T3":
        return "t3-fraction-gap"
    tag = name.lower()
    if B != 5:
        return f"{tag}-fraction-gap"
    wide_sign = _CANDIDATE_SIGN[name]
    if (1 if pt > 0 else -1) != wide_sign:
        return f"{tag}-b5-negative" if pt < 0 else f"{tag}-b5-positive"
    if 2 * qt > abs(pt):
        return f"{tag}-b5-positive-narrow" if pt > 0 else f"{tag}-b5-negative-narrow"
    return f"{tag}-b5-single-candidate"


def has_integer_point(enc: RootEnclosure) -> ExclusionVerdict:
    if enc.axis != "real":
        raise ValueError("only real-axis enclosures can hold integer roots")
    if enc.pt == 0:
        return ExclusionVerdict(enc.family, "not_applicable", "exceptional-no-integer-roots")
    lower, upper = enc.lower.to_fraction(), enc.upper.to_fraction()
    inside = tuple(integers_inside(lower, upper))
    covered = all_applicable(enc.pt, enc.qt)
    reason = _reason(enc.family, enc.pt, enc.qt, enc.B) if covered else "enclosure-floor-count"
    if not inside:
        return ExclusionVerdict(enc.family, "no_integer_points", reason)
    if (covered and enc.B == 5 and reason.endswith("single-candidate") and len(inside) == 1
            and inside[0] == candidate_formula(enc.family, enc.pt, enc.qt)):
        return ExclusionVerdict(enc.family, "exceptional_candidate", reason, inside[0], inside)
    return ExclusionVerdict(enc.family, "integer_points", reason, None, inside)


@lru_cache(maxsize=None)
def _qtilde_b5():
    return build_qtilde(5).body


def test_exceptional_candidate(pt: int, qt: int, candidate_t: int, family: str = "T1") -> Tuple[str, int]:
    """Exact value of ``Q~`` at ``B = 5``; ``("root", 0)`` or ``("not_root", value)``."""
    if family not in _CANDIDATE_SIGN:
        raise ValueError(f"candidates exist only for T1 and T2, not {family}")
    if pt == 0 or (1 if pt > 0 else -1) != _CANDIDATE_SIGN[family]:
        raise ValueError(f"{family} candidates need pt with sign {_CANDIDATE_SIGN[family]:+d}")
    value = _qtilde_b5().eval_exact({"t": candidate_t, "pt": pt, "qt": qt}).to_fraction()
    return ("root" if value == 0 else "not_root", int(value))


test_exceptional_candidate.__test__ = False  # keep pytest from collecting it


# ---------------------------------------------------------- exceptional case
@dataclass(frozen=True)
class ExceptionalVerdict:
    qt: int
    B: int
    positive_roots: int
    integer_roots: Tuple[int, ...]

    @property
    def no_integer_roots(self) -> bool:
        return not self.integer_roots


def integer_roots_of_even(coeffs) -> Tuple[int, ...]:
    """Positive integer roots of an even polynomial in ``t``."""
    s = even_part(coeffs)
    out = []
    for r in sturm_isolate(s, Fraction(1)):
        if r.hi <= 0:
            continue
        for x in integers_inside(max(r.lo, Fraction(0)), r.hi):
            t = math.isqrt(x)
            if t * t == x and sign_at(squarefree_part(s), Fraction(x)) == 0:
                out.append(t)
    return tuple(sorted(out))


def exceptional_no_integer_roots(qt: int, B: int) -> ExceptionalVerdict:
    """Integer roots in ``t`` of the transformed polynomial at ``pt = 0``.

    ``t = 0`` is excluded by the nonzero constant term; negative roots mirror
    positive ones.
    """
    if qt < 1 or B not in B_RANGE:
        raise ValueError("need qt >= 1 and B in 1..9")
    coeffs = univariate(build_exceptional(B).body.partial_eval({"qt": qt}))
    if coeffs[0] == 0:
        raise ArithmeticError("constant term vanished")  # pragma: no cover
    real, _ = axis_split_roots(coeffs)
    return ExceptionalVerdict(qt, B, len(real), integer_roots_of_even(coeffs))


# ---------------------------------------------------------------- regions
@dataclass(frozen=True)
class RegionLabel:
    flags: FrozenSet[str]
    parabola: Optional[int] = None

    @property
    def region(self) -> str:
        return next(f for f in ("linear", "nonlinear", "no_cuboid") if f in self.flags)


def parabolic_strip(p: int, q: int, B: int) -> bool:
    return STRONGEST_THRESHOLD ** 3 * abs(p - B * q ** 3) <= q ** 3


def core_strip(p: int, q: int) -> bool:
    return abs(p - 5 * q ** 3) < 2 * q


def classify_region(p: int, q: int) -> RegionLabel:
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    flags = set()
    if q < 59 * p and p < 59 * q:
        flags.add("linear")
    elif 59 * q <= p <= 9 * q ** 3:
        flags.add("nonlinear")
    else:
        flags.add("no_cuboid")
    d = p - q
    if 96 * q <= 97 * p and (d <= 0 or (97 * d <= q and 74 * d ** 3 <= q)):
        flags.add("bisector_strip")
    parabola = None
    for B in B_RANGE:
        if parabolic_strip(p, q, B):
            flags.add("parabolic_strip")
            parabola = B
            if B == 5 and core_strip(p, q):
                flags.add("parabolic_core_strip")
            break
    return RegionLabel(frozenset(flags), parabola)


def cuboid_conditions(p: int, q: int, t: int) -> bool:
    """Side conditions under which a root ``t`` yields a perfect cuboid."""
    if min(p, q, t) < 1:
        raise ValueError("p, q and t must be positive")
    if p == q:
        raise ValueError("p and q must differ")
    if math.gcd(p, q) != 1:
        raise ValueError("p and q must be coprime")
    return t > p * p and t > p * q and t > q * q and (p * p + t) * (p * q + t) > 2 * t * t


# ------------------------------------------------------------------- scans
@dataclass(frozen=True)
class Certificate:
    p: int
    q: int
    p_tilde: int
    q_tilde: int
    B: int
    family: str
    verdict: str
    theorem: str
    detail: Optional[str] = None

    @property
    def cuboid_free(self) -> bool:
        return self.verdict in ("no_integer_points", "no_integer_roots", "candidate_not_root",
                                "root_fails_cuboid_conditions")

    def to_json(self) -> str:
        doc = {"p": self.p, "q": self.q, "p_tilde": self.p_tilde, "q_tilde": self.q_tilde,
               "B": self.B, "family": self.family, "verdict": self.verdict, "theorem": self.theorem}
        if self.detail is not None:
            doc["detail"] = self.detail
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def strip_offsets(B: int, q: int) -> range:
    """All ``pt = B*q**3 - p`` of lattice points in the strip at this ``q``."""
    bound = q ** 3 // STRONGEST_THRESHOLD ** 3
    if B == 5:
        bound = min(bound, 2 * q - 1)
    return range(-bound, bound + 1)


def _direct_root_test(p: int, q: int, B: int, pt: int) -> List[Certificate]:
    coeffs = univariate(build_qpq().body.partial_eval({"p": p, "q": q}))
    roots = integer_roots_of_even(coeffs)
    out = []
    for t in roots:
        ok = math.gcd(p, q) == 1 and p != q and cuboid_conditions(p, q, t)
        out.append(Certificate(p, q, pt, q, B, "direct", "perfect_cuboid" if ok else "root_fails_cuboid_conditions",
                               "direct-root-test", f"t={t}"))
    if not out:
        out.append(Certificate(p, q, pt, q, B, "direct", "no_integer_roots", "direct-root-test"))
    return out


def certify_point(B: int, q: int, pt: int) -> List[Certificate]:
    p = B * q ** 3 - pt
    if pt == 0:
        v = exceptional_no_integer_roots(q, B)
        if v.no_integer_roots:
            return [Certificate(p, q, pt, q, B, "exceptional", "no_integer_roots", "exceptional-no-integer-roots")]
        return _direct_root_test(p, q, B, pt)
    if not all_applicable(pt, q):
        return _direct_root_test(p, q, B, pt)
    out = []
    for name in REAL_FAMILIES:
        verdict = has_integer_point(enclosure_bounds(name, pt, q, B))
        if verdict.outcome == "no_integer_points":
            out.append(Certificate(p, q, pt, q, B, name, verdict.outcome, verdict.reason))
        elif verdict.outcome == "exceptional_candidate":
            status, value = test_exceptional_candidate(pt, q, verdict.candidate, name)
            if status == "not_root":
                out.append(Certificate(p, q, pt, q, B, name, "candidate_not_root", verdict.reason,
                                       f"t={verdict.candidate}"))
            else:
                out.extend(c for c in _direct_root_test(p, q, B, pt))
        else:
            out.extend(_direct_root_test(p, q, B, pt))
    return out


def _scan_q(args) -> List[str]:
    B, q = args
    return [c.to_json() for pt in strip_offsets(B, q) for c in certify_point(B, q, pt)]


@dataclass
class ScanSummary:
    B: int
    q_from: int
    q_to: int
    points: int = 0
    certificates: int = 0
    cuboid_free_points: int = 0
    exceptions: List[str] = field(default_factory=list)

    @property
    def all_certified(self) -> bool:
        return self.points == self.cuboid_free_points


def scan_strip(B: int, q_from: int, q_to: int, sink: Optional[TextIO] = None, workers: int = 1) -> ScanSummary:
    """Certify every lattice point of the strip around ``p = B*q**3`` for
    ``q_from <= q <= q_to``; certificate lines go to ``sink`` in ``q`` order."""
    if B not in B_RANGE:
        raise ValueError(f"B must be in 1..9, got {B}")
    summary = ScanSummary(B, q_from, q_to)
    jobs = [(B, q) for q in range(max(q_from, 1), q_to + 1)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results: Iterable[List[str]] = list(pool.map(_scan_q, jobs))
    else:
        results = [_scan_q(j) for j in jobs]
    for lines in results:
        points: Dict[Tuple[int, int], bool] = {}
        for line in lines:
            doc = json.loads(line)
            cert = Certificate(**doc)
            key = (cert.p, cert.q)
            points[key] = points.get(key, True) and cert.cuboid_free
            if not cert.cuboid_free:
                summary.exceptions.append(line)
            if sink is not None:
                sink.write(line + "\n")
        summary.certificates += len(lines)
        summary.points += len(points)
        summary.cuboid_free_points += sum(points.values())
    return summary
