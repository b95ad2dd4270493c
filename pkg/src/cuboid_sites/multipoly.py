"""Sparse multivariate (Laurent) polynomials over Q(sqrt 2).

A :class:`MultiPoly` is an ordered tuple of variable names plus a map from
exponent tuples to nonzero :class:`~cuboid_sites.quadrat.QuadRat`
coefficients.  Negative exponents are allowed so that intermediate
expansions such as ``5/B + c/q**3`` can be represented before
:meth:`MultiPoly.clear_denominators` turns them into true polynomials.

Binary operations silently extend both operands to the union of their
variable universes (missing variables get exponent zero).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .quadrat import QuadRat, Scalar

Exponents = Tuple[int, ...]

# exponents are machine-word sized; anything beyond is certainly a bug
MAX_EXPONENT = 2 ** 31 - 1


class PolyError(ValueError):
    """Raised for malformed polynomial operations."""


class UnknownVariableError(PolyError):
    pass


def _check_exponent(e: int) -> None:
    if e > MAX_EXPONENT or e < -MAX_EXPONENT:
        raise OverflowError(f"exponent {e} exceeds the machine-word bound")


class MultiPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str] = (), terms: Optional[Mapping[Exponents, Scalar]] = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise PolyError(f"duplicate variable names in {variables}")
        n = len(variables)
        clean: Dict[Exponents, QuadRat] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise PolyError(f"exponent vector {exps} does not match variables {variables}")
            for e in exps:
                _check_exponent(e)
            c = QuadRat.coerce(coeff)
            if c:
                clean[exps] = clean.get(exps, QuadRat()) + c
                if not clean[exps]:
                    del clean[exps]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _make(cls, variables: Tuple[str, ...], terms: Dict[Exponents, QuadRat]) -> "MultiPoly":
        obj = object.__new__(cls)
        object.__setattr__(obj, "variables", variables)
        object.__setattr__(obj, "terms", terms)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    def __reduce__(self):
        return (MultiPoly._make, (self.variables, self.terms))

    # -------------------------------------------------------- constructors
    @classmethod
    def constant(cls, value: Scalar, variables: Sequence[str] = ()) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, name: str, variables: Optional[Sequence[str]] = None) -> "MultiPoly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            variables = variables + (name,)
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls._make(variables, {exps: QuadRat(1)})

    @classmethod
    def monomial(cls, coeff: Scalar, variables: Sequence[str], **powers: int) -> "MultiPoly":
        variables = tuple(variables)
        unknown = set(powers) - set(variables)
        if unknown:
            raise UnknownVariableError(f"unknown variables {sorted(unknown)}")
        exps = tuple(powers.get(v, 0) for v in variables)
        return cls(variables, {exps: coeff})

    # ------------------------------------------------------------ universe
    def extend(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express in a universe containing every current variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = [v for v in self.variables if v not in variables]
        if missing:
            # dropping a variable is only legal when it never occurs
            for v in missing:
                if self.degree(v) != 0 or self.min_degree(v) != 0:
                    raise PolyError(f"cannot drop occurring variable {v!r}")
        pos = [self.variables.index(v) if v in self.variables else -1 for v in variables]
        terms = {
            tuple(e[i] if i >= 0 else 0 for i in pos): c for e, c in self.terms.items()
        }
        return MultiPoly._make(variables, terms)

    def union_variables(self, other: "MultiPoly") -> Tuple[str, ...]:
        if other.variables == self.variables:
            return self.variables
        return self.variables + tuple(v for v in other.variables if v not in self.variables)

    def _aligned(self, other) -> Tuple["MultiPoly", "MultiPoly"]:
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.variables)
        if other.variables == self.variables:
            return self, other
        u = self.union_variables(other)
        return self.extend(u), other.extend(u)

    def used_variables(self) -> Tuple[str, ...]:
        used = [False] * len(self.variables)
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def restrict(self) -> "MultiPoly":
        """Drop variables that never occur."""
        return self.extend(self.used_variables())

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        names = tuple(mapping.get(v, v) for v in self.variables)
        return MultiPoly(names, self.terms)

    # ---------------------------------------------------------- arithmetic
    def __add__(self, other):
        if isinstance(other, (int, Fraction, QuadRat)) or isinstance(other, MultiPoly):
            a, b = self._aligned(other)
        else:
            return NotImplemented
        terms = dict(a.terms)
        for e, c in b.terms.items():
            prev = terms.get(e)
            if prev is None:
                terms[e] = c
            else:
                s = prev + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return MultiPoly._make(a.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._make(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QuadRat)):
            return self + (-QuadRat.coerce(other))
        if isinstance(other, MultiPoly):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: Scalar) -> "MultiPoly":
        k = QuadRat.coerce(k)
        if not k:
            return MultiPoly._make(self.variables, {})
        return MultiPoly._make(self.variables, {e: c * k for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadRat)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._aligned(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: Dict[Exponents, QuadRat] = {}
        get = out.get
        n = len(a.variables)
        for e2, c2 in b.terms.items():
            if n == 4:
                x0, x1, x2, x3 = e2
                for e1, c1 in a.terms.items():
                    e = (e1[0] + x0, e1[1] + x1, e1[2] + x2, e1[3] + x3)
                    prev = get(e)
                    out[e] = c1 * c2 if prev is None else prev + c1 * c2
            else:
                for e1, c1 in a.terms.items():
                    e = tuple(i + j for i, j in zip(e1, e2))
                    prev = get(e)
                    out[e] = c1 * c2 if prev is None else prev + c1 * c2
        return MultiPoly._make(a.variables, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self.terms) != 1:
                raise PolyError("negative powers are only defined for monomials")
            (e, c), = self.terms.items()
            return MultiPoly._make(self.variables, {tuple(n * x for x in e): c ** n})
        _check_exponent(n)
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadRat)):
            other = MultiPoly.constant(other, self.variables)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    __hash__ = None  # type: ignore[assignment]

    # ----------------------------------------------------------- inspection
    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[Exponents, QuadRat]]:
        return iter(self.sorted_terms())

    def monomial_count(self, split_sqrt2: bool = False) -> int:
        """Number of monomials.

        With ``split_sqrt2`` a coefficient ``a + b*sqrt2`` with both parts
        nonzero counts twice, as if ``sqrt2`` were an extra symbol.
        """
        if not split_sqrt2:
            return len(self.terms)
        return sum((c.a != 0) + (c.b != 0) for c in self.terms.values())

    def sorted_terms(self) -> List[Tuple[Exponents, QuadRat]]:
        return sorted(self.terms.items(), key=lambda item: item[0], reverse=True)

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UnknownVariableError(f"variable {var!r} not in {self.variables}") from None

    def degree(self, var: str) -> int:
        if var not in self.variables:
            return 0
        i = self._index(var)
        return max((e[i] for e in self.terms), default=0)

    def min_degree(self, var: str) -> int:
        if var not in self.variables:
            return 0
        i = self._index(var)
        return min((e[i] for e in self.terms), default=0)

    @property
    def has_negative_exponents(self) -> bool:
        return any(x < 0 for e in self.terms for x in e)

    @property
    def is_rational(self) -> bool:
        return all(c.is_rational for c in self.terms.values())

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> QuadRat:
        if not self.is_constant():
            raise PolyError(f"{self} is not constant")
        return next(iter(self.terms.values()), QuadRat())

    def collect(self, var: str) -> Dict[int, "MultiPoly"]:
        """Split as ``sum_k var**k * R_k``; the ``R_k`` no longer mention ``var``."""
        i = self._index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        groups: Dict[int, Dict[Exponents, QuadRat]] = {}
        for e, c in self.terms.items():
            groups.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: MultiPoly._make(rest, g) for k, g in groups.items()}

    def coefficient(self, var: str, k: int) -> "MultiPoly":
        i = self._index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        return MultiPoly._make(rest, {e[:i] + e[i + 1:]: c for e, c in self.terms.items() if e[i] == k})

    def univariate_coefficients(self, var: str) -> List[QuadRat]:
        """Dense ascending coefficient list of a polynomial in ``var`` alone."""
        other = [v for v in self.used_variables() if v != var]
        if other:
            raise PolyError(f"polynomial also depends on {other}")
        if self.min_degree(var) < 0:
            raise PolyError("negative powers present")
        i = self._index(var) if var in self.variables else None
        if i is None:
            return [self.constant_value()] if self.terms else []
        out = [QuadRat()] * (self.degree(var) + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    # ------------------------------------------------------- substitution
    def substitute(self, var: str, replacement) -> "MultiPoly":
        """Replace ``var`` by ``replacement`` and expand exactly.

        Negative powers of ``var`` are supported only when the replacement is
        a single monomial (so that it is invertible).
        """
        i = self._index(var)
        if not isinstance(replacement, MultiPoly):
            replacement = MultiPoly.constant(replacement)
        base_vars = self.variables[:i] + self.variables[i + 1:]
        universe = base_vars + tuple(v for v in replacement.variables if v not in base_vars)
        rep = replacement.extend(universe)
        groups = self.collect(var)
        if not groups:
            return MultiPoly._make(universe, {})

        if len(rep.terms) == 1:
            (re, rc), = rep.terms.items()
            out = MultiPoly._make(universe, {})
            for k, r in groups.items():
                shift = tuple(k * x for x in re)
                rk = r.extend(universe)
                ck = rc ** k
                out = out + MultiPoly._make(
                    universe, {tuple(a + b for a, b in zip(e, shift)): c * ck for e, c in rk.terms.items()})
            return out

        lo = min(groups)
        if lo < 0:
            raise PolyError("negative powers of the substituted variable need a monomial replacement")
        hi = max(groups)
        acc = MultiPoly._make(universe, {})
        for k in range(hi, -1, -1):
            acc = acc * rep
            if k in groups:
                acc = acc + groups[k].extend(universe)
        return acc

    def substitute_many(self, mapping: Mapping[str, object]) -> "MultiPoly":
        out = self
        for var, rep in mapping.items():
            out = out.substitute(var, rep)
        return out

    def eval_exact(self, assignment: Mapping[str, Scalar]) -> QuadRat:
        """Exact value at a point; every occurring variable must be assigned."""
        missing = [v for v in self.used_variables() if v not in assignment]
        if missing:
            raise UnknownVariableError(f"missing assignment for {missing}")
        vals = [QuadRat.coerce(assignment.get(v, 0)) for v in self.variables]
        cache: Dict[Tuple[int, int], QuadRat] = {}
        total = QuadRat()
        for e, c in self.terms.items():
            term = c
            for i, x in enumerate(e):
                if x:
                    key = (i, x)
                    p = cache.get(key)
                    if p is None:
                        p = cache[key] = vals[i] ** x
                    term = term * p
            total = total + term
        return total

    def partial_eval(self, assignment: Mapping[str, Scalar]) -> "MultiPoly":
        """Substitute numbers for a subset of the variables."""
        out = self
        for var, value in assignment.items():
            if var in out.variables:
                out = out.substitute(var, MultiPoly.constant(value))
        return out

    def clear_denominators(self) -> Tuple["MultiPoly", "MultiPoly"]:
        """Return ``(P, M)`` with ``self * M == P``, ``P`` free of negative
        exponents and ``M`` the smallest monomial achieving that."""
        n = len(self.variables)
        shift = [0] * n
        for e in self.terms:
            for i, x in enumerate(e):
                if x < shift[i]:
                    shift[i] = x
        m_exps = tuple(-s for s in shift)
        monomial = MultiPoly._make(self.variables, {m_exps: QuadRat(1)})
        if not any(m_exps):
            return self, monomial
        terms = {tuple(a + b for a, b in zip(e, m_exps)): c for e, c in self.terms.items()}
        return MultiPoly._make(self.variables, terms), monomial

    def content(self) -> Fraction:
        """Positive rational gcd of all coefficient parts (1 for the zero polynomial)."""
        from math import gcd

        num = 0
        den = 1
        for c in self.terms.values():
            for part in (c.a, c.b):
                if part:
                    num = gcd(num, part.numerator)
                    den = den * part.denominator // gcd(den, part.denominator)
        if num == 0:
            return Fraction(1)
        return Fraction(num, den)

    # -------------------------------------------------------------- display
    def __repr__(self):
        return f"MultiPoly({self.variables!r}, {len(self.terms)} terms)"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (v if x == 1 else f"{v}^{x}") for v, x in zip(self.variables, e) if x)
            if c.is_rational:
                coeff = c.a
                if mono and abs(coeff) == 1:
                    body = mono
                else:
                    body = f"{abs(coeff)}*{mono}" if mono else str(abs(coeff))
                neg = coeff < 0
            else:
                body = f"({c})*{mono}" if mono else f"({c})"
                neg = False
            pieces.append(("- " if neg else "+ ") + body)
        s = " ".join(pieces)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]


def poly_arith(lhs: MultiPoly, rhs: MultiPoly, kind: str) -> MultiPoly:
    if kind == "add":
        return lhs + rhs
    if kind == "sub":
        return lhs - rhs
    if kind == "mul":
        return lhs * rhs
    raise ValueError(f"unknown operation {kind!r}")


def variables(names: str, universe: Optional[Sequence[str]] = None) -> Tuple[MultiPoly, ...]:
    """``t, q = variables("t q")`` convenience constructor sharing one universe."""
    parts = tuple(names.split())
    universe = tuple(universe) if universe is not None else parts
    return tuple(MultiPoly.variable(v, universe) for v in parts)


# ------------------------------------------------------------ serialization
def _fmt_rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_term(variables: Sequence[str], exps: Exponents, coeff: QuadRat) -> str:
    mono = " ".join(f"{v}^{x}" for v, x in zip(variables, exps))
    return f"RAT {_fmt_rat(coeff.a)} SQRT2 {_fmt_rat(coeff.b)} : {mono}".rstrip()


def dump_lines(poly: MultiPoly) -> Iterator[str]:
    """Canonical text: a VARS header, then one monomial per line, lexicographic."""
    yield "VARS " + " ".join(poly.variables)
    for e, c in poly.sorted_terms():
        yield format_term(poly.variables, e, c)


def dumps(poly: MultiPoly) -> str:
    return "\n".join(dump_lines(poly)) + "\n"


def parse_term(line: str) -> Tuple[List[str], Exponents, QuadRat]:
    head, _, mono = line.partition(":")
    parts = head.split()
    if len(parts) != 4 or parts[0] != "RAT" or parts[2] != "SQRT2":
        raise PolyError(f"malformed monomial line: {line!r}")
    coeff = QuadRat(Fraction(parts[1]), Fraction(parts[3]))
    names, exps = [], []
    for tok in mono.split():
        name, _, power = tok.partition("^")
        names.append(name)
        exps.append(int(power))
    return names, tuple(exps), coeff


def load_lines(lines: Iterable[str]) -> MultiPoly:
    it = iter(line.strip() for line in lines)
    header = next(it, "")
    if not header.startswith("VARS"):
        raise PolyError("missing VARS header")
    names = tuple(header.split()[1:])
    terms: Dict[Exponents, QuadRat] = {}
    for line in it:
        if not line:
            continue
        vs, exps, coeff = parse_term(line)
        if tuple(vs) != names:
            raise PolyError(f"monomial variables {vs} disagree with header {names}")
        terms[exps] = terms.get(exps, QuadRat()) + coeff
    return MultiPoly(names, terms)


def loads(text: str) -> MultiPoly:
    return load_lines(text.splitlines())
