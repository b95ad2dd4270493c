"""JSON rendering with exact numbers first and decimal previews second.

Rationals become ``"a/b"`` strings; elements of Q(sqrt 2) become
``{"a": "a/b", "b": "c/d", "decimal": "..."}``.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import Any

from .multipoly import MultiPoly
from .quadrat import QuadRat


def rat(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def quad(x: QuadRat, precision: int = 20) -> dict:
    x = QuadRat.coerce(x)
    return {"a": rat(x.a), "b": rat(x.b), "decimal": x.to_decimal(precision)}


def poly_text(p: MultiPoly) -> str:
    return str(p)


def to_jsonable(obj: Any, precision: int = 20) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, QuadRat):
        return quad(obj, precision)
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, MultiPoly):
        return poly_text(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name), precision) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v, precision) for v in items]
    raise TypeError(f"cannot render {type(obj).__name__} as JSON")


def dumps(obj: Any, precision: int = 20) -> str:
    return json.dumps(to_jsonable(obj, precision), indent=2, sort_keys=True)


def parse_quad(doc: dict) -> QuadRat:
    return QuadRat(Fraction(doc["a"]), Fraction(doc["b"]))


def load_schema(name: str) -> dict:
    """One of the shipped JSON schemas, by command name (or ``certificate``)."""
    from importlib import resources

    return json.loads(resources.files(__package__).joinpath("schemas", f"{name}.json").read_text("utf-8"))
