"""Command-line front end.

Exit codes: 0 success, 1 a certification did not go through, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .charpoly import build_exceptional, build_qpq, build_qtilde, check_identity, derive_remainder_equation, export_ancillary
from .enclosure import NotApplicable, certify_all, disjointness, enclosure_bounds
from .families import B_RANGE, FAMILIES
from .jsonio import quad, rat, to_jsonable
from .multipoly import dump_lines
from .newton import candidate_exponents, newton_polygon, solve_all
from .oracle import axis_split_roots, refine_axis_root, univariate
from .quadrat import QuadRat
from .sieve import classify_region, scan_strip

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _b_value(text: str) -> int:
    v = int(text)
    if v not in B_RANGE:
        raise argparse.ArgumentTypeError("B must be in 1..9")
    return v


def _width(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if v <= 0:
        raise argparse.ArgumentTypeError("width must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cuboid-sites", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv", "svg", "text"), default="json")
    common.add_argument("--precision", type=_positive, default=20, help="digits of decimal previews")
    common.add_argument("--out", help="output file (stdout when omitted)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("poly", parents=[common], help="build the cuboid polynomial or its transform")
    p.add_argument("--kind", choices=("original", "transformed", "exceptional"), default="transformed")
    p.add_argument("--B", type=_b_value)

    p = sub.add_parser("derive", parents=[common], help="derive the remainder equations")
    p.add_argument("--family", choices=sorted(FAMILIES), action="append")
    p.add_argument("--ancillary", help="write all tails in canonical text form to this file")

    p = sub.add_parser("newton", parents=[common], help="Newton polygon, exponents and edge roots")
    p.add_argument("--svg", help="also render the polygon to this SVG file")

    p = sub.add_parser("enclose", parents=[common], help="exact enclosures of the five roots")
    _point_args(p)

    p = sub.add_parser("certify", parents=[common], help="majorant and sign-change certificates")
    p.add_argument("--all", action="store_true", help="every family and every B in 1..9")
    p.add_argument("--family", choices=sorted(FAMILIES), action="append")
    p.add_argument("--B", type=_b_value, action="append")
    p.add_argument("--workers", type=_positive, default=1)

    p = sub.add_parser("roots", parents=[common], help="oracle isolation of the axis roots")
    p.add_argument("--p-tilde", type=int, required=True)
    p.add_argument("--q-tilde", type=_positive, required=True)
    p.add_argument("--B", type=_b_value, required=True)
    p.add_argument("--width", type=_width, default=Fraction(1, 10 ** 6), help="interval width in t")

    p = sub.add_parser("regions", parents=[common], help="classify (p, q) or render the region map")
    p.add_argument("--p", type=_positive)
    p.add_argument("--q", type=_positive)
    p.add_argument("--svg", help="render the map to this SVG file")
    p.add_argument("--max-q", type=_positive, default=12)

    p = sub.add_parser("scan", parents=[common], help="certify every lattice point of one strip")
    p.add_argument("--B", type=_b_value, required=True)
    p.add_argument("--q-from", type=_positive, required=True)
    p.add_argument("--q-to", type=_positive, required=True)
    p.add_argument("--workers", type=_positive, default=1)
    return parser


def _point_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--B", type=_b_value, required=True)
    p.add_argument("--p-tilde", type=int)
    p.add_argument("--q-tilde", type=_positive)
    p.add_argument("--p", type=_positive, help="original p; mapped to pt = B*q**3 - p")
    p.add_argument("--q", type=_positive)


def _resolve_point(args) -> tuple:
    if args.p_tilde is not None and args.q_tilde is not None:
        return args.p_tilde, args.q_tilde
    if args.p is not None and args.q is not None:
        return args.B * args.q ** 3 - args.p, args.q
    raise UsageError("give either --p-tilde and --q-tilde, or --p and --q")


# ------------------------------------------------------------------ writers
def _emit_json(doc, args) -> str:
    return json.dumps(to_jsonable(doc, args.precision), indent=2, sort_keys=True) + "\n"


def _emit_tsv(header: Sequence[str], rows: List[Sequence], args=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands
def cmd_poly(args) -> int:
    builder = {"original": build_qpq, "transformed": build_qtilde, "exceptional": build_exceptional}[args.kind]
    if args.kind == "original":
        if args.B is not None:
            raise UsageError("--B does not apply to the original polynomial")
        cp = builder()
    else:
        cp = builder(args.B)
    lines = list(dump_lines(cp.body))
    if args.format == "text":
        _write("\n".join(lines) + "\n", args)
    else:
        _write(_emit_json({"kind": cp.kind, "B": args.B, "monomials": len(cp.body),
                           "variables": list(cp.body.variables), "terms": lines[1:]}, args), args)
    return EXIT_OK


def cmd_derive(args) -> int:
    names = args.family or list(FAMILIES)
    eqs = [derive_remainder_equation(n) for n in names]
    docs = []
    ok = True
    for eq in eqs:
        identity = check_identity(eq)
        ok = ok and identity
        docs.append({"family": eq.family, "lhs_coeff": str(eq.lhs_coeff), "center": str(eq.center),
                     "tail_monomials": eq.tail_monomials, "tail_terms": eq.tail_terms,
                     "tail_sha256": eq.tail_sha256, "clearing": str(eq.clearing),
                     "scale": eq.scale, "identity_check": identity})
    if args.ancillary:
        with open(args.ancillary, "w", encoding="utf-8") as fh:
            export_ancillary(eqs, fh)
    if args.format == "tsv":
        _write(_emit_tsv(["family", "lhs_coeff", "center", "tail_monomials", "tail_sha256"],
                         [[d["family"], d["lhs_coeff"], d["center"], d["tail_monomials"], d["tail_sha256"]]
                          for d in docs]), args)
    else:
        _write(_emit_json(docs, args), args)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_newton(args) -> int:
    np_ = newton_polygon(build_qtilde().body)
    edges = solve_all(np_)
    doc = {
        "upper_nodes": [{"m": m, "r": r, "coefficient": str(np_.nodes[(m, r)])} for m, r in np_.upper_nodes],
        "segments": [{"start": list(s.start), "end": list(s.end), "slope": s.slope} for s in np_.upper_segments],
        "exponents": candidate_exponents(np_),
        "edges": [{"alpha": e.alpha, "edge_poly": str(e.edge_poly),
                   "roots": [{"coeff": r.coeff, "b_power": r.b_power, "axis": r.axis,
                              "multiplicity": r.multiplicity, "text": str(r)} for r in e.roots]}
                  for e in edges],
        "node_count": len(np_.nodes),
    }
    svg = args.svg or (args.out if args.format == "svg" else None)
    if svg:
        from .plotting import render_newton_polygon

        render_newton_polygon(np_, svg)
        doc["svg"] = svg
    if args.format != "svg":
        _write(_emit_json(doc, args), args)
    return EXIT_OK


def cmd_enclose(args) -> int:
    pt, qt = _resolve_point(args)
    rows = []
    for name in FAMILIES:
        try:
            enc = enclosure_bounds(name, pt, qt, args.B)
        except NotApplicable:
            rows.append({"family": name, "applicable": False})
            continue
        rows.append({"family": name, "applicable": True, "axis": enc.axis, "lower": enc.lower,
                     "upper": enc.upper, "width": enc.width})
    doc = {"p_tilde": pt, "q_tilde": qt, "B": args.B, "enclosures": rows}
    try:
        d = disjointness(pt, qt, args.B)
        doc["disjoint"] = d.verdict == "certified"
    except NotApplicable:
        doc["disjoint"] = None
    if args.format == "tsv":
        out = []
        for r in rows:
            if r["applicable"]:
                lo, hi = quad(r["lower"], args.precision), quad(r["upper"], args.precision)
                out.append([r["family"], r["axis"], lo["a"], lo["b"], hi["a"], hi["b"], lo["decimal"], hi["decimal"]])
            else:
                out.append([r["family"], "not_applicable", "", "", "", "", "", ""])
        _write(_emit_tsv(["family", "axis", "lower_a", "lower_b", "upper_a", "upper_b", "lower", "upper"], out), args)
    else:
        _write(_emit_json(doc, args), args)
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.all:
        families, bs = list(FAMILIES), list(B_RANGE)
    elif args.family or args.B:
        families, bs = args.family or list(FAMILIES), args.B or list(B_RANGE)
    else:
        raise UsageError("give --all, or --family and/or --B")
    reports = certify_all(families, bs, workers=args.workers)
    if args.format == "tsv":
        _write(_emit_tsv(["kind", "family", "B", "pt_sign", "witnessed", "threshold", "published", "verdict"],
                         [[r.kind, r.subject, r.B, r.pt_sign, r.witnessed_constant.to_decimal(args.precision),
                           r.threshold.to_decimal(args.precision), r.paper_constant, r.verdict] for r in reports]),
               args)
    else:
        _write(_emit_json(reports, args), args)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILED


def cmd_roots(args) -> int:
    poly = build_qtilde(args.B).body.partial_eval({"pt": args.p_tilde, "qt": args.q_tilde})
    coeffs = univariate(poly)
    real, imag = axis_split_roots(coeffs, args.width)
    rows = []
    for r in real + imag:
        lo, hi = r.bounds()
        while hi - lo >= args.width:
            r = refine_axis_root(coeffs, r, (r.x_hi - r.x_lo) / 4)
            lo, hi = r.bounds()
        rows.append({"axis": r.axis, "lower": rat(lo), "upper": rat(hi),
                     "x_lower": rat(r.x_lo), "x_upper": rat(r.x_hi), "multiplicity": r.multiplicity,
                     "lower_decimal": QuadRat(lo).to_decimal(args.precision),
                     "upper_decimal": QuadRat(hi).to_decimal(args.precision)})
    doc = {"p_tilde": args.p_tilde, "q_tilde": args.q_tilde, "B": args.B,
           "real_positive": len(real), "imaginary_positive": len(imag), "roots": rows}
    if args.format == "tsv":
        _write(_emit_tsv(["axis", "lower", "upper", "multiplicity", "lower_decimal", "upper_decimal"],
                         [[r["axis"], r["lower"], r["upper"], r["multiplicity"], r["lower_decimal"],
                           r["upper_decimal"]] for r in rows]), args)
    else:
        _write(_emit_json(doc, args), args)
    return EXIT_OK


def cmd_regions(args) -> int:
    doc = {}
    if args.p is not None or args.q is not None:
        if args.p is None or args.q is None:
            raise UsageError("--p and --q go together")
        label = classify_region(args.p, args.q)
        doc = {"p": args.p, "q": args.q, "region": label.region, "flags": sorted(label.flags),
               "parabola": label.parabola}
    svg = args.svg or (args.out if args.format == "svg" else None)
    if svg:
        from .plotting import render_region_map

        render_region_map(args.max_q, svg)
        doc["svg"] = svg
    if not doc:
        raise UsageError("give --p and --q, or --svg")
    if args.format == "tsv" and "region" in doc:
        _write(_emit_tsv(["p", "q", "region", "flags", "parabola"],
                         [[doc["p"], doc["q"], doc["region"], ",".join(doc["flags"]), doc["parabola"] or ""]]), args)
    elif args.format != "svg":
        _write(_emit_json(doc, args), args)
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.q_to < args.q_from:
        raise UsageError("--q-to must be >= --q-from")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            summary = scan_strip(args.B, args.q_from, args.q_to, fh, args.workers)
    else:
        summary = scan_strip(args.B, args.q_from, args.q_to, sys.stdout, args.workers)
    sys.stderr.write(json.dumps({"B": summary.B, "q_from": summary.q_from, "q_to": summary.q_to,
                                 "points": summary.points, "certificates": summary.certificates,
                                 "cuboid_free_points": summary.cuboid_free_points,
                                 "exceptions": len(summary.exceptions)}, sort_keys=True) + "\n")
    return EXIT_OK if summary.all_certified else EXIT_FAILED


COMMANDS = {"poly": cmd_poly, "derive": cmd_derive, "newton": cmd_newton, "enclose": cmd_enclose,
            "certify": cmd_certify, "roots": cmd_roots, "regions": cmd_regions, "scan": cmd_scan}


def dispatch(args) -> int:
    return COMMANDS[args.command](args)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(args)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
