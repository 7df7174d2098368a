"""Command-line front end."""
from __future__ import annotations

import argparse
import os
import re
import sys

import numpy as np

from .characters import character_eval, format_complex, goldman_numeric, parse_rep, random_torus_rep
from .diagram import Diagram, DiagramError, Multicurve, SurfaceKind, parse_diagram
from .invariants import (
    DEFAULT_MAX_DOUBLE_POINTS,
    DEFAULT_MAX_SPAN_DEGREE,
    cable,
    fti_coefficients,
    fti_valuation,
    jones,
    parse_oriented_diagram,
    parse_singular_link,
    resolve_singular,
    span_check,
    writhe,
)
from .poisson import poisson_commutator, poisson_statesum, primitive_classes, theta_morphism_check
from .rings import LaurentPolynomial
from .skein import SkeinElement, basis_product, bracket_resolve, normal_form
from .statesum import DEFAULT_MAX_CROSSINGS, CrossingBoundError

ORDER_ENV = "KBSKEIN_ORDER"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage: str, message: str, code: int = EXIT_FAIL):
        super().__init__(message)
        self.stage = stage
        self.code = code


def _default_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return 8
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{ORDER_ENV}={raw!r} is not an integer")
    if n < 0:
        raise UsageError(f"{ORDER_ENV} must be non-negative")
    return n


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise StageError("input", f"cannot read {path}: {exc.strerror}", EXIT_USAGE)


def _parse_file(path: str, parser):
    text = _read(path)
    try:
        return parser(text)
    except DiagramError as exc:
        raise StageError("parse", f"{path}: {exc}", EXIT_USAGE)


def _multicurve(text: str) -> Multicurve:
    try:
        return Multicurve.parse(text)
    except ValueError as exc:
        raise StageError("parse", str(exc), EXIT_USAGE)


def _primitive_pair(mc: Multicurve) -> tuple[int, int]:
    if mc.surface is not SurfaceKind.TORUS or mc.m != 1:
        raise StageError("parse", f"{mc} is not a single torus curve", EXIT_USAGE)
    return mc.p, mc.q


# -- output ---------------------------------------------------------------

def _emit_element(x: SkeinElement, fmt: str, out):
    if fmt == "machine":
        for rec in x.to_records():
            print(rec, file=out)
        return
    if not x:
        print("0", file=out)
        return
    for mc, c in x.items():
        print(f"{c} * {mc}", file=out)


def _emit_character(x, fmt: str, out, label: str | None = None):
    if fmt == "machine":
        if label:
            print(f"section\t{label}", file=out)
        for rec in x.to_records():
            print(rec, file=out)
        return
    prefix = f"{label}: " if label else ""
    print(f"{prefix}{x}", file=out)


def _coerce_element(x: SkeinElement, args) -> SkeinElement:
    return x.expand(args.order) if args.coeff == "hseries" else x


# -- commands -------------------------------------------------------------

def cmd_bracket(args, out):
    d = _parse_file(args.diagram, parse_diagram)
    x = bracket_resolve(d, args.max_crossings)
    _emit_element(_coerce_element(x, args), args.format, out)


_TERM_RE = re.compile(r"^(?:(?P<coef>[^@]+)@)?(?P<path>.+)$")


def cmd_normal_form(args, out):
    combo = []
    for item in args.items:
        m = _TERM_RE.match(item)
        coef_text = m.group("coef")
        try:
            coef = LaurentPolynomial.parse(coef_text) if coef_text else LaurentPolynomial.constant(1)
        except ValueError as exc:
            raise StageError("parse", f"coefficient {coef_text!r}: {exc}", EXIT_USAGE)
        combo.append((coef, _parse_file(m.group("path"), parse_diagram)))
    if len({d.surface for _, d in combo}) != 1:
        raise StageError("parse", "diagrams in a combination must share a surface", EXIT_USAGE)
    if args.coeff == "laurent":
        total = SkeinElement.zero(combo[0][1].surface)
        for coef, d in combo:
            total = total + bracket_resolve(d, args.max_crossings).scale(coef)
    else:
        total = normal_form(combo, args.order, args.max_crossings)
    _emit_element(total, args.format, out)


def cmd_product(args, out):
    x, y = _multicurve(args.x), _multicurve(args.y)
    if x.surface is not y.surface:
        raise StageError("parse", "multicurves on different surfaces", EXIT_USAGE)
    _emit_element(_coerce_element(basis_product(x, y, args.max_crossings), args), args.format, out)


def cmd_poisson(args, out):
    x, y = _multicurve(args.x), _multicurve(args.y)
    if x.surface is not y.surface:
        raise StageError("parse", "multicurves on different surfaces", EXIT_USAGE)
    order = max(args.order, 2)
    if args.method == "statesum":
        _emit_character(poisson_statesum(x, y), args.format, out)
    elif args.method == "commutator":
        _emit_character(poisson_commutator(x, y, order), args.format, out)
    else:
        report = theta_morphism_check(x, y, order)
        _emit_character(report.statesum, args.format, out, "statesum")
        _emit_character(report.commutator, args.format, out, "commutator")
        verdict = "AGREE" if report.equal else "DISAGREE"
        print(f"verdict\t{verdict}" if args.format == "machine" else verdict, file=out)
        if not report.equal:
            return EXIT_FAIL
    return EXIT_OK


def cmd_quantize_check(args, out):
    classes = primitive_classes(args.max_slope)
    bad = 0
    for a in classes:
        for b in classes:
            report = theta_morphism_check(a, b, max(args.order, 2))
            if not report.equal:
                bad += 1
                print(f"mismatch\t{a}\t{b}" if args.format == "machine" else str(report), file=out)
    npairs = len(classes) ** 2
    if args.format == "machine":
        print(f"pairs\t{npairs}\nmismatches\t{bad}", file=out)
    else:
        print(f"{npairs} ordered pairs, {bad} mismatches: {'AGREE' if not bad else 'DISAGREE'}", file=out)
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_goldman(args, out):
    x, y = _multicurve(args.x), _multicurve(args.y)
    alpha, beta = _primitive_pair(x), _primitive_pair(y)
    if args.rep:
        try:
            rho = parse_rep(_read(args.rep))
        except ValueError as exc:
            raise StageError("parse", f"{args.rep}: {exc}", EXIT_USAGE)
    else:
        rho = random_torus_rep(np.random.default_rng(args.seed))
    lhs = character_eval(poisson_statesum(x, y), rho)
    rhs = goldman_numeric(alpha, beta, rho)
    if args.format == "machine":
        print(f"statesum\t{format_complex(lhs)}\ngoldman\t{format_complex(rhs)}", file=out)
    else:
        print(f"statesum: {format_complex(lhs)}\ngoldman:  {format_complex(rhs)}\n|difference| = {abs(lhs - rhs):.3e}", file=out)
    return EXIT_OK


def cmd_fti(args, out):
    s = _parse_file(args.link, parse_singular_link)
    if s.n > args.max_double_points:
        raise StageError("resolve", f"{s.n} double points exceeds the bound {args.max_double_points}")
    if args.table:
        combo = resolve_singular(s, args.max_double_points)
        nf = normal_form(combo, args.order, args.max_crossings)
        table = fti_coefficients(nf)
        for i, mc, v in table.rows():
            if args.format == "machine":
                print(f"{i}, {mc}, {v.numerator}/{v.denominator}", file=out)
            else:
                print(f"{i}, {mc}, {v}", file=out)
    else:
        if args.order < s.n:
            raise StageError("resolve", f"order {args.order} is below the {s.n} double points")
        v = fti_valuation(s, args.order)
        print(f"valuation\t{v.value}\t{'exact' if v.exact else 'lower-bound'}" if args.format == "machine" else f"valuation {v}", file=out)


def cmd_jones(args, out):
    od = _parse_file(args.diagram, parse_oriented_diagram)
    j = jones(od, args.order)
    if args.format == "machine":
        print(f"writhe\t{writhe(od)}\nseries\t{j.to_record()}", file=out)
    else:
        print(f"writhe {writhe(od)}\n{j}", file=out)


_CABLE_RE = re.compile(r"^(?P<comp>.+?)\s*(?:x\s*(?P<n>\d+))?$")


def cmd_cable(args, out):
    comps, counts = [], []
    for item in args.components:
        m = _CABLE_RE.match(item.strip())
        body = m.group("comp").strip()
        n = int(m.group("n") or 1)
        if body == "unknot":
            comps.append(Diagram(SurfaceKind.DISK, 0, (), ((),)))
        else:
            comps.append(_multicurve(body))
        counts.append(n)
    try:
        x = cable(comps, counts)
    except (ValueError, DiagramError) as exc:
        raise StageError("cable", str(exc), EXIT_USAGE)
    _emit_element(_coerce_element(x, args), args.format, out)


_CLASS_RE = re.compile(r"\(\s*-?\d+\s*,\s*-?\d+\s*\)")


def cmd_span(args, out):
    gens = [_multicurve(g) for g in _CLASS_RE.findall(args.generators)]
    if not gens:
        raise StageError("parse", "no generators given", EXIT_USAGE)
    target = _multicurve(args.target)
    if args.degree > args.max_degree:
        raise StageError("span", f"degree {args.degree} exceeds the bound {args.max_degree}", EXIT_USAGE)
    result = span_check(gens, target, args.degree, args.order, args.max_degree)
    if not result.success:
        print(f"failure\t{result.failed_at}" if args.format == "machine"
              else f"no witness up to degree {args.degree} (inconsistent at h^{result.failed_at})", file=out)
        return EXIT_FAIL
    if args.format == "machine":
        for coeff, counts in result.witness:
            print("witness\t" + " ".join(map(str, counts)) + "\t" + coeff.to_record(), file=out)
    else:
        print(result.expression(), file=out)
    return EXIT_OK


# -- argument parsing -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-N", "--order", type=int, default=None,
                        help=f"truncation order (default ${ORDER_ENV} or 8)")
    common.add_argument("--coeff", choices=("laurent", "hseries"), default="laurent")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--max-crossings", type=int, default=DEFAULT_MAX_CROSSINGS)
    common.add_argument("--max-double-points", type=int, default=DEFAULT_MAX_DOUBLE_POINTS)
    common.add_argument("--max-degree", type=int, default=DEFAULT_MAX_SPAN_DEGREE)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="kbskein", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bracket", parents=[common], help="Kauffman bracket of a diagram")
    s.add_argument("diagram")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("normal-form", parents=[common], help="normal form of COEF@FILE terms")
    s.add_argument("items", nargs="+")
    s.set_defaults(func=cmd_normal_form)

    s = sub.add_parser("product", parents=[common], help="skein product of two multicurves")
    s.add_argument("x")
    s.add_argument("y")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("poisson", parents=[common], help="Poisson bracket of two multicurves")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--method", choices=("statesum", "commutator", "both"), default="statesum")
    s.set_defaults(func=cmd_poisson)

    s = sub.add_parser("quantize-check", parents=[common], help="compare both brackets on a sweep")
    s.add_argument("--max-slope", type=int, default=3)
    s.set_defaults(func=cmd_quantize_check)

    s = sub.add_parser("goldman", parents=[common], help="numeric Goldman bracket at a representation")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--rep", help="representation file (.rep); random from --seed if absent")
    s.set_defaults(func=cmd_goldman)

    s = sub.add_parser("fti", parents=[common], help="finite-type data of a singular link (.sng)")
    s.add_argument("link")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--valuation", action="store_true")
    g.add_argument("--table", action="store_true")
    s.set_defaults(func=cmd_fti)

    s = sub.add_parser("jones", parents=[common], help="Jones series of an oriented disk diagram")
    s.add_argument("diagram")
    s.set_defaults(func=cmd_jones)

    s = sub.add_parser("cable", parents=[common], help="cable of components like '(1,0)x2' or 'unknot x2'")
    s.add_argument("components", nargs="+")
    s.set_defaults(func=cmd_cable)

    s = sub.add_parser("span", parents=[common], help="express a target through cables of generators")
    s.add_argument("--generators", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--degree", type=int, required=True)
    s.set_defaults(func=cmd_span)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.order is None:
            args.order = _default_order()
        if args.order < 0:
            raise UsageError("-N must be non-negative")
        code = args.func(args, out)
        return EXIT_OK if code is None else code
    except UsageError as exc:
        print(f"kbskein: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageError as exc:
        print(f"kbskein: {exc.stage}: {exc}", file=sys.stderr)
        return exc.code
    except CrossingBoundError as exc:
        print(f"kbskein: statesum: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, ArithmeticError) as exc:
        print(f"kbskein: {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
