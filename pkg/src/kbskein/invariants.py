"""Finite-type invariants, Jones expansions, cabling and generator spans."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .diagram import (
    Diagram,
    DiagramError,
    DiagramParseError,
    Multicurve,
    SurfaceKind,
    parse_diagram,
    switch_crossings,
)
from .rings import HValuation, TruncatedSeries, expand_laurent, t_power
from .skein import SkeinElement, bracket_resolve, normal_form, skein_mul

DEFAULT_MAX_DOUBLE_POINTS = 12
DEFAULT_MAX_SPAN_DEGREE = 6


# -- singular links -------------------------------------------------------

@dataclass(frozen=True)
class SingularLink:
    """A diagram with some crossings marked as decorated double points.

    A double point at crossing ``c`` with decoration ``+1`` stands for
    ``D - D'`` where ``D'`` has crossing ``c`` switched; decoration ``-1``
    stands for ``D' - D``.
    """

    diagram: Diagram
    double_points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        sites = [c for c, _ in self.double_points]
        if len(set(sites)) != len(sites):
            raise ValueError("double points must sit at distinct crossings")
        for c, eps in self.double_points:
            if not 0 <= c < self.diagram.ncrossings:
                raise ValueError(f"no crossing {c}")
            if eps not in (1, -1):
                raise ValueError("decorations are +1 or -1")

    @property
    def n(self) -> int:
        return len(self.double_points)

    def flip(self, i: int) -> "SingularLink":
        dps = list(self.double_points)
        c, eps = dps[i]
        dps[i] = (c, -eps)
        return SingularLink(self.diagram, tuple(dps))


def resolve_singular(s: SingularLink, max_double_points: int = DEFAULT_MAX_DOUBLE_POINTS) -> list[tuple[int, Diagram]]:
    """Expand into ``2^n`` signed diagrams."""
    if s.n > max_double_points:
        raise ValueError(f"{s.n} double points exceeds the bound {max_double_points}")
    out = []
    sign0 = 1
    for _, eps in s.double_points:
        sign0 *= eps
    for mask in range(1 << s.n):
        switched = [s.double_points[i][0] for i in range(s.n) if mask >> i & 1]
        sign = sign0 * (-1) ** len(switched)
        out.append((sign, switch_crossings(s.diagram, switched)))
    return out


def singular_normal_form(s: SingularLink, order: int) -> SkeinElement:
    return normal_form([(sign, d) for sign, d in resolve_singular(s)], order)


def fti_valuation(s: SingularLink, order: int) -> HValuation:
    """Smallest h-valuation over the basis coefficients of the resolved link."""
    if order < s.n:
        raise ValueError("truncation order must be at least the number of double points")
    nf = singular_normal_form(s, order)
    best = HValuation(order + 1, False)
    for _, c in nf.items():
        v = c.valuation()
        if v.exact and v.value < best.value:
            best = v
    return best


@dataclass
class CoefficientTable:
    """Rational coefficients indexed by (power of h, basis multicurve)."""

    order: int
    entries: dict[tuple[int, Multicurve], Fraction] = field(default_factory=dict)

    def get(self, i: int, mc: Multicurve) -> Fraction:
        return self.entries.get((i, mc), Fraction(0))

    def rows(self) -> list[tuple[int, Multicurve, Fraction]]:
        return sorted(((i, mc, v) for (i, mc), v in self.entries.items()), key=lambda r: (r[0], r[1].sort_key()))

    def to_records(self) -> list[str]:
        return [f"{i}, {mc}, {v.numerator}/{v.denominator}" for i, mc, v in self.rows()]

    @classmethod
    def from_records(cls, order: int, surface: SurfaceKind, records) -> "CoefficientTable":
        t = cls(order)
        for rec in records:
            i, mc, v = _parse_table_record(rec, surface)
            t.entries[(i, mc)] = v
        return t


def fti_coefficients(x: SkeinElement) -> CoefficientTable:
    if x.order is None:
        raise ValueError("expand to a series first")
    table = CoefficientTable(x.order)
    for mc, c in x.items():
        for i, v in enumerate(c.coeffs):
            if v:
                table.entries[(i, mc)] = v
    return table


def _parse_table_record(rec: str, surface: SurfaceKind):
    m = re.match(r"^\s*(\d+)\s*,\s*(.+?)\s*,\s*(-?\d+/\d+)\s*$", rec)
    if not m:
        raise ValueError(f"bad table record {rec!r}")
    return int(m.group(1)), Multicurve.parse(m.group(2), surface), Fraction(m.group(3))


# -- orientation, writhe, Jones -------------------------------------------

def strand_components(d: Diagram) -> list[list[tuple[int, bool]]]:
    """Components traced straight through crossings as lists of (arc, forward)."""
    pm = d.port_map()
    seen = set()
    comps = []
    for start in range(len(d.arcs)):
        if start in seen:
            continue
        comp = []
        arc, fwd = start, True
        while True:
            seen.add(arc)
            comp.append((arc, fwd))
            e0, e1, _ = d.arcs[arc]
            arrive = e1 if fwd else e0
            nxt, end = pm[arrive ^ 2]
            arc, fwd = nxt, end == 0
            if arc == start:
                if not fwd:
                    raise DiagramError("inconsistent strand orientation")
                break
        comps.append(comp)
    return comps


@dataclass(frozen=True)
class OrientedDiagram:
    """Disk diagram with a direction on each component.

    Components are those of ``strand_components``; each is oriented along
    its first arc's ``end0 -> end1`` unless its index is in ``reversed``.
    """

    diagram: Diagram
    reversed: frozenset = frozenset()

    def crossing_signs(self) -> list[int]:
        d = self.diagram
        under_in = [None] * d.ncrossings
        over_in = [None] * d.ncrossings
        for ci, comp in enumerate(strand_components(d)):
            flip = ci in self.reversed
            for arc, fwd in comp:
                if flip:
                    fwd = not fwd
                e0, e1, _ = d.arcs[arc]
                arrive = e1 if fwd else e0
                c, local = arrive >> 2, arrive & 3
                if local % 2 == 0:
                    under_in[c] = local
                else:
                    over_in[c] = local
        signs = []
        for c in range(d.ncrossings):
            if under_in[c] is None or over_in[c] is None:
                raise DiagramError(f"crossing {c} is not traversed consistently")
            signs.append(1 if (over_in[c] - under_in[c]) % 4 == 3 else -1)
        return signs


def writhe(d: OrientedDiagram) -> int:
    return sum(d.crossing_signs())


def orient(d: Diagram, reversed_arcs: Sequence[str] = ()) -> OrientedDiagram:
    """Orient ``d``; components containing the named arcs are reversed."""
    if d.surface is not SurfaceKind.DISK:
        raise DiagramError("orientations and writhe are defined here for disk diagrams")
    comps = strand_components(d)
    rev = set()
    labels = d.labels or tuple(str(i + 1) for i in range(len(d.arcs)))
    for name in reversed_arcs:
        if name not in labels:
            raise DiagramError(f"no arc named {name}")
        idx = labels.index(name)
        for ci, comp in enumerate(comps):
            if any(a == idx for a, _ in comp):
                rev ^= {ci}
    return OrientedDiagram(d, frozenset(rev))


def parse_oriented_diagram(text: str) -> OrientedDiagram:
    reversed_arcs = []

    def handler(lineno, stmt):
        m = re.match(r"^reverse\s+(\S+)$", stmt)
        if m:
            reversed_arcs.append(m.group(1))
            return True
        return False

    d = parse_diagram(text, handler)
    return orient(d, reversed_arcs)


def jones(d: OrientedDiagram, order: int) -> TruncatedSeries:
    """J_L(e^h) = t^(-3 w) <L>, where <L> is the bracket with <empty> = 1."""
    if d.diagram.surface is not SurfaceKind.DISK:
        raise DiagramError("the Jones expansion is for disk diagrams")
    br = bracket_resolve(d.diagram).coefficient(Multicurve.empty(SurfaceKind.DISK))
    return t_power(-3 * writhe(d), order) * expand_laurent(br, order)


def parse_singular_link(text: str) -> SingularLink:
    """Diagram text plus ``double <crossing index> [+|-]`` statements."""
    dps = []

    def handler(lineno, stmt):
        m = re.match(r"^double\s+(\d+)\s*([+-])?$", stmt)
        if m:
            dps.append((int(m.group(1)), -1 if m.group(2) == "-" else 1, lineno))
            return True
        return False

    d = parse_diagram(text, handler)
    for c, _, lineno in dps:
        if c >= d.ncrossings:
            raise DiagramParseError(f"no crossing {c} for a double point", lineno)
    try:
        return SingularLink(d, tuple((c, e) for c, e, _ in dps))
    except ValueError as exc:
        raise DiagramParseError(str(exc)) from exc


# -- cabling and spans ----------------------------------------------------

def cable(components: Sequence, counts: Sequence[int]) -> SkeinElement:
    """The (n_1, ..., n_m)-cable: n_i parallel copies of each component, stacked in order.

    Components are basis knots (``Multicurve`` with multiplicity 1) or
    crossing-free disk diagrams.  A zero count drops the component.
    """
    if len(components) != len(counts):
        raise ValueError("one count per component")
    if any(n < 0 for n in counts):
        raise ValueError("counts must be non-negative")
    if not components:
        raise ValueError("need at least one component")
    surface = components[0].surface
    result = None
    for comp, n in zip(components, counts):
        if comp.surface is not surface:
            raise ValueError("components on different surfaces")
        if isinstance(comp, Diagram):
            if comp.ncrossings:
                raise DiagramError("cabling is implemented for crossing-free components")
            piece = bracket_resolve(Diagram(surface, 0, (), comp.loops * n))
        else:
            if comp.m != 1:
                raise ValueError("cable components must be knots")
            piece = SkeinElement.basis(comp.with_multiplicity(n))
        result = piece if result is None else skein_mul(result, piece)
    return result


@dataclass
class SpanResult:
    success: bool
    target: Multicurve
    generators: tuple
    order: int
    witness: list = field(default_factory=list)  # [(TruncatedSeries, counts)]
    failed_at: int | None = None

    def expression(self) -> str:
        """Witness as a prefix expression tree."""
        if not self.success:
            return "(fail)"
        terms = []
        for coeff, counts in self.witness:
            factors = " ".join(f"{g}" for g, n in zip(self.generators, counts) for _ in range(n)) or "empty"
            terms.append(f"(* [{coeff}] (cable {factors}))")
        return "(+ " + " ".join(terms) + ")" if len(terms) != 1 else terms[0]


def _solve_rational(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """A particular solution of ``matrix x = rhs`` (free variables zero), or None."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [list(matrix[r]) + [rhs[r]] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][cols]
    return x


def span_check(
    generators: Sequence[Multicurve],
    target: Multicurve,
    degree_bound: int,
    order: int,
    max_degree: int = DEFAULT_MAX_SPAN_DEGREE,
) -> SpanResult:
    """Write ``target`` as a Q[[h]]-combination of cables of the generators.

    Monomials are the cables g_1^n_1 ... g_m^n_m with total degree at most
    ``degree_bound``.  The system is solved one power of h at a time: the
    h^0 matrix is inverted on the residual left by lower orders.
    """
    if degree_bound > max_degree:
        raise ValueError(f"degree {degree_bound} exceeds the bound {max_degree}")
    surface = target.surface
    if surface is not SurfaceKind.TORUS:
        raise ValueError("span checks are implemented on the torus")
    gens = tuple(generators)
    exps = [
        e for total in range(degree_bound + 1)
        for e in itertools.product(range(total + 1), repeat=len(gens)) if sum(e) == total
    ]
    monomials = [cable(gens, e).expand(order) for e in exps]
    rows = sorted({mc for m in monomials for mc in m.support()} | {target}, key=Multicurve.sort_key)
    index = {mc: i for i, mc in enumerate(rows)}
    # mats[i][row][col]: coefficient of h^i
    mats = [[[Fraction(0)] * len(exps) for _ in rows] for _ in range(order + 1)]
    for col, m in enumerate(monomials):
        for mc, c in m.items():
            for i in range(order + 1):
                mats[i][index[mc]][col] = c[i]
    sol: list[list[Fraction]] = []  # sol[j][col]: h^j coefficient
    for j in range(order + 1):
        rhs = [Fraction(1) if (j == 0 and rows[r] == target) else Fraction(0) for r in range(len(rows))]
        for i in range(1, j + 1):
            for r in range(len(rows)):
                rhs[r] -= sum(mats[i][r][c] * sol[j - i][c] for c in range(len(exps)))
        x = _solve_rational(mats[0], rhs)
        if x is None:
            return SpanResult(False, target, gens, order, failed_at=j)
        sol.append(x)
    witness = []
    for col, e in enumerate(exps):
        coeff = TruncatedSeries([sol[j][col] for j in range(order + 1)], order)
        if coeff:
            witness.append((coeff, e))
    return SpanResult(True, target, gens, order, witness)


def evaluate_witness(result: SpanResult) -> SkeinElement:
    total = SkeinElement.zero(result.target.surface, result.order)
    for coeff, counts in result.witness:
        total = total + cable(result.generators, counts).expand(result.order).scale(coeff)
    return total
