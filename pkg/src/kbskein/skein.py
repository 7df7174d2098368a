"""Skein elements, bracket evaluation and the algebra structure of K(F x I)."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .diagram import (
    Diagram,
    Multicurve,
    StateCurves,
    SurfaceKind,
    build_product_diagram,
    classify_state,
    smooth_crossing,
)
from .rings import A, A_INV, DELTA, LaurentPolynomial, TruncatedSeries, expand_laurent
from .statesum import DEFAULT_MAX_CROSSINGS, state_histogram

Coefficient = Union[LaurentPolynomial, TruncatedSeries]


class SkeinElement:
    """Finite combination of basis multicurves.

    ``order is None`` means Laurent coefficients; otherwise coefficients are
    ``TruncatedSeries`` of that order.
    """

    __slots__ = ("surface", "order", "_terms")

    def __init__(self, surface: SurfaceKind, terms: Mapping[Multicurve, Coefficient] | None = None, order: int | None = None):
        self.surface = surface
        self.order = order
        clean = {}
        for mc, c in (terms or {}).items():
            if mc.surface is not surface:
                raise ValueError(f"multicurve {mc} is not on the {surface}")
            c = self._coerce(c)
            if c:
                clean[mc] = c
        self._terms = clean

    def _coerce(self, c) -> Coefficient:
        if self.order is None:
            if isinstance(c, int):
                return LaurentPolynomial.constant(c)
            if not isinstance(c, LaurentPolynomial):
                raise TypeError(f"Laurent element needs Laurent coefficients, got {type(c).__name__}")
            return c
        if isinstance(c, (int, Fraction)):
            return TruncatedSeries((c,), self.order)
        if isinstance(c, LaurentPolynomial):
            return expand_laurent(c, self.order)
        if c.order != self.order:
            raise ValueError(f"coefficient order {c.order} differs from {self.order}")
        return c

    @classmethod
    def basis(cls, mc: Multicurve, order: int | None = None) -> "SkeinElement":
        return cls(mc.surface, {mc: 1}, order)

    @classmethod
    def zero(cls, surface: SurfaceKind, order: int | None = None) -> "SkeinElement":
        return cls(surface, {}, order)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, mc: Multicurve) -> Coefficient:
        c = self._terms.get(mc)
        if c is None:
            return LaurentPolynomial() if self.order is None else TruncatedSeries.zero(self.order)
        return c

    def support(self) -> list[Multicurve]:
        return [mc for mc, _ in self.items()]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _check(self, other: "SkeinElement"):
        if not isinstance(other, SkeinElement):
            raise TypeError("expected a SkeinElement")
        if other.surface is not self.surface:
            raise ValueError("surface mismatch")
        if other.order != self.order:
            raise ValueError(f"coefficient ring mismatch: {self.order} vs {other.order}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkeinElement):
            return NotImplemented
        return self.surface is other.surface and self.order == other.order and self._terms == other._terms

    def __hash__(self):
        return hash((self.surface, self.order, frozenset(self._terms.items())))

    def __add__(self, other: "SkeinElement") -> "SkeinElement":
        self._check(other)
        acc = dict(self._terms)
        for mc, c in other._terms.items():
            acc[mc] = acc[mc] + c if mc in acc else c
        return SkeinElement(self.surface, acc, self.order)

    def __neg__(self) -> "SkeinElement":
        return SkeinElement(self.surface, {mc: -c for mc, c in self._terms.items()}, self.order)

    def __sub__(self, other: "SkeinElement") -> "SkeinElement":
        return self + (-other)

    def scale(self, c) -> "SkeinElement":
        c = self._coerce(c)
        return SkeinElement(self.surface, {mc: c * v for mc, v in self._terms.items()}, self.order)

    def __mul__(self, other):
        if isinstance(other, SkeinElement):
            return skein_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def expand(self, order: int) -> "SkeinElement":
        """Laurent coefficients -> series of the given order (or re-truncate a series)."""
        if self.order is None:
            return SkeinElement(self.surface, {mc: expand_laurent(c, order) for mc, c in self._terms.items()}, order)
        return SkeinElement(self.surface, {mc: c.truncate(order) for mc, c in self._terms.items()}, order)

    def invert_variable(self) -> "SkeinElement":
        if self.order is not None:
            raise ValueError("A -> A^-1 applies to Laurent coefficients")
        return SkeinElement(self.surface, {mc: c.invert_variable() for mc, c in self._terms.items()})

    def div_h(self) -> "SkeinElement":
        if self.order is None:
            raise ValueError("division by h needs series coefficients")
        return SkeinElement(self.surface, {mc: c.div_h() for mc, c in self._terms.items()}, self.order - 1)

    def h_coefficient(self, i: int) -> dict[Multicurve, Fraction]:
        """Rational coefficients of ``h^i`` per multicurve."""
        if self.order is None:
            raise ValueError("expand to a series first")
        return {mc: c[i] for mc, c in self.items() if c[i] != 0}

    def at_classical_limit(self) -> dict[Multicurve, Fraction]:
        """Value at h = 0 (equivalently A = -1)."""
        if self.order is None:
            out = {mc: Fraction(c.evaluate(-1)) for mc, c in self.items()}
            return {mc: v for mc, v in out.items() if v}
        return self.h_coefficient(0)

    def __repr__(self) -> str:
        return f"SkeinElement({self.surface}, {str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mc, c in self.items():
            parts.append(f"({c}) * {mc}" if len(str(c).split()) > 1 or self.order is not None else f"{c} * {mc}")
        return " + ".join(parts)

    def to_records(self) -> list[str]:
        """Line records ``term <multicurve> <coefficient>`` with exact coefficients."""
        out = []
        for mc, c in self.items():
            if self.order is None:
                body = " ".join(f"{e}:{v}" for e, v in c.items())
                out.append(f"term\t{mc}\tlaurent\t{body}")
            else:
                out.append(f"term\t{mc}\tseries\t{c.to_record()}")
        return out

    @classmethod
    def from_records(cls, surface: SurfaceKind, records: Iterable[str], order: int | None = None) -> "SkeinElement":
        terms = {}
        for rec in records:
            tag, mc_text, kind, body = rec.split("\t")
            if tag != "term":
                raise ValueError(f"not a term record: {rec!r}")
            mc = Multicurve.parse(mc_text, surface)
            if kind == "laurent":
                terms[mc] = LaurentPolynomial({int(e): int(v) for e, v in (t.split(":") for t in body.split())})
            else:
                c = TruncatedSeries.from_record(body)
                order = c.order
                terms[mc] = c
        return cls(surface, terms, order)


@lru_cache(maxsize=None)
def _delta_power(n: int) -> LaurentPolynomial:
    return DELTA**n


def bracket_resolve(d: Diagram, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> SkeinElement:
    """Kauffman bracket of ``d`` in the multicurve basis (Laurent coefficients)."""
    k = d.ncrossings
    terms: dict[Multicurve, LaurentPolynomial] = {}
    for (nA, triv, mc), count in state_histogram(d, max_crossings).items():
        c = LaurentPolynomial.monomial(2 * nA - k, count) * _delta_power(triv)
        terms[mc] = terms[mc] + c if mc in terms else c
    return SkeinElement(d.surface, terms)


def _as_series(c, order: int) -> TruncatedSeries:
    if isinstance(c, TruncatedSeries):
        return c.truncate(order) if c.order != order else c
    if isinstance(c, LaurentPolynomial):
        return expand_laurent(c, order)
    return TruncatedSeries((c,), order)


def normal_form(combination, order: int, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> SkeinElement:
    """Map a finite combination ``[(coefficient, Diagram), ...]`` into the basis over Q[[h]]/h^(N+1)."""
    items = list(combination.items()) if isinstance(combination, Mapping) else list(combination)
    if not items:
        raise ValueError("empty combination; surface unknown")
    surface = items[0][1].surface
    total = SkeinElement.zero(surface, order)
    for coeff, d in items:
        if d.surface is not surface:
            raise ValueError("diagrams on different surfaces")
        total = total + bracket_resolve(d, max_crossings).expand(order).scale(_as_series(coeff, order))
    return total


def resolve_recursive(d: Diagram) -> SkeinElement:
    """Bracket by smoothing one crossing at a time: D = A D_A + A^-1 D_B.

    Independent of the state enumerator; exponential, for cross-checks only.
    """
    if d.ncrossings == 0:
        triv, mc = classify_state(StateCurves(d.surface, d.loops))
        return SkeinElement(d.surface, {mc: _delta_power(triv)})
    c = d.ncrossings - 1
    left = resolve_recursive(smooth_crossing(d, c, "A"))
    right = resolve_recursive(smooth_crossing(d, c, "B"))
    return left.scale(A) + right.scale(A_INV)


def normal_form_sequential(combination, order: int) -> SkeinElement:
    """Normal form by successive approximation.

    Start from the combination itself.  At step ``n`` take the ``h^n``
    coefficient of every entry that is still a diagram with crossings or
    trivial circles, remove it, and add its resolution into basis elements.
    After ``order + 1`` steps nothing unresolved survives the truncation.
    """
    items = list(combination.items()) if isinstance(combination, Mapping) else list(combination)
    surface = items[0][1].surface
    pending: list[tuple[Diagram, list[Fraction]]] = []
    basis_part = SkeinElement.zero(surface, order)
    for coeff, d in items:
        pending.append((d, list(_as_series(coeff, order).coeffs)))
    for n in range(order + 1):
        for d, cs in pending:
            c = cs[n]
            if c == 0:
                continue
            cs[n] = Fraction(0)
            hn = TruncatedSeries([0] * n + [c], order)
            basis_part = basis_part + resolve_recursive(d).expand(order).scale(hn)
    assert all(not any(cs) for _, cs in pending)
    return basis_part


@lru_cache(maxsize=4096)
def basis_product(x: Multicurve, y: Multicurve, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> SkeinElement:
    """Laurent product of two basis multicurves, ``x`` stacked over ``y``."""
    if x.surface is not y.surface:
        raise ValueError("surface mismatch")
    if x.is_empty:
        return SkeinElement.basis(y)
    if y.is_empty:
        return SkeinElement.basis(x)
    return bracket_resolve(build_product_diagram(x, y), max_crossings)


def skein_mul(x: SkeinElement, y: SkeinElement) -> SkeinElement:
    """Bilinear stacking product."""
    if x.surface is not y.surface:
        raise ValueError("surface mismatch")
    if x.order != y.order:
        if x.order is None:
            x = x.expand(y.order)
        elif y.order is None:
            y = y.expand(x.order)
        else:
            n = min(x.order, y.order)
            x, y = x.expand(n), y.expand(n)
    order = x.order
    total = SkeinElement.zero(x.surface, order)
    for m1, c1 in x.items():
        for m2, c2 in y.items():
            prod = basis_product(m1, m2)
            if order is not None:
                prod = prod.expand(order)
            total = total + prod.scale(c1 * c2)
    return total


def skein_commutator(x: SkeinElement, y: SkeinElement, order: int) -> SkeinElement:
    """``(xy - yx) / h`` with series coefficients of order ``order - 1``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    xs, ys = x.expand(order), y.expand(order)
    diff = skein_mul(xs, ys) - skein_mul(ys, xs)
    for mc, c in diff.items():
        if c[0] != 0:
            raise ArithmeticError(f"commutator has non-zero h^0 part at {mc}; engine inconsistency")
    return diff.div_h()
