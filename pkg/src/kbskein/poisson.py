"""The Poisson bracket on the character ring, by state sums and by commutators."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from .diagram import Multicurve, SurfaceKind, build_product_diagram
from .skein import SkeinElement, basis_product, skein_commutator
from .statesum import state_histogram


class CharacterElement:
    """Rational combination of multicurves, read as products of -tr functions."""

    __slots__ = ("surface", "terms")

    def __init__(self, surface: SurfaceKind, terms: Mapping[Multicurve, Fraction | int] | None = None):
        self.surface = surface
        clean = {}
        for mc, c in (terms or {}).items():
            if mc.surface is not surface:
                raise ValueError(f"multicurve {mc} is not on the {surface}")
            c = Fraction(c)
            if c:
                clean[mc] = c
        self.terms = clean

    @classmethod
    def basis(cls, mc: Multicurve) -> "CharacterElement":
        return cls(mc.surface, {mc: 1})

    @classmethod
    def zero(cls, surface: SurfaceKind) -> "CharacterElement":
        return cls(surface)

    @classmethod
    def one(cls, surface: SurfaceKind) -> "CharacterElement":
        return cls(surface, {Multicurve.empty(surface): 1})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, CharacterElement):
            return NotImplemented
        return self.surface is other.surface and self.terms == other.terms

    def __hash__(self):
        return hash((self.surface, frozenset(self.terms.items())))

    def __add__(self, other: "CharacterElement") -> "CharacterElement":
        if other.surface is not self.surface:
            raise ValueError("surface mismatch")
        acc = dict(self.terms)
        for mc, c in other.terms.items():
            acc[mc] = acc.get(mc, 0) + c
        return CharacterElement(self.surface, acc)

    def __neg__(self):
        return CharacterElement(self.surface, {mc: -c for mc, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "CharacterElement":
        return CharacterElement(self.surface, {mc: c * v for mc, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CharacterElement):
            return classical_product(self, other)
        return self.scale(Fraction(other))

    def __rmul__(self, other):
        return self.scale(Fraction(other))

    def __repr__(self):
        return f"CharacterElement({self.surface}, {str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c} * {mc}" for mc, c in self.items())

    def to_records(self) -> list[str]:
        return [f"term\t{mc}\t{c.numerator}/{c.denominator}" for mc, c in self.items()]

    @classmethod
    def from_records(cls, surface: SurfaceKind, records) -> "CharacterElement":
        terms = {}
        for rec in records:
            tag, mc, val = rec.split("\t")
            if tag != "term":
                raise ValueError(f"not a term record: {rec!r}")
            terms[Multicurve.parse(mc, surface)] = Fraction(val)
        return cls(surface, terms)


CharacterLike = Union[Multicurve, CharacterElement]


def as_character(x: CharacterLike) -> CharacterElement:
    return CharacterElement.basis(x) if isinstance(x, Multicurve) else x


@lru_cache(maxsize=None)
def _classical_basis_product(x: Multicurve, y: Multicurve) -> CharacterElement:
    return CharacterElement(x.surface, basis_product(x, y).at_classical_limit())


def classical_product(x: CharacterLike, y: CharacterLike) -> CharacterElement:
    """Commutative product of the character ring (skein product at A = -1)."""
    x, y = as_character(x), as_character(y)
    total = CharacterElement.zero(x.surface)
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            total = total + _classical_basis_product(m1, m2).scale(c1 * c2)
    return total


@lru_cache(maxsize=None)
def statesum_direct(alpha: Multicurve, beta: Multicurve) -> CharacterElement:
    """Bracket of two basis multicurves from a single state sum.

    Draw ``alpha`` over ``beta`` with ``k`` crossings and sum over states
    ``(-1)^k * (inf(S) - zero(S)) / 2 * n_S``, where A-smoothings count as
    type infinity and B-smoothings as type zero.  A trivial circle in a
    state contributes -tr(I) = -2.
    """
    if alpha.surface is not beta.surface:
        raise ValueError("surface mismatch")
    surface = alpha.surface
    if surface is not SurfaceKind.TORUS or alpha.is_empty or beta.is_empty:
        return CharacterElement.zero(surface)
    d = build_product_diagram(alpha, beta)
    k = d.ncrossings
    sign = -1 if k % 2 else 1
    terms: dict[Multicurve, Fraction] = {}
    for (nA, triv, mc), count in state_histogram(d).items():
        inf, zero = nA, k - nA
        w = Fraction(sign * (inf - zero) * count, 2) * (-2) ** triv
        terms[mc] = terms.get(mc, 0) + w
    return CharacterElement(surface, terms)


def _bracket_basis(alpha: Multicurve, beta: Multicurve) -> CharacterElement:
    # Leibniz: {a^m, b^n} = m n a^(m-1) b^(n-1) {a, b}
    if alpha.surface is not beta.surface:
        raise ValueError("surface mismatch")
    surface = alpha.surface
    if surface is not SurfaceKind.TORUS or alpha.is_empty or beta.is_empty:
        return CharacterElement.zero(surface)
    core = statesum_direct(alpha.primitive, beta.primitive)
    if alpha.m == 1 and beta.m == 1:
        return core
    rest = classical_product(alpha.with_multiplicity(alpha.m - 1), beta.with_multiplicity(beta.m - 1))
    return classical_product(rest, core).scale(Fraction(alpha.m * beta.m))


def poisson_statesum(alpha: CharacterLike, beta: CharacterLike) -> CharacterElement:
    """Bracket via state sums, extended bilinearly and by the Leibniz rule."""
    a, b = as_character(alpha), as_character(beta)
    if a.surface is not b.surface:
        raise ValueError("surface mismatch")
    total = CharacterElement.zero(a.surface)
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            total = total + _bracket_basis(m1, m2).scale(c1 * c2)
    return total


def poisson_commutator(alpha: CharacterLike, beta: CharacterLike, order: int = 2) -> CharacterElement:
    """Bracket as the h^0 part of (xy - yx)/h for basis lifts of the arguments."""
    if order < 2:
        raise ValueError("order must be at least 2")
    a, b = as_character(alpha), as_character(beta)
    if a.surface is not b.surface:
        raise ValueError("surface mismatch")
    x = SkeinElement(a.surface, dict(a.terms), order)
    y = SkeinElement(b.surface, dict(b.terms), order)
    comm = skein_commutator(x, y, order)
    return CharacterElement(a.surface, comm.h_coefficient(0))


@dataclass(frozen=True)
class ThetaReport:
    alpha: CharacterLike
    beta: CharacterLike
    statesum: CharacterElement
    commutator: CharacterElement

    @property
    def equal(self) -> bool:
        return self.statesum == self.commutator

    def __str__(self):
        verdict = "AGREE" if self.equal else "DISAGREE"
        return f"{{{self.alpha}, {self.beta}}}: statesum = {self.statesum}; commutator = {self.commutator}; {verdict}"


def theta_morphism_check(alpha: CharacterLike, beta: CharacterLike, order: int = 2) -> ThetaReport:
    return ThetaReport(alpha, beta, poisson_statesum(alpha, beta), poisson_commutator(alpha, beta, order))


def primitive_classes(max_slope: int) -> list[Multicurve]:
    """Canonical primitive torus classes with |p|, |q| <= max_slope."""
    from math import gcd

    out = []
    for p in range(0, max_slope + 1):
        for q in range(-max_slope, max_slope + 1):
            if gcd(p, abs(q)) == 1 and (p > 0 or q > 0):
                out.append(Multicurve.torus(p, q))
    return out
