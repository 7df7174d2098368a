"""Exact coefficient rings.

``LaurentPolynomial`` is a sparse element of Z[A, A^-1]; ``TruncatedSeries``
is an element of Q[[h]] / h^(N+1).  ``expand_laurent`` is the ring map
A -> -exp(h/4) between them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]


class LaurentPolynomial:
    """Sparse Laurent polynomial in ``A`` with integer coefficients.

    Terms are stored as a sorted tuple of ``(exponent, coefficient)`` pairs
    with no zero coefficients, so equal polynomials have equal storage.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            acc: dict[int, int] = {}
            for e, c in terms:
                acc[e] = acc.get(e, 0) + c
            items = acc.items()
        self._terms = tuple(sorted((int(e), int(c)) for e, c in items if c != 0))
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPolynomial":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPolynomial":
        return cls({0: c})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPolynomial(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self._terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials; use invert_variable")
        result = LaurentPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def invert_variable(self) -> "LaurentPolynomial":
        """Substitute A -> A^-1."""
        return LaurentPolynomial({-e: c for e, c in self._terms})

    def evaluate(self, a):
        return sum(c * a**e for e, c in self._terms)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({dict(self._terms)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for e, c in reversed(self._terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "A" if e == 1 else f"A^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not out:
                out.append(body if c > 0 else "-" + body)
            else:
                out.append(("+ " if c > 0 else "- ") + body)
        return " ".join(out)

    _TERM = re.compile(r"([+-]?)\s*(\d+)?\s*\*?\s*(A(?:\^(-?\d+))?)?")

    @classmethod
    def parse(cls, text: str) -> "LaurentPolynomial":
        """Inverse of ``str``; accepts e.g. ``"A^6 + 2 - 3*A^-2"``."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls()
        acc: dict[int, int] = {}
        pos = 0
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"cannot parse Laurent polynomial {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) is not None else 1
            else:
                exp = 0
            acc[exp] = acc.get(exp, 0) + sign * coeff
            pos = m.end()
        return cls(acc)


A = LaurentPolynomial.monomial(1)
A_INV = LaurentPolynomial.monomial(-1)
# value of a trivial circle
DELTA = LaurentPolynomial({2: -1, -2: -1})


def laurent_arith(p: LaurentPolynomial, q: LaurentPolynomial, op: str) -> LaurentPolynomial:
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def laurent_invert_variable(p: LaurentPolynomial) -> LaurentPolynomial:
    return p.invert_variable()


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class TruncatedSeries:
    """Power series in ``h`` with rational coefficients, modulo h^(order+1)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[Rational], order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = [_frac(c) for c in coeffs][: order + 1]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((), order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls((1,), order)

    @classmethod
    def h(cls, order: int) -> "TruncatedSeries":
        return cls((0, 1), order)

    @classmethod
    def exp(cls, rate: Rational, order: int) -> "TruncatedSeries":
        """exp(rate * h) truncated at ``order``."""
        r = _frac(rate)
        return cls((r**i / factorial(i) for i in range(order + 1)), order)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise ValueError(f"truncation mismatch: {self.order} vs {other.order}")
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries((other,), self.order)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries((other,), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TruncatedSeries((a + b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries((-a for a in self.coeffs), self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TruncatedSeries((a - b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries((a * other for a in self.coeffs), self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = self.order
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i, ai in enumerate(a):
            if ai:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncatedSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "TruncatedSeries":
        a0 = self.coeffs[0]
        if a0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        n = self.order
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / a0
        for k in range(1, n + 1):
            s = sum(self.coeffs[j] * inv[k - j] for j in range(1, k + 1))
            inv[k] = -s / a0
        return TruncatedSeries(inv, n)

    def div_h(self) -> "TruncatedSeries":
        """Exact division by h; the result has order ``order - 1``."""
        if self.coeffs[0] != 0:
            raise ValueError("series has non-zero constant term; not divisible by h")
        if self.order == 0:
            raise ValueError("cannot divide an order-0 series by h")
        return TruncatedSeries(self.coeffs[1:], self.order - 1)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def valuation(self) -> "HValuation":
        return h_valuation(self)

    def __repr__(self) -> str:
        return f"TruncatedSeries({[str(c) for c in self.coeffs]}, order={self.order})"

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                var = "h" if i == 1 else f"h^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        tail = f"O(h^{self.order + 1})"
        if not parts:
            return tail
        return " ".join(parts) + " + " + tail

    def to_record(self) -> str:
        """Machine form: space separated ``p/q`` coefficients."""
        return " ".join(f"{c.numerator}/{c.denominator}" for c in self.coeffs)

    @classmethod
    def from_record(cls, text: str) -> "TruncatedSeries":
        cs = [Fraction(tok) for tok in text.split()]
        return cls(cs, len(cs) - 1)


@dataclass(frozen=True)
class HValuation:
    """Least power of h with a non-zero coefficient.

    When every coefficient up to the truncation vanishes the valuation is only
    known to be at least ``order + 1``; ``exact`` is then False.
    """

    value: int
    exact: bool

    def at_least(self, n: int) -> bool:
        return self.value >= n

    def __str__(self) -> str:
        return str(self.value) if self.exact else f"≥ {self.value}"


def h_valuation(f: TruncatedSeries) -> HValuation:
    for i, c in enumerate(f.coeffs):
        if c != 0:
            return HValuation(i, True)
    return HValuation(f.order + 1, False)


_EXP_CACHE: dict[tuple[int, int], TruncatedSeries] = {}


def _signed_exp(k: int, order: int) -> TruncatedSeries:
    # (-1)^k exp(k h / 4)
    key = (k, order)
    s = _EXP_CACHE.get(key)
    if s is None:
        s = TruncatedSeries.exp(Fraction(k, 4), order)
        if k % 2:
            s = -s
        _EXP_CACHE[key] = s
    return s


def expand_laurent(p: LaurentPolynomial, order: int) -> TruncatedSeries:
    """Image of ``p`` under A -> -exp(h/4), truncated at ``order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    acc = [Fraction(0)] * (order + 1)
    for e, c in p.items():
        for i, v in enumerate(_signed_exp(e, order).coeffs):
            acc[i] += c * v
    return TruncatedSeries(acc, order)


def t_power(k: int, order: int) -> TruncatedSeries:
    """t^k = exp(k h / 4)."""
    return TruncatedSeries.exp(Fraction(k, 4), order)


def format_fraction(x: Fraction) -> str:
    x = _frac(x)
    return f"{x.numerator}/{x.denominator}"
