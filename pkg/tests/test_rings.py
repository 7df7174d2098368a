from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kbskein.rings import (
    A,
    A_INV,
    DELTA,
    HValuation,
    LaurentPolynomial,
    TruncatedSeries,
    expand_laurent,
    h_valuation,
    laurent_arith,
    laurent_invert_variable,
    t_power,
)

laurents = st.dictionaries(st.integers(-8, 8), st.integers(-10, 10), max_size=6).map(LaurentPolynomial)
series = st.lists(st.fractions(max_denominator=20).filter(lambda x: abs(x) < 50), min_size=5, max_size=5).map(
    lambda cs: TruncatedSeries(cs, 4)
)


def test_binomial():
    assert laurent_arith(A + A_INV, A + A_INV, "mul") == LaurentPolynomial({2: 1, 0: 2, -2: 1})


def test_additive_identity_and_cancellation():
    p = LaurentPolynomial({3: 2, -1: -5})
    assert laurent_arith(p, LaurentPolynomial(), "add") == p
    z = LaurentPolynomial({3: 1}) - LaurentPolynomial({3: 1})
    assert z.terms == {} and not z


def test_invert_variable_examples():
    sym = LaurentPolynomial({2: 1, 0: 2, -2: 1})
    assert laurent_invert_variable(sym) == sym
    assert laurent_invert_variable(LaurentPolynomial({3: 1})) == LaurentPolynomial({-3: 1})
    assert laurent_invert_variable(LaurentPolynomial()) == LaurentPolynomial()


def test_render_and_parse():
    p = LaurentPolynomial({6: 1, 2: 1, -2: 1, -6: 1})
    assert str(p) == "A^6 + A^2 + A^-2 + A^-6"
    assert LaurentPolynomial.parse(str(p)) == p
    q = LaurentPolynomial({3: -2, 0: 5, -1: 1})
    assert LaurentPolynomial.parse(str(q)) == q


def test_expand_examples():
    e = expand_laurent(A, 4)
    assert e.coeffs == tuple(Fraction(x) for x in ("-1", "-1/4", "-1/32", "-1/384", "-1/6144"))
    assert expand_laurent(DELTA, 4).coeffs == (-2, 0, Fraction(-1, 4), 0, Fraction(-1, 192))
    assert expand_laurent(A_INV - A, 3).coeffs == (0, Fraction(1, 2), 0, Fraction(1, 192))
    assert str(expand_laurent(DELTA, 4)) == "-2 - 1/4*h^2 - 1/192*h^4 + O(h^5)"


def test_t_power_is_minus_a():
    assert t_power(1, 6) == -expand_laurent(A, 6)


def test_valuation_examples():
    h = TruncatedSeries.h(5)
    assert h_valuation(h * h * Fraction(1, 4) - h**3) == HValuation(2, True)
    z = h_valuation(TruncatedSeries.zero(5))
    assert not z.exact and str(z) == "≥ 6"
    assert h_valuation(3 + h).value == 0


@settings(max_examples=200, deadline=None)
@given(laurents, laurents, st.sampled_from([2, 6, 10]))
def test_expansion_is_a_homomorphism(p, q, n):
    assert expand_laurent(p * q, n) == expand_laurent(p, n) * expand_laurent(q, n)
    assert expand_laurent(p + q, n) == expand_laurent(p, n) + expand_laurent(q, n)


@given(laurents)
def test_invert_is_involution(p):
    assert p.invert_variable().invert_variable() == p


@given(series, series, series)
def test_series_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


def test_series_inverse_and_exp():
    x = TruncatedSeries.exp(Fraction(1, 4), 6)
    assert x * x.inverse() == TruncatedSeries.one(6)
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries.h(3).inverse()


def test_series_record_round_trip():
    s = expand_laurent(DELTA * A, 5)
    assert TruncatedSeries.from_record(s.to_record()) == s


def test_order_mismatch_rejected():
    with pytest.raises(ValueError):
        TruncatedSeries.one(3) + TruncatedSeries.one(4)
