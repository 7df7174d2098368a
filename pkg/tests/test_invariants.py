from fractions import Fraction

import pytest

from kbskein.diagram import Diagram, DiagramParseError, Multicurve, SurfaceKind, closed_braid, parse_diagram
from kbskein.invariants import (
    CoefficientTable,
    SingularLink,
    cable,
    evaluate_witness,
    fti_coefficients,
    fti_valuation,
    jones,
    orient,
    parse_oriented_diagram,
    parse_singular_link,
    resolve_singular,
    singular_normal_form,
    span_check,
    writhe,
)
from kbskein.rings import A, A_INV, DELTA, TruncatedSeries, expand_laurent
from kbskein.skein import SkeinElement, bracket_resolve

from corpus import PD_CODES, oriented_disk_corpus, singular_fixtures
from oracle import oracle_jones_series

DISK, TORUS = SurfaceKind.DISK, SurfaceKind.TORUS
T = Multicurve.torus
UNKNOT = Diagram(DISK, 0, (), ((),))
EMPTY = Multicurve.empty(DISK)


# -- singular links ---------------------------------------------------------

def test_resolve_without_double_points():
    d = parse_diagram(PD_CODES["trefoil"])
    assert resolve_singular(SingularLink(d, ())) == [(1, d)]


def test_resolve_one_double_point():
    d = parse_diagram(PD_CODES["trefoil"])
    terms = resolve_singular(SingularLink(d, ((1, 1),)))
    assert [s for s, _ in terms] == [1, -1]
    assert terms[0][1] == d and terms[1][1].ncrossings == 3


def test_flip_negates():
    for s in singular_fixtures(count=10):
        for i in range(s.n):
            assert singular_normal_form(s.flip(i), 4) == -singular_normal_form(s, 4)


def test_double_point_bound():
    d = closed_braid(DISK, 2, [(0, 1)] * 5)
    s = SingularLink(d, tuple((c, 1) for c in range(5)))
    with pytest.raises(ValueError):
        resolve_singular(s, max_double_points=4)
    with pytest.raises(ValueError):
        fti_valuation(s, 3)


def test_singular_link_validation():
    d = parse_diagram(PD_CODES["hopf"])
    with pytest.raises(ValueError):
        SingularLink(d, ((0, 1), (0, -1)))
    with pytest.raises(ValueError):
        SingularLink(d, ((2, 1),))
    with pytest.raises(ValueError):
        SingularLink(d, ((0, 2),))


def test_valuation_on_fixtures():
    for s in singular_fixtures(count=20):
        v = fti_valuation(s, s.n + 1)
        assert v.value >= s.n


def test_kink_double_point_has_valuation_one():
    s = SingularLink(parse_diagram(PD_CODES["kink+"]), ((0, 1),))
    v = fti_valuation(s, 3)
    assert v.exact and v.value == 1


# -- coefficient tables -------------------------------------------------------

def test_unknot_table():
    table = fti_coefficients(bracket_resolve(UNKNOT).expand(2))
    assert table.get(0, EMPTY) == -2
    assert table.get(1, EMPTY) == 0
    assert table.get(2, EMPTY) == Fraction(-1, 4)
    assert table.to_records() == ["0, empty, -2/1", "2, empty, -1/4"]


def test_empty_and_curve_tables():
    table = fti_coefficients(SkeinElement.basis(EMPTY, 3))
    assert table.rows() == [(0, EMPTY, Fraction(1))]
    table = fti_coefficients(SkeinElement.basis(T(1, 1), 3))
    assert table.rows() == [(0, T(1, 1), Fraction(1))]


def test_table_records_round_trip():
    x = bracket_resolve(closed_braid(TORUS, 2, [(0, 1), (1, -1)])).expand(4)
    table = fti_coefficients(x)
    back = CoefficientTable.from_records(4, TORUS, table.to_records())
    assert back.entries == table.entries
    with pytest.raises(ValueError):
        fti_coefficients(SkeinElement.basis(T(1, 0)))


# -- writhe and Jones ---------------------------------------------------------

def test_writhe_examples():
    assert writhe(orient(UNKNOT)) == 0
    assert writhe(orient(parse_diagram(PD_CODES["kink+"]))) == 1
    assert writhe(orient(parse_diagram(PD_CODES["kink-"]))) == -1
    hopf = parse_diagram(PD_CODES["hopf"])
    w1, w2 = writhe(orient(hopf)), writhe(orient(hopf, ["1"]))
    assert {w1, w2} == {2, -2}


def test_writhe_against_independent_values():
    for name, d, w in oriented_disk_corpus():
        assert writhe(orient(d)) == w, name


def test_jones_trivial_cases():
    one = TruncatedSeries.one(6)
    assert jones(orient(Diagram(DISK, 0, (), ())), 6) == one
    assert jones(orient(UNKNOT), 6) == expand_laurent(DELTA, 6)


def test_jones_matches_oracle():
    for name, d, w in oriented_disk_corpus():
        ser = jones(orient(d), 6)
        assert [ser[i] for i in range(7)] == oracle_jones_series(d, w, 6), name


def test_jones_kink_invariance():
    one_kink = jones(orient(parse_diagram(PD_CODES["kink+"])), 6)
    assert one_kink == jones(orient(UNKNOT), 6)
    assert jones(orient(parse_diagram(PD_CODES["kink-"])), 6) == one_kink
    br = bracket_resolve(parse_diagram(PD_CODES["kink+"])).coefficient(EMPTY)
    assert br == -(A**3) * bracket_resolve(UNKNOT).coefficient(EMPTY)


def test_jones_markov_stabilization():
    base = jones(orient(closed_braid(DISK, 2, [(0, 1)] * 3)), 6)
    for s in (1, -1):
        stab = closed_braid(DISK, 3, [(0, 1)] * 3 + [(1, s)])
        assert jones(orient(stab), 6) == base


def test_jones_requires_disk():
    from kbskein.diagram import DiagramError

    with pytest.raises(DiagramError):
        orient(closed_braid(TORUS, 2, [(0, 1)]))


def test_parse_oriented_and_singular():
    od = parse_oriented_diagram("X[1,3,2,4]; X[3,1,4,2]\nreverse 1")
    assert writhe(od) in (2, -2)
    s = parse_singular_link("X[1,5,2,4]; X[3,1,4,6]; X[5,3,6,2]\ndouble 0\ndouble 2 -")
    assert s.double_points == ((0, 1), (2, -1))
    with pytest.raises(DiagramParseError) as exc:
        parse_singular_link("X[1,1,2,2]\ndouble 3")
    assert exc.value.line == 2
    with pytest.raises(DiagramParseError):
        parse_singular_link("X[1,1,2,2]\ndouble 0\ndouble 0 -")


# -- cabling and spans --------------------------------------------------------

def test_cable_examples():
    assert cable([T(1, 0)], [0]) == SkeinElement.basis(Multicurve.empty(TORUS))
    assert cable([T(1, 0)], [2]) == SkeinElement.basis(T(1, 0, 2))
    assert cable([UNKNOT], [2]).coefficient(EMPTY) == DELTA * DELTA
    two = cable([T(1, 0), T(0, 1)], [1, 1])
    assert two == SkeinElement(TORUS, {T(1, 1): A, T(1, -1): A_INV})
    with pytest.raises(ValueError):
        cable([T(1, 0, 2)], [1])


def test_span_simple_product():
    res = span_check([T(1, 0), T(0, 1), T(1, 1)], T(1, 1), 1, 4)
    assert res.success
    assert evaluate_witness(res) == SkeinElement.basis(T(1, 1), 4)
    # classically xy = (1,1) + (1,-1), so (1,1) alone is not a polynomial in x, y
    assert not span_check([T(1, 0), T(0, 1)], T(1, 1), 3, 2).success


def test_span_two_one_witness():
    gens = [T(1, 0), T(0, 1), T(1, 1)]
    res = span_check(gens, T(2, 1), 2, 4)
    assert res.success
    assert evaluate_witness(res) == SkeinElement.basis(T(2, 1), 4)
    coeffs = {counts: c for c, counts in res.witness}
    # (2,1) = A^-1 (1,0)(1,1) - A^-2 (0,1)
    assert coeffs[(1, 0, 1)] == expand_laurent(A_INV, 4)
    assert coeffs[(0, 1, 0)] == expand_laurent(-(A_INV**2), 4)
    assert res.expression().startswith("(+ ")


def test_span_failure_is_reported():
    res = span_check([T(1, 0)], T(0, 1), 3, 3)
    assert not res.success and res.failed_at == 0
    assert res.expression() == "(fail)"
    with pytest.raises(ValueError):
        span_check([T(1, 0)], T(0, 1), 7, 3)


def test_multiplicity_two_target_needs_degree_four():
    gens = [T(1, 0), T(0, 1), T(1, 1)]
    assert not span_check(gens, T(1, -1, 2), 3, 2).success
    res = span_check(gens, T(1, -1, 2), 4, 2)
    assert res.success
    assert evaluate_witness(res) == SkeinElement.basis(T(1, -1, 2), 2)
