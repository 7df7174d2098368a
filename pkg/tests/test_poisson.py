from fractions import Fraction

import numpy as np
import pytest

from kbskein.characters import character_eval, goldman_numeric, random_torus_rep
from kbskein.diagram import Multicurve
from kbskein.poisson import (
    CharacterElement,
    classical_product,
    poisson_commutator,
    poisson_statesum,
    primitive_classes,
    statesum_direct,
    theta_morphism_check,
)

T = Multicurve.torus
EXAMPLE = CharacterElement(T(1, 0).surface, {T(1, 1): Fraction(-1, 2), T(1, -1): Fraction(1, 2)})


def test_statesum_example():
    assert poisson_statesum(T(1, 0), T(0, 1)) == EXAMPLE


def test_commutator_example():
    assert poisson_commutator(T(1, 0), T(0, 1), 2) == EXAMPLE


def test_trivial_brackets():
    z = Multicurve.core
    assert not poisson_statesum(z(2), z(3))
    assert not poisson_commutator(z(2), z(3))
    assert not poisson_statesum(T(2, 1), T(2, 1))
    assert not poisson_commutator(T(2, 1), T(2, 1))


def test_primitive_class_count():
    assert len(primitive_classes(3)) == 16
    assert len(primitive_classes(1)) == 4


def test_leibniz_shortcut_matches_direct_state_sum():
    for a, b in [(T(1, 0, 2), T(0, 1)), (T(1, 0, 2), T(1, 1, 2)), (T(2, 1), T(0, 1, 3))]:
        assert poisson_statesum(a, b) == statesum_direct(a, b)


def test_multiplicities_agree_with_commutator():
    for a, b in [(T(1, 0, 2), T(0, 1)), (T(1, 1, 2), T(1, -1))]:
        report = theta_morphism_check(a, b, 3)
        assert report.equal, str(report)


def test_classical_product_commutative_and_unital():
    one = CharacterElement.one(T(1, 0).surface)
    x = CharacterElement.basis(T(2, 1))
    assert classical_product(one, x) == x
    assert classical_product(T(1, 0), T(0, 1)) == classical_product(T(0, 1), T(1, 0))


def test_report_rendering():
    s = str(theta_morphism_check(T(1, 0), T(0, 1)))
    assert s.endswith("AGREE")


def test_records_round_trip():
    x = poisson_statesum(T(2, 1), T(1, -1))
    assert CharacterElement.from_records(x.surface, x.to_records()) == x


@pytest.mark.parametrize("seed", range(3))
def test_goldman_closure_spot_check(seed):
    rho = random_torus_rep(np.random.default_rng(seed))
    for a in primitive_classes(2):
        for b in primitive_classes(2):
            lhs = character_eval(poisson_statesum(a, b), rho)
            rhs = goldman_numeric((a.p, a.q), (b.p, b.q), rho)
            assert abs(lhs - rhs) < 1e-8
