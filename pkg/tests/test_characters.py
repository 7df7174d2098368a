import numpy as np
import pytest

from kbskein.characters import (
    FORM_B,
    H,
    X,
    Y,
    TorusRep,
    character_eval,
    expm_sl2,
    form_B,
    format_rep,
    goldman_numeric,
    grad_trace,
    lie_matrix,
    lie_vector,
    parabolic_torus_rep,
    parse_complex,
    parse_rep,
    random_sl2,
    random_torus_rep,
    trace_differential_fd,
    trace_identities_check,
)
from kbskein.diagram import Multicurve

DIAG_A = np.diag([2, 0.5]).astype(complex)
DIAG_B = np.diag([3, 1 / 3]).astype(complex)


def test_grad_trace_examples():
    assert np.allclose(grad_trace(np.eye(2, dtype=complex)), 0)
    assert np.allclose(grad_trace(DIAG_A), lie_vector(0, -0.75, 0))


def test_form_entries():
    e = np.eye(3, dtype=complex)
    assert form_B(e[1], e[1]) == -2
    assert form_B(e[0], e[2]) == -1
    assert np.allclose(FORM_B, FORM_B.T)


def test_form_is_trace_form():
    # B(u, v) = -tr(uv) on sl2 in this basis
    rng = np.random.default_rng(1)
    for _ in range(10):
        u = rng.normal(size=3) + 1j * rng.normal(size=3)
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        assert abs(form_B(u, v) + np.trace(lie_matrix(u) @ lie_matrix(v))) < 1e-12


def test_gradient_self_pairing_example():
    g = grad_trace(DIAG_A)
    assert abs(form_B(g, g) - (-9 / 8)) < 1e-12
    half = 0.5 * np.trace(np.eye(2)) - 0.5 * np.trace(DIAG_A @ DIAG_A)
    assert abs(form_B(g, g) - half) < 1e-12


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a = random_sl2(rng)
        g = grad_trace(a)
        for basis in (X, H, Y):
            w = basis
            v = lie_vector(*(1.0 if b is basis else 0.0 for b in (X, H, Y)))
            assert abs(trace_differential_fd(a, w) - form_B(g, v)) < 1e-6


def test_expm_is_group_valued():
    rng = np.random.default_rng(3)
    w = lie_matrix(rng.normal(size=3))
    assert abs(np.linalg.det(expm_sl2(w)) - 1) < 1e-12
    assert np.allclose(expm_sl2(0 * w), np.eye(2))


def test_trace_identities():
    rng = np.random.default_rng(11)
    assert trace_identities_check(np.eye(2), np.eye(2)) == 0
    a = random_sl2(rng)
    assert trace_identities_check(a, random_sl2(rng)) < 1e-9
    assert trace_identities_check(a, np.linalg.inv(a)) < 1e-9


def test_character_eval_examples():
    rho = TorusRep(DIAG_A, DIAG_B)
    assert character_eval(Multicurve.torus(1, 0), rho) == pytest.approx(-2.5)
    assert character_eval(Multicurve.torus(1, 0, 2), rho) == pytest.approx(6.25)
    assert character_eval(Multicurve.empty(Multicurve.torus(1, 0).surface), rho) == 1


def test_goldman_fixed_instance_magnitude_and_antisymmetry():
    rho = TorusRep(DIAG_A, DIAG_B)
    # one intersection point, per-point value (tr(ab^-1) - tr(ab)) / 2 = -2
    a, b = DIAG_A, DIAG_B
    per_point = 0.5 * (np.trace(a @ np.linalg.inv(b)) - np.trace(a @ b))
    assert per_point == pytest.approx(-2)
    forward = goldman_numeric((1, 0), (0, 1), rho)
    assert abs(forward) == pytest.approx(2)
    assert goldman_numeric((0, 1), (1, 0), rho) == pytest.approx(-forward)
    assert goldman_numeric((1, 0), (0, 1), rho, orientation=1) == pytest.approx(-2)


def test_goldman_equal_classes_vanish():
    rng = np.random.default_rng(5)
    rho = random_torus_rep(rng)
    assert goldman_numeric((2, 1), (2, 1), rho) == 0


def test_rep_validation():
    with pytest.raises(ValueError):
        TorusRep(np.diag([2, 1]).astype(complex), DIAG_B)
    with pytest.raises(ValueError):
        TorusRep(DIAG_A, np.array([[1, 1], [0, 1]], dtype=complex))


def test_parabolic_reps():
    rho = parabolic_torus_rep(0.3 + 1j, -2.0, sign_a=-1)
    assert character_eval(Multicurve.torus(1, 0), rho) == pytest.approx(2)


def test_rep_file_round_trip():
    rng = np.random.default_rng(2)
    rho = random_torus_rep(rng)
    back = parse_rep(format_rep(rho))
    assert np.allclose(back.ma, rho.ma) and np.allclose(back.mb, rho.mb)
    assert parse_complex("-i") == -1j and parse_complex("2+0i") == 2
    with pytest.raises(ValueError):
        parse_rep("1 0\n0 1\n")
