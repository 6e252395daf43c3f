import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qesosc.algebra import (DiagonalizationError, diagonalize, generator_matrix,
                            quartic_gauge_operator)
from qesosc.quartic import quartic_potential_coeffs

from oracles import operator_matrix_from_monomials, quadratic_roots_2x2, quartic_heun_apply

param = st.floats(-3, 3, allow_nan=False)


def test_lowering_n1():
    np.testing.assert_array_equal(generator_matrix("lowering", 1), [[0, 1], [0, 0]])


def test_neutral_n1():
    np.testing.assert_array_equal(generator_matrix("neutral", 1), np.diag([-0.5, 0.5]))


def test_raising_n2():
    jp = generator_matrix("raising", 2)
    # x^0 -> -2x, x^1 -> -x^2, x^2 -> 0
    np.testing.assert_array_equal(jp[:, 0], [0, -2, 0])
    np.testing.assert_array_equal(jp[:, 1], [0, 0, -1])
    np.testing.assert_array_equal(jp[:, 2], [0, 0, 0])


def test_unknown_kind():
    with pytest.raises(ValueError):
        generator_matrix("sideways", 2)
    with pytest.raises(ValueError):
        generator_matrix("raising", -1)


@pytest.mark.parametrize("n", range(11))
def test_commutation_relations(n):
    jp, j0, jm = (generator_matrix(k, n) for k in ("raising", "neutral", "lowering"))

    def comm(x, y):
        return x @ y - y @ x

    np.testing.assert_array_equal(comm(jp, jm), -2 * j0)
    np.testing.assert_array_equal(comm(j0, jp), jp)
    np.testing.assert_array_equal(comm(j0, jm), -jm)


@pytest.mark.parametrize("a", [-1.5, 0.0, 0.7])
def test_n0_operator(a):
    b = 0.4
    np.testing.assert_allclose(quartic_gauge_operator(a, b, 0), [[-2 * a - b * b]])


@given(a=param, b=param, n=st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_matrix_matches_differential_operator(a, b, n):
    q = quartic_potential_coeffs(a, b, n)[2]
    oracle = operator_matrix_from_monomials(lambda v: quartic_heun_apply(v, a, b, q), n)
    np.testing.assert_allclose(quartic_gauge_operator(a, b, n), oracle, atol=1e-12)


def test_a1_b0_n1_eigenvalues():
    h = quartic_gauge_operator(1.0, 0.0, 1)
    assert quadratic_roots_2x2(h) == pytest.approx([-6.0, -2.0], abs=1e-14)
    d = diagonalize(h)
    np.testing.assert_allclose(d.eigenvalues, [-6.0, -2.0], atol=1e-13)
    # phi = x + a -+ sqrt(a^2 - b): E = -6 <-> x, E = -2 <-> x + 2
    np.testing.assert_allclose(d[0].eigenvector, [0.0, 1.0], atol=1e-13)
    np.testing.assert_allclose(d[1].eigenvector, [2.0, 1.0], atol=1e-13)


def test_a0_b0_n1_eigenvalues():
    d = diagonalize(quartic_gauge_operator(0.0, 0.0, 1))
    # double root at 0 = -4a - b^2 +- 2 sqrt(a^2 - b)
    np.testing.assert_allclose(d.eigenvalues, [0.0, 0.0], atol=1e-7)


def test_diagonalize_scalar():
    d = diagonalize(np.array([[5.0]]))
    assert len(d) == 1 and d[0].eigenvalue == 5.0
    np.testing.assert_array_equal(d[0].eigenvector, [1.0])


def test_diagonalize_rotation_is_all_complex():
    d = diagonalize(np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert len(d) == 0
    assert d.n_complex == 2


def test_diagonalize_rejects_bad_input():
    with pytest.raises(ValueError):
        diagonalize(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        diagonalize(np.eye(40))


def test_diagonalize_failure_carries_matrix(monkeypatch):
    def boom(_):
        raise np.linalg.LinAlgError("no convergence")

    monkeypatch.setattr(np.linalg, "eig", boom)
    m = np.eye(2)
    with pytest.raises(DiagonalizationError) as info:
        diagonalize(m)
    np.testing.assert_array_equal(info.value.matrix, m)


@given(a=param, b=param, n=st.integers(0, 6))
@settings(max_examples=100, deadline=None)
def test_eigenvectors_solve_heun_equation(a, b, n):
    q = quartic_potential_coeffs(a, b, n)[2]
    h = quartic_gauge_operator(a, b, n)
    for pair in diagonalize(h):
        v, e = pair.eigenvector, pair.eigenvalue
        assert v[np.nonzero(np.abs(v) > 1e-13 * np.max(np.abs(v)))[0][-1]] == 1.0
        scale = max(1.0, np.max(np.abs(v)))
        resid = quartic_heun_apply(v, a, b, q)[: n + 1] - e * v
        assert np.max(np.abs(resid)) <= 1e-9 * scale
        assert np.max(np.abs(h @ v - e * v)) <= 1e-10 * max(1.0, abs(e)) * scale


@given(a=param, b=param)
@settings(max_examples=100, deadline=None)
def test_n1_matches_closed_form(a, b):
    disc = a * a - b
    if disc < 1e-6:
        return
    expected = sorted([-4 * a - b * b - 2 * np.sqrt(disc), -4 * a - b * b + 2 * np.sqrt(disc)])
    np.testing.assert_allclose(diagonalize(quartic_gauge_operator(a, b, 1)).eigenvalues,
                               expected, rtol=0, atol=1e-12)
