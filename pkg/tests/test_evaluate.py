import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qesosc.evaluate import (GridFunction, PotentialSpec, count_nodes, gauge_exponent,
                             norm_squared, normalized_wavefunction, one_sided_at_origin,
                             potential_spec, potential_value, schrodinger_residual,
                             wavefunction_derivatives, wavefunction_value)
from qesosc.quartic import quartic_family_solve
from qesosc.sextic import sextic_family_solve
from qesosc.states import Parity, QesState


def closed_form_states():
    out = []
    for a in (-1.0, 0.5, 1.0):
        out += quartic_family_solve(0, "even", a=a)
        out += quartic_family_solve(1, "odd", a=a)
    for b in (-1.0, 0.5, 2.0):
        out += quartic_family_solve(1, "even", b=b)
    for a, b in ((1.0, -1.0), (-1.0, -1.0), (0.0, 0.5)):
        for fam in ((0, "even"), (1, "odd"), (1, "even"), (2, "odd"), (2, "even")):
            out += sextic_family_solve(*fam, a, b)
    return out


STATES = closed_form_states()


def test_gauge_exponent_examples():
    q = QesState("quartic", 0, -2.0, (1.0,), a=1.0, b=0.0, parity=Parity.EVEN)
    assert gauge_exponent(0.0, q) == 0.0
    assert gauge_exponent(-1.0, q) == pytest.approx(2 / 3)
    s = QesState("sextic", 1, 0.0, (0.5128762716767156, 1.0), a=1.0, b=-1.0, c=-1.949788)
    assert gauge_exponent(1.0, s) == pytest.approx(-0.300212, abs=1e-12)
    assert gauge_exponent(-1.0, s) == gauge_exponent(1.0, s)


def test_potential_examples():
    assert potential_value(2.0, PotentialSpec("quartic", (0.0, 0.0, 0.0))) == 16.0
    (s,) = sextic_family_solve(0, "even", 0.0, -1.0)
    spec = potential_spec(s)
    xs = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(potential_value(xs, spec), xs ** 6 + 4 * xs ** 4 + xs ** 2)


def test_potential_spec_validation():
    with pytest.raises(ValueError):
        PotentialSpec("quartic", (1.0, 2.0))
    with pytest.raises(ValueError):
        PotentialSpec("octic", (1.0,))


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=5), st.floats(-4, 4))
def test_potential_is_even(coeffs, x):
    fam = "quartic" if len(coeffs) == 3 else "sextic"
    if len(coeffs) == 4:
        coeffs = coeffs + [0.0]
    spec = PotentialSpec(fam, tuple(coeffs))
    assert potential_value(x, spec) == potential_value(-x, spec)


def test_grid_function_validation():
    GridFunction(np.array([0.0, 1.0]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        GridFunction(np.array([1.0, 0.0]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        GridFunction(np.array([0.0, 1.0]), np.array([1.0]))


def test_wavefunction_examples():
    (s,) = sextic_family_solve(0, "even", 0.7, -1.0)
    xs = np.linspace(-3, 3, 31)
    np.testing.assert_allclose(wavefunction_value(xs, s),
                               np.exp(-xs ** 4 / 4 - 0.7 * np.abs(xs) ** 3 - xs ** 2))
    (q,) = quartic_family_solve(1, "odd", a=1.0)
    assert wavefunction_value(0.0, q) == 0.0
    for st_ in sextic_family_solve(1, "even", 1.0, -1.0):
        x = np.linspace(0.1, 3, 20)
        ref = np.exp(gauge_exponent(x, st_)) * (x + 1 / st_.c)
        # same function up to the overall sign fixed by the monic x<0 branch
        np.testing.assert_allclose(wavefunction_value(x, st_), -ref, rtol=1e-13, atol=1e-300)


def test_wavefunction_needs_parity():
    with pytest.raises(ValueError):
        wavefunction_value(0.5, QesState("quartic", 0, 0.0, (1.0,), a=0.0, b=0.0))


@pytest.mark.parametrize("state", STATES, ids=lambda s: f"{s.family}-{s.n}-{s.parity.label}")
def test_parity_symmetry(state):
    xs = np.random.default_rng(0).uniform(-4, 4, 1000)
    np.testing.assert_array_equal(wavefunction_value(-xs, state),
                                  int(state.parity) * wavefunction_value(xs, state))


@pytest.mark.parametrize("state", STATES, ids=lambda s: f"{s.family}-{s.n}-{s.parity.label}")
def test_continuity_at_origin(state):
    (psi_l, d_l), (psi_r, d_r) = one_sided_at_origin(state)
    scale = max(1.0, *np.abs(state.coeffs))
    assert psi_l == psi_r
    assert abs(d_l - d_r) <= 1e-9 * scale
    if state.parity is Parity.ODD:
        assert psi_l == 0.0


@pytest.mark.parametrize("state", STATES, ids=lambda s: f"{s.family}-{s.n}-{s.parity.label}")
def test_schrodinger_residual_exact(state):
    assert schrodinger_residual(state) <= 1e-10


def test_residual_detects_wrong_energy():
    (s,) = quartic_family_solve(0, "even", a=1.0)
    assert schrodinger_residual(s, energy=s.energy + 0.1) >= 1e-3
    assert schrodinger_residual(s) <= 1e-10


def test_residual_accepts_grid_function():
    (s,) = quartic_family_solve(0, "even", a=1.0)
    xs = np.linspace(-5, 5, 1001)
    assert schrodinger_residual(s, grid=GridFunction(xs, np.zeros_like(xs))) <= 1e-10


@pytest.mark.parametrize("state", STATES[::3], ids=lambda s: f"{s.family}-{s.n}-{s.parity.label}")
def test_finite_difference_second_derivative_order(state):
    xs = np.array([-1.3, -0.4, 0.7, 1.9])
    _, _, exact = wavefunction_derivatives(xs, state)
    errs = []
    for h in (1e-3, 1e-4):
        fd = (wavefunction_value(xs + h, state) - 2 * wavefunction_value(xs, state)
              + wavefunction_value(xs - h, state)) / h ** 2
        errs.append(np.max(np.abs(fd - exact)))
    # below 1e-4 roundoff (eps / h^2 ~ 1e-8) starts to compete, so only check the coarse step
    assert errs[0] < 1e-5 * max(1.0, np.max(np.abs(exact)))
    h1, h2 = 2e-2, 1e-2
    e1 = np.max(np.abs((wavefunction_value(xs + h1, state) - 2 * wavefunction_value(xs, state)
                        + wavefunction_value(xs - h1, state)) / h1 ** 2 - exact))
    e2 = np.max(np.abs((wavefunction_value(xs + h2, state) - 2 * wavefunction_value(xs, state)
                        + wavefunction_value(xs - h2, state)) / h2 ** 2 - exact))
    assert np.log2(e1 / e2) >= 1.9


def test_node_counts_examples():
    (g,) = sextic_family_solve(0, "even", 1.0, -1.0)
    assert count_nodes(g) == 0
    neg = [s for s in sextic_family_solve(1, "even", 1.0, -1.0) if s.c < 0]
    assert count_nodes(neg[0]) == 2
    pos = [s for s in sextic_family_solve(2, "odd", 1.0, -1.0) if s.c > 0]
    assert count_nodes(pos[0]) == 1


def test_count_nodes_argument_checks():
    (g,) = quartic_family_solve(0, "even", a=1.0)
    with pytest.raises(ValueError):
        count_nodes(g, window=0)
    with pytest.raises(ValueError):
        count_nodes(g, samples=10)


def test_grazing_zero_is_not_a_node():
    # phi = x^2 touches zero at the origin without changing sign
    s = QesState("quartic", 2, 0.0, (0.0, 0.0, 1.0), a=0.0, b=0.0, parity=Parity.EVEN)
    assert count_nodes(s) == 0


@pytest.mark.parametrize("state", STATES[::4], ids=lambda s: f"{s.family}-{s.n}-{s.parity.label}")
def test_normalization_converges(state):
    w = 8.0 if state.family == "quartic" else 6.0
    n8 = norm_squared(state, window=w, samples=16001)
    n10 = norm_squared(state, window=w + 2, samples=20001)
    assert abs(n8 - n10) <= 1e-12 * n10


def test_normalized_wavefunction_sign_and_norm():
    (s,) = quartic_family_solve(1, "even", b=-1.0)
    xs = np.linspace(-6, 6, 12001)
    psi = normalized_wavefunction(xs, s)
    assert np.trapezoid(psi ** 2, xs) == pytest.approx(1.0, abs=1e-8)
    assert psi[xs > 0][0] > 0
