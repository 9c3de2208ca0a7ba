import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swlw.errors import ConfigurationError
from swlw.grids import Grid1D
from swlw.spinor import (SpinorField1D, make_alpha, observables, thirring_U,
                         validate_alpha)


def dense_thirring_oracle(u, alpha):
    """Independent dense evaluation of (u^dag u) I - (u^dag a u) a."""
    u = np.asarray(u, dtype=complex).reshape(2, 1)
    udag = u.conj().T
    density = (udag @ u)[0, 0]
    current = (udag @ alpha @ u)[0, 0]
    return density * np.eye(2) - current * alpha


class TestMakeAlpha:
    def test_diag(self):
        a = make_alpha("diag_pm1")
        assert np.array_equal(a, np.diag([1.0 + 0j, -1.0]))

    def test_pauli_x(self):
        a = make_alpha("pauli_x")
        assert np.array_equal(a, np.array([[0, 1], [1, 0]], dtype=complex))

    def test_custom_valid(self):
        theta = 0.3
        rot = np.array([[np.cos(theta), np.sin(theta)],
                        [np.sin(theta), -np.cos(theta)]], dtype=complex)
        a = make_alpha("custom", rot)
        validate_alpha(a)

    def test_custom_not_hermitian_rejected(self):
        with pytest.raises(ConfigurationError):
            make_alpha("custom", [[1, 1], [0, 1]])

    def test_custom_not_involution_rejected(self):
        with pytest.raises(ConfigurationError):
            make_alpha("custom", [[2, 0], [0, -2]])


class TestThirringU:
    def test_plus_state_diag(self):
        U = thirring_U([1.0, 0.0], make_alpha("diag_pm1"))
        assert np.allclose(U, np.diag([0.0, 2.0]), atol=1e-14)

    def test_zero_state(self):
        U = thirring_U([0.0, 0.0], make_alpha("pauli_x"))
        assert np.allclose(U, 0.0)

    def test_against_dense_oracle_pauli(self):
        u = np.array([1.0, 1j]) / np.sqrt(2.0)
        alpha = make_alpha("pauli_x")
        assert np.allclose(thirring_U(u, alpha),
                           dense_thirring_oracle(u, alpha), atol=1e-14)

    def test_diag_general_value(self):
        # for diag(1,-1): U = diag(2|u2|^2, 2|u1|^2)
        u = np.array([0.3 + 0.4j, -1.2 + 0.5j])
        U = thirring_U(u, make_alpha("diag_pm1"))
        expected = np.diag([2.0 * abs(u[1]) ** 2, 2.0 * abs(u[0]) ** 2])
        assert np.allclose(U, expected, atol=1e-14)


complex_values = st.complex_numbers(max_magnitude=5.0, allow_nan=False,
                                    allow_infinity=False)


@given(u1=complex_values, u2=complex_values,
       choice=st.sampled_from(["diag_pm1", "pauli_x"]))
@settings(max_examples=60, deadline=None)
def test_thirring_hermitian_and_commutes(u1, u2, choice):
    alpha = make_alpha(choice)
    U = thirring_U([u1, u2], alpha)
    assert np.max(np.abs(U - U.conj().T)) <= 1e-12 * max(1.0, abs(u1) ** 2 + abs(u2) ** 2)
    assert np.max(np.abs(alpha @ U - U @ alpha)) <= 1e-12 * max(1.0, abs(u1) ** 2 + abs(u2) ** 2)


class TestObservables:
    def grid(self, n=16):
        return Grid1D(0.0, 1.0, n, "periodic")

    def constant_field(self, u1, u2, n=16):
        grid = self.grid(n)
        vals = np.stack([np.full(n, u1, dtype=complex),
                         np.full(n, u2, dtype=complex)])
        return SpinorField1D(grid, vals)

    def test_plus_state(self):
        pair = observables(self.constant_field(1.0, 0.0), make_alpha())
        assert np.allclose(pair.w_plus, 1.0)
        assert np.allclose(pair.w_minus, 1.0)

    def test_minus_state(self):
        pair = observables(self.constant_field(0.0, 1.0), make_alpha())
        assert np.allclose(pair.w_plus, 1.0)
        assert np.allclose(pair.w_minus, -1.0)

    def test_balanced_state(self):
        amp = 1.0 / np.sqrt(2.0)
        pair = observables(self.constant_field(amp, amp), make_alpha())
        assert np.allclose(pair.w_plus, 1.0)
        assert np.allclose(pair.w_minus, 0.0, atol=1e-15)

    def test_diag_exact_formulas(self):
        rng = np.random.default_rng(3)
        grid = self.grid(32)
        vals = rng.normal(size=(2, 32)) + 1j * rng.normal(size=(2, 32))
        pair = observables(SpinorField1D(grid, vals), make_alpha())
        assert np.allclose(pair.w_plus, np.abs(vals[0]) ** 2 + np.abs(vals[1]) ** 2)
        assert np.allclose(pair.w_minus, np.abs(vals[0]) ** 2 - np.abs(vals[1]) ** 2)


@given(data=st.lists(st.tuples(complex_values, complex_values), min_size=8,
                     max_size=8),
       choice=st.sampled_from(["diag_pm1", "pauli_x"]))
@settings(max_examples=40, deadline=None)
def test_current_bounded_by_density(data, choice):
    grid = Grid1D(0.0, 1.0, 8, "periodic")
    vals = np.array(data, dtype=complex).T
    pair = observables(SpinorField1D(grid, vals), make_alpha(choice))
    scale = np.maximum(pair.w_plus, 1.0)
    assert np.all(np.abs(pair.w_minus) <= pair.w_plus + 1e-12 * scale)


def test_field_rejects_nan():
    grid = Grid1D(0.0, 1.0, 8, "periodic")
    vals = np.zeros((2, 8), dtype=complex)
    vals[0, 3] = np.nan
    with pytest.raises(ConfigurationError):
        SpinorField1D(grid, vals)


def test_field_shape_mismatch():
    grid = Grid1D(0.0, 1.0, 8, "periodic")
    with pytest.raises(ConfigurationError):
        SpinorField1D(grid, np.zeros((2, 9), dtype=complex))
