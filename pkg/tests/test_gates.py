import numpy as np
import pytest

from swlw.errors import ConfigurationError
from swlw.gates import BUMP_MASS, CouplingGate, bump, bump_d1, null_gate


def test_bump_support():
    s = np.array([-2.0, -1.0, -0.999, 0.0, 0.999, 1.0, 2.0])
    vals = bump(s)
    assert vals[0] == 0.0 and vals[1] == 0.0 and vals[5] == 0.0 and vals[6] == 0.0
    assert vals[3] == pytest.approx(np.exp(-1.0))


def test_bump_mass_value():
    # frozen once from high-order quadrature of exp(-1/(1-s^2)) over [-1, 1]
    assert BUMP_MASS == pytest.approx(0.4439938161680793, abs=1e-12)


def test_gate_prime_vanishes_outside_support():
    gate = CouplingGate.symmetric(0.9, 1.3)
    v = np.array([-2.0, -0.9, 0.9, 2.0, 5.0])
    assert np.all(gate.g_prime(v) == 0.0)
    assert np.all(gate.g_double_prime(v) == 0.0)
    assert np.all(gate.g_triple_prime(v) == 0.0)


def test_gate_antiderivative_constants():
    gate = CouplingGate.symmetric(0.5, 2.0)
    assert gate.g(-0.5) == 0.0
    assert gate.g(-3.0) == 0.0
    assert gate.g(0.5) == pytest.approx(gate.total_increment, rel=1e-12)
    assert gate.g(10.0) == gate.g(0.5)


def test_gate_g_matches_quadrature_of_g_prime():
    gate = CouplingGate.on_interval(0.2, 1.4, 0.7)
    from scipy.integrate import quad
    for v in (0.3, 0.65, 1.0, 1.39):
        ref, _ = quad(lambda s: gate.g_prime(s), 0.2, v, limit=200)
        assert gate.g(v) == pytest.approx(ref, abs=1e-9)


def test_gate_derivative_ladder_fd():
    gate = CouplingGate.symmetric(0.9, 1.0)
    v = np.linspace(-0.85, 0.85, 31)
    h = 1e-6
    fd1 = (gate.g(v + h) - gate.g(v - h)) / (2 * h)
    assert np.max(np.abs(fd1 - gate.g_prime(v))) < 1e-7
    fd2 = (gate.g_prime(v + h) - gate.g_prime(v - h)) / (2 * h)
    assert np.max(np.abs(fd2 - gate.g_double_prime(v))) < 1e-5
    gate.check_smoothness()


def test_gate_smoothness_check_relative_tolerance():
    # the ladder check is the C^3 consistency guard; it must pass for a
    # rescaled gate as well (relative comparison)
    CouplingGate.on_interval(-3.0, -1.0, 0.01).check_smoothness()


def test_interval_gate_support():
    gate = CouplingGate.on_interval(1.0, 1.4, 1.0)
    lo, hi = gate.support
    assert lo == pytest.approx(1.0) and hi == pytest.approx(1.4)
    assert gate.g_prime(1.2) > 0.0


def test_invalid_gate():
    with pytest.raises(ConfigurationError):
        CouplingGate(0.0, -1.0, 1.0)
    with pytest.raises(ConfigurationError):
        CouplingGate.on_interval(1.0, 1.0, 1.0)


def test_null_gate():
    gate = null_gate()
    v = np.linspace(-2, 2, 11)
    assert np.all(gate.g(v) == 0.0)
    assert np.all(gate.g_prime(v) == 0.0)
