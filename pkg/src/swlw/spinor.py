"""Dirac-matrix algebra, 2-component spinor fields and their quadratic observables.

The two real observables carried by a spinor field u are the density
w_plus = |u|^2 and the current w_minus = u^dag a u, where a is a Hermitian
involution (a^2 = I).  Everything downstream (closed-form evolution,
coupling sources for the long waves) consumes these two fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grids import Grid1D

ALGEBRA_TOL = 1e-12

ALPHA_DIAG = "diag_pm1"
ALPHA_PAULI_X = "pauli_x"
ALPHA_CUSTOM = "custom"


def make_alpha(choice: str = ALPHA_DIAG, matrix=None) -> np.ndarray:
    """Build a 2x2 Hermitian involution.

    ``diag_pm1`` -> diag(1, -1), ``pauli_x`` -> [[0,1],[1,0]], ``custom``
    validates the supplied matrix and rejects it unless it is Hermitian and
    squares to the identity (tolerance 1e-12).
    """
    if choice == ALPHA_DIAG:
        return np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    if choice == ALPHA_PAULI_X:
        return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    if choice == ALPHA_CUSTOM:
        if matrix is None:
            raise ConfigurationError("make_alpha: custom choice requires a matrix")
        a = np.asarray(matrix, dtype=complex)
        validate_alpha(a)
        return a
    raise ConfigurationError(f"make_alpha: unknown choice {choice!r}")


def validate_alpha(alpha: np.ndarray, tol: float = ALGEBRA_TOL) -> None:
    alpha = np.asarray(alpha, dtype=complex)
    if alpha.shape != (2, 2):
        raise ConfigurationError("alpha must be a 2x2 matrix")
    if np.max(np.abs(alpha - alpha.conj().T)) > tol:
        raise ConfigurationError("alpha must be Hermitian (invalid model setup)")
    if np.max(np.abs(alpha @ alpha - np.eye(2))) > tol:
        raise ConfigurationError("alpha squared must equal the identity "
                                 "(invalid model setup)")


def is_diag_pm1(alpha: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    return np.max(np.abs(np.asarray(alpha) - np.diag([1.0, -1.0]))) <= tol


def alpha_eigenbasis(alpha: np.ndarray):
    """Unitary P with columns the (+1, -1) eigenvectors of alpha.

    In that basis alpha acts as diag(1, -1); components transform as
    c = P^dag u.  For alpha already equal to diag(1, -1) this is the identity.
    """
    alpha = np.asarray(alpha, dtype=complex)
    validate_alpha(alpha)
    if is_diag_pm1(alpha):
        return np.eye(2, dtype=complex)
    vals, vecs = np.linalg.eigh(alpha)
    order = np.argsort(-vals)          # +1 eigenvector first
    vals = vals[order]
    if np.max(np.abs(vals - np.array([1.0, -1.0]))) > 1e-10:
        raise ConfigurationError("alpha eigenvalues must be +1 and -1")
    return vecs[:, order]


def thirring_U(u, alpha) -> np.ndarray:
    """Quadratic matrix functional (u^dag u) I - (u^dag a u) a for one spinor value."""
    u = np.asarray(u, dtype=complex).reshape(2)
    alpha = np.asarray(alpha, dtype=complex)
    density = float(np.real(np.vdot(u, u)))
    current = float(np.real(np.vdot(u, alpha @ u)))
    return density * np.eye(2, dtype=complex) - current * alpha


@dataclass
class SpinorField1D:
    """Two complex components sampled on a 1-D grid; values has shape (2, n)."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=complex)
        if self.values.shape != (2, self.grid.n_nodes):
            raise ConfigurationError(
                f"spinor values shape {self.values.shape} does not match grid "
                f"(expected (2, {self.grid.n_nodes}))")
        if not np.all(np.isfinite(self.values.view(float))):
            raise ConfigurationError("spinor values must be finite")

    @classmethod
    def from_callables(cls, grid: Grid1D, u1, u2) -> "SpinorField1D":
        x = grid.nodes()
        vals = np.stack([np.asarray(u1(x), dtype=complex) * np.ones_like(x),
                         np.asarray(u2(x), dtype=complex) * np.ones_like(x)])
        return cls(grid, vals)

    def copy(self) -> "SpinorField1D":
        return SpinorField1D(self.grid, self.values.copy())

    def l2_norm(self) -> float:
        return float(np.sqrt(self.grid.integrate(np.sum(np.abs(self.values) ** 2, axis=0))))


@dataclass
class ObservablePair:
    """Density w_plus = |u|^2 >= 0 and current w_minus = u^dag a u, |w_minus| <= w_plus."""

    w_plus: np.ndarray
    w_minus: np.ndarray

    def __post_init__(self):
        self.w_plus = np.asarray(self.w_plus, dtype=float)
        self.w_minus = np.asarray(self.w_minus, dtype=float)
        if self.w_plus.shape != self.w_minus.shape:
            raise ConfigurationError("observable arrays must have equal shapes")
        if np.min(self.w_plus) < -ALGEBRA_TOL:
            raise ConfigurationError("w_plus must be nonnegative")
        if np.max(np.abs(self.w_minus) - self.w_plus) > ALGEBRA_TOL:
            raise ConfigurationError("|w_minus| must not exceed w_plus")


def observables(field: SpinorField1D, alpha) -> ObservablePair:
    """Pointwise quadratic observables of a spinor field."""
    alpha = np.asarray(alpha, dtype=complex)
    u = field.values
    w_plus = np.sum(np.abs(u) ** 2, axis=0)
    au = alpha @ u
    w_minus = np.real(np.sum(np.conj(u) * au, axis=0))
    return ObservablePair(w_plus, w_minus)
