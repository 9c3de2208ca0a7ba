"""Coupling gates: C^3 functions whose derivative has compact support.

A gate g switches the short-wave/long-wave interaction off outside a window
of long-wave values, which is what preserves the invariant region of the
long-wave solver.  The derivative is a scaled mollifier bump

    g'(v) = amplitude * bump((v - center)/halfwidth),
    bump(s) = exp(-1/(1 - s^2)) for |s| < 1, else 0,

so g', g'', g''' have exact closed forms and g'(v) = 0 for
|v - center| >= halfwidth.  g itself is recovered from a high-resolution
antiderivative table (exact constants outside the support).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicSpline

from .errors import ConfigurationError


def bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    sm = s[m]
    out[m] = np.exp(-1.0 / (1.0 - sm ** 2))
    return out


def bump_d1(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    sm = s[m]
    om = 1.0 - sm ** 2
    out[m] = (-2.0 * sm / om ** 2) * np.exp(-1.0 / om)
    return out


def bump_d2(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    sm = s[m]
    om = 1.0 - sm ** 2
    qp = -2.0 * sm / om ** 2
    qpp = -2.0 / om ** 2 - 8.0 * sm ** 2 / om ** 3
    out[m] = (qpp + qp ** 2) * np.exp(-1.0 / om)
    return out


def bump_d3(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    sm = s[m]
    om = 1.0 - sm ** 2
    qp = -2.0 * sm / om ** 2
    qpp = -2.0 / om ** 2 - 8.0 * sm ** 2 / om ** 3
    qppp = -24.0 * sm / om ** 3 - 48.0 * sm ** 3 / om ** 4
    out[m] = (qppp + 3.0 * qp * qpp + qp ** 3) * np.exp(-1.0 / om)
    return out


def _bump_antiderivative_table(n_sub: int = 1024):
    """Cumulative integral of bump over [-1, 1] by per-interval Gauss-Legendre."""
    xg, wg = leggauss(16)
    edges = np.linspace(-1.0, 1.0, n_sub + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    samples = mid[:, None] + half[:, None] * xg[None, :]
    increments = half * np.sum(wg[None, :] * bump(samples), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(increments)])
    return edges, cum


_EDGES, _CUM = _bump_antiderivative_table()
BUMP_MASS = float(_CUM[-1])
_BUMP_INT = CubicSpline(_EDGES, _CUM)


def bump_antiderivative(s):
    """B(s) = integral of bump from -1 to s; exact 0 / BUMP_MASS outside [-1, 1]."""
    s = np.asarray(s, dtype=float)
    out = np.where(s >= 1.0, BUMP_MASS, 0.0)
    m = (s > -1.0) & (s < 1.0)
    if np.any(m):
        out = np.array(out, dtype=float)
        out[m] = _BUMP_INT(s[m])
    return out


@dataclass(frozen=True)
class CouplingGate:
    """Gate with supp g' = [center - halfwidth, center + halfwidth]."""

    center: float
    halfwidth: float
    amplitude: float = 1.0

    def __post_init__(self):
        if self.halfwidth <= 0.0:
            raise ConfigurationError("gate halfwidth must be positive")

    @classmethod
    def symmetric(cls, M: float, amplitude: float = 1.0) -> "CouplingGate":
        """Gate centered at 0 with supp g' = [-M, M]."""
        return cls(0.0, M, amplitude)

    @classmethod
    def on_interval(cls, lo: float, hi: float, amplitude: float = 1.0) -> "CouplingGate":
        if not hi > lo:
            raise ConfigurationError("gate interval must have hi > lo")
        return cls(0.5 * (lo + hi), 0.5 * (hi - lo), amplitude)

    @property
    def M(self) -> float:
        return self.halfwidth

    @property
    def support(self):
        return (self.center - self.halfwidth, self.center + self.halfwidth)

    @property
    def total_increment(self) -> float:
        """g(+inf) - g(-inf)."""
        return self.amplitude * self.halfwidth * BUMP_MASS

    def _s(self, v):
        return (np.asarray(v, dtype=float) - self.center) / self.halfwidth

    def g(self, v):
        return self.amplitude * self.halfwidth * bump_antiderivative(self._s(v))

    def g_prime(self, v):
        return self.amplitude * bump(self._s(v))

    def g_double_prime(self, v):
        return self.amplitude / self.halfwidth * bump_d1(self._s(v))

    def g_triple_prime(self, v):
        return self.amplitude / self.halfwidth ** 2 * bump_d2(self._s(v))

    def check_smoothness(self, n_samples: int = 41, h: float = 1e-6,
                         rtol: float = 1e-6) -> None:
        """Finite-difference consistency of g'' against g''' inside the support."""
        lo, hi = self.support
        pad = 0.02 * (hi - lo)
        v = np.linspace(lo + pad, hi - pad, n_samples)
        fd = (self.g_double_prime(v + h) - self.g_double_prime(v - h)) / (2.0 * h)
        exact = self.g_triple_prime(v)
        scale = np.max(np.abs(exact)) + 1e-300
        if np.max(np.abs(fd - exact)) / scale > rtol:
            raise ConfigurationError("gate smoothness check failed: g''' does not "
                                     "match the finite difference of g''")


def null_gate() -> CouplingGate:
    """Gate with zero amplitude (interaction switched off)."""
    return CouplingGate(0.0, 1.0, 0.0)
