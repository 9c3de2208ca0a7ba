"""Uniform 1-D and periodic cubic 3-D grids."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

PERIODIC = "periodic"
COMPACT_SUPPORT = "compact_support"


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D grid.

    With ``periodic`` boundary the nodes are x_min + i*dx, i = 0..n-1 and
    dx = (x_max - x_min)/n (the right endpoint is identified with the left).
    With ``compact_support`` both endpoints are nodes, dx = (x_max - x_min)/(n-1),
    and fields are extended by zero outside [x_min, x_max].
    """

    x_min: float
    x_max: float
    n_nodes: int
    boundary: str = PERIODIC

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ConfigurationError("grid: x_max must exceed x_min")
        if self.n_nodes < 8:
            raise ConfigurationError("grid: n_nodes must be at least 8")
        if self.boundary not in (PERIODIC, COMPACT_SUPPORT):
            raise ConfigurationError(f"grid: unknown boundary {self.boundary!r}")

    @property
    def periodic(self) -> bool:
        return self.boundary == PERIODIC

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        if self.periodic:
            return self.length / self.n_nodes
        return self.length / (self.n_nodes - 1)

    def nodes(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_nodes)

    def faces(self) -> np.ndarray:
        """n+1 face positions; faces[i] is the left face of cell i."""
        return self.x_min + self.dx * (np.arange(self.n_nodes + 1) - 0.5)

    def wrap(self, x):
        """Map positions into the fundamental domain (periodic grids only)."""
        x = np.asarray(x, dtype=float)
        if not self.periodic:
            return x
        return (x - self.x_min) % self.length + self.x_min

    def integrate(self, values) -> float:
        """Trapezoid-rule integral of nodal values over the grid."""
        values = np.asarray(values)
        if self.periodic:
            return float(np.sum(values) * self.dx)
        return float(np.trapezoid(values, dx=self.dx))


@dataclass(frozen=True)
class Grid3D:
    """Periodic cube with n nodes per axis; verification scale only (n <= 32)."""

    x_min: float = 0.0
    x_max: float = 2.0 * np.pi
    n: int = 16

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ConfigurationError("grid3: x_max must exceed x_min")
        if self.n < 4:
            raise ConfigurationError("grid3: n must be at least 4")
        if self.n > 32:
            raise ConfigurationError("grid3: n must not exceed 32 (desk scale)")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    def axis_nodes(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    def meshgrid(self):
        xs = self.axis_nodes()
        return np.meshgrid(xs, xs, xs, indexing="ij")

    def wavenumbers(self):
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        return np.meshgrid(k, k, k, indexing="ij")
