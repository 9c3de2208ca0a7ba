"""Numerical laboratory for relativistic short wave-long wave interactions.

Subpackages by theme:

* ``spinor``, ``dalembert``, ``dirac1d`` -- the short wave: Dirac-matrix
  algebra, closed-form observable evolution, characteristics and Duhamel
  integrators.
* ``gates``, ``claw`` -- the long wave: coupling gates and the
  vanishing-viscosity conservation-law solver with its diagnostics.
* ``abi`` -- plane-wave augmented Born-Infeld system in Lagrangian
  Riemann invariants.
* ``dirac3d`` -- 3-D wave-property verifier.
* ``scenario``, ``runner``, ``cli`` -- configuration, orchestration and
  artifact output.
"""

from ._kernels import active_backend
from .grids import Grid1D, Grid3D

__version__ = "0.1.0"

__all__ = ["Grid1D", "Grid3D", "active_backend", "__version__"]
