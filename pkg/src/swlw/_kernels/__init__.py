"""Kernel backend selection: compiled extension if available, NumPy otherwise.

Set SWLW_FORCE_REFERENCE=1 to pin the NumPy reference kernel (used by the
benchmark and by tests that compare the two backends).
"""

import os

from .reference import claw_step as claw_step_reference

try:
    from ._claw_cy import claw_step as _claw_step_compiled
except ImportError:
    _claw_step_compiled = None

_FORCED = os.environ.get("SWLW_FORCE_REFERENCE", "") not in ("", "0")

if _claw_step_compiled is not None and not _FORCED:
    claw_step = _claw_step_compiled
    BACKEND = "compiled"
else:
    claw_step = claw_step_reference
    BACKEND = "reference"

HAVE_COMPILED = _claw_step_compiled is not None


def active_backend() -> str:
    return BACKEND
