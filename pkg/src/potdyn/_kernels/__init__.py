"""Hot-loop kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``POTDYN_DISABLE_NUMBA`` is unset or ``0``. Both backends stay
importable as ``numpy_backend`` / ``numba_backend`` so they can be
compared directly.
"""

import os

from . import _numpy as numpy_backend

numba_backend = None
if os.environ.get("POTDYN_DISABLE_NUMBA", "0") in ("", "0"):
    try:
        from . import _numba as numba_backend
    except ImportError:  # pragma: no cover - depends on the environment
        numba_backend = None

active = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if active is numba_backend else "numpy"

aberth_batch = active.aberth_batch
escape_orbits = active.escape_orbits
leja_indices = active.leja_indices
log_dist_rowsums_lower = active.log_dist_rowsums_lower
offdiag_energy = active.offdiag_energy

__all__ = [
    "BACKEND",
    "aberth_batch",
    "escape_orbits",
    "leja_indices",
    "log_dist_rowsums_lower",
    "numba_backend",
    "numpy_backend",
    "offdiag_energy",
]
