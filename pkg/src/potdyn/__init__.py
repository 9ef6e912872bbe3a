"""Numerical potential theory and polynomial dynamics.

Subpackages and modules:

* ``poly``: polynomial arithmetic, iteration and simultaneous root finding
* ``compactset``: planar compact sets, hulls, dilations and Hausdorff distance
* ``potential``: potentials, energies, Leja points and reference Green's functions
* ``dynamics``: filled Julia sets, dynamical Green's functions, Brolin sampling
* ``extremal``: Chebyshev, Leja, Faber and orthonormal families and their diagnostics
* ``setmetrics``: Klimek distance and weak-star discrepancy proxies
* ``labcli``: the ``potdyn`` command-line experiment harness
"""

__version__ = "0.1.0"

from ._kernels import BACKEND  # noqa: E402

__all__ = ["BACKEND", "__version__"]
