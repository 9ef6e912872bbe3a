"""The numba and numpy backends must agree."""

import numpy as np
import pytest

from potdyn import _kernels
from potdyn.poly import Polynomial, initial_guesses

pytestmark = pytest.mark.skipif(_kernels.numba_backend is None, reason="numba unavailable")
NB, NP = _kernels.numba_backend, _kernels.numpy_backend


def test_escape_orbits_agree():
    x = np.linspace(-1.6, 1.6, 97)
    pts = (x[None, :] + 1j * x[:, None]).ravel()
    for p in (Polynomial.monomial(2) - 1, Polynomial.monomial(3) + 0.5j):
        c = p.coeffs.copy()
        a = NB.escape_orbits(c, pts, 200, 2.0, 1e8)
        b = NP.escape_orbits(c, pts, 200, 2.0, 1e8)
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[1], b[1])
        esc = a[0] == 1
        assert np.allclose(a[2][esc], b[2][esc], rtol=1e-9, atol=1e-9)


def test_escape_orbits_agree_off_julia_set():
    # J of 2z^2 is the repelling circle |z| = 1/2, where roundoff decides
    # the fate of an orbit; everywhere else the backends must match
    x = np.linspace(-1.6, 1.6, 97)
    pts = (x[None, :] + 1j * x[:, None]).ravel()
    pts = pts[np.abs(np.abs(pts) - 0.5) > 1e-9]
    c = Polynomial.monomial(2, 2).coeffs.copy()
    a = NB.escape_orbits(c, pts, 200, 2.0, 1e8)
    b = NP.escape_orbits(c, pts, 200, 2.0, 1e8)
    assert np.array_equal(a[0], b[0])
    assert np.array_equal(a[1], b[1])


def test_aberth_agree(rng):
    c = rng.normal(size=(50, 9)) + 1j * rng.normal(size=(50, 9))
    c[:, -1] = 1
    init = initial_guesses(c)
    ra = NB.aberth_batch(c, init, 500, 1e-14, 3)[0]
    rb = NP.aberth_batch(c, init, 500, 1e-14, 3)[0]
    for x, y in zip(ra, rb):
        assert np.allclose(np.sort_complex(x), np.sort_complex(y), atol=1e-9)


def test_leja_and_energy_agree(rng):
    cand = rng.normal(size=500) + 1j * rng.normal(size=500)
    assert np.array_equal(NB.leja_indices(cand, 40, 0, 1e-12), NP.leja_indices(cand, 40, 0, 1e-12))
    assert np.allclose(NB.log_dist_rowsums_lower(cand), NP.log_dist_rowsums_lower(cand))
    w = np.full(cand.size, 1 / cand.size)
    assert NB.offdiag_energy(cand, w) == pytest.approx(NP.offdiag_energy(cand, w), rel=1e-12)


def test_backend_flag_reported():
    assert _kernels.BACKEND in ("numba", "numpy")


def test_env_flag_selects_numpy_backend():
    import json
    import os
    import subprocess
    import sys

    code = ("import json, potdyn; from potdyn.dynamics import filled_julia_grid; "
            "from potdyn.poly import Polynomial; "
            "K = filled_julia_grid(Polynomial.monomial(2) - 1, resolution=128); "
            "print(json.dumps([potdyn.BACKEND, int(K.count())]))")
    env = dict(os.environ, POTDYN_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    backend, count = json.loads(out.stdout.strip().splitlines()[-1])
    assert backend == "numpy"
    from potdyn.dynamics import filled_julia_grid
    K = filled_julia_grid(Polynomial.monomial(2) - 1, resolution=128)
    assert count == K.count()
