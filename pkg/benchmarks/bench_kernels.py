"""Time each hot kernel under the numba and the pure-numpy backend.

    python benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

The numba timings exclude compilation: every kernel is called once on the
same inputs before it is timed. Results also report whether the two
backends agree.
"""

from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from potdyn._kernels import numba_backend, numpy_backend
from potdyn.poly import Polynomial, initial_guesses


def _cases(scale: float):
    rng = np.random.default_rng(0)
    m = max(1, int(2000 * scale))
    deg = 12
    coeffs = rng.normal(size=(m, deg + 1)) + 1j * rng.normal(size=(m, deg + 1))
    coeffs[:, -1] = 1.0
    init = initial_guesses(coeffs)

    side = max(8, int(256 * math.sqrt(scale)))
    x = np.linspace(-2.0, 2.0, side)
    pts = (x[None, :] + 1j * x[:, None]).ravel()
    quad = (Polynomial.monomial(2) - 1.0).coeffs.copy()

    cand = np.exp(2j * np.pi * np.arange(max(64, int(4096 * scale))) / max(64, int(4096 * scale)))
    cloud = rng.normal(size=max(16, int(2000 * scale))) + 1j * rng.normal(size=max(16, int(2000 * scale)))
    w = np.full(cloud.size, 1.0 / cloud.size)

    return {
        "aberth_batch": (lambda b: b.aberth_batch(coeffs, init, 500, 4 * 13 * 2.2e-16, 3),
                         lambda r: r[0]),
        "escape_orbits": (lambda b: b.escape_orbits(quad, pts, 200, 2.0, 1e8),
                          lambda r: r[0]),
        "leja_indices": (lambda b: b.leja_indices(cand, 256, 0, 1e-12), lambda r: r),
        "log_dist_rowsums_lower": (lambda b: b.log_dist_rowsums_lower(cloud), lambda r: r),
        "offdiag_energy": (lambda b: b.offdiag_energy(cloud, w), lambda r: np.array([r])),
    }


def _agree(a, b) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype.kind in "iu":
        return bool(np.array_equal(a, b))
    if a.dtype.kind == "c":
        # root order may differ between backends
        a, b = np.sort_complex(a.ravel()), np.sort_complex(b.ravel())
    return bool(np.allclose(a, b, rtol=1e-8, atol=1e-10))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0, help="problem size multiplier")
    args = ap.parse_args(argv)

    backends = [("numpy", numpy_backend)]
    if numba_backend is not None:
        backends.append(("numba", numba_backend))
    else:
        print("numba backend unavailable; timing numpy only")

    print(f"{'kernel':<24}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}  agree")
    for kernel, (call, pick) in _cases(args.scale).items():
        times, outs = [], []
        for _, b in backends:
            outs.append(pick(call(b)))  # warm-up, compiles the numba path
            times.append(min(timeit.repeat(lambda: call(b), number=1, repeat=args.repeat)))
        speed = f"{times[0] / times[1]:>9.1f}x" if len(times) == 2 else f"{'-':>10}"
        agree = _agree(outs[0], outs[1]) if len(outs) == 2 else True
        print(f"{kernel:<24}" + "".join(f"{t:>11.4f}s" for t in times) + f"{speed}  {agree}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
