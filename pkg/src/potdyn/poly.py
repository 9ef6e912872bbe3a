"""Dense complex polynomials: evaluation, iteration, roots and preimages."""

from __future__ import annotations

import json
import math
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import NonConvergence

OVERFLOW_MODULUS = 1e300
MAX_SWEEPS = 500
RESIDUAL_TARGET = 1e-8
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


class Polynomial:
    """Polynomial with complex coefficients, constant term first.

    Trailing zero coefficients are trimmed, so ``degree`` is the index of
    the highest nonzero coefficient (``-1`` for the zero polynomial).
    Instances are immutable.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).copy()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=np.complex128)
        c.setflags(write=False)
        self._c = c

    @classmethod
    def from_roots(cls, roots, leading=1.0):
        c = np.array([1.0 + 0j])
        for r in np.asarray(roots, dtype=complex):
            c = np.concatenate(([0j], c)) - r * np.concatenate((c, [0j]))
        return cls(leading * c)

    @classmethod
    def monomial(cls, n, coefficient=1.0):
        c = np.zeros(n + 1, dtype=complex)
        c[n] = coefficient
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        if self._c.size == 1 and self._c[0] == 0:
            return -1
        return self._c.size - 1

    @property
    def leading(self) -> complex:
        return complex(self._c[-1])

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        return f"Polynomial(degree={self.degree}, coeffs={self._c.tolist()!r})"

    def __add__(self, other):
        other = _as_poly(other)
        n = max(self._c.size, other._c.size)
        a = np.zeros(n, complex)
        a[: self._c.size] += self._c
        a[: other._c.size] += other._c
        return Polynomial(a)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self._c)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if np.isscalar(other):
            return Polynomial(self._c * other)
        return Polynomial(np.convolve(self._c, _as_poly(other)._c))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Polynomial(self._c / scalar)

    def derivative(self) -> Polynomial:
        if self._c.size == 1:
            return Polynomial([0])
        return Polynomial(self._c[1:] * np.arange(1, self._c.size))

    def monic(self) -> Polynomial:
        return Polynomial(self._c / self._c[-1])

    def to_json(self) -> str:
        return json.dumps(to_pairs(self))

    @classmethod
    def from_json(cls, text: str) -> Polynomial:
        return from_pairs(json.loads(text))


def _as_poly(x):
    return x if isinstance(x, Polynomial) else Polynomial([x])


def to_pairs(p: Polynomial) -> list:
    return [[float(a.real), float(a.imag)] for a in p.coeffs]


def from_pairs(pairs) -> Polynomial:
    """Parse the CLI text form: a list of ``[re, im]`` pairs, constant first."""
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("polynomial must be a list of [re, im] pairs")
    return Polynomial(arr[:, 0] + 1j * arr[:, 1])


def evaluate(p: Polynomial, z):
    """Horner evaluation; vectorised over array-valued ``z``."""
    c = p.coeffs
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, c[-1], dtype=complex)
    for a in c[-2::-1]:
        acc = acc * z + a
    return acc[()] if acc.ndim == 0 else acc


def residual_scale(p: Polynomial, z):
    """sum_j |a_j| |z|^j, the backward-error scale of |p(z)|."""
    a = np.abs(p.coeffs)
    x = np.abs(np.asarray(z, dtype=complex))
    acc = np.full(x.shape, a[-1])
    for v in a[-2::-1]:
        acc = acc * x + v
    return acc


class IterateResult(NamedTuple):
    value: complex
    overflow: bool
    steps: int


def iterate(p: Polynomial, z: complex, k: int) -> IterateResult:
    """Apply ``p`` to ``z`` k times, stopping early once |value| > 1e300."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    w = complex(z)
    for step in range(k):
        if abs(w) > OVERFLOW_MODULUS or not np.isfinite(w):
            return IterateResult(w, True, step)
        with np.errstate(over="ignore", invalid="ignore"):
            w = complex(evaluate(p, w))
    overflow = abs(w) > OVERFLOW_MODULUS or not np.isfinite(w)
    return IterateResult(w, overflow, k)


def initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Golden-angle points on a root-bounding circle, one row per polynomial.

    The radius is Fujiwara's bound ``2 max_j |a_{n-j}/a_n|^{1/j}``, which
    contains every root and, unlike the Cauchy radius, does not blow up
    with the coefficient size of well-scaled high-degree polynomials.
    """
    coeffs = np.atleast_2d(coeffs)
    m, n1 = coeffs.shape
    n = n1 - 1
    an = np.abs(coeffs[:, -1])
    j = np.arange(1, n + 1)
    ratios = np.abs(coeffs[:, n - j]) / an[:, None]
    ratios[:, -1] /= 2.0  # Fujiwara halves the constant-term ratio
    with np.errstate(divide="ignore"):
        rad = 2.0 * np.max(ratios ** (1.0 / j), axis=1)
    rad = np.where(rad > 0, rad, 1.0)
    ang = GOLDEN_ANGLE * np.arange(n) + 0.25
    return rad[:, None] * np.exp(1j * ang)[None, :]


def batch_roots(coeffs: np.ndarray, max_sweeps: int = MAX_SWEEPS, polish: int = 3,
                check: bool = True):
    """Roots of a stack of same-degree polynomials (rows, constant first).

    Returns ``(roots, relres)`` with ``relres = |p(r)| / max(1, sum|a_j||r|^j)``.
    Raises NonConvergence if any root misses ``RESIDUAL_TARGET`` and
    ``check`` is set.
    """
    coeffs = np.ascontiguousarray(np.atleast_2d(coeffs), dtype=np.complex128)
    n = coeffs.shape[1] - 1
    if n < 1:
        raise ValueError("degree must be at least 1")
    if np.any(coeffs[:, -1] == 0):
        raise ValueError("leading coefficients must be nonzero")
    if n == 1:
        roots = (-coeffs[:, 0] / coeffs[:, 1])[:, None]
        return roots, np.zeros(roots.shape)
    init = initial_guesses(coeffs)
    tol = 4.0 * (n + 1) * np.finfo(float).eps
    roots, relres, _ = _kernels.aberth_batch(coeffs, init, max_sweeps, tol, polish)
    # relative to max(1, scale): undo the kernel's scale-relative residual
    ac = np.abs(coeffs)
    x = np.abs(roots)
    scale = np.broadcast_to(ac[:, -1:], x.shape).copy()
    for j in range(n - 1, -1, -1):
        scale = scale * x + ac[:, j:j + 1]
    relres = relres * scale / np.maximum(1.0, scale)
    if check:
        bad = relres > RESIDUAL_TARGET
        if bad.any() or not np.all(np.isfinite(roots)):
            raise NonConvergence(
                f"{int(bad.sum())} roots above residual target {RESIDUAL_TARGET:g} "
                f"(worst {float(np.nanmax(relres)):.3g})",
                roots=roots, residuals=relres)
    return roots, relres


def roots(p: Polynomial) -> np.ndarray:
    """All roots with multiplicity via Aberth-Ehrlich plus Newton polish.

    Exact zero low-order coefficients are deflated first, so ``z**3``
    returns three exact zeros.
    """
    if p.degree < 1:
        raise ValueError("roots needs degree >= 1")
    c = p.coeffs
    nz = int(np.flatnonzero(c)[0])
    zeros = np.zeros(nz, dtype=complex)
    rest = c[nz:]
    if rest.size == 1:
        return zeros
    r, _ = batch_roots(rest[None, :])
    return np.concatenate((zeros, r[0]))


def preimages(p: Polynomial, w: complex) -> np.ndarray:
    """Solutions of p(z) = w, i.e. ``roots(p - w)``."""
    if p.degree < 1:
        raise ValueError("preimages needs degree >= 1")
    return roots(p - w)


def batch_preimages(p: Polynomial, ws, check: bool = True) -> np.ndarray:
    """Preimages of many targets at once; row i solves p(z) = ws[i]."""
    ws = np.asarray(ws, dtype=complex).ravel()
    c = np.tile(p.coeffs, (ws.size, 1))
    c[:, 0] -= ws
    out = np.empty((ws.size, p.degree), dtype=complex)
    exact = c[:, 0] == 0
    if exact.any():
        # p(z) - w has a zero constant term: deflate rows one at a time
        for i in np.flatnonzero(exact):
            out[i] = roots(Polynomial(c[i]))
    rest = ~exact
    if rest.any():
        out[rest], _ = batch_roots(c[rest], check=check)
    return out
