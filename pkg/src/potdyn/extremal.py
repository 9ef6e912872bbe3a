"""Extremal polynomial families and asymptotic-minimality diagnostics.

Builders: discrete minimax (Chebyshev) polynomials, Leja polynomials,
Faber polynomials of reference shapes and orthonormal polynomials of a
quadrature measure. ``family_builtin`` wraps these and the closed-form
examples as :class:`PolynomialFamily` objects that ``minimality_report``
and ``zero_location_check`` consume.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import legendre as nplegendre

from .compactset import (
    BOUNDARY_SAMPLES,
    Circle,
    CompactSetModel,
    Disc,
    Ellipse,
    GridSet,
    PointCloud,
    Segment,
    boundary_samples,
    distance_to,
    polynomial_hull,
)
from .errors import ExchangeStalled, IllConditioned, UnknownFamily, UnsupportedShape
from .poly import Polynomial, roots as poly_roots
from .potential import (
    DiscreteMeasure,
    analytic_capacity,
    capacity_estimate,
    equilibrium_estimate,
    leja_points,
)

QUADRATURE_NODES = 4096
MINIMAX_TOL = 1e-10
CERTIFY_RATIO = 1.01
VERDICT_THRESHOLD = 0.05
ZERO_TOL = 1e-12


# ---------------------------------------------------------------- quadratures


def circle_quadrature(center: complex = 0j, radius: float = 1.0,
                      n: int = QUADRATURE_NODES) -> DiscreteMeasure:
    """Equispaced nodes on a circle: the discrete d(theta)/(2 pi)."""
    t = 2.0 * np.pi * np.arange(n) / n
    return DiscreteMeasure.uniform(complex(center) + radius * np.exp(1j * t))


def segment_quadrature(a: complex = -1.0, b: complex = 1.0,
                       n: int = QUADRATURE_NODES) -> DiscreteMeasure:
    """Gauss-Chebyshev nodes: the arcsine (equilibrium) law of [a, b]."""
    x = np.cos((2.0 * np.arange(n) + 1.0) * np.pi / (2.0 * n))[::-1]
    a, b = complex(a), complex(b)
    return DiscreteMeasure.uniform(0.5 * (a + b) + 0.5 * (b - a) * x)


def gauss_legendre(a: float = -1.0, b: float = 1.0, n: int = 256) -> DiscreteMeasure:
    """Normalised Lebesgue measure dx/(b - a) by Gauss-Legendre nodes."""
    x, w = nplegendre.leggauss(n)
    return DiscreteMeasure(0.5 * (a + b) + 0.5 * (b - a) * x, w / w.sum())


def ellipse_quadrature(E: Ellipse, n: int = QUADRATURE_NODES) -> DiscreteMeasure:
    """Equilibrium measure of an ellipse: uniform angle under the Joukowski map."""
    f = math.sqrt(E.a ** 2 - E.b ** 2)
    if f == 0:
        return circle_quadrature(E.center, E.a, n)
    R = (E.a + E.b) / f
    u = R * np.exp(2j * np.pi * np.arange(n) / n)
    return DiscreteMeasure.uniform(complex(E.center) + 0.5 * f * (u + 1.0 / u))


def equilibrium_quadrature(E: CompactSetModel, n: int = QUADRATURE_NODES) -> DiscreteMeasure:
    if isinstance(E, (Disc, Circle)):
        return circle_quadrature(E.center, E.radius, n)
    if isinstance(E, Segment):
        return segment_quadrature(E.a, E.b, n)
    if isinstance(E, Ellipse):
        return ellipse_quadrature(E, n)
    return equilibrium_estimate(E, 256)


# ---------------------------------------------------------------- helpers


def reference_hull(E: CompactSetModel):
    """Polynomial convex hull of E in a form ``distance_to`` understands."""
    if isinstance(E, Circle):
        return Disc(E.center, E.radius)
    if isinstance(E, Ellipse):
        return Ellipse(E.center, E.a, E.b, filled=True)
    if isinstance(E, GridSet):
        return polynomial_hull(E)
    return E


class CapacityValue(NamedTuple):
    value: float
    source: str
    tolerance: float


def reference_capacity(E: CompactSetModel) -> CapacityValue:
    """Analytic capacity when available, else a 256-point Leja estimate.

    The recorded tolerance of the estimate is the gap between its 128- and
    256-point values, a proxy for the log(n)/n bias.
    """
    try:
        return CapacityValue(analytic_capacity(E), "analytic", 0.0)
    except UnsupportedShape:
        pts = leja_points(boundary_samples(E), 256)
        est = capacity_estimate(pts, return_sequence=True)
        return CapacityValue(est.value, "leja256", abs(est.sequence[126] - est.value))


def _collinear_frame(z, rtol=1e-10):
    """(mid, half) with t = (z - mid)/half real in [-1, 1], or None."""
    a = z[np.argmax(np.abs(z - z[0]))]
    b = z[np.argmax(np.abs(z - a))]
    if a == b:
        return None
    if a.real > b.real or (a.real == b.real and a.imag > b.imag):
        a, b = b, a
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    t = (z - mid) / half
    if np.max(np.abs(t.imag)) > rtol:
        return None
    return mid, half


def _compose_affine(coeffs_t, mid, half, n):
    """Coefficients in z of half^n * e((z - mid)/half), for e given in t."""
    out = Polynomial([0])
    lin = Polynomial([-mid / half, 1.0 / half])
    for c in coeffs_t[::-1]:
        out = out * lin + c
    return out * (half ** n)


# ---------------------------------------------------------------- minimax


@dataclass(frozen=True)
class MinimaxResult:
    polynomial: Polynomial
    norm: float            # sup over the mesh
    lower_bound: float     # certified lower bound on the discrete optimum
    certified: bool        # norm <= 1.01 * lower_bound
    method: str
    iterations: int
    evaluate: Callable = field(repr=False, default=None)
    zeros: np.ndarray | None = field(repr=False, default=None)


def _exchange(err, count):
    """Alternating extrema of ``err``: one max-|err| index per sign run."""
    s = np.sign(err)
    for i in range(1, s.size):
        if s[i] == 0:
            s[i] = s[i - 1]
    cuts = np.flatnonzero(np.diff(s) != 0) + 1
    runs = np.split(np.arange(err.size), cuts)
    ext = [r[np.argmax(np.abs(err[r]))] for r in runs]
    while len(ext) > count:
        if abs(err[ext[0]]) <= abs(err[ext[-1]]):
            ext.pop(0)
        else:
            ext.pop()
    return np.array(ext)


def _remez_real(t, n, tol=MINIMAX_TOL, max_iter=100):
    """Discrete Remez exchange for min_c max |T_n - sum_{k<n} c_k T_k| on sorted t."""
    V = npcheb.chebvander(t, n)
    f, B = V[:, n], V[:, :n]
    target = np.cos(np.pi * np.arange(n, -1, -1) / n)
    ref = np.unique(np.searchsorted(t, target).clip(0, t.size - 1))
    if ref.size < n + 1:
        ref = np.unique(np.concatenate((ref, np.linspace(0, t.size - 1, n + 1).astype(int))))
        ref = ref[np.linspace(0, ref.size - 1, n + 1).astype(int)]
    signs = (-1.0) ** np.arange(n + 1)
    best = None
    lower = 0.0
    for it in range(1, max_iter + 1):
        A = np.column_stack((B[ref], signs))
        sol = np.linalg.solve(A, f[ref])
        c, E = sol[:n], abs(sol[n])
        # every levelled error is a lower bound on the optimum
        lower = max(lower, E)
        err = f - B @ c
        emax = float(np.max(np.abs(err)))
        if best is None or emax < best[1]:
            best = (c, emax)
        if emax - E <= tol * emax:
            break
        new = _exchange(err, n + 1)
        if new.size < n + 1 or np.array_equal(new, ref):
            break
        ref = new
    c, emax = best
    if not emax <= CERTIFY_RATIO * lower:
        raise ExchangeStalled(f"exchange stopped at ratio {emax / max(lower, 1e-300):.4g}")
    return c, emax, lower, it


def _arnoldi(z, w, n, rtol=1e-13):
    """Weighted Arnoldi on Krylov vectors z^k: Q (m, n+1) orthonormal, H (n+1, n).

    Uses classical Gram-Schmidt with one re-orthogonalisation pass.
    """
    m = z.size
    Q = np.zeros((m, n + 1), dtype=complex)
    H = np.zeros((n + 1, n), dtype=complex)
    Q[:, 0] = 1.0 / math.sqrt(float(np.sum(w)))
    worst = 1.0
    for k in range(1, n + 1):
        v = z * Q[:, k - 1]
        vnorm = math.sqrt(float(np.sum(w * np.abs(v) ** 2)))
        for _ in range(2):
            coef = (np.conj(Q[:, :k]).T * w) @ v
            v = v - Q[:, :k] @ coef
            H[:k, k - 1] += coef
        h = math.sqrt(float(np.sum(w * np.abs(v) ** 2)))
        ratio = vnorm / h if h > 0 else math.inf
        worst = max(worst, ratio)
        if not h > rtol * vnorm:
            raise IllConditioned(f"Krylov vector {k} is numerically dependent", condition=ratio)
        H[k, k - 1] = h
        Q[:, k] = v / h
    return Q, H, worst


def _arnoldi_polys(H, q0):
    """Monomial coefficient vectors of the Arnoldi basis polynomials."""
    n = H.shape[1]
    P = [Polynomial([q0])]
    z = Polynomial([0, 1])
    for k in range(1, n + 1):
        acc = z * P[k - 1]
        for j in range(k):
            acc = acc - H[j, k - 1] * P[j]
        P.append(acc / H[k, k - 1])
    return P


def _arnoldi_eval(H, q0, z, n):
    """Values of basis polynomials 0..n at z via the Hessenberg recurrence."""
    z = np.asarray(z, dtype=complex)
    vals = [np.full(z.shape, q0, dtype=complex)]
    for k in range(1, n + 1):
        v = z * vals[k - 1]
        for j in range(k):
            v = v - H[j, k - 1] * vals[j]
        vals.append(v / H[k, k - 1])
    return vals


def _lawson(z, n, max_iter=500):
    """Lawson IRLS minimax for monic degree n on a complex mesh."""
    m = z.size
    w0 = np.full(m, 1.0 / m)
    Q, H, _ = _arnoldi(z, w0, n)
    gamma = 1.0 / np.prod(H[np.arange(1, n + 1), np.arange(n)]).real
    # monic poly = gamma * (q_n - Q_{<n} c)
    f, B = Q[:, n], Q[:, :n]
    w = w0.copy()
    best_c, best_up, lower = np.zeros(n, complex), math.inf, 0.0
    it = 0
    for it in range(1, max_iter + 1):
        sw = np.sqrt(w)
        c, *_ = np.linalg.lstsq(B * sw[:, None], f * sw, rcond=None)
        err = np.abs(f - B @ c)
        up = float(err.max())
        lower = max(lower, math.sqrt(float(np.sum(w * err ** 2))))
        if up < best_up:
            best_c, best_up = c, up
        if best_up <= CERTIFY_RATIO * lower or up == 0.0:
            break
        w = w * err
        w /= w.sum()
    P = _arnoldi_polys(H, Q[0, 0])
    poly = P[n]
    for k in range(n):
        poly = poly - best_c[k] * P[k]
    poly = Polynomial(poly.coeffs * gamma)
    poly = Polynomial(np.concatenate((poly.coeffs[:-1], [1.0])))  # exactly monic

    def evaluate(x, H=H, q0=Q[0, 0], c=best_c, gamma=gamma):
        vals = _arnoldi_eval(H, q0, x, n)
        acc = vals[n]
        for k in range(n):
            acc = acc - c[k] * vals[k]
        return gamma * acc

    return poly, abs(gamma) * best_up, abs(gamma) * lower, it, evaluate


def minimax_monic(E_mesh, n: int) -> MinimaxResult:
    """Monic degree-n polynomial of least sup-norm on a finite mesh.

    Collinear meshes use a discrete Remez exchange in the Chebyshev basis
    and are certified by levelled equioscillation at n + 1 mesh points.
    Other meshes use Lawson's reweighted least squares with a weighted
    residual lower bound as the certificate.
    """
    z = E_mesh.points if isinstance(E_mesh, PointCloud) else np.asarray(E_mesh, dtype=complex).ravel()
    z = np.unique(z)
    if n < 1:
        raise ValueError("n must be at least 1")
    if z.size < 8 * n:
        raise ValueError(f"mesh needs at least {8 * n} points, got {z.size}")
    frame = _collinear_frame(z)
    if frame is not None:
        mid, half = frame
        t = np.sort(((z - mid) / half).real)
        c, emax, lower, it = _remez_real(t, n)
        scale = abs(half) ** n * 2.0 ** (1 - n)
        ecoef = np.concatenate((-c, [1.0])) * 2.0 ** (1 - n)
        poly = _compose_affine(npcheb.cheb2poly(ecoef), mid, half, n)
        poly = Polynomial(np.concatenate((poly.coeffs[:-1], [1.0])))

        def evaluate(x, ecoef=ecoef, mid=mid, half=half):
            return half ** n * npcheb.chebval((np.asarray(x, dtype=complex) - mid) / half, ecoef)

        zeros = mid + half * npcheb.chebroots(ecoef)
        return MinimaxResult(poly, emax * scale, lower * scale, emax <= CERTIFY_RATIO * lower,
                             "remez", it, evaluate, zeros)
    poly, up, lower, it, evaluate = _lawson(z, n)
    return MinimaxResult(poly, up, lower, up <= CERTIFY_RATIO * lower, "lawson", it, evaluate)


def chebyshev_monic(E_mesh, n: int) -> Polynomial:
    """Discrete monic Chebyshev polynomial of degree n on the mesh."""
    return minimax_monic(E_mesh, n).polynomial


# ---------------------------------------------------------------- Leja, Faber


class LejaMonic(NamedTuple):
    polynomial: Polynomial
    roots: np.ndarray
    sup_norm: float


def leja_monic(E: CompactSetModel, n: int, start: complex | None = None,
               candidates: int = BOUNDARY_SAMPLES) -> LejaMonic:
    """prod (z - w_j) over the first n Leja points of E's boundary sampling."""
    if n < 1:
        raise ValueError("n must be at least 1")
    cloud = boundary_samples(E, candidates)
    w = leja_points(cloud, n, start)
    vals = _product_eval(w, cloud.points)
    return LejaMonic(Polynomial.from_roots(w), w, float(np.max(np.abs(vals))))


def _product_eval(w, z):
    z = np.asarray(z, dtype=complex)
    out = np.ones(z.shape, dtype=complex)
    for r in w:
        out = out * (z - r)
    return out


def _faber_parts(E, n):
    """(mid, scale, chebyshev_coeffs, prefactor) with F_n = prefactor * sum c_k T_k(ζ)."""
    if isinstance(E, Segment):
        a, b = complex(E.a), complex(E.b)
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        return mid, half, 2.0 * (half / abs(half)) ** n
    if isinstance(E, Ellipse):
        f = math.sqrt(E.a ** 2 - E.b ** 2)
        R = (E.a + E.b) / f
        return complex(E.center), f, 2.0 * R ** (-n)
    raise UnsupportedShape(type(E).__name__)


def faber(E, n: int) -> Polynomial:
    """Faber polynomial of degree n for a disc, segment or ellipse.

    Disc: ((z - c)/r)^n. Segment: sigma^n 2 T_n(ζ), with ζ the affine
    pullback to [-1, 1] and sigma the unit phase making phi'(inf) > 0.
    Ellipse with foci c +- f: 2 T_n((z - c)/f) / R^n, R = (a + b)/f.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if isinstance(E, Ellipse) and E.a == E.b:
        E = Disc(E.center, E.a)
    if isinstance(E, (Disc, Circle)):
        c, r = complex(E.center), float(E.radius)
        return Polynomial.from_roots(np.full(n, c), leading=r ** (-n))
    if not isinstance(E, (Segment, Ellipse)):
        raise UnsupportedShape(f"no Faber polynomials for {type(E).__name__}")
    if n == 0:
        return Polynomial([1.0])
    mid, scale, pref = _faber_parts(E, n)
    tc = npcheb.cheb2poly(np.eye(n + 1)[n])
    return _compose_affine(tc, mid, scale, n) * (pref / scale ** n)


def _faber_eval(E, n, z):
    z = np.asarray(z, dtype=complex)
    if isinstance(E, Ellipse) and E.a == E.b:
        E = Disc(E.center, E.a)
    if isinstance(E, (Disc, Circle)):
        return ((z - complex(E.center)) / E.radius) ** n
    if n == 0:
        return np.ones(z.shape, dtype=complex)
    mid, scale, pref = _faber_parts(E, n)
    return pref * npcheb.chebval((z - mid) / scale, np.eye(n + 1)[n])


# ---------------------------------------------------------------- orthonormal


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal polynomials of a discrete measure, by weighted Arnoldi."""

    tau: DiscreteMeasure
    n: int
    H: np.ndarray
    q0: complex
    condition: float

    @classmethod
    def build(cls, tau: DiscreteMeasure, n: int) -> OrthonormalBasis:
        if n < 0:
            raise ValueError("n must be nonnegative")
        keep = tau.weights > 0
        if keep.sum() < 4 * max(n, 1):
            raise IllConditioned(f"need at least {4 * n} nodes for degree {n}", condition=math.inf)
        z, w = tau.points[keep], tau.weights[keep]
        if n == 0:
            return cls(tau, 0, np.zeros((1, 0), complex), 1.0 / math.sqrt(w.sum()), 1.0)
        Q, H, worst = _arnoldi(z, w, n)
        return cls(tau, n, H, Q[0, 0], worst)

    def gamma(self, k: int) -> float:
        """Leading coefficient of P_k: prod 1/h over the subdiagonal."""
        h = self.H[np.arange(1, k + 1), np.arange(k)].real
        return float(abs(self.q0) / np.prod(h))

    def polynomial(self, k: int) -> Polynomial:
        return _arnoldi_polys(self.H[: k + 1, :k], self.q0)[k]

    def evaluate(self, k: int, z):
        return _arnoldi_eval(self.H[: k + 1, :k], self.q0, z, k)[k]


def orthonormal(tau: DiscreteMeasure, n: int) -> Polynomial:
    """P_n = gamma_n z^n + ... with unit L^2(tau) norm and gamma_n > 0."""
    return OrthonormalBasis.build(tau, n).polynomial(n)


# ---------------------------------------------------------------- families


@dataclass(frozen=True, eq=False)
class PolynomialFamily:
    """Index n -> polynomial of degree n, with its reference set and measure.

    ``evaluate(n, z)`` and ``zeros(n)`` give numerically stable values and
    zeros when the monomial form would lose accuracy.
    """

    name: str
    parameters: dict
    generator: Callable[[int], Polynomial]
    reference_set: CompactSetModel
    tau: DiscreteMeasure
    p: float = 2.0
    evaluate: Callable | None = None
    zeros: Callable | None = None
    leading: Callable | None = None
    gamma: Callable | None = None
    monic: bool = True

    def __call__(self, n: int) -> Polynomial:
        return self.generator(n)

    def values(self, n: int, z):
        if self.evaluate is not None:
            return self.evaluate(n, z)
        return self.generator(n)(np.asarray(z, dtype=complex))

    def roots(self, n: int) -> np.ndarray:
        if self.zeros is not None:
            return self.zeros(n)
        return poly_roots(self.generator(n))

    def log_leading(self, n: int) -> float:
        if self.leading is not None:
            return float(self.leading(n))
        return math.log(abs(self.generator(n).leading))


def _default_set(params, fallback):
    E = params.get("set", fallback)
    if isinstance(E, dict):
        from .labcli.config import parse_set
        E = parse_set(E)
    return E


def family_builtin(name: str, params: dict | None = None) -> PolynomialFamily:
    """Named family.

    Closed forms: ``power_plus_c`` (z^n + c), ``split_zero`` (z^(n-1)(z - c_n),
    c_n = cn_scale * n^cn_power), ``scaled_power`` (base^(n^2) z^n, n <= 31
    for base 2) and ``bounded_coeffs`` (monic, seeded coefficients in the
    disc |a| < M). Constructions on a reference set: ``chebyshev``,
    ``leja``, ``faber`` and ``orthonormal``; the first two accept
    ``normalize`` in {"none", "cap", "sup"}.

    Common parameters: ``set`` (reference set, default the unit circle, or
    [-2, 2] for the constructions), ``p`` (L^p exponent, default 2) and
    ``nodes`` (quadrature size).
    """
    params = dict(params or {})
    p_exp = float(params.get("p", 2.0))
    nodes = int(params.get("nodes", QUADRATURE_NODES))

    if name == "power_plus_c":
        c = complex(params.get("c", 0.5))
        E = _default_set(params, Circle(0j, 1.0))

        def gen(n):
            return Polynomial.monomial(n) + c

        def zeros(n):
            # exact n-th roots of -c
            if c == 0:
                return np.zeros(n, complex)
            r = abs(c) ** (1.0 / n)
            ang = (np.angle(-c) + 2.0 * np.pi * np.arange(n)) / n
            return r * np.exp(1j * ang)

        return PolynomialFamily(name, {"c": c}, gen, E, equilibrium_quadrature(E, nodes), p_exp,
                                zeros=zeros, leading=lambda n: 0.0)

    if name == "split_zero":
        scale = complex(params.get("cn_scale", 1.0))
        power = float(params.get("cn_power", 1.0))
        E = _default_set(params, Circle(0j, 1.0))

        def cn(n):
            return scale * n ** power

        def gen(n):
            return Polynomial.from_roots(np.concatenate((np.zeros(n - 1), [cn(n)])))

        return PolynomialFamily(name, {"cn_scale": scale, "cn_power": power}, gen, E,
                                equilibrium_quadrature(E, nodes), p_exp,
                                zeros=lambda n: np.concatenate((np.zeros(n - 1, complex), [cn(n)])),
                                leading=lambda n: 0.0)

    if name == "scaled_power":
        base = float(params.get("base", 2.0))
        E = _default_set(params, Circle(0j, 1.0))

        def gen(n):
            lead = base ** (n * n)
            if not math.isfinite(lead):
                raise ValueError(f"{base}^(n^2) overflows for n = {n}")
            return Polynomial.monomial(n, lead)

        return PolynomialFamily(name, {"base": base}, gen, E, equilibrium_quadrature(E, nodes),
                                p_exp, zeros=lambda n: np.zeros(n, complex),
                                leading=lambda n: n * n * math.log(base), monic=False)

    if name == "bounded_coeffs":
        M = float(params.get("M", 1.0))
        seed = int(params.get("seed", 0))
        E = _default_set(params, Circle(0j, 1.0))

        def gen(n):
            rng = np.random.default_rng([seed, n])
            r = M * np.sqrt(rng.random(n))
            a = r * np.exp(2j * np.pi * rng.random(n))
            return Polynomial(np.concatenate((a, [1.0])))

        return PolynomialFamily(name, {"M": M, "seed": seed}, gen, E,
                                equilibrium_quadrature(E, nodes), p_exp, leading=lambda n: 0.0)

    if name in ("chebyshev", "leja"):
        E = _default_set(params, Segment(-2.0, 2.0))
        norm = params.get("normalize", "none")
        if norm not in ("none", "cap", "sup"):
            raise ValueError(f"normalize must be none, cap or sup, not {norm!r}")
        mesh = boundary_samples(E, int(params.get("mesh", BOUNDARY_SAMPLES)))
        cap = reference_capacity(E).value
        cache = {}

        def build(n):
            if n not in cache:
                if name == "chebyshev":
                    res = minimax_monic(mesh, n)
                    ev, sup, zs = res.evaluate, res.norm, res.zeros
                else:
                    res = leja_monic(E, n, params.get("start"), len(mesh))
                    ev = (lambda z, w=res.roots: _product_eval(w, z))
                    sup, zs = res.sup_norm, res.roots
                k = {"none": 1.0, "cap": cap ** (-n), "sup": 1.0 / sup}[norm]
                cache[n] = (res.polynomial * k, lambda z, ev=ev, k=k: k * ev(z), zs, math.log(k))
            return cache[n]

        def zeros(n):
            poly, _, zs, _ = build(n)
            return zs if zs is not None else poly_roots(poly)

        return PolynomialFamily(name, {"normalize": norm}, lambda n: build(n)[0], E,
                                equilibrium_quadrature(E, nodes), p_exp,
                                evaluate=lambda n, z: build(n)[1](z), zeros=zeros,
                                leading=lambda n: build(n)[3], monic=(norm == "none"))

    if name == "faber":
        E = _default_set(params, Segment(-2.0, 2.0))
        cap = analytic_capacity(E)
        return PolynomialFamily(name, {}, lambda n: faber(E, n), E,
                                equilibrium_quadrature(E, nodes), p_exp,
                                evaluate=lambda n, z: _faber_eval(E, n, z),
                                leading=lambda n: -n * math.log(cap), monic=(cap == 1.0))

    if name == "orthonormal":
        E = _default_set(params, Circle(0j, 1.0))
        tau = params.get("tau") or equilibrium_quadrature(E, nodes)
        state = {}

        def basis(n):
            if state.get("n", -1) < n:
                state["n"] = max(n, 2 * state.get("n", 0))
                state["b"] = OrthonormalBasis.build(tau, state["n"])
            return state["b"]

        return PolynomialFamily(name, {}, lambda n: basis(n).polynomial(n), E, tau, 2.0,
                                evaluate=lambda n, z: basis(n).evaluate(n, z),
                                leading=lambda n: math.log(basis(n).gamma(n)),
                                gamma=lambda n: basis(n).gamma(n), monic=False)

    raise UnknownFamily(f"unknown family {name!r}")


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class MinimalityRow:
    n: int
    alpha_n: float
    beta_n: float
    sup_beta_n: float
    gamma_diag: float
    zero_max_dist: float


@dataclass(frozen=True)
class MinimalityReport:
    family: str
    capacity: CapacityValue
    p: float
    rows: tuple
    alpha_minimal: bool
    beta_minimal: bool

    @property
    def minimal(self) -> bool:
        return self.alpha_minimal and self.beta_minimal

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["n", "alpha_n", "beta_n", "sup_beta_n", "gamma_diag", "zero_max_dist"]
        w.writerow(cols)
        for r in self.rows:
            w.writerow([r.n] + [f"{getattr(r, c):.17g}" for c in cols[1:]])
        return buf.getvalue()


def tends_to_zero(values, threshold: float = VERDICT_THRESHOLD) -> bool:
    """Last value below threshold and strictly smaller in size than the first.

    A sequence that is identically zero (up to 1e-12) also qualifies.
    """
    first, last = abs(values[0]), abs(values[-1])
    return last < threshold and (last < first or last <= ZERO_TOL)


def _lp_norm(vals, w, p):
    a = np.abs(vals)
    if math.isinf(p):
        return float(a[w > 0].max())
    return float(np.sum(w * a ** p) ** (1.0 / p))


def _dist_to_hull(E, pts):
    hull = reference_hull(E)
    return distance_to(hull, pts)


def minimality_report(F: PolynomialFamily, n_list, threshold: float = VERDICT_THRESHOLD,
                      samples: int = BOUNDARY_SAMPLES) -> MinimalityReport:
    """Per-n diagnostics of the two conditions defining asymptotic minimality.

    alpha_n = (1/n) log|a_nn| + log cap(E); beta_n = (1/n) log ||p_n||_{L^p(tau)};
    sup_beta_n uses the sup over a boundary sampling of E; gamma_diag is
    gamma_n^(1/n) cap(E) for orthonormal families (NaN otherwise).
    """
    n_list = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    E = F.reference_set
    cap = reference_capacity(E)
    logcap = math.log(cap.value)
    bsamp = boundary_samples(E, samples).points
    rows = []
    for n in n_list:
        alpha = F.log_leading(n) / n + logcap
        beta = math.log(_lp_norm(F.values(n, F.tau.points), F.tau.weights, F.p)) / n
        sup_beta = math.log(float(np.max(np.abs(F.values(n, bsamp))))) / n
        gd = F.gamma(n) ** (1.0 / n) * cap.value if F.gamma is not None else math.nan
        zmax = float(np.max(_dist_to_hull(E, F.roots(n))))
        rows.append(MinimalityRow(n, alpha, beta, sup_beta, gd, zmax))
    a = [r.alpha_n for r in rows]
    b = [r.beta_n for r in rows]
    return MinimalityReport(F.name, cap, F.p, tuple(rows),
                            tends_to_zero(a, threshold), tends_to_zero(b, threshold))


class ZeroLocation(NamedTuple):
    n: int
    passed: bool
    max_dist: float


def zero_location_check(F: PolynomialFamily, epsilon: float, n_list) -> list:
    """Whether all zeros of p_n lie within epsilon of Pc(E), per n."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    out = []
    for n in n_list:
        d = float(np.max(_dist_to_hull(F.reference_set, F.roots(int(n)))))
        out.append(ZeroLocation(int(n), d <= epsilon, d))
    return out
