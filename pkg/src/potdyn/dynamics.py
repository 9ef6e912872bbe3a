"""Escape-time dynamics of a single polynomial of degree d >= 2.

Green's function values come with rigorous error bounds. Write
``s = sum_{j<d} |a_j| / |a_d|`` and let ``w = p^k(z)`` be the first
iterate with ``|w| > T``. Then ``d^k g(z) = log|w| + log|a_d|/(d-1) + e``
with ``|e| <= -log(1 - s/|w|) / (d-1)``. Orbits that stay inside the
escape radius R for M steps satisfy ``0 <= g(z) <= C_in / d^M``, where
``C_in = log R + (log|a_d| + log(1 + s/R)) / (d-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .compactset import DEFAULT_RESOLUTION, GridSet, Lattice, PointCloud, Window, boundary
from .errors import DegreeTooLow, EmptySet, Indeterminate, TreeTooLarge, WindowTooSmall
from .poly import Polynomial, batch_preimages
from .potential import DiscreteMeasure, GreenEvaluator

ESCAPE_THRESHOLD = 1e8
GRID_MAX_ITER = 200
GREEN_MAX_ITER = 1000
FULL_TREE_LIMIT = 10 ** 6
RANDOM_PATH_SAMPLES = 10 ** 5
# escaping cells whose distance estimate is within half a cell diagonal count
# as occupied; the same rule rasterises analytic sets
DEM_FACTOR = math.sqrt(0.5)
# dist(z, K) >= est / 2 for small g, so this factor marks every cell whose
# center lies within h*sqrt(2)/2 of K (at the price of some extra cells)
DEM_COVER_FACTOR = math.sqrt(2.0)
STATUS_BOUNDED, STATUS_ESCAPED, STATUS_INDETERMINATE = 0, 1, 2


def _check_degree(p: Polynomial) -> int:
    if p.degree < 2:
        raise DegreeTooLow(f"need degree >= 2, got {p.degree}")
    return p.degree


def escape_radius(p: Polynomial) -> float:
    """(1 + |a_n| + ... + |a_0|) / |a_n|."""
    _check_degree(p)
    a = np.abs(p.coeffs)
    return float((1.0 + a.sum()) / a[-1])


def cap_julia(p: Polynomial) -> float:
    """Capacity of the filled Julia set, |a_n|^(-1/(n-1)) (evaluated in logs)."""
    n = _check_degree(p)
    return math.exp(-math.log(abs(p.leading)) / (n - 1))


def _tail_sum(p: Polynomial) -> float:
    a = np.abs(p.coeffs)
    return float(a[:-1].sum() / a[-1])


def escape_threshold(p: Polynomial, requested: float = ESCAPE_THRESHOLD) -> float:
    """Threshold T >= requested beyond which the tail bound is valid.

    Needs s/T <= 1/2 and |a_d| T^(d-1) (1 - s/T) >= 1 so that orbit moduli
    keep growing after they pass T.
    """
    d = _check_degree(p)
    s = _tail_sum(p)
    T = max(requested, 2.0 * s, escape_radius(p))
    floor = math.exp(math.log(2.0 / abs(p.leading)) / (d - 1))
    return max(T, floor)


def _interior_constant(p: Polynomial, R: float) -> float:
    d = p.degree
    s = _tail_sum(p)
    c = math.log(R) + (math.log(abs(p.leading)) + math.log1p(s / R)) / (d - 1)
    return max(c, 0.0)


@dataclass(frozen=True)
class JuliaComputation:
    """Parameters of an escape-time computation for one polynomial."""

    polynomial: Polynomial
    max_iter: int = GRID_MAX_ITER
    requested_threshold: float = ESCAPE_THRESHOLD
    window: Window | None = None

    def __post_init__(self):
        _check_degree(self.polynomial)
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")

    @property
    def escape_radius(self) -> float:
        return escape_radius(self.polynomial)

    @property
    def escape_threshold(self) -> float:
        return escape_threshold(self.polynomial, self.requested_threshold)

    def default_window(self) -> Window:
        return self.window or Window.square(self.escape_radius)

    def orbits(self, z):
        p = self.polynomial
        pts = np.ascontiguousarray(np.asarray(z, dtype=np.complex128).ravel())
        return _kernels.escape_orbits(np.ascontiguousarray(p.coeffs), pts, int(self.max_iter),
                                      float(self.escape_radius), float(self.escape_threshold))


class GreenField(NamedTuple):
    value: np.ndarray
    bound: np.ndarray
    status: np.ndarray
    steps: np.ndarray


def green_field(p: Polynomial, z, max_iter: int = GREEN_MAX_ITER,
                threshold: float = ESCAPE_THRESHOLD) -> GreenField:
    """Vectorised dynamical Green's function with per-point error bounds.

    Points whose orbit passed R but not T within ``max_iter`` get status 2,
    value NaN and an infinite bound.
    """
    d = _check_degree(p)
    comp = JuliaComputation(p, max_iter, threshold)
    z = np.asarray(z, dtype=complex)
    status, steps, logmod, _ = comp.orbits(z)
    log_an = math.log(abs(p.leading))
    s = _tail_sum(p)
    esc = status == STATUS_ESCAPED
    scale = np.exp(-steps * math.log(d))
    value = np.zeros(status.shape)
    bound = np.full(status.shape, _interior_constant(p, comp.escape_radius) * d ** (-float(max_iter)))
    value[esc] = (logmod[esc] + log_an / (d - 1)) * scale[esc]
    bound[esc] = -np.log1p(-s * np.exp(-logmod[esc])) / (d - 1) * scale[esc]
    ind = status == STATUS_INDETERMINATE
    value[ind] = np.nan
    bound[ind] = np.inf
    shape = z.shape
    return GreenField(np.maximum(value, 0.0).reshape(shape), bound.reshape(shape),
                      status.reshape(shape), steps.reshape(shape))


class GreenValue(NamedTuple):
    value: float
    bound: float
    steps: int


def green_dynamical(p: Polynomial, z: complex, max_iter: int = GREEN_MAX_ITER,
                    threshold: float = ESCAPE_THRESHOLD) -> GreenValue:
    """g_p(z) with a rigorous error bound; raises Indeterminate on a stalled orbit."""
    f = green_field(p, np.array([complex(z)]), max_iter, threshold)
    if f.status[0] == STATUS_INDETERMINATE:
        raise Indeterminate(f"orbit of {z!r} left R but not T within {max_iter} steps")
    return GreenValue(float(f.value[0]), float(f.bound[0]), int(f.steps[0]))


def green_evaluator(p: Polynomial, max_iter: int = GREEN_MAX_ITER,
                    threshold: float = ESCAPE_THRESHOLD, retries: int = 3) -> GreenEvaluator:
    """GreenEvaluator for g_p. Stalled orbits are re-run with 4x the budget."""
    d = _check_degree(p)
    T = escape_threshold(p, threshold)
    R = escape_radius(p)
    acc = max(_interior_constant(p, R) * d ** (-float(max_iter)),
              -math.log1p(-_tail_sum(p) / T) / (d - 1))

    def evaluate(z, want_bound=False):
        z = np.asarray(z, dtype=complex)
        f = green_field(p, z, max_iter, threshold)
        value, bound = f.value.copy(), f.bound.copy()
        stalled = f.status == STATUS_INDETERMINATE
        budget = max_iter
        for _ in range(retries):
            if not stalled.any():
                break
            budget *= 4
            g = green_field(p, z[stalled], budget, threshold)
            value[stalled], bound[stalled] = g.value, g.bound
            still = np.zeros_like(stalled)
            still[stalled] = g.status == STATUS_INDETERMINATE
            stalled = still
        if stalled.any():
            raise Indeterminate(f"{int(stalled.sum())} orbits stalled between R and T")
        return bound if want_bound else value

    return GreenEvaluator(evaluate, acc, None,
                          pointwise_bound=lambda z: evaluate(z, want_bound=True),
                          label="dynamical")


def filled_julia_grid(p: Polynomial, window: Window | None = None,
                      resolution: int = DEFAULT_RESOLUTION, max_iter: int = GRID_MAX_ITER,
                      method: str = "distance", dem_factor: float = DEM_FACTOR,
                      threshold: float = ESCAPE_THRESHOLD) -> GridSet:
    """Occupancy grid of the filled Julia set, window defaulting to [-R, R]^2.

    ``method="center"`` marks cells whose center orbit never passes T.
    ``method="distance"`` (default) also marks escaping centers whose
    distance estimate ``g / |grad g|`` is at most ``dem_factor * h``, so
    that sets thinner than a cell (segments, Cantor dust) are not lost.
    Stalled orbits count as occupied either way, so occupancy can only
    shrink as ``max_iter`` grows.
    """
    comp = JuliaComputation(p, max_iter, threshold, window)
    R = comp.escape_radius
    win = comp.default_window()
    if not win.contains_disc(0j, R * (1 - 1e-12)):
        raise WindowTooSmall(f"window must contain the disc of radius R = {R:g}")
    lat = win.lattice(resolution)
    status, steps, logmod, logder = comp.orbits(lat.centers())
    occ = status != STATUS_ESCAPED
    if method == "distance":
        d = p.degree
        G = logmod + math.log(abs(p.leading)) / (d - 1)
        esc = (status == STATUS_ESCAPED) & (G > 0)
        with np.errstate(over="ignore"):
            est = np.where(esc, G * np.exp(np.where(esc, logmod - logder, 0.0)), np.inf)
        occ |= est <= dem_factor * lat.h
    elif method != "center":
        raise ValueError(f"unknown method {method!r}")
    occ = occ.reshape(lat.shape)
    if not occ.any():
        raise EmptySet("no cell of the filled Julia set detected; raise resolution")
    return GridSet(lat, occ)


def julia_boundary(K: GridSet) -> PointCloud:
    """Centers of occupied cells with an unoccupied 4-neighbour."""
    b = boundary(K)
    pts = b.occupied_centers()
    if pts.size == 0:
        raise EmptySet("grid has no boundary cells")
    return PointCloud(pts)


def green_grid_field(p: Polynomial, lattice: Lattice, max_iter: int = GREEN_MAX_ITER) -> GreenField:
    return green_field(p, lattice.centers(), max_iter)


# ---------------------------------------------------------------- Brolin measure


def default_start(p: Polynomial) -> complex:
    return complex(2.0 * escape_radius(p))


def brolin_tree(p: Polynomial, z0: complex | None = None, depth: int = 1) -> list:
    """Backward tree levels; level k holds the d^k preimages under p^k.

    The children of entry i of level k sit at ``i*d ... i*d + d - 1`` of
    level k + 1.
    """
    d = _check_degree(p)
    if d ** depth > FULL_TREE_LIMIT:
        raise TreeTooLarge(f"{d}^{depth} > {FULL_TREE_LIMIT} preimages")
    z0 = default_start(p) if z0 is None else complex(z0)
    levels = [np.array([z0])]
    for _ in range(depth):
        levels.append(batch_preimages(p, levels[-1]).ravel())
    return levels


def brolin_sample(p: Polynomial, z0: complex | None = None, depth: int = 12,
                  mode: str = "auto", samples: int = RANDOM_PATH_SAMPLES,
                  seed: int = 0) -> DiscreteMeasure:
    """Preimage counting measure approximating the Brolin measure of p.

    ``mode="full-tree"`` returns the uniform measure on all d^depth
    preimages. ``mode="random-path"`` follows ``samples`` independent
    backward orbits; orbit i draws its branches from child i of
    ``SeedSequence(seed)``, so the result does not depend on batching.
    ``mode="auto"`` picks the full tree when ``d^depth <= 10^6``.
    """
    d = _check_degree(p)
    z0 = default_start(p) if z0 is None else complex(z0)
    if mode == "auto":
        mode = "full-tree" if d ** depth <= FULL_TREE_LIMIT else "random-path"
    if mode == "full-tree":
        return DiscreteMeasure.uniform(brolin_tree(p, z0, depth)[-1])
    if mode != "random-path":
        raise ValueError(f"unknown mode {mode!r}")
    children = np.random.SeedSequence(seed).spawn(samples)
    choice = np.stack([np.random.default_rng(c).integers(0, d, size=depth) for c in children])
    w = np.full(samples, z0)
    rows = np.arange(samples)
    for level in range(depth):
        pre = batch_preimages(p, w)
        # sort each row so the branch label does not depend on solver ordering
        order = np.lexsort((pre.imag, pre.real), axis=-1)
        pre = np.take_along_axis(pre, order, axis=1)
        w = pre[rows, choice[:, level]]
    return DiscreteMeasure.uniform(w)
