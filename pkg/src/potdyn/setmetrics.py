"""Klimek distance between compact sets and weak-star discrepancy proxies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import spearmanr

from .compactset import CompactSetModel, GridSet, PointCloud, boundary_samples
from .dynamics import green_evaluator, julia_boundary
from .errors import GridTooClose
from .poly import Polynomial
from .potential import (
    DiscreteMeasure,
    GreenEvaluator,
    green_reference,
    log_potential,
    modulus_of_continuity,
)

DEFAULT_MOMENTS = 8
H_MIN = 0.05
GRID_POINTS = 256
TREND_RHO = -0.8
TREND_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class KlimekInput:
    set: CompactSetModel
    green: GreenEvaluator
    boundary_samples: PointCloud

    @classmethod
    def reference(cls, E, n: int = 4096) -> KlimekInput:
        """Analytic reference set with its closed-form Green's function."""
        return cls(E, green_reference(E), boundary_samples(E, n))

    @classmethod
    def julia(cls, p: Polynomial, K: GridSet, max_iter: int = 1000) -> KlimekInput:
        """Filled Julia grid with the dynamical Green's function of p."""
        return cls(K, green_evaluator(p, max_iter), julia_boundary(K))


class KlimekResult(NamedTuple):
    value: float
    uncertainty: float
    g_a_on_b: float
    g_b_on_a: float


def _sampling_modulus(g: GreenEvaluator, pts: np.ndarray, vals: np.ndarray) -> float:
    """Largest change of g between nearest-neighbour samples."""
    if pts.size < 2:
        return 0.0
    tree = cKDTree(np.column_stack((pts.real, pts.imag)))
    _, idx = tree.query(np.column_stack((pts.real, pts.imag)), k=2)
    return float(np.max(np.abs(vals - vals[idx[:, 1]])))


def klimek_distance(A: KlimekInput, B: KlimekInput) -> KlimekResult:
    """Gamma(A, B) = max(sup_B g_A, sup_A g_B), sampled on boundary clouds.

    The uncertainty adds both accuracy bounds and the nearest-neighbour
    oscillation of each Green's function over the other side's samples.
    """
    b_pts, a_pts = B.boundary_samples.points, A.boundary_samples.points
    ga = A.green(b_pts)
    gb = B.green(a_pts)
    ab, ba = float(np.max(ga)), float(np.max(gb))
    osc = max(_sampling_modulus(A.green, b_pts, ga), _sampling_modulus(B.green, a_pts, gb))
    unc = A.green.accuracy_bound + B.green.accuracy_bound + osc
    return KlimekResult(max(ab, ba), unc, ab, ba)


def precompactness_diagnostic(inputs, deltas=(0.2, 0.1, 0.05)) -> dict:
    """sup over a family of the modulus of continuity at each delta."""
    return {float(d): max(modulus_of_continuity(k.green, k.set, d).value for k in inputs)
            for d in deltas}


@dataclass(frozen=True, eq=False)
class DiscrepancyReport:
    moment_discrepancy: float
    potential_discrepancy: float
    K: int
    grid: np.ndarray = field(repr=False)
    grid_spec: dict = field(default_factory=dict)


def _circle(r, n=GRID_POINTS):
    return r * np.exp(2j * np.pi * np.arange(n) / n)


def default_test_grid(mu: DiscreteMeasure, nu: DiscreteMeasure, h_min: float = H_MIN):
    """Circles at 1.5x and 3x the joint support radius, plus one at half the
    inradius when the joint support keeps at least 2 h_min away from 0."""
    pts = np.concatenate((mu.points[mu.weights > 0], nu.points[nu.weights > 0]))
    rho = float(np.max(np.abs(pts)))
    rho = rho if rho > 0 else 1.0
    radii = [1.5 * rho, 3.0 * rho]
    r_in = float(np.min(np.abs(pts)))
    if 0.5 * r_in >= h_min:
        radii.insert(0, 0.5 * r_in)
    grid = np.concatenate([_circle(r) for r in radii])
    return grid, {"radii": radii, "points_per_circle": GRID_POINTS}


def weak_star_discrepancy(mu: DiscreteMeasure, nu: DiscreteMeasure, K: int = DEFAULT_MOMENTS,
                          grid=None, h_min: float = H_MIN) -> DiscrepancyReport:
    """Moment and potential discrepancies between two measures.

    moment: max_{1<=k<=K} |m_k(mu) - m_k(nu)|; potential: max over the
    test grid of |U_mu - U_nu|. Both are symmetric in (mu, nu).
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    if grid is None:
        grid, spec = default_test_grid(mu, nu, h_min)
    else:
        grid = np.asarray(grid, dtype=complex).ravel()
        spec = {"points": int(grid.size), "custom": True}
    for m in (mu, nu):
        sup = m.points[m.weights > 0]
        tree = cKDTree(np.column_stack((sup.real, sup.imag)))
        d, _ = tree.query(np.column_stack((grid.real, grid.imag)))
        if d.min() < h_min:
            raise GridTooClose(f"test grid comes within {d.min():.3g} < {h_min} of a support")
    mom = max(abs(mu.moment(k) - nu.moment(k)) for k in range(1, K + 1))
    pot = float(np.max(np.abs(log_potential(mu, grid) - log_potential(nu, grid))))
    return DiscrepancyReport(float(mom), pot, int(K), grid, spec)


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    values: dict
    wall_time: float = 0.0
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ConvergenceTable:
    records: tuple
    spearman: float
    decreasing: bool
    threshold: float
    below: bool
    floor: float


def convergence_table(items, threshold: float = 0.05, floor: float = TREND_FLOOR,
                      key: str = "value") -> ConvergenceTable:
    """Trend verdicts for (n, value) rows.

    ``decreasing``: last < first and Spearman(n, value) <= -0.8. Values
    below ``floor`` are treated as equal to it first, so roundoff-level
    zeros count as ties rather than as a spurious ordering.
    ``below``: the last value is under ``threshold``.
    """
    rows = [(int(n), float(v)) for n, v in items]
    if len(rows) < 3:
        raise ValueError("need at least 3 rows")
    ns = np.array([r[0] for r in rows])
    vals = np.array([r[1] for r in rows])
    snapped = np.maximum(vals, floor)
    if np.all(snapped == snapped[0]):
        rho = math.nan
    else:
        rho = float(spearmanr(ns, snapped).statistic)
    decreasing = bool(snapped[-1] < snapped[0] and rho <= TREND_RHO)
    records = tuple(ExperimentRecord(n, {key: v}) for n, v in rows)
    return ConvergenceTable(records, rho, decreasing, float(threshold),
                            bool(vals[-1] < threshold), float(floor))
