"""Logarithmic potentials, energies, Leja points, capacity and reference Green's functions."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from . import _kernels
from .compactset import (
    ANALYTIC_TYPES,
    BOUNDARY_SAMPLES,
    Circle,
    CompactSetModel,
    Disc,
    Ellipse,
    PointCloud,
    Segment,
    boundary_samples,
)
from .errors import CountExceedsCandidates, DuplicatePoints, UnsupportedShape

LEJA_TIE_RTOL = 1e-12
REFERENCE_ACCURACY = 1e-12
WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finitely supported probability measure."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=complex).ravel().copy()
        w = np.asarray(self.weights, dtype=float).ravel().copy()
        if p.size == 0:
            raise ValueError("measure needs at least one point")
        if p.shape != w.shape:
            raise ValueError("points and weights differ in length")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        p.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, points) -> DiscreteMeasure:
        p = np.asarray(points, dtype=complex).ravel()
        return cls(p, np.full(p.size, 1.0 / p.size))

    def __len__(self):
        return self.points.size

    def moment(self, k: int) -> complex:
        return complex(np.sum(self.weights * self.points ** k))

    def mass(self, predicate: Callable) -> float:
        return float(self.weights[np.asarray(predicate(self.points), dtype=bool)].sum())

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "weight"])
        for z, m in zip(self.points, self.weights):
            w.writerow([f"{z.real:.17g}", f"{z.imag:.17g}", f"{m:.17g}"])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    @classmethod
    def from_csv(cls, source) -> DiscreteMeasure:
        text = Path(source).read_text(encoding="utf-8") if isinstance(source, Path) else source
        rows = list(csv.DictReader(io.StringIO(text)))
        pts = [complex(float(r["re"]), float(r["im"])) for r in rows]
        return cls(pts, [float(r["weight"]) for r in rows])


@dataclass(frozen=True)
class GreenEvaluator:
    """Vectorised field ``z -> g(z) >= 0`` with a sup-norm error guarantee.

    ``pointwise_bound``, when given, returns a per-point error bound that
    is sharper than ``accuracy_bound``.
    """

    func: Callable
    accuracy_bound: float
    domain_box: tuple | None = None
    pointwise_bound: Callable | None = None
    label: str = ""

    def __call__(self, z):
        v = np.maximum(np.asarray(self.func(np.asarray(z, dtype=complex)), dtype=float), 0.0)
        return v[()] if v.ndim == 0 else v

    def bound(self, z):
        if self.pointwise_bound is None:
            return np.full(np.shape(z), self.accuracy_bound)[()]
        return self.pointwise_bound(np.asarray(z, dtype=complex))


def log_potential(mu: DiscreteMeasure, z):
    """U(z) = sum w_i log|z - p_i|; -inf where z hits a weighted support point."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    keep = mu.weights > 0
    pts, w = mu.points[keep], mu.weights[keep]
    out = np.empty(flat.size)
    step = max(1, 2_000_000 // max(1, pts.size))
    with np.errstate(divide="ignore"):
        for lo in range(0, flat.size, step):
            d = np.log(np.abs(flat[lo:lo + step, None] - pts[None, :]))
            out[lo:lo + step] = np.where(np.isneginf(d), -np.inf, d * w).sum(axis=1)
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


def energy(mu: DiscreteMeasure) -> float:
    """Off-diagonal discrete energy, reweighted by 1 / (1 - sum w_i^2).

    Returns -inf when two weighted support points coincide.
    """
    keep = mu.weights > 0
    pts, w = mu.points[keep], mu.weights[keep]
    if pts.size < 2:
        raise ValueError("energy needs at least two weighted points")
    if np.unique(pts).size < pts.size:
        return -math.inf
    e = _kernels.offdiag_energy(np.ascontiguousarray(pts), np.ascontiguousarray(w))
    return float(e / (1.0 - np.sum(w * w)))


def _as_points(candidates) -> np.ndarray:
    if isinstance(candidates, PointCloud):
        return np.ascontiguousarray(candidates.points)
    return np.ascontiguousarray(np.asarray(candidates, dtype=complex).ravel())


def leja_points(candidates, count: int, start: complex | None = None) -> np.ndarray:
    """Greedy Leja sequence drawn from ``candidates``.

    Each new point maximises the summed log distance to the points already
    chosen. Near-ties (relative ``1e-12``) go to the smallest candidate
    index. ``start`` must be one of the candidates; by default it is the
    candidate of largest modulus.
    """
    cand = _as_points(candidates)
    if count < 1:
        raise ValueError("count must be positive")
    if count > cand.size:
        raise CountExceedsCandidates(f"{count} points requested from {cand.size} candidates")
    if start is None:
        i0 = int(np.argmax(np.abs(cand)))
    else:
        gap = np.abs(cand - complex(start))
        i0 = int(np.argmin(gap))
        if gap[i0] > 1e-12 * max(1.0, abs(complex(start))):
            raise ValueError("start is not one of the candidates")
    idx = _kernels.leja_indices(cand, int(count), i0, LEJA_TIE_RTOL)
    if np.any(idx < 0):
        raise CountExceedsCandidates("candidates hold fewer distinct points than requested")
    return cand[idx]


class CapacityEstimate(NamedTuple):
    value: float
    sequence: np.ndarray  # d_k for k = 2..n, the running transfinite-diameter proxy


def capacity_estimate(points, return_sequence: bool = False):
    """Transfinite-diameter estimate prod_{j<k} |z_j - z_k|^{2/(n(n-1))}.

    For Leja points the running values d_k approach the capacity from above
    with error of order log(n)/n.
    """
    z = _as_points(points)
    n = z.size
    if n < 2:
        raise ValueError("need at least two points")
    rows = _kernels.log_dist_rowsums_lower(z)
    if np.any(np.isneginf(rows)):
        raise DuplicatePoints("coincident points give zero capacity estimate")
    cum = np.cumsum(rows)[1:]
    k = np.arange(2, n + 1)
    seq = np.exp(2.0 * cum / (k * (k - 1)))
    if return_sequence:
        return CapacityEstimate(float(seq[-1]), seq)
    return float(seq[-1])


def equilibrium_estimate(E: CompactSetModel, n: int, candidates: int = BOUNDARY_SAMPLES,
                         start: complex | None = None) -> DiscreteMeasure:
    """Counting measure of the first n Leja points of E's boundary sampling."""
    if n < 16:
        raise ValueError("n must be at least 16")
    cloud = boundary_samples(E, candidates)
    return DiscreteMeasure.uniform(leja_points(cloud, n, start))


# ---------------------------------------------------------------- Green's functions


def _joukowski_inverse(zeta):
    """Branch of zeta + sqrt(zeta^2 - 1) with modulus >= 1 on the whole plane."""
    return zeta + np.sqrt(zeta - 1.0) * np.sqrt(zeta + 1.0)


def analytic_capacity(E) -> float:
    if isinstance(E, (Disc, Circle)):
        return float(E.radius)
    if isinstance(E, Segment):
        return abs(complex(E.b) - complex(E.a)) / 4.0
    if isinstance(E, Ellipse):
        return 0.5 * (E.a + E.b)
    raise UnsupportedShape(f"no closed-form capacity for {type(E).__name__}")


def green_reference(E) -> GreenEvaluator:
    """Closed-form Green's function of the unbounded complement of E, pole at infinity."""
    if isinstance(E, (Disc, Circle)):
        c, r = complex(E.center), float(E.radius)

        def g(z):
            return np.log(np.maximum(np.abs(z - c), r) / r)
    elif isinstance(E, Segment):
        a, b = complex(E.a), complex(E.b)
        mid, half = 0.5 * (a + b), 0.5 * (b - a)

        def g(z):
            return np.log(np.abs(_joukowski_inverse((z - mid) / half)))
    elif isinstance(E, Ellipse):
        c = complex(E.center)
        f = math.sqrt(E.a * E.a - E.b * E.b)
        if f == 0.0:
            return green_reference(Disc(c, E.a))
        logR = math.log((E.a + E.b) / f)

        def g(z):
            return np.log(np.abs(_joukowski_inverse((z - c) / f))) - logR
    else:
        raise UnsupportedShape(f"no closed-form Green's function for {type(E).__name__}")

    def snapped(z, g=g):
        # values below the accuracy bound are indistinguishable from zero
        v = g(z)
        return np.where(v <= REFERENCE_ACCURACY, 0.0, v)

    return GreenEvaluator(snapped, REFERENCE_ACCURACY, None, label=type(E).__name__.lower())


class ModulusOfContinuity(NamedTuple):
    value: float
    argmax: complex
    samples: int


def modulus_of_continuity(g: GreenEvaluator, E: CompactSetModel, delta: float,
                          n_boundary: int = 1024, n_angle: int = 64) -> ModulusOfContinuity:
    """sup of g over {dist(z, E) <= delta}.

    By the maximum principle the sup sits on the outer edge of the
    neighbourhood, which is covered by circles of radius delta around the
    boundary samples. ``n_boundary * n_angle`` points are evaluated.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    b = boundary_samples(E, n_boundary).points
    ring = delta * np.exp(2j * np.pi * np.arange(n_angle) / n_angle)
    z = (b[:, None] + ring[None, :]).ravel()
    v = g(z)
    i = int(np.argmax(v))
    return ModulusOfContinuity(float(v[i]), complex(z[i]), int(z.size))


__all__ = [
    "ANALYTIC_TYPES", "CapacityEstimate", "DiscreteMeasure", "GreenEvaluator",
    "ModulusOfContinuity", "analytic_capacity", "capacity_estimate", "energy",
    "equilibrium_estimate", "green_reference", "leja_points", "log_potential",
    "modulus_of_continuity",
]
