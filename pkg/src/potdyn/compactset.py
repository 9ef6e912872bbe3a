"""Planar compact sets: analytic shapes, point clouds and occupancy grids.

Grids are the workhorse. A :class:`GridSet` lives on a :class:`Lattice` of
square cells of side ``h``; cell ``(row, col)`` has its center at
``origin + (col + 0.5) h + 1j (row + 0.5) h`` so row 0 is the bottom row.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, Union

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .errors import EmptySet, UnboundedSequence, WindowTooSmall

DEFAULT_RESOLUTION = 512
DEFAULT_PAD = 0.25
BOUNDARY_SAMPLES = 4096
# interior lattice for filled shapes: this many points across the diameter
INTERIOR_SAMPLES = 256


# ---------------------------------------------------------------- shapes


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def __post_init__(self):
        if complex(self.a) == complex(self.b):
            raise ValueError("segment endpoints must differ")


@dataclass(frozen=True)
class Ellipse:
    """Axis-aligned ellipse with semi-axes ``a >= b`` along x and y.

    ``filled`` selects the closed region (the default) or only the curve.
    The Green's function and polynomial hull are the same either way.
    """

    center: complex
    a: float
    b: float
    filled: bool = True

    def __post_init__(self):
        if not (self.a >= self.b > 0):
            raise ValueError("need semi-axes a >= b > 0")


AnalyticReference = Union[Disc, Circle, Segment, Ellipse]
ANALYTIC_TYPES = (Disc, Circle, Segment, Ellipse)


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel().copy()
        if pts.size == 0:
            raise EmptySet("point cloud is empty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point cloud has non-finite points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size


# ---------------------------------------------------------------- lattices


@dataclass(frozen=True)
class Window:
    """Axis-aligned bounding box ``[xmin, xmax] x [ymin, ymax]``."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("window must have positive extent")

    @classmethod
    def square(cls, radius: float, center: complex = 0j) -> Window:
        c = complex(center)
        return cls(c.real - radius, c.real + radius, c.imag - radius, c.imag + radius)

    @classmethod
    def around(cls, box, pad: float = DEFAULT_PAD) -> Window:
        """Square window centred on ``box`` with ``pad`` relative margin."""
        xmin, xmax, ymin, ymax = box
        half = 0.5 * max(xmax - xmin, ymax - ymin)
        if half == 0:
            half = 1.0
        half *= 1.0 + pad
        cx, cy = 0.5 * (xmin + xmax), 0.5 * (ymin + ymax)
        return cls(cx - half, cx + half, cy - half, cy + half)

    def lattice(self, resolution: int = DEFAULT_RESOLUTION) -> Lattice:
        """Square cells with ``resolution`` columns across the x range."""
        h = (self.xmax - self.xmin) / resolution
        height = max(1, int(round((self.ymax - self.ymin) / h)))
        return Lattice(complex(self.xmin, self.ymin), h, int(resolution), height)

    def contains_disc(self, center: complex, radius: float) -> bool:
        c = complex(center)
        return (self.xmin <= c.real - radius and c.real + radius <= self.xmax
                and self.ymin <= c.imag - radius and c.imag + radius <= self.ymax)


@dataclass(frozen=True)
class Lattice:
    origin: complex
    h: float
    width: int
    height: int

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("cell size must be positive")
        if self.width < 1 or self.height < 1:
            raise ValueError("lattice must have at least one cell")

    @property
    def shape(self):
        return (self.height, self.width)

    def centers(self) -> np.ndarray:
        x = self.origin.real + (np.arange(self.width) + 0.5) * self.h
        y = self.origin.imag + (np.arange(self.height) + 0.5) * self.h
        return x[None, :] + 1j * y[:, None]

    def center(self, row, col):
        return self.origin + complex((col + 0.5) * self.h, (row + 0.5) * self.h)

    def index_of(self, z):
        z = np.asarray(z, dtype=complex)
        col = np.floor((z.real - self.origin.real) / self.h).astype(int)
        row = np.floor((z.imag - self.origin.imag) / self.h).astype(int)
        return row, col

    def window(self) -> Window:
        o = self.origin
        return Window(o.real, o.real + self.width * self.h,
                      o.imag, o.imag + self.height * self.h)

    def same_as(self, other: Lattice) -> bool:
        return (self.width == other.width and self.height == other.height
                and math.isclose(self.h, other.h, rel_tol=1e-12)
                and abs(self.origin - other.origin) <= 1e-12 * max(1.0, abs(self.origin)))

    def to_dict(self) -> dict:
        return {"origin": [self.origin.real, self.origin.imag], "h": self.h,
                "width": self.width, "height": self.height}


@dataclass(frozen=True, eq=False)
class GridSet:
    lattice: Lattice
    occupancy: np.ndarray

    def __post_init__(self):
        occ = np.array(self.occupancy, dtype=bool)
        if occ.shape != self.lattice.shape:
            raise ValueError(f"occupancy shape {occ.shape} != lattice {self.lattice.shape}")
        if not occ.any():
            raise EmptySet("grid has no occupied cell")
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)

    @property
    def h(self) -> float:
        return self.lattice.h

    def occupied_centers(self) -> np.ndarray:
        rows, cols = np.nonzero(self.occupancy)
        lat = self.lattice
        return lat.origin + (cols + 0.5) * lat.h + 1j * (rows + 0.5) * lat.h

    def contains(self, z) -> np.ndarray:
        row, col = self.lattice.index_of(z)
        inside = (row >= 0) & (row < self.lattice.height) & (col >= 0) & (col < self.lattice.width)
        out = np.zeros(np.shape(row), dtype=bool)
        out[inside] = self.occupancy[row[inside], col[inside]]
        return out[()] if out.ndim == 0 else out

    def touches_border(self) -> bool:
        o = self.occupancy
        return bool(o[0].any() or o[-1].any() or o[:, 0].any() or o[:, -1].any())

    def count(self) -> int:
        return int(self.occupancy.sum())


CompactSetModel = Union[Disc, Circle, Segment, Ellipse, PointCloud, GridSet]


def make_grid(lattice: Lattice, occupancy) -> GridSet | None:
    """GridSet, or None when nothing is occupied."""
    occ = np.asarray(occupancy, dtype=bool)
    return GridSet(lattice, occ) if occ.any() else None


@dataclass(frozen=True)
class SetSequence:
    indices: tuple
    members: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(idx) != len(self.members):
            raise ValueError("indices and members differ in length")
        if not idx:
            raise EmptySet("empty sequence")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "members", tuple(self.members))


# ---------------------------------------------------------------- geometry


def bounding_box(A: CompactSetModel):
    if isinstance(A, (Disc, Circle)):
        c, r = complex(A.center), A.radius
        return (c.real - r, c.real + r, c.imag - r, c.imag + r)
    if isinstance(A, Segment):
        a, b = complex(A.a), complex(A.b)
        return (min(a.real, b.real), max(a.real, b.real), min(a.imag, b.imag), max(a.imag, b.imag))
    if isinstance(A, Ellipse):
        c = complex(A.center)
        return (c.real - A.a, c.real + A.a, c.imag - A.b, c.imag + A.b)
    pts = A.points if isinstance(A, PointCloud) else A.occupied_centers()
    return (pts.real.min(), pts.real.max(), pts.imag.min(), pts.imag.max())


def _circle_points(center, radius, n):
    t = 2.0 * np.pi * np.arange(n) / n
    return complex(center) + radius * np.exp(1j * t)


def _ellipse_points(E: Ellipse, n):
    t = 2.0 * np.pi * np.arange(n) / n
    return complex(E.center) + E.a * np.cos(t) + 1j * E.b * np.sin(t)


def boundary_samples(A: CompactSetModel, n: int = BOUNDARY_SAMPLES) -> PointCloud:
    """Points on the outer boundary (the boundary of the unbounded complement).

    For a segment that is the segment itself. For grids it is the centers of
    occupied cells having an unoccupied 4-neighbour in the polynomial hull's
    complement, i.e. the outer boundary cells.
    """
    if isinstance(A, (Disc, Circle)):
        return PointCloud(_circle_points(A.center, A.radius, n))
    if isinstance(A, Segment):
        s = np.linspace(0.0, 1.0, n)
        return PointCloud(complex(A.a) + s * (complex(A.b) - complex(A.a)))
    if isinstance(A, Ellipse):
        return PointCloud(_ellipse_points(A, n))
    if isinstance(A, PointCloud):
        return A
    return PointCloud(boundary(polynomial_hull(A)).occupied_centers())


def sampling_gap(A: CompactSetModel, n: int = BOUNDARY_SAMPLES) -> float:
    """Spacing of the discretisation that :func:`hausdorff_distance` uses."""
    if isinstance(A, (Disc, Circle)):
        gap = 2.0 * np.pi * A.radius / n
        return max(gap, 2.0 * A.radius / INTERIOR_SAMPLES) if isinstance(A, Disc) else gap
    if isinstance(A, Segment):
        return abs(complex(A.b) - complex(A.a)) / (n - 1)
    if isinstance(A, Ellipse):
        gap = 2.0 * np.pi * A.a / n
        return max(gap, 2.0 * A.a / INTERIOR_SAMPLES) if A.filled else gap
    if isinstance(A, GridSet):
        return A.h
    return 0.0


def _interior_lattice(center, rx, ry, spacing):
    c = complex(center)
    xs = np.arange(-rx, rx + 0.5 * spacing, spacing)
    ys = np.arange(-ry, ry + 0.5 * spacing, spacing)
    X, Y = np.meshgrid(xs, ys)
    keep = (X / rx) ** 2 + (Y / ry) ** 2 <= 1.0
    return c + X[keep] + 1j * Y[keep]


def discretize(A: CompactSetModel, n: int = BOUNDARY_SAMPLES) -> np.ndarray:
    """Finite point set standing in for A: filled shapes get interior points."""
    if isinstance(A, Disc):
        sp = sampling_gap(A, n)
        return np.concatenate((_circle_points(A.center, A.radius, n),
                               _interior_lattice(A.center, A.radius, A.radius, sp)))
    if isinstance(A, Ellipse) and A.filled:
        sp = sampling_gap(A, n)
        return np.concatenate((_ellipse_points(A, n), _interior_lattice(A.center, A.a, A.b, sp)))
    if isinstance(A, GridSet):
        return A.occupied_centers()
    return boundary_samples(A, n).points


def distance_to(A: CompactSetModel, z) -> np.ndarray:
    """Euclidean distance from each z to A (closed forms where available)."""
    z = np.asarray(z, dtype=complex)
    if isinstance(A, Disc):
        return np.maximum(np.abs(z - complex(A.center)) - A.radius, 0.0)
    if isinstance(A, Circle):
        return np.abs(np.abs(z - complex(A.center)) - A.radius)
    if isinstance(A, Segment):
        a, b = complex(A.a), complex(A.b)
        d = b - a
        t = np.clip(((z - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
        return np.abs(z - (a + t * d))
    if isinstance(A, Ellipse):
        # dense curve sampling; exact zero inside a filled ellipse
        curve = _ellipse_points(A, 8 * BOUNDARY_SAMPLES)
        tree = cKDTree(np.column_stack((curve.real, curve.imag)))
        dist, _ = tree.query(np.column_stack((z.real.ravel(), z.imag.ravel())))
        dist = dist.reshape(z.shape)
        if A.filled:
            w = z - complex(A.center)
            dist = np.where((w.real / A.a) ** 2 + (w.imag / A.b) ** 2 <= 1.0, 0.0, dist)
        return dist
    pts = A.points if isinstance(A, PointCloud) else A.occupied_centers()
    tree = cKDTree(np.column_stack((pts.real, pts.imag)))
    dist, _ = tree.query(np.column_stack((z.real.ravel(), z.imag.ravel())))
    return dist.reshape(z.shape)


def directed_hausdorff(A: CompactSetModel, B: CompactSetModel, n: int = BOUNDARY_SAMPLES) -> float:
    """sup over a in A of dist(a, B), with A discretised and B exact where possible."""
    return float(np.max(distance_to(B, discretize(A, n))))


def hausdorff_distance(A: CompactSetModel, B: CompactSetModel, n: int = BOUNDARY_SAMPLES) -> float:
    """chi(A, B) = max of the two directed distances.

    Accuracy is ``hausdorff_accuracy(A, B)``: the sampling gap of each side
    plus the cell size of any grid.
    """
    if A is B or (isinstance(A, ANALYTIC_TYPES) and A == B):
        return 0.0  # identical discretisations
    return max(directed_hausdorff(A, B, n), directed_hausdorff(B, A, n))


def hausdorff_accuracy(A: CompactSetModel, B: CompactSetModel, n: int = BOUNDARY_SAMPLES) -> float:
    return sampling_gap(A, n) + sampling_gap(B, n)


# ---------------------------------------------------------------- rasters


def default_lattice(A: CompactSetModel, extra: float = 0.0,
                    resolution: int = DEFAULT_RESOLUTION, pad: float = DEFAULT_PAD) -> Lattice:
    xmin, xmax, ymin, ymax = bounding_box(A)
    box = (xmin - extra, xmax + extra, ymin - extra, ymax + extra)
    return Window.around(box, pad).lattice(resolution)


def rasterize(A: CompactSetModel, lattice: Lattice | None = None,
              resolution: int = DEFAULT_RESOLUTION) -> GridSet:
    """Cells whose center lies within half a cell diagonal of A."""
    lattice = lattice or default_lattice(A, resolution=resolution)
    d = distance_to(A, lattice.centers())
    grid = make_grid(lattice, d <= lattice.h * math.sqrt(0.5))
    if grid is None:
        raise EmptySet("set misses the lattice")
    return grid


def field_sublevel(f: Callable, s: float, lattice: Lattice) -> GridSet:
    occ = np.asarray(f(lattice.centers())) <= s
    grid = make_grid(lattice, occ)
    if grid is None:
        raise EmptySet("sublevel set misses every cell center")
    return grid


def green_sublevel(g, s: float, window: Window, resolution: int = DEFAULT_RESOLUTION) -> GridSet:
    """Occupancy grid of {g <= s}; ``g`` is any vectorised field or GreenEvaluator."""
    if not s > 0:
        raise ValueError("s must be positive")
    grid = field_sublevel(g, s, window.lattice(resolution))
    if grid.touches_border():
        raise WindowTooSmall(f"{{g <= {s:g}}} reaches the window border")
    return grid


def dilation(A: CompactSetModel, s: float, lattice: Lattice | None = None,
             resolution: int = DEFAULT_RESOLUTION) -> GridSet:
    """Closed rasterisation of {z : dist(z, A) <= s}."""
    if not s > 0:
        raise ValueError("s must be positive")
    lattice = lattice or default_lattice(A, extra=s, resolution=resolution)
    grid = make_grid(lattice, distance_to(A, lattice.centers()) <= s)
    if grid is None:
        raise EmptySet("dilation misses every cell center")
    return grid


def polynomial_hull(A: GridSet) -> GridSet:
    """Fill the bounded components of the complement.

    The complement is taken 4-connected, so a diagonally connected ring of
    cells encloses its inside. Cells outside the array count as unoccupied.
    """
    return GridSet(A.lattice, ndimage.binary_fill_holes(A.occupancy))


_CROSS = ndimage.generate_binary_structure(2, 1)


def boundary(A: GridSet) -> GridSet:
    """Occupied cells with at least one unoccupied 4-neighbour."""
    occ = A.occupancy
    interior = ndimage.binary_erosion(occ, structure=_CROSS, border_value=0)
    return GridSet(A.lattice, occ & ~interior)


def erode(A: GridSet, r: float) -> GridSet | None:
    """Cells whose every center within distance r is occupied (None if empty)."""
    padded = np.pad(A.occupancy, 1, constant_values=False)
    d = ndimage.distance_transform_edt(padded)[1:-1, 1:-1] * A.h
    return make_grid(A.lattice, d > r)


def grid_dilate(A: GridSet, r: float) -> GridSet:
    """Cells within center distance r of an occupied cell, same lattice."""
    d = ndimage.distance_transform_edt(~A.occupancy) * A.h
    return GridSet(A.lattice, d <= r)


def closing(A: GridSet, r: float) -> GridSet:
    """Dilate then erode by r; fills gaps narrower than about 2r."""
    out = erode(grid_dilate(A, r), r)
    return out if out is not None else A


def union(grids: Sequence[GridSet]) -> GridSet:
    lat = _common_lattice(grids)
    return GridSet(lat, np.logical_or.reduce([g.occupancy for g in grids]))


def _common_lattice(grids):
    lat = grids[0].lattice
    for g in grids[1:]:
        if not g.lattice.same_as(lat):
            raise ValueError("grids live on different lattices")
    return lat


@dataclass(frozen=True)
class SequenceLimits:
    liminf: GridSet | None
    limsup: GridSet | None
    T: int
    tol: float


def sequence_limits(S: SetSequence, T: int | None = None, tol: float = 0.0) -> SequenceLimits:
    """Finite-tail proxies for liminf and limsup of a sequence of grids.

    With N members and window length ``T`` (default ``max(1, N // 2)``):

    * limsup: cells hit by at least one member of every length-T window
      inside the last ``2T - 1`` members;
    * liminf: cells hit by all of the last T members.

    A cell is hit by a member when its center is within ``tol`` of an
    occupied center (``tol = 0`` means plain occupancy). Empty limits come
    back as None. The result is an approximation of the true limits and
    carries T so that callers can report it.
    """
    grids = S.members
    if not all(isinstance(g, GridSet) for g in grids):
        raise TypeError("sequence_limits needs GridSet members")
    lat = _common_lattice(grids)
    for n, g in zip(S.indices, grids):
        if g.touches_border():
            raise UnboundedSequence(f"member n={n} reaches the lattice border")
    N = len(grids)
    T = max(1, N // 2) if T is None else int(T)
    if not 1 <= T <= N:
        raise ValueError("need 1 <= T <= len(sequence)")
    if tol > 0:
        hits = [ndimage.distance_transform_edt(~g.occupancy) * lat.h <= tol for g in grids]
    else:
        hits = [g.occupancy for g in grids]
    first = max(0, N - 2 * T + 1)
    sup = np.ones(lat.shape, dtype=bool)
    for k in range(first, N - T + 1):
        sup &= np.logical_or.reduce(hits[k:k + T])
    inf = np.logical_and.reduce(hits[N - T:])
    return SequenceLimits(make_grid(lat, inf), make_grid(lat, sup), T, float(tol))


# ---------------------------------------------------------------- files


def write_pgm(grid: GridSet, path) -> tuple[Path, Path]:
    """Binary PGM (0 = occupied, 255 = free, first row = top) plus JSON sidecar."""
    path = Path(path)
    img = np.where(grid.occupancy[::-1], 0, 255).astype(np.uint8)
    header = f"P5\n{grid.lattice.width} {grid.lattice.height}\n255\n".encode("ascii")
    path.write_bytes(header + img.tobytes())
    side = path.with_suffix(".json")
    side.write_text(json.dumps(grid.lattice.to_dict(), sort_keys=True) + "\n")
    return path, side


def read_pgm(path) -> GridSet:
    path = Path(path)
    data = path.read_bytes()
    magic, dims, maxval, body = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ValueError("not a binary 8-bit PGM written by write_pgm")
    width, height = (int(v) for v in dims.split())
    pix = np.frombuffer(body[: width * height], dtype=np.uint8).reshape(height, width)
    meta = json.loads(path.with_suffix(".json").read_text())
    lat = Lattice(complex(*meta["origin"]), float(meta["h"]), int(meta["width"]), int(meta["height"]))
    return GridSet(lat, pix[::-1] == 0)
