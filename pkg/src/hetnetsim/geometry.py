"""Deployment geometry: macro site grid, random point layers, distances."""

import math
from dataclasses import dataclass

import numpy as np

# Power-law path loss diverges at zero range; every link distance is
# clamped below at this value.
MIN_LINK_DISTANCE_M = 1.0


@dataclass(frozen=True)
class Area:
    """Rectangular study area with origin (0, 0), dimensions in meters."""

    width: float
    height: float

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("area dimensions must be positive")

    @property
    def size_m2(self):
        return self.width * self.height

    @property
    def center(self):
        return (self.width / 2.0, self.height / 2.0)

    def contains(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return ((pts[:, 0] >= 0.0) & (pts[:, 0] <= self.width)
                & (pts[:, 1] >= 0.0) & (pts[:, 1] <= self.height))


@dataclass(frozen=True)
class MacroGrid:
    """Hexagonal macro-site lattice clipped to an area.

    Sites are ordered row-major (south to north, then west to east), which
    makes the layout deterministic. ``row`` and ``col`` keep the lattice
    indices of each site so a frequency plan can color the grid without
    re-deriving them from coordinates.
    """

    xy: np.ndarray  # (n, 2) site positions in meters
    row: np.ndarray  # (n,) lattice row index
    col: np.ndarray  # (n,) lattice column index within its row
    inter_site_distance: float

    def __len__(self):
        return self.xy.shape[0]


@dataclass(frozen=True)
class PppLayer:
    """One realization of a homogeneous Poisson point process."""

    intensity: float  # points per m^2
    points: np.ndarray  # (n, 2)

    def __len__(self):
        return self.points.shape[0]


def build_macro_grid(area, inter_site_distance, anchor_offset=None):
    """Lay a hexagonal site lattice over ``area`` and keep the sites inside.

    Row pitch is d*sqrt(3)/2, column pitch d, odd rows shifted right by d/2.
    By default the staggered pattern is centered on the area center with the
    anchor row half a row pitch above it; pass ``anchor_offset=(0.0, 0.0)``
    to force a site exactly at the area center. ``anchor_offset`` is added
    to the center coordinates. Sites on the boundary are kept.
    """
    d = float(inter_site_distance)
    if d <= 0:
        raise ValueError("inter-site distance must be positive")
    row_pitch = d * math.sqrt(3.0) / 2.0
    cx, cy = area.center
    if anchor_offset is None:
        anchor_offset = (0.0, row_pitch / 2.0)
    ax = cx + float(anchor_offset[0])
    ay = cy + float(anchor_offset[1])

    sites = []
    rows = []
    cols = []
    i_lo = math.floor((0.0 - ay) / row_pitch) - 1
    i_hi = math.ceil((area.height - ay) / row_pitch) + 1
    for i in range(i_lo, i_hi + 1):
        y = ay + i * row_pitch
        if not (0.0 <= y <= area.height):
            continue
        shift = d / 2.0 if i % 2 else 0.0
        j_lo = math.floor((0.0 - ax - shift) / d) - 1
        j_hi = math.ceil((area.width - ax - shift) / d) + 1
        for j in range(j_lo, j_hi + 1):
            x = ax + shift + j * d
            if 0.0 <= x <= area.width:
                sites.append((x, y))
                rows.append(i)
                cols.append(j)
    if not sites:
        raise ValueError("no macro sites fit inside the area; "
                         "reduce inter_site_distance")
    return MacroGrid(
        xy=np.asarray(sites, dtype=float),
        row=np.asarray(rows, dtype=np.int64),
        col=np.asarray(cols, dtype=np.int64),
        inter_site_distance=d,
    )


def sample_ppp(area, intensity, rng):
    """Draw one PPP realization: Poisson count, i.i.d. uniform positions."""
    if intensity < 0:
        raise ValueError("intensity must be nonnegative")
    n = int(rng.poisson(intensity * area.size_m2))
    xs = rng.uniform(0.0, area.width, n)
    ys = rng.uniform(0.0, area.height, n)
    return PppLayer(intensity=float(intensity),
                    points=np.column_stack([xs, ys]))


def distance(a, b, min_distance=MIN_LINK_DISTANCE_M):
    """Euclidean distance between two points, clamped below at 1 m."""
    d = math.hypot(a[0] - b[0], a[1] - b[1])
    return max(d, min_distance)


def pairwise_distances(a, b, min_distance=MIN_LINK_DISTANCE_M):
    """Clamped distance matrix between point sets ``a`` (n,2) and ``b`` (m,2)."""
    a = np.asarray(a, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1, 2)
    d = np.hypot(a[:, 0, None] - b[None, :, 0], a[:, 1, None] - b[None, :, 1])
    return np.maximum(d, min_distance, out=d)
