"""Receiver-centric interference: transmission balls induced by a graph,
interference counts, and the certified log-distance-ratio bound.

A graph assigns every vertex a closed ball reaching its farthest neighbour;
the interference at a point is the number of such balls containing it.
Vertices with no incident edge induce no ball.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import GridIndex, PointSet, build_grid_index
from .graphs import GeometricGraph, build_mst, distance_ratio

__all__ = [
    "BallSet",
    "InterferenceReport",
    "ball_set",
    "interference_at",
    "interference_report",
    "interference_report_accelerated",
    "recommended_cell_side",
    "log_d_bound_check",
    "report_to_json",
    "report_to_csv",
]


@dataclass(frozen=True)
class BallSet:
    """Closed balls centered on the vertices; radius is the longest incident
    edge, and `active` marks vertices that have at least one edge."""

    point_set: PointSet
    radii2: np.ndarray  # squared radii; membership is d^2 <= radii2
    active: np.ndarray

    def __post_init__(self):
        radii2 = np.ascontiguousarray(np.asarray(self.radii2, dtype=np.float64))
        active = np.ascontiguousarray(np.asarray(self.active, dtype=bool))
        if radii2.shape != (self.point_set.n,) or active.shape != radii2.shape:
            raise ValueError("radii2/active must have one entry per point")
        radii2.setflags(write=False)
        active.setflags(write=False)
        object.__setattr__(self, "radii2", radii2)
        object.__setattr__(self, "active", active)

    @property
    def radii(self) -> np.ndarray:
        return np.sqrt(self.radii2)


@dataclass(frozen=True)
class InterferenceReport:
    per_vertex: np.ndarray  # int64, one count per vertex
    max_value: int
    argmax: int  # smallest vertex index attaining the max

    @classmethod
    def from_counts(cls, counts: np.ndarray) -> "InterferenceReport":
        counts = np.ascontiguousarray(np.asarray(counts, dtype=np.int64))
        counts.setflags(write=False)
        return cls(counts, int(counts.max()), int(np.argmax(counts)))


def ball_set(ps: PointSet, g: GeometricGraph) -> BallSet:
    if g.point_set is not ps and g.point_set.coords is not ps.coords:
        if not np.array_equal(g.point_set.coords, ps.coords):
            raise ValueError("graph was built over a different point set")
    radii2 = np.zeros(ps.n)
    active = np.zeros(ps.n, dtype=bool)
    if g.m:
        # squared lengths, same formula as the counting kernels, so the
        # far endpoint of each ball-defining edge always counts as inside
        diff = ps.coords[g.edges[:, 0]] - ps.coords[g.edges[:, 1]]
        l2 = (diff * diff).sum(axis=1)
        np.maximum.at(radii2, g.edges[:, 0], l2)
        np.maximum.at(radii2, g.edges[:, 1], l2)
        active[g.edges[:, 0]] = True
        active[g.edges[:, 1]] = True
    return BallSet(ps, radii2, active)


def interference_at(q, bs: BallSet) -> int:
    """Number of balls whose closed volume contains the query point."""
    q = np.asarray(q, dtype=np.float64)
    diff = bs.point_set.coords - q
    d2 = (diff * diff).sum(axis=1)
    return int(((d2 <= bs.radii2) & bs.active).sum())


def interference_report(ps: PointSet, g: GeometricGraph) -> InterferenceReport:
    """Per-vertex interference and its maximum, by brute-force O(n^2) scan."""
    bs = ball_set(ps, g)
    counts = _kernels.brute_counts(ps.coords, bs.radii2, bs.active)
    return InterferenceReport.from_counts(counts)


def recommended_cell_side(ps: PointSet, bs: BallSet) -> float:
    """Grid pitch for accelerated counting: median active radius, clamped to
    [1/sqrt(n * t_default), 1] with t_default = 2^((log2 n)^(1/3))."""
    n = ps.n
    t_default = 2.0 ** (max(math.log2(n), 1.0) ** (1.0 / 3.0))
    lo = 1.0 / math.sqrt(n * t_default)
    med = float(np.median(bs.radii[bs.active])) if bs.active.any() else lo
    return min(1.0, max(lo, med))


def interference_report_accelerated(ps: PointSet, g: GeometricGraph,
                                    idx: GridIndex | None = None) -> InterferenceReport:
    """Identical output to interference_report, but each ball only visits the
    grid buckets it intersects."""
    bs = ball_set(ps, g)
    if idx is None:
        idx = build_grid_index(ps, recommended_cell_side(ps, bs))

    coords = ps.coords
    n, d = coords.shape
    s = idx.cell_side
    cells = np.floor(coords / s).astype(np.int64)
    origin_cells = cells.min(axis=0)
    cells -= origin_cells
    origin = origin_cells.astype(np.float64) * s
    mdims = cells.max(axis=0) + 1
    strides = np.ones(d, dtype=np.int64)
    for a in range(d - 2, -1, -1):
        strides[a] = strides[a + 1] * mdims[a + 1]
    linear = cells @ strides
    order = np.argsort(linear, kind="stable").astype(np.int64)
    ncells = int(mdims.prod())
    starts = np.zeros(ncells + 1, dtype=np.int64)
    np.add.at(starts, linear + 1, 1)
    starts = np.cumsum(starts)

    # the cell-range reach is nudged up one ulp so sqrt rounding can never
    # skip a cell holding a boundary point; membership itself uses radii2
    counts = _kernels.grid_counts(
        coords, np.nextafter(bs.radii, np.inf), bs.radii2, bs.active, float(s),
        np.ascontiguousarray(origin), np.ascontiguousarray(mdims),
        np.ascontiguousarray(strides), np.ascontiguousarray(order),
        np.ascontiguousarray(starts))
    return InterferenceReport.from_counts(counts)


def log_d_bound_check(ps: PointSet):
    """Certified interference bound from the per-length-class constant and
    the dyadic class count: I(MST) <= 2 * 30^d * (ceil(log2 D) + 1).

    Returns (mst_interference, D, bound, ok).
    """
    if ps.n < 2:
        raise ValueError("bound check needs n >= 2")
    ratio = distance_ratio(ps)
    mst = build_mst(ps)
    rep = interference_report_accelerated(ps, mst)
    bound = 2.0 * 30.0 ** ps.dim * (math.ceil(math.log2(ratio)) + 1)
    return rep.max_value, ratio, bound, rep.max_value <= bound


def report_to_json(rep: InterferenceReport) -> str:
    return json.dumps({
        "n": int(rep.per_vertex.shape[0]),
        "max": rep.max_value,
        "argmax": rep.argmax,
        "per_vertex": [int(v) for v in rep.per_vertex],
    })


def report_to_csv(rep: InterferenceReport) -> str:
    lines = ["vertex,interference"]
    lines += [f"{i},{int(v)}" for i, v in enumerate(rep.per_vertex)]
    return "\n".join(lines) + "\n"
