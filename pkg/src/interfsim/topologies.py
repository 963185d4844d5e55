"""Constructive low-interference topologies: the hub/net graph and the
bucketed cell construction.

The hub graph picks a greedy metric net as hub set, connects the hubs by
their MST, and attaches every remaining point near its nearest hub.  A hub
that attracts more than ceil(sqrt(n)) points promotes every ceil(sqrt(n))-th
flock member (in order of distance to the hub) to a sub-hub; sub-hubs attach
to the hub and the remaining members attach to their nearest sub-hub.
Without this count-based decimation, a star around one hub carries linear
interference on exponentially shrinking chains: every leaf ball reaches past
the accumulation point, which defeats the point of the construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .geometry import PointSet
from .graphs import GeometricGraph, build_mst

__all__ = [
    "TopologyConfig",
    "CellPartition",
    "default_t",
    "default_net_radius",
    "build_hub_graph",
    "build_cell_partition",
    "build_bucketed_graph",
    "greedy_net",
]


def default_t(n: int) -> float:
    """Cell density parameter 2^((log2 n)^(1/3))."""
    return 2.0 ** (max(math.log2(max(n, 2)), 1.0) ** (1.0 / 3.0))


def default_net_radius(n: int) -> float:
    return float(n) ** -0.5


@dataclass(frozen=True)
class TopologyConfig:
    """Construction parameters; None means the n-dependent default."""

    t: float | None = None
    net_radius: float | None = None

    def __post_init__(self):
        if self.t is not None and self.t <= 1.0:
            raise ValueError("t must be > 1")
        if self.net_radius is not None and self.net_radius <= 0.0:
            raise ValueError("net_radius must be > 0")

    def resolve_t(self, n: int) -> float:
        return self.t if self.t is not None else default_t(n)

    def resolve_net_radius(self, n: int) -> float:
        return self.net_radius if self.net_radius is not None else default_net_radius(n)


@dataclass(frozen=True)
class CellPartition:
    """Axis-aligned grid over [0,1]^d with one representative per non-empty
    cell (the smallest point index in it)."""

    point_set: PointSet
    cells_per_side: int
    assignment: np.ndarray  # linear cell id per point
    representatives: np.ndarray  # point indices, one per non-empty cell

    def occupancy(self) -> np.ndarray:
        """Point count of each non-empty cell, in representative order."""
        cells, counts = np.unique(self.assignment, return_counts=True)
        return counts


def greedy_net(ps: PointSet, radius: float) -> np.ndarray:
    """Greedy metric net: scan points in index order, a point becomes a hub
    iff it is more than `radius` from every hub so far.

    Guarantees pairwise hub distance > radius and every point within
    `radius` of some hub.  Bucketed by a grid of pitch `radius` so each
    candidate only checks neighbouring buckets.
    """
    coords = ps.coords
    n, d = coords.shape
    cells = np.floor(coords / radius).astype(np.int64)
    buckets: dict = {}
    hubs = []
    r2 = radius * radius
    offsets = np.array(np.meshgrid(*([[-1, 0, 1]] * d), indexing="ij")).reshape(d, -1).T
    for i in range(n):
        ci = cells[i]
        covered = False
        for off in offsets:
            for h in buckets.get(tuple(ci + off), ()):
                diff = coords[i] - coords[h]
                if float(diff @ diff) <= r2:
                    covered = True
                    break
            if covered:
                break
        if not covered:
            buckets.setdefault(tuple(ci), []).append(i)
            hubs.append(i)
    return np.array(hubs, dtype=np.int64)


def _sub_mst_edges(ps: PointSet, indices: np.ndarray) -> list:
    """MST edges over a subset, mapped back to global point indices."""
    if indices.shape[0] < 2:
        return []
    sub = PointSet(ps.coords[indices])
    mst = build_mst(sub)
    return [(int(indices[a]), int(indices[b])) for a, b in mst.edges]


def build_hub_graph(ps: PointSet, cfg: TopologyConfig | None = None) -> GeometricGraph:
    n = ps.n
    if cfg is None:
        cfg = TopologyConfig()
    if n == 1:
        return GeometricGraph(ps, np.empty((0, 2), dtype=np.int64))
    radius = cfg.resolve_net_radius(n)
    hubs = greedy_net(ps, radius)
    edges = _sub_mst_edges(ps, hubs)

    non_hubs = np.setdiff1d(np.arange(n, dtype=np.int64), hubs, assume_unique=False)
    if non_hubs.size:
        tree = cKDTree(ps.coords[hubs])
        dists, which = tree.query(ps.coords[non_hubs])
        cap = math.ceil(math.sqrt(n))
        for h_local in np.unique(which):
            hub = int(hubs[h_local])
            members = non_hubs[which == h_local]
            mdist = dists[which == h_local]
            order = np.lexsort((members, mdist))
            members = members[order]
            if members.size <= cap:
                edges.extend((min(hub, int(v)), max(hub, int(v))) for v in members)
                continue
            sub_hubs = members[::cap]
            edges.extend((min(hub, int(s)), max(hub, int(s))) for s in sub_hubs)
            rest = np.setdiff1d(members, sub_hubs, assume_unique=True)
            sub_tree = cKDTree(ps.coords[sub_hubs])
            _, sub_which = sub_tree.query(ps.coords[rest])
            for v, s_local in zip(rest, sub_which):
                s = int(sub_hubs[s_local])
                edges.append((min(s, int(v)), max(s, int(v))))
    return GeometricGraph(ps, np.array(sorted(set(edges)), dtype=np.int64))


def build_cell_partition(ps: PointSet, cfg: TopologyConfig | None = None) -> CellPartition:
    """Grid of ceil((n*t)^(1/d)) cells per side, so each cell has volume at
    most 1/(n*t).  Points are clamped into the boundary cells, which only
    matters for the float edge at coordinate 1.0."""
    n, d = ps.n, ps.dim
    if cfg is None:
        cfg = TopologyConfig()
    t = cfg.resolve_t(n)
    m = max(1, math.ceil((n * t) ** (1.0 / d)))
    cells = np.clip(np.floor(ps.coords * m).astype(np.int64), 0, m - 1)
    strides = m ** np.arange(d - 1, -1, -1, dtype=np.int64)
    linear = cells @ strides
    _, first = np.unique(linear, return_index=True)
    return CellPartition(ps, m, linear, first.astype(np.int64))


def build_bucketed_graph(ps: PointSet, cfg: TopologyConfig | None = None) -> GeometricGraph:
    """Per-cell hub graphs glued by an MST over one representative per
    non-empty cell.  The per-cell net radius is cell_side/sqrt(N_i) for a
    cell holding N_i points."""
    n = ps.n
    if cfg is None:
        cfg = TopologyConfig()
    if n == 1:
        return GeometricGraph(ps, np.empty((0, 2), dtype=np.int64))
    part = build_cell_partition(ps, cfg)
    cell_side = 1.0 / part.cells_per_side

    edges = []
    order = np.argsort(part.assignment, kind="stable")
    linear_sorted = part.assignment[order]
    boundaries = np.flatnonzero(np.diff(linear_sorted)) + 1
    for group in np.split(order, boundaries):
        if group.shape[0] < 2:
            continue
        group = np.sort(group).astype(np.int64)
        sub = PointSet(ps.coords[group])
        sub_cfg = TopologyConfig(net_radius=cell_side / math.sqrt(group.shape[0]))
        g_cell = build_hub_graph(sub, sub_cfg)
        edges.extend((int(group[a]), int(group[b])) for a, b in g_cell.edges)

    edges.extend(_sub_mst_edges(ps, part.representatives))
    return GeometricGraph(ps, np.array(sorted(set(edges)), dtype=np.int64))
