"""Geometric graphs: Euclidean MST, nearest-neighbour graph, edge-length
filtering, and MST structural checks.

Edges are compared by the key (length, min_index, max_index) everywhere, so
the MST is unique and deterministic even under exact length ties, and the
nearest-neighbour graph built with the same key is always a subset of it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay, QhullError, cKDTree

from . import _kernels
from .geometry import PointSet

__all__ = [
    "GeometricGraph",
    "EdgeLengthClass",
    "build_mst",
    "build_nn_graph",
    "mst_total_length_prim",
    "filter_edges_by_length",
    "dyadic_length_classes",
    "diameter_ball_property",
    "distance_ratio",
    "is_connected",
    "save_graph",
    "load_graph",
]

# all-pairs candidate generation is quadratic in memory; above this size the
# d=2 path switches to Delaunay candidates and other dimensions are refused
_DENSE_LIMIT = 6000


@dataclass(frozen=True)
class GeometricGraph:
    """Simple undirected graph over point indices of a PointSet.

    Edges are stored as an (m, 2) int64 array with i < j, sorted
    lexicographically.  Connectivity is a queryable property, not an
    invariant: length-filtered subgraphs are legitimately disconnected.
    """

    point_set: PointSet
    edges: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        n = self.point_set.n
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed")
            edges = np.sort(edges, axis=1)
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            dup = np.all(edges[1:] == edges[:-1], axis=1)
            if np.any(dup):
                edges = np.concatenate((edges[:1], edges[1:][~dup]))
        edges = np.ascontiguousarray(edges)
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return self.point_set.n

    @property
    def m(self) -> int:
        return self.edges.shape[0]

    def edge_lengths(self) -> np.ndarray:
        if self.m == 0:
            return np.empty(0)
        coords = self.point_set.coords
        diff = coords[self.edges[:, 0]] - coords[self.edges[:, 1]]
        return np.sqrt((diff * diff).sum(axis=1))

    def total_length(self) -> float:
        return float(self.edge_lengths().sum())


@dataclass(frozen=True)
class EdgeLengthClass:
    """Half-open length interval (r_low, 2*r_low]."""

    r_low: float

    def __post_init__(self):
        if self.r_low < 0:
            raise ValueError("r_low must be >= 0")

    def contains(self, length) -> np.ndarray:
        return (length > self.r_low) & (length <= 2.0 * self.r_low)


def _edge_sort(lengths, ei, ej):
    order = np.lexsort((ej, ei, lengths))
    return ei[order], ej[order]


def _kruskal(ps: PointSet, lengths, ei, ej) -> GeometricGraph:
    ei, ej = _edge_sort(lengths, ei, ej)
    keep = _kernels.kruskal_select(np.ascontiguousarray(ei),
                                   np.ascontiguousarray(ej), ps.n)
    return GeometricGraph(ps, np.column_stack((ei[keep], ej[keep])))


def _all_pairs(ps: PointSet):
    iu, ju = np.triu_indices(ps.n, k=1)
    diff = ps.coords[iu] - ps.coords[ju]
    lengths = np.sqrt((diff * diff).sum(axis=1))
    return lengths, iu.astype(np.int64), ju.astype(np.int64)


def _delaunay_candidates(ps: PointSet):
    tri = Delaunay(ps.coords)
    simplices = tri.simplices
    k = simplices.shape[1]
    pairs = []
    for a in range(k):
        for b in range(a + 1, k):
            pairs.append(simplices[:, [a, b]])
    edges = np.concatenate(pairs).astype(np.int64)
    # Qhull merges nearly-coincident sites, which can drop the shortest true
    # edges (adversarial configurations sit far below its precision floor);
    # exact k-nearest-neighbour edges restore them
    tree = cKDTree(ps.coords)
    kq = min(ps.n, 4)
    _, idxs = tree.query(ps.coords, k=kq)
    src = np.repeat(np.arange(ps.n, dtype=np.int64), kq - 1)
    dst = idxs[:, 1:].reshape(-1).astype(np.int64)
    nn_edges = np.column_stack((src, dst))
    nn_edges = nn_edges[src != dst]
    edges = np.sort(np.concatenate((edges, nn_edges)), axis=1)
    edges = np.unique(edges, axis=0)
    edges = edges[edges[:, 0] != edges[:, 1]]
    diff = ps.coords[edges[:, 0]] - ps.coords[edges[:, 1]]
    lengths = np.sqrt((diff * diff).sum(axis=1))
    return lengths, edges[:, 0], edges[:, 1]


def _collinear_candidates(ps: PointSet):
    # rank-1 point cloud: project on the principal axis, adjacent pairs suffice
    centered = ps.coords - ps.coords.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    proj = centered @ vt[0]
    order = np.argsort(proj, kind="stable").astype(np.int64)
    ei, ej = order[:-1], order[1:]
    diff = ps.coords[ei] - ps.coords[ej]
    lengths = np.sqrt((diff * diff).sum(axis=1))
    lo = np.minimum(ei, ej)
    hi = np.maximum(ei, ej)
    return lengths, lo, hi


def build_mst(ps: PointSet) -> GeometricGraph:
    """Euclidean minimum spanning tree, unique under the shared edge key.

    Small inputs (or any dimension up to the dense limit) run Kruskal over
    all pairs.  Large 2-D inputs use Delaunay candidate edges, which contain
    every MST; large 1-D inputs use the sorted path.
    """
    n = ps.n
    if n == 1:
        return GeometricGraph(ps, np.empty((0, 2), dtype=np.int64))
    if n <= _DENSE_LIMIT:
        return _kruskal(ps, *_all_pairs(ps))
    if ps.dim == 1:
        order = np.argsort(ps.coords[:, 0], kind="stable").astype(np.int64)
        ei, ej = order[:-1], order[1:]
        lengths = np.abs(ps.coords[ej, 0] - ps.coords[ei, 0])
        return _kruskal(ps, lengths, np.minimum(ei, ej), np.maximum(ei, ej))
    if ps.dim == 2:
        try:
            return _kruskal(ps, *_delaunay_candidates(ps))
        except QhullError:
            return _kruskal(ps, *_collinear_candidates(ps))
    raise ValueError(
        f"MST for d={ps.dim} is limited to n <= {_DENSE_LIMIT} points")


def mst_total_length_prim(ps: PointSet) -> float:
    """Independent MST total length via dense Prim (cross-check algorithm)."""
    if ps.n > 20000:
        raise ValueError("dense Prim cross-check limited to n <= 20000")
    return float(_kernels.prim_total_length(ps.coords))


def build_nn_graph(ps: PointSet) -> GeometricGraph:
    """Join each vertex to its nearest neighbour under the shared edge key.

    Ties on distance are broken by the lexicographically smallest (i, j)
    pair, which makes the result a subset of build_mst's edge set.
    """
    n = ps.n
    if n < 2:
        raise ValueError("nearest-neighbour graph needs n >= 2")
    coords = ps.coords
    if n <= 4096:
        # exact scan, same distance formula as edge_lengths so ties agree
        nn = np.empty(n, dtype=np.int64)
        for i in range(n):
            diff = coords - coords[i]
            d = np.sqrt((diff * diff).sum(axis=1))
            d[i] = np.inf
            nn[i] = int(np.argmin(d))  # first occurrence = smallest index
    else:
        tree = cKDTree(coords)
        k = min(n, 3)
        dists, idxs = tree.query(coords, k=k)
        nn = np.empty(n, dtype=np.int64)
        for i in range(n):
            mask = idxs[i] != i
            di, ii = dists[i][mask], idxs[i][mask]
            if di.size > 1 and di[1] == di[0]:
                # visible tie; rescan this vertex exactly
                diff = coords - coords[i]
                d = np.sqrt((diff * diff).sum(axis=1))
                d[i] = np.inf
                nn[i] = int(np.argmin(d))
            else:
                nn[i] = int(ii[0])
    edges = {(min(i, int(j)), max(i, int(j))) for i, j in enumerate(nn)}
    return GeometricGraph(ps, np.array(sorted(edges), dtype=np.int64))


def filter_edges_by_length(g: GeometricGraph, cls: EdgeLengthClass) -> GeometricGraph:
    """Keep exactly the edges with length in (r_low, 2*r_low]."""
    lengths = g.edge_lengths()
    return GeometricGraph(g.point_set, g.edges[cls.contains(lengths)])


def dyadic_length_classes(g: GeometricGraph) -> list[EdgeLengthClass]:
    """Dyadic classes tiling (min_len/2 * 2^k] so that every edge of g falls
    in exactly one class; class k is (min_len*2^(k-1), min_len*2^k]."""
    lengths = g.edge_lengths()
    if lengths.size == 0:
        return []
    lmin = float(lengths.min())
    lmax = float(lengths.max())
    if lmin <= 0:
        raise ValueError("dyadic classes need strictly positive edge lengths")
    classes = []
    r = lmin / 2.0
    while True:
        classes.append(EdgeLengthClass(r))
        if 2.0 * r >= lmax:
            break
        r *= 2.0
    return classes


def diameter_ball_property(g: GeometricGraph):
    """True iff for every edge {i, j} no vertex lies strictly inside the open
    ball with diameter x_i x_j.  Returns (ok, violation); violation is
    ((i, j), vertex) for the first failing edge in canonical edge order.
    """
    coords = g.point_set.coords
    if g.m == 0:
        return True, None
    tree = cKDTree(coords)
    lengths = g.edge_lengths()
    for (i, j), length in zip(g.edges, lengths):
        mid = (coords[i] + coords[j]) / 2.0
        half = length / 2.0
        for v in sorted(tree.query_ball_point(mid, half)):
            if v == i or v == j:
                continue
            diff = coords[v] - mid
            if float(diff @ diff) < half * half:  # strictly inside
                return False, ((int(i), int(j)), int(v))
    return True, None


def distance_ratio(ps: PointSet) -> float:
    """Max pairwise distance over min pairwise distance."""
    if ps.n < 2:
        raise ValueError("distance ratio needs n >= 2")
    tree = cKDTree(ps.coords)
    dmin = float(tree.query(ps.coords, k=2)[0][:, 1].min())
    if dmin == 0.0:
        raise ValueError("minimum pairwise distance is 0 (duplicate points)")

    coords = ps.coords
    if ps.dim == 1 or ps.n <= 3:
        if ps.dim == 1:
            dmax = float(coords[:, 0].max() - coords[:, 0].min())
        else:
            iu, ju = np.triu_indices(ps.n, k=1)
            diff = coords[iu] - coords[ju]
            dmax = float(np.sqrt((diff * diff).sum(axis=1)).max())
    else:
        try:
            from scipy.spatial import ConvexHull

            hull = coords[ConvexHull(coords).vertices]
        except QhullError:
            # degenerate cloud: extremes along the principal axis suffice
            centered = coords - coords.mean(axis=0)
            _, _, vt = np.linalg.svd(centered, full_matrices=False)
            proj = centered @ vt[0]
            hull = coords[[int(np.argmin(proj)), int(np.argmax(proj))]]
        diff = hull[:, None, :] - hull[None, :, :]
        dmax = float(np.sqrt((diff * diff).sum(axis=-1)).max())
    return dmax / dmin


def is_connected(g: GeometricGraph) -> bool:
    n = g.n
    if n == 1:
        return True
    if g.m < n - 1:
        return False
    parent = np.arange(n, dtype=np.int64)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for i, j in g.edges:
        a, b = find(int(i)), find(int(j))
        if a != b:
            parent[a] = b
            comps -= 1
            if comps == 1:
                return True
    return comps == 1


def save_graph(g: GeometricGraph, path) -> None:
    """Text format: line 1 `n m`, then m lines `i j` with i < j, sorted."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for i, j in g.edges:
            fh.write(f"{i} {j}\n")


def load_graph(ps: PointSet, path) -> GeometricGraph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("malformed graph header, expected 'n m'")
        n, m = int(header[0]), int(header[1])
        if n != ps.n:
            raise ValueError(f"graph declares n={n} but point set has n={ps.n}")
        edges = np.empty((m, 2), dtype=np.int64)
        for k in range(m):
            parts = fh.readline().split()
            if len(parts) != 2:
                raise ValueError(f"edge line {k} malformed")
            edges[k] = (int(parts[0]), int(parts[1]))
    return GeometricGraph(ps, edges)
