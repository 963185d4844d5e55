"""Point sets, deterministic generators, and a uniform-grid spatial index."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PointSet",
    "GridIndex",
    "ZenoConfig",
    "gen_uniform",
    "gen_halving_chain",
    "gen_zeno",
    "zeno_scale",
    "build_grid_index",
    "save_points",
    "load_points",
]


@dataclass(frozen=True)
class PointSet:
    """An ordered, index-addressed set of n points in R^d.

    Coordinates are 64-bit floats; the index order is the identity used by
    every graph built over this set.
    """

    coords: np.ndarray  # shape (n, d), float64

    def __post_init__(self):
        coords = np.ascontiguousarray(np.asarray(self.coords, dtype=np.float64))
        if coords.ndim != 2:
            raise ValueError("coords must be a 2-D array of shape (n, d)")
        if coords.shape[0] < 1 or coords.shape[1] < 1:
            raise ValueError("need n >= 1 points and dimension d >= 1")
        if not np.all(np.isfinite(coords)):
            raise ValueError("coordinates must be finite")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class GridIndex:
    """Uniform-grid spatial hash over a PointSet.

    Bucket of point p is floor(p / cell_side) componentwise.
    """

    point_set: PointSet
    cell_side: float
    buckets: dict = field(repr=False)

    def cell_of(self, q) -> tuple:
        q = np.asarray(q, dtype=np.float64)
        return tuple(int(v) for v in np.floor(q / self.cell_side))

    def range_query(self, q, radius: float) -> list:
        """All point indices within (closed) distance `radius` of q.

        Inspects only buckets intersecting the query ball; the result is
        exactly the brute-force answer set, in ascending index order.
        """
        q = np.asarray(q, dtype=np.float64)
        lo = np.floor((q - radius) / self.cell_side).astype(np.int64)
        hi = np.floor((q + radius) / self.cell_side).astype(np.int64)
        coords = self.point_set.coords
        out = []
        for cell in _iter_cells(lo, hi):
            for idx in self.buckets.get(cell, ()):
                diff = coords[idx] - q
                if float(diff @ diff) <= radius * radius:
                    out.append(idx)
        out.sort()
        return out


def _iter_cells(lo, hi):
    d = len(lo)
    cur = lo.copy()
    while True:
        yield tuple(int(v) for v in cur)
        a = d - 1
        while a >= 0:
            cur[a] += 1
            if cur[a] <= hi[a]:
                break
            cur[a] = lo[a]
            a -= 1
        if a < 0:
            return


@dataclass(frozen=True)
class ZenoConfig:
    """Parameters of a Zeno configuration: k small balls of radius u whose
    centers sit at offsets u*3^i along `axis`, inside an outer ball of
    radius u*3^k.
    """

    k: int
    u: float | None = None
    center: tuple | None = None
    axis: tuple | None = None

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("Zeno configuration needs k >= 2")
        if self.u is not None and self.u <= 0:
            raise ValueError("ball radius u must be positive")

    def outer_radius(self, u: float) -> float:
        return u * 3.0 ** self.k


def zeno_scale(n: int, k: int) -> float:
    """Ball radius making the outer ball have area 1/n (d=2 embedding scale)."""
    return 1.0 / (math.sqrt(math.pi * n) * 3.0 ** k)


def gen_uniform(n: int, d: int, seed: int) -> PointSet:
    """n points drawn i.i.d. uniformly from [0,1)^d from a seeded PCG64 stream.

    Identical (seed, n, d) yields bit-identical output.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng(seed)
    return PointSet(rng.random((n, d)))


def gen_halving_chain(n: int, ratio: float = 0.5, g0: float = 0.5,
                      d: int = 1) -> PointSet:
    """Collinear chain whose consecutive gaps shrink geometrically.

    Gap i is g0 * ratio**(i-1); ratio must be in (0, 1/2] so the gaps at
    least halve.  With the defaults the chain fits in [0, 1).
    """
    if n < 2:
        raise ValueError("chain needs n >= 2")
    if not (0.0 < ratio <= 0.5):
        raise ValueError("ratio must lie in (0, 1/2]")
    if d < 1:
        raise ValueError("d must be >= 1")
    gaps = g0 * ratio ** np.arange(n - 1, dtype=np.float64)
    xs = np.concatenate(([0.0], np.cumsum(gaps)))
    coords = np.zeros((n, d))
    coords[:, 0] = xs
    return PointSet(coords)


def gen_zeno(cfg: ZenoConfig, d: int = 2, seed: int | None = None,
             check_embedding: bool = True) -> PointSet:
    """One point per Zeno ball: point 0 at the configuration center, point i
    at offset u*3^i along the axis (i >= 1).

    Canonical placement is at the ball centers; with `seed` given, each point
    is sampled uniformly from its ball instead.  Both satisfy the lemmas, the
    canonical form keeps tests deterministic.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    k = cfg.k
    u = cfg.u if cfg.u is not None else 0.25 * 3.0 ** (-k)
    center = np.full(d, 0.5) if cfg.center is None else np.asarray(cfg.center, dtype=np.float64)
    if center.shape != (d,):
        raise ValueError("center has wrong dimension")
    if cfg.axis is None:
        axis = np.zeros(d)
        axis[0] = 1.0
    else:
        axis = np.asarray(cfg.axis, dtype=np.float64)
        norm = float(np.linalg.norm(axis))
        if norm == 0.0:
            raise ValueError("axis must be nonzero")
        axis = axis / norm
    r = cfg.outer_radius(u)
    if check_embedding and (np.any(center - r < 0.0) or np.any(center + r > 1.0)):
        raise ValueError("outer ball of radius u*3^k exits the unit cube")

    offsets = np.concatenate(([0.0], u * 3.0 ** np.arange(1, k)))
    coords = center[None, :] + offsets[:, None] * axis[None, :]
    if seed is not None:
        rng = np.random.default_rng(seed)
        for i in range(k):
            while True:  # rejection sample inside the radius-u ball
                delta = rng.uniform(-u, u, size=d)
                if float(delta @ delta) <= u * u:
                    coords[i] += delta
                    break
    return PointSet(coords)


def build_grid_index(ps: PointSet, cell_side: float) -> GridIndex:
    """Assign every point to the bucket floor(p / cell_side)."""
    if cell_side <= 0:
        raise ValueError("cell_side must be positive")
    cells = np.floor(ps.coords / cell_side).astype(np.int64)
    buckets: dict = {}
    for idx in range(ps.n):
        buckets.setdefault(tuple(int(v) for v in cells[idx]), []).append(idx)
    return GridIndex(ps, float(cell_side), buckets)


def save_points(ps: PointSet, path) -> None:
    """Text format: line 1 is `d n`, then n lines of d coordinates printed
    with 17 significant digits (round-trip exact for float64)."""
    with open(path, "w") as fh:
        fh.write(f"{ps.dim} {ps.n}\n")
        for row in ps.coords:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def load_points(path) -> PointSet:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("malformed point-set header, expected 'd n'")
        d, n = int(header[0]), int(header[1])
        if d < 1 or n < 1:
            raise ValueError("point-set header must have d >= 1 and n >= 1")
        coords = np.empty((n, d))
        for i in range(n):
            parts = fh.readline().split()
            if len(parts) != d:
                raise ValueError(f"point line {i} has {len(parts)} coordinates, expected {d}")
            coords[i] = [float(p) for p in parts]
        if fh.readline().strip():
            raise ValueError("trailing data after declared point count")
    return PointSet(coords)
