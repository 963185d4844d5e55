#!/usr/bin/env python3
"""Benchmark the numba-jitted kernels against their pure-numpy fallbacks.

Both backends compute bitwise-identical results; this script measures the
speed gap so the fallback's cost is a known quantity.  Run as

    python3 benchmarks/bench_kernels.py [--sizes 1000 5000 20000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from interfsim import _kernels
from interfsim.geometry import gen_uniform
from interfsim.graphs import build_mst
from interfsim.interference import ball_set


def _time(fn, *args, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _grid_args(ps, bs):
    """The CSR grid layout used by interference_report_accelerated."""
    from interfsim.interference import recommended_cell_side

    coords = ps.coords
    n, d = coords.shape
    s = recommended_cell_side(ps, bs)
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
    starts = np.zeros(int(mdims.prod()) + 1, dtype=np.int64)
    np.add.at(starts, linear + 1, 1)
    starts = np.cumsum(starts)
    return (coords, np.nextafter(np.sqrt(bs.radii2), np.inf), bs.radii2,
            bs.active, float(s), np.ascontiguousarray(origin),
            np.ascontiguousarray(mdims), np.ascontiguousarray(strides),
            np.ascontiguousarray(order), np.ascontiguousarray(starts))


def bench(n, repeat):
    ps = gen_uniform(n, 2, seed=0)
    g = build_mst(ps)
    bs = ball_set(ps, g)

    rows = []

    jit_t, jit_out = _time(_kernels.prim_total_length, ps.coords, repeat=repeat)
    ref_t, ref_out = _time(_kernels.prim_total_length_numpy, ps.coords, repeat=repeat)
    assert abs(jit_out - ref_out) <= 1e-9 * ref_out
    rows.append(("prim_total_length", jit_t, ref_t))

    jit_t, jit_out = _time(_kernels.brute_counts, ps.coords, bs.radii2,
                           bs.active, repeat=repeat)
    ref_t, ref_out = _time(_kernels.brute_counts_numpy, ps.coords, bs.radii2,
                           bs.active, repeat=repeat)
    assert np.array_equal(jit_out, ref_out)
    rows.append(("brute_counts", jit_t, ref_t))

    args = _grid_args(ps, bs)
    jit_t, jit_out = _time(_kernels.grid_counts, *args, repeat=repeat)
    ref_t, ref_out = _time(_kernels.grid_counts_numpy, *args, repeat=repeat)
    assert np.array_equal(jit_out, ref_out)
    rows.append(("grid_counts", jit_t, ref_t))

    iu, ju = np.triu_indices(min(n, 2000), k=1)
    coords = ps.coords[:min(n, 2000)]
    lengths = np.linalg.norm(coords[iu] - coords[ju], axis=1)
    order = np.lexsort((ju, iu, lengths))
    ei = np.ascontiguousarray(iu[order].astype(np.int64))
    ej = np.ascontiguousarray(ju[order].astype(np.int64))
    jit_t, jit_out = _time(_kernels.kruskal_select, ei, ej, coords.shape[0],
                           repeat=repeat)
    ref_t, ref_out = _time(_kernels.kruskal_select_numpy, ei, ej,
                           coords.shape[0], repeat=repeat)
    assert np.array_equal(jit_out, ref_out)
    rows.append(("kruskal_select", jit_t, ref_t))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 5000, 20000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backend = "numba" if _kernels.HAVE_NUMBA else "numpy (numba unavailable/disabled)"
    print(f"active backend: {backend}")
    if not _kernels.HAVE_NUMBA:
        print("note: both columns run the numpy implementation")
    header = f"{'kernel':<20} {'n':>7} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        for name, jit_t, ref_t in bench(n, args.repeat):
            speed = ref_t / jit_t if jit_t > 0 else float("inf")
            print(f"{name:<20} {n:>7} {jit_t * 1e3:>11.2f} "
                  f"{ref_t * 1e3:>11.2f} {speed:>7.1f}x")


if __name__ == "__main__":
    main()
