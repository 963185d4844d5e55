import itertools

import numpy as np
import pytest


def oracle_interference(coords, edges):
    """Test-local interference oracle: direct translation of the definition,
    independent of the package kernels."""
    coords = np.asarray(coords, dtype=np.float64)
    n = coords.shape[0]

    def d2(i, j):
        return float(((coords[i] - coords[j]) ** 2).sum())

    radii2 = {}
    for i, j in edges:
        radii2[i] = max(radii2.get(i, 0.0), d2(i, j))
        radii2[j] = max(radii2.get(j, 0.0), d2(i, j))
    counts = np.zeros(n, dtype=int)
    for i, r2 in radii2.items():
        for j in range(n):
            if d2(i, j) <= r2:
                counts[j] += 1
    return counts


def oracle_range_query(coords, q, radius):
    q = np.asarray(q, dtype=np.float64)
    out = []
    for idx, p in enumerate(coords):
        if float(np.linalg.norm(p - q)) <= radius:
            out.append(idx)
    return out


def prufer_decode(seq, n):
    """Spanning tree of K_n from a Prufer sequence (list of edges)."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    leaf_heap = sorted(v for v in range(n) if degree[v] == 1)
    import heapq

    heapq.heapify(leaf_heap)
    for v in seq:
        leaf = heapq.heappop(leaf_heap)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaf_heap, v)
    a, b = heapq.heappop(leaf_heap), heapq.heappop(leaf_heap)
    edges.append((min(a, b), max(a, b)))
    return edges


def exhaustive_mst_length(coords):
    """Minimum total length over all spanning trees of K_n, enumerated via
    Prufer sequences.  Only feasible for n <= 8."""
    coords = np.asarray(coords, dtype=np.float64)
    n = coords.shape[0]
    if n == 2:
        return float(np.linalg.norm(coords[0] - coords[1]))
    dist = np.sqrt(((coords[:, None, :] - coords[None, :, :]) ** 2).sum(-1))
    best = np.inf
    for seq in itertools.product(range(n), repeat=n - 2):
        total = sum(dist[i, j] for i, j in prufer_decode(seq, n))
        if total < best:
            best = total
    return float(best)


@pytest.fixture(scope="session")
def preset_result():
    """The paper-thm1 preset run, shared by the scaling acceptance tests.
    Returns (result, elapsed_seconds)."""
    import time

    from interfsim.experiments import PRESETS, run_scaling

    t0 = time.perf_counter()
    res = run_scaling(PRESETS["paper-thm1"], workers=4)
    return res, time.perf_counter() - t0


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance-criteria verdict table after the run."""
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS):
            terminalreporter.write_line(line)
