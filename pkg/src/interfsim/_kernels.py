"""Hot numeric kernels with numba-jitted and pure-numpy variants.

The jitted variants are used when numba imports successfully and the
environment variable INTERFSIM_NO_NUMBA is unset/false.  Both variants
compute bitwise-identical integer results (same membership predicates,
same accumulation order for the tiny inner dimension d), so the backend
choice never changes program output.
"""

import os

import numpy as np

_DISABLED = os.environ.get("INTERFSIM_NO_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on",
)

try:
    if _DISABLED:
        raise ImportError("numba disabled via INTERFSIM_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# pure-numpy implementations


def prim_total_length_numpy(coords):
    """Total Euclidean length of the MST, dense Prim in O(n^2)."""
    n = coords.shape[0]
    if n < 2:
        return 0.0
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    best[0] = 0.0
    total = 0.0
    for _ in range(n):
        masked = np.where(in_tree, np.inf, best)
        u = int(np.argmin(masked))
        total += np.sqrt(masked[u])
        in_tree[u] = True
        d2 = ((coords - coords[u]) ** 2).sum(axis=1)
        best = np.minimum(best, d2)
    return total


def brute_counts_numpy(coords, radii2, active, chunk=2048):
    """Per-vertex ball-membership counts by O(n^2) scan.

    counts[j] = number of active balls i with |x_i - x_j|^2 <= radii2[i].
    """
    n = coords.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    for s in range(0, n, chunk):
        e = min(s + chunk, n)
        diff = coords[s:e, None, :] - coords[None, :, :]
        d2 = (diff * diff).sum(axis=-1)
        counts[s:e] = ((d2 <= radii2[None, :]) & active[None, :]).sum(axis=1)
    return counts


def grid_counts_numpy(coords, radii, radii2, active, cell_side, origin,
                      mdims, strides, order, starts):
    """Grid-accelerated variant of brute_counts_numpy (exact, not approximate)."""
    n, d = coords.shape
    counts = np.zeros(n, dtype=np.int64)
    lo = np.empty(d, dtype=np.int64)
    hi = np.empty(d, dtype=np.int64)
    for i in range(n):
        if not active[i]:
            continue
        r = radii[i]
        for a in range(d):
            lo[a] = max(0, int(np.floor((coords[i, a] - r - origin[a]) / cell_side)))
            hi[a] = min(mdims[a] - 1, int(np.floor((coords[i, a] + r - origin[a]) / cell_side)))
        cand = []
        cur = lo.copy()
        while True:
            lin = int((cur * strides).sum())
            s0, s1 = starts[lin], starts[lin + 1]
            if s1 > s0:
                cand.append(order[s0:s1])
            a = d - 1
            while a >= 0:
                cur[a] += 1
                if cur[a] <= hi[a]:
                    break
                cur[a] = lo[a]
                a -= 1
            if a < 0:
                break
        if not cand:
            continue
        js = np.concatenate(cand)
        diff = coords[js] - coords[i]
        d2 = (diff * diff).sum(axis=1)
        counts[js[d2 <= radii2[i]]] += 1
    return counts


def kruskal_select_numpy(ei, ej, n):
    """Union-find pass over pre-sorted edges; returns the accepted-edge mask."""
    parent = np.arange(n, dtype=np.int64)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    m = ei.shape[0]
    keep = np.zeros(m, dtype=bool)
    taken = 0
    for k in range(m):
        a, b = find(ei[k]), find(ej[k])
        if a != b:
            parent[a] = b
            keep[k] = True
            taken += 1
            if taken == n - 1:
                break
    return keep


# ---------------------------------------------------------------------------
# numba-jitted implementations (same contracts)

if HAVE_NUMBA:

    @njit(cache=True)
    def _prim_total_length(coords):
        n = coords.shape[0]
        d = coords.shape[1]
        if n < 2:
            return 0.0
        in_tree = np.zeros(n, dtype=np.bool_)
        best = np.full(n, np.inf)
        best[0] = 0.0
        total = 0.0
        for _ in range(n):
            u = -1
            bu = np.inf
            for v in range(n):
                if not in_tree[v] and best[v] < bu:
                    bu = best[v]
                    u = v
            total += np.sqrt(bu)
            in_tree[u] = True
            for v in range(n):
                if not in_tree[v]:
                    s = 0.0
                    for a in range(d):
                        diff = coords[v, a] - coords[u, a]
                        s += diff * diff
                    if s < best[v]:
                        best[v] = s
        return total

    @njit(cache=True)
    def _brute_counts(coords, radii2, active):
        n = coords.shape[0]
        d = coords.shape[1]
        counts = np.zeros(n, dtype=np.int64)
        for i in range(n):
            if not active[i]:
                continue
            r2 = radii2[i]
            for j in range(n):
                s = 0.0
                for a in range(d):
                    diff = coords[j, a] - coords[i, a]
                    s += diff * diff
                if s <= r2:
                    counts[j] += 1
        return counts

    @njit(cache=True)
    def _grid_counts(coords, radii, radii2, active, cell_side, origin,
                     mdims, strides, order, starts):
        n = coords.shape[0]
        d = coords.shape[1]
        counts = np.zeros(n, dtype=np.int64)
        lo = np.empty(d, dtype=np.int64)
        hi = np.empty(d, dtype=np.int64)
        cur = np.empty(d, dtype=np.int64)
        for i in range(n):
            if not active[i]:
                continue
            r = radii[i]
            r2 = radii2[i]
            for a in range(d):
                lv = int(np.floor((coords[i, a] - r - origin[a]) / cell_side))
                hv = int(np.floor((coords[i, a] + r - origin[a]) / cell_side))
                lo[a] = lv if lv > 0 else 0
                hi[a] = hv if hv < mdims[a] - 1 else mdims[a] - 1
                cur[a] = lo[a]
            while True:
                lin = 0
                for a in range(d):
                    lin += cur[a] * strides[a]
                for ptr in range(starts[lin], starts[lin + 1]):
                    j = order[ptr]
                    s = 0.0
                    for a in range(d):
                        diff = coords[j, a] - coords[i, a]
                        s += diff * diff
                    if s <= r2:
                        counts[j] += 1
                a = d - 1
                while a >= 0:
                    cur[a] += 1
                    if cur[a] <= hi[a]:
                        break
                    cur[a] = lo[a]
                    a -= 1
                if a < 0:
                    break
        return counts

    @njit(cache=True)
    def _kruskal_select(ei, ej, n):
        parent = np.arange(n, dtype=np.int64)
        m = ei.shape[0]
        keep = np.zeros(m, dtype=np.bool_)
        taken = 0
        for k in range(m):
            a = ei[k]
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            b = ej[k]
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            if a != b:
                parent[a] = b
                keep[k] = True
                taken += 1
                if taken == n - 1:
                    break
        return keep

    prim_total_length = _prim_total_length
    brute_counts = _brute_counts
    grid_counts = _grid_counts
    kruskal_select = _kruskal_select
else:
    prim_total_length = prim_total_length_numpy
    brute_counts = brute_counts_numpy
    grid_counts = grid_counts_numpy
    kruskal_select = kruskal_select_numpy
