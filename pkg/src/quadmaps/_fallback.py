"""Pure-Python/scipy implementations of the compiled kernels.

Same signatures and results as ``_speedups``; used when the extension is
not built or when ``QUADMAPS_PURE_PYTHON=1``.  The scipy csgraph routines
do the heavy lifting where possible, with plain loops for the inherently
sequential sweeps.
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph


def _csr(indptr, indices):
    n = len(indptr) - 1
    data = np.ones(len(indices), dtype=np.int8)
    return sp.csr_matrix((data, indices, indptr), shape=(n, n))


def orbit_labels(perm):
    """Label the orbits of a permutation in first-encounter order."""
    n = len(perm)
    if n == 0:
        return np.empty(0, dtype=np.int64), 0
    graph = sp.csr_matrix(
        (np.ones(n, dtype=np.int8), perm, np.arange(n + 1)), shape=(n, n)
    )
    count, raw = csgraph.connected_components(graph, directed=True, connection="weak")
    # relabel so orbit ids follow first-encounter order, matching _speedups
    first = np.full(count, n, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(n))
    rank = np.empty(count, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(count)
    return rank[raw].astype(np.int64), int(count)


def bfs_distances(indptr, indices, source):
    """Single-source BFS distances over a CSR adjacency structure."""
    dist = csgraph.shortest_path(
        _csr(indptr, indices), method="D", unweighted=True, indices=int(source)
    )
    out = np.where(np.isinf(dist), -1, dist).astype(np.int64)
    return out


def successor_links(labels):
    """Match each corner to its cyclically-next corner with label one less."""
    n = len(labels)
    suc = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return suc
    lab = [int(x) for x in labels]
    lo = min(lab)
    pending = {}
    for k in range(2 * n):
        idx = k if k < n else k - n
        lv = lab[idx]
        stack = pending.pop(lv + 1, None)
        if stack:
            for j in stack:
                suc[j] = idx
        if k < n:
            pending.setdefault(lv, []).append(idx)
    del lo
    return suc


def decode_forest(steps, tree_ptr):
    """Decode concatenated tree contour steps; see _speedups.decode_forest."""
    f = len(tree_ptr) - 1
    total = len(steps)
    nv = total // 2 + f
    parent = np.full(nv, -1, dtype=np.int64)
    corner = np.empty(total + f, dtype=np.int64)
    st = [int(x) for x in steps]
    cpos = 0
    base = 0
    for t in range(f):
        cur = base
        nxtv = base + 1
        corner[cpos] = cur
        cpos += 1
        for s in range(int(tree_ptr[t]), int(tree_ptr[t + 1])):
            if st[s] > 0:
                parent[nxtv] = cur
                cur = nxtv
                nxtv += 1
            else:
                cur = int(parent[cur])
            corner[cpos] = cur
            cpos += 1
        base = nxtv
    return parent, corner


def propagate_labels(parent, increment, labels):
    """Fill vertex labels from pre-filled roots down the trees."""
    par = parent.tolist()
    inc = increment.tolist()
    lab = labels.tolist()
    for i, p in enumerate(par):
        if p >= 0:
            lab[i] = lab[p] + inc[i]
    labels[:] = lab


def _all_distances(indptr, indices, dtype=np.int32):
    """Dense all-pairs BFS distance matrix, computed in row blocks."""
    g = _csr(indptr, indices)
    n = g.shape[0]
    out = np.empty((n, n), dtype=dtype)
    block = max(1, int(2**22 // max(n, 1)))
    for start in range(0, n, block):
        idx = np.arange(start, min(start + block, n))
        rows = csgraph.shortest_path(g, method="D", unweighted=True, indices=idx)
        out[start : start + len(idx)] = rows.astype(dtype)
    return out


def metric_discrepancy(a_indptr, a_indices, b_indptr, b_indices, xs, ys):
    """Exact sup over pair-pairs of |d_A(x_i,x_j) - d_B(y_i,y_j)|."""
    da = _all_distances(a_indptr, a_indices)
    db = _all_distances(b_indptr, b_indices)
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    best = 0
    chunk = max(1, int(2**22 // max(len(xs), 1)))
    for start in range(0, len(xs), chunk):
        xa = xs[start : start + chunk]
        ya = ys[start : start + chunk]
        diff = da[np.ix_(xa, xs)].astype(np.int64) - db[np.ix_(ya, ys)]
        best = max(best, int(np.abs(diff).max()))
    return best
