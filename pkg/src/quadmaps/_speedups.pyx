# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot inner loops.

The pure-Python twin lives in ``_fallback``; both expose the same
functions with identical results (tested), and ``kernels`` picks one at
import time.  Everything works on flat int64 arrays so the two
implementations stay trivially interchangeable.
"""

import numpy as np


def orbit_labels(long[::1] perm):
    """Label the orbits of a permutation in first-encounter order.

    Returns (labels, orbit_count).
    """
    cdef Py_ssize_t n = perm.shape[0]
    labels_arr = np.full(n, -1, dtype=np.int64)
    cdef long[::1] labels = labels_arr
    cdef Py_ssize_t i, j
    cdef long c = 0
    for i in range(n):
        if labels[i] < 0:
            j = i
            while labels[j] < 0:
                labels[j] = c
                j = perm[j]
            c += 1
    return labels_arr, int(c)


def bfs_distances(long[::1] indptr, long[::1] indices, long source):
    """Single-source BFS distances over a CSR adjacency structure."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist_arr = np.full(n, -1, dtype=np.int64)
    cdef long[::1] dist = dist_arr
    queue_arr = np.empty(n, dtype=np.int64)
    cdef long[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0
    cdef long u, v, d
    cdef Py_ssize_t k
    dist[source] = 0
    queue[tail] = source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        d = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] < 0:
                dist[v] = d
                queue[tail] = v
                tail += 1
    return dist_arr


def successor_links(long[::1] labels):
    """Match each corner to its successor: the next corner (cyclically)
    whose label is one less.  Returns -1 where no such corner exists
    (minimal-label corners, which link to the added vertex)."""
    cdef Py_ssize_t n = labels.shape[0]
    suc_arr = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return suc_arr
    cdef long[::1] suc = suc_arr
    cdef long lo = labels[0], hi = labels[0]
    cdef Py_ssize_t i
    for i in range(n):
        if labels[i] < lo:
            lo = labels[i]
        if labels[i] > hi:
            hi = labels[i]
    cdef Py_ssize_t width = hi - lo + 2
    head_arr = np.full(width, -1, dtype=np.int64)
    nxt_arr = np.empty(n, dtype=np.int64)
    cdef long[::1] head = head_arr
    cdef long[::1] nxt = nxt_arr
    cdef Py_ssize_t k, idx
    cdef long lv, j
    for k in range(2 * n):
        idx = k if k < n else k - n
        lv = labels[idx] - lo
        j = head[lv + 1]
        while j != -1:
            suc[j] = idx
            j = nxt[j]
        head[lv + 1] = -1
        if k < n:
            nxt[idx] = head[lv]
            head[lv] = idx
    return suc_arr


def decode_forest(signed char[::1] steps, long[::1] tree_ptr):
    """Decode concatenated tree contour steps (+1 descend / -1 ascend).

    ``tree_ptr`` holds the start offset of each tree's step block plus a
    final sentinel.  Vertices are numbered in preorder, trees in order.
    Returns (parent, corner_vertex): parent is -1 at tree roots and the
    corner sequence visits each tree's 2*edges+1 contour corners.
    """
    cdef Py_ssize_t f = tree_ptr.shape[0] - 1
    cdef Py_ssize_t total_steps = steps.shape[0]
    cdef Py_ssize_t nv = total_steps // 2 + f
    cdef Py_ssize_t nc = total_steps + f
    parent_arr = np.full(nv, -1, dtype=np.int64)
    corner_arr = np.empty(nc, dtype=np.int64)
    cdef long[::1] parent = parent_arr
    cdef long[::1] corner = corner_arr
    cdef Py_ssize_t t, s
    cdef long cur, nxtv, cpos = 0
    cdef long base = 0
    for t in range(f):
        cur = base
        nxtv = base + 1
        corner[cpos] = cur
        cpos += 1
        for s in range(tree_ptr[t], tree_ptr[t + 1]):
            if steps[s] > 0:
                parent[nxtv] = cur
                cur = nxtv
                nxtv += 1
            else:
                cur = parent[cur]
            corner[cpos] = cur
            cpos += 1
        base = nxtv
    return parent_arr, corner_arr


def propagate_labels(long[::1] parent, long[::1] increment, long[::1] labels):
    """Fill vertex labels: roots are pre-filled, children add their edge
    increment to the parent label (parents precede children)."""
    cdef Py_ssize_t n = parent.shape[0]
    cdef Py_ssize_t i
    for i in range(n):
        if parent[i] >= 0:
            labels[i] = labels[parent[i]] + increment[i]


def metric_discrepancy(long[::1] a_indptr, long[::1] a_indices,
                       long[::1] b_indptr, long[::1] b_indices,
                       long[::1] xs, long[::1] ys):
    """Exact sup over pair-pairs of |d_A(x_i,x_j) - d_B(y_i,y_j)|.

    (xs[i], ys[i]) enumerate a correspondence between the vertex sets of
    two connected graphs given in CSR form.  Consecutive repeats in xs/ys
    reuse the previous BFS row, so callers should sort pairs accordingly.
    """
    cdef Py_ssize_t na = a_indptr.shape[0] - 1
    cdef Py_ssize_t nb = b_indptr.shape[0] - 1
    cdef Py_ssize_t K = xs.shape[0]
    da_arr = np.empty(na, dtype=np.int64)
    db_arr = np.empty(nb, dtype=np.int64)
    qa_arr = np.empty(na if na > nb else nb, dtype=np.int64)
    cdef long[::1] da = da_arr
    cdef long[::1] db = db_arr
    cdef long[::1] queue = qa_arr
    cdef long last_x = -1, last_y = -1
    cdef long best = 0, d
    cdef Py_ssize_t i, j, k, head, tail
    cdef long u, v, dd
    for i in range(K):
        if xs[i] != last_x:
            last_x = xs[i]
            for j in range(na):
                da[j] = -1
            da[last_x] = 0
            queue[0] = last_x
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                dd = da[u] + 1
                for k in range(a_indptr[u], a_indptr[u + 1]):
                    v = a_indices[k]
                    if da[v] < 0:
                        da[v] = dd
                        queue[tail] = v
                        tail += 1
        if ys[i] != last_y:
            last_y = ys[i]
            for j in range(nb):
                db[j] = -1
            db[last_y] = 0
            queue[0] = last_y
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                dd = db[u] + 1
                for k in range(b_indptr[u], b_indptr[u + 1]):
                    v = b_indices[k]
                    if db[v] < 0:
                        db[v] = dd
                        queue[tail] = v
                        tail += 1
        for j in range(K):
            d = da[xs[j]] - db[ys[j]]
            if d < 0:
                d = -d
            if d > best:
                best = d
    return int(best)
