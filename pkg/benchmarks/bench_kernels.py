#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python/scipy fallback.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from quadmaps import _fallback, kernels
from quadmaps.bijection import encode_quadrangulation
from quadmaps.coredec import core
from quadmaps.encoder import sample_treed_bridge
from quadmaps.restriction import restrict
from quadmaps.scales import perimeter_sequence

try:
    from quadmaps import _speedups
except ImportError:
    _speedups = None


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()

    if _speedups is None:
        print("compiled kernels unavailable; build with pip install -e .")
        return

    n = 10**4 if args.quick else 10**5
    rng = np.random.default_rng(1)
    p_n = perimeter_sequence(n, 1.0)
    ltb = sample_treed_bridge(3 * p_n, n, rng)
    enc = encode_quadrangulation(ltb)
    q = enc.quad
    indptr, indices = q.map.adjacency_csr()
    labels = enc.corners.corner_label

    rows = []

    def bench(name, fc, ff):
        tc, _ = timeit(fc)
        tf, _ = timeit(ff)
        rows.append((name, tc, tf, tf / tc))

    bench("orbit_labels (H=%d)" % len(q.map.twin),
          lambda: _speedups.orbit_labels(q.map.next_at_vertex),
          lambda: _fallback.orbit_labels(q.map.next_at_vertex))
    bench("bfs_distances (V=%d)" % q.map.n_vertices,
          lambda: _speedups.bfs_distances(indptr, indices, q.rho),
          lambda: _fallback.bfs_distances(indptr, indices, q.rho))
    bench("successor_links (N=%d)" % len(labels),
          lambda: _speedups.successor_links(labels),
          lambda: _fallback.successor_links(labels))
    bench("decode_forest (m=%d)" % ltb.m,
          lambda: _speedups.decode_forest(ltb.tree_steps, ltb.tree_ptr),
          lambda: _fallback.decode_forest(ltb.tree_steps, ltb.tree_ptr))

    # exact correspondence distortion on a restriction instance
    n2 = 10**3
    p2 = perimeter_sequence(n2, 1.0)
    rng2 = np.random.default_rng(2)
    while True:
        enc2 = encode_quadrangulation(sample_treed_bridge(3 * p2, n2, rng2))
        cr = core(enc2.quad)
        if cr.is_cemetery or cr.perimeter < p2 / 2:
            continue
        out = restrict(cr.core, n2, 0.1, p_n=p2)
        if not out.is_cemetery:
            break
    ai, aj = cr.core.map.adjacency_csr()
    bi, bj = out.restriction.map.adjacency_csr()
    xs = np.concatenate([out.rest_q_vertex, out.comp_q_vertex]).astype(np.int64)
    ys = np.concatenate([
        np.arange(out.restriction.map.n_vertices, dtype=np.int64),
        np.full(len(out.comp_q_vertex), out.restriction.rho, dtype=np.int64),
    ])
    order = np.lexsort((ys, xs))
    xs, ys = xs[order], ys[order]
    bench("metric_discrepancy (V=%d, pairs=%d)" % (cr.core.map.n_vertices, len(xs)),
          lambda: _speedups.metric_discrepancy(ai, aj, bi, bj, xs, ys),
          lambda: _fallback.metric_discrepancy(ai, aj, bi, bj, xs, ys))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel'.ljust(width)}  compiled    fallback    speedup")
    for name, tc, tf, sp in rows:
        print(f"{name.ljust(width)}  {tc * 1e3:9.2f}ms {tf * 1e3:9.2f}ms  {sp:6.1f}x")


if __name__ == "__main__":
    main()
