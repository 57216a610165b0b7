"""Brute-force ground truth at tiny sizes.

The encoding objects with p/2 trees and m edges are finite and easy to
enumerate (bridges lexicographically, forests by shape recursion,
labelings by base-3 counters); pushing each through the construction and
deduplicating canonical codes gives exact universes of boundary
quadrangulations, against which the closed counts, the samplers and the
restriction law are tested.  Chi-square uniformity and plug-in total
variation estimation live here too.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.stats

from . import kernels
from .bijection import encode_quadrangulation
from .encoder import DiscreteBridge, LabeledTreedBridge, count_plane_forests
from .errors import EmptySample, UniverseTooLarge, UnknownCode

_I64 = np.int64

UNIVERSE_FORMAT_VERSION = 1


def _all_tree_steps(m: int):
    """Contour step sequences of all plane trees with m edges."""
    if m == 0:
        return [()]
    out = []

    def rec(seq, level, ups):
        if len(seq) == 2 * m:
            if level == 0:
                out.append(tuple(seq))
            return
        if ups < m:
            rec(seq + [1], level + 1, ups + 1)
        if level > 0:
            rec(seq + [-1], level - 1, ups)

    rec([], 0, 0)
    return out


def _all_forests(f: int, m: int):
    if f == 1:
        return [(t,) for t in _all_tree_steps(m)]
    out = []
    for m1 in range(m + 1):
        for t in _all_tree_steps(m1):
            for rest in _all_forests(f - 1, m - m1):
                out.append((t,) + rest)
    return out


def _all_bridges(p: int):
    """Bridge label arrays, downstep positions in lexicographic order."""
    f = p // 2
    for downpos in itertools.combinations(range(p), f):
        steps = np.ones(p, dtype=_I64)
        steps[list(downpos)] = -1
        labels = np.zeros(p + 1, dtype=_I64)
        np.cumsum(steps, out=labels[1:])
        yield labels


def make_ltb(bridge_labels, forest_steps, labeling=None) -> LabeledTreedBridge:
    """Assemble a treed bridge from explicit parts (used by tests too)."""
    bridge = DiscreteBridge(np.asarray(bridge_labels, dtype=_I64))
    steps = []
    tree_ptr = [0]
    for t in forest_steps:
        steps.extend(t)
        tree_ptr.append(len(steps))
    ts = np.array(steps, dtype=np.int8)
    tp = np.array(tree_ptr, dtype=_I64)
    parent, _ = kernels.decode_forest(ts, tp)
    f = len(forest_steps)
    vertex_ptr = tp // 2 + np.arange(f + 1)
    roots = np.flatnonzero(parent < 0)
    labels = np.zeros(len(parent), dtype=_I64)
    labels[roots] = bridge.labels[bridge.downsteps()]
    inc = np.zeros(len(parent), dtype=_I64)
    if labeling is not None:
        nonroot = np.flatnonzero(parent >= 0)
        inc[nonroot] = np.asarray(labeling, dtype=_I64)
    kernels.propagate_labels(parent, inc, labels)
    return LabeledTreedBridge(bridge, ts, tp, parent, labels, vertex_ptr)


def iter_treed_bridges(p: int, m: int):
    """Every labeled treed bridge with p/2 trees and m edges, fixed order."""
    forests = _all_forests(p // 2, m)
    for bridge_labels in _all_bridges(p):
        for forest in forests:
            for labeling in itertools.product((-1, 0, 1), repeat=m):
                yield make_ltb(bridge_labels, forest, labeling)


def universe_size(p: int, m: int) -> int:
    return math.comb(p, p // 2) * count_plane_forests(p // 2, m) * 3**m


@dataclass
class UniverseTable:
    """Canonical codes with pointed multiplicities for one (n, p) class."""

    n: int
    p: int
    simple_only: bool
    codes: list  # sorted canonical codes (rooted, unpointed)
    multiplicities: list  # pointed count per code

    @property
    def total_pointed(self) -> int:
        return sum(self.multiplicities)

    def index(self) -> dict:
        return {c: i for i, c in enumerate(self.codes)}


def enumerate_boundary_quads(n: int, p: int, simple_only: bool = False,
                             max_universe: int = 10**7,
                             cache_dir=None) -> UniverseTable:
    """Exhaustive table of rooted boundary quadrangulations at (n, p).

    Every treed bridge is built and deduplicated; the pointed codes are all
    distinct (checked), so the pointed multiplicity of a rooted code counts
    its markable vertices.
    """
    size = universe_size(p, n)
    if size > max_universe:
        raise UniverseTooLarge(f"universe size {size} exceeds {max_universe}")
    cached = _cache_load(n, p, simple_only, cache_dir)
    if cached is not None:
        return cached

    pointed_codes = set()
    rooted: dict = {}
    for ltb in iter_treed_bridges(p, n):
        enc = encode_quadrangulation(ltb)
        q = enc.quad
        pc = q.canonical_code()
        assert pc not in pointed_codes, "bijection produced a duplicate pointed map"
        pointed_codes.add(pc)
        if simple_only and not q.simple:
            continue
        rc = q.map.canonical_code()
        rooted[rc] = rooted.get(rc, 0) + 1
    assert len(pointed_codes) == size
    codes = sorted(rooted)
    table = UniverseTable(n, p, simple_only, codes, [rooted[c] for c in codes])
    _cache_store(table, cache_dir)
    return table


def _cache_path(n, p, simple_only, cache_dir) -> Path | None:
    if cache_dir is None:
        cache_dir = os.environ.get("QUADMAPS_CACHE")
    if cache_dir is None:
        return None
    tag = "simple" if simple_only else "all"
    return Path(cache_dir) / f"universe_v{UNIVERSE_FORMAT_VERSION}_n{n}_p{p}_{tag}.txt"


def _cache_load(n, p, simple_only, cache_dir):
    path = _cache_path(n, p, simple_only, cache_dir)
    if path is None or not path.exists():
        return None
    lines = path.read_text().strip().split("\n")
    head = lines[0].split()
    if head[0] != "UNIVERSE" or int(head[1]) != UNIVERSE_FORMAT_VERSION:
        return None
    codes, mults = [], []
    for line in lines[1:]:
        c, m = line.split()
        codes.append(bytes.fromhex(c))
        mults.append(int(m))
    return UniverseTable(n, p, simple_only, codes, mults)


def _cache_store(table: UniverseTable, cache_dir):
    path = _cache_path(table.n, table.p, table.simple_only, cache_dir)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        f"UNIVERSE {UNIVERSE_FORMAT_VERSION} {table.n} {table.p} "
        f"{int(table.simple_only)} {len(table.codes)}"
    ]
    lines += [f"{c.hex()} {m}" for c, m in zip(table.codes, table.multiplicities)]
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# statistics

def chi_square_uniformity(samples, universe: UniverseTable,
                          weighted: bool = False):
    """Pearson chi-square of observed codes against the uniform (or
    multiplicity-weighted) law on the universe.  Returns (statistic, p)."""
    idx = universe.index()
    counts = np.zeros(len(universe.codes))
    for c in samples:
        if c not in idx:
            raise UnknownCode("sample code not in the universe")
        counts[idx[c]] += 1
    total = counts.sum()
    if weighted:
        w = np.asarray(universe.multiplicities, dtype=float)
        expected = total * w / w.sum()
    else:
        expected = np.full(len(counts), total / len(counts))
    stat = float(((counts - expected) ** 2 / expected).sum())
    pvalue = float(scipy.stats.chi2.sf(stat, df=len(counts) - 1))
    return stat, pvalue


def empirical_tv(samples_a, samples_b, bootstrap: int = 0, rng=None):
    """Plug-in total variation distance between two empirical code
    distributions; optionally a percentile bootstrap CI."""
    if not len(samples_a) or not len(samples_b):
        raise EmptySample("need nonempty samples on both sides")

    def tv(a, b):
        ca, cb = {}, {}
        for x in a:
            ca[x] = ca.get(x, 0) + 1
        for x in b:
            cb[x] = cb.get(x, 0) + 1
        keys = set(ca) | set(cb)
        na, nb = len(a), len(b)
        return 0.5 * sum(abs(ca.get(k, 0) / na - cb.get(k, 0) / nb) for k in keys)

    point = tv(samples_a, samples_b)
    if not bootstrap:
        return point, None
    rng = np.random.default_rng() if rng is None else rng
    vals = []
    a = list(samples_a)
    b = list(samples_b)
    for _ in range(bootstrap):
        ra = [a[i] for i in rng.integers(len(a), size=len(a))]
        rb = [b[i] for i in rng.integers(len(b), size=len(b))]
        vals.append(tv(ra, rb))
    lo, hi = np.quantile(vals, [0.025, 0.975])
    return point, (float(lo), float(hi))
