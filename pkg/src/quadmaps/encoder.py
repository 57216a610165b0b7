"""Labeled treed bridges: discrete bridge + labeled plane forest.

These are the encoding objects consumed by the bijection: a rooted,
zero-based cycle of even length p carrying a +-1 bridge of labels, with a
labeled plane tree attached at every downstep (p/2 trees total).  All
samplers are exactly uniform: the bridge by shuffling steps, the forest by
the cycle-lemma rotation, the labels by i.i.d. uniform {-1,0,+1} edge
increments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InvalidPerimeter, QuadmapsError

_I64 = np.int64


@dataclass
class DiscreteBridge:
    """+-1 lattice path from 0 to 0 of even length p."""

    labels: np.ndarray  # length p+1, labels[0] == labels[p] == 0

    @property
    def p(self) -> int:
        return len(self.labels) - 1

    def steps(self) -> np.ndarray:
        return np.diff(self.labels)

    def downsteps(self) -> np.ndarray:
        """Positions i with labels[i+1] == labels[i] - 1 (one tree each)."""
        return np.flatnonzero(self.steps() < 0)


@dataclass
class LabeledTree:
    """Plane tree with children lists in planar order and integer labels.

    Vertices are numbered in preorder (0 is the root); ``labels[i]`` is the
    label of vertex i and ``root_label == labels[0]``.
    """

    children: list
    labels: list

    @property
    def root_label(self) -> int:
        return self.labels[0]

    @property
    def n_edges(self) -> int:
        return len(self.labels) - 1


@dataclass
class LabeledTreedBridge:
    """Bridge plus one labeled tree per downstep, in bridge order.

    Flat arrays carry the whole forest: ``tree_steps`` concatenates each
    tree's contour steps (+1 descend / -1 ascend), ``tree_ptr`` delimits
    them, ``parent``/``vertex_labels`` describe the preorder-numbered
    forest vertices and ``vertex_ptr`` delimits trees in vertex numbering.
    """

    bridge: DiscreteBridge
    tree_steps: np.ndarray
    tree_ptr: np.ndarray
    parent: np.ndarray
    vertex_labels: np.ndarray
    vertex_ptr: np.ndarray
    _trees: list = field(default=None, repr=False, compare=False)

    @property
    def p(self) -> int:
        return self.bridge.p

    @property
    def m(self) -> int:
        return len(self.tree_steps) // 2

    @property
    def n_trees(self) -> int:
        return len(self.tree_ptr) - 1

    @property
    def trees(self) -> dict:
        """Map downstep index -> LabeledTree (materialized on demand)."""
        if self._trees is None:
            downs = self.bridge.downsteps()
            out = {}
            for t, pos in enumerate(downs):
                lo, hi = int(self.vertex_ptr[t]), int(self.vertex_ptr[t + 1])
                children = [[] for _ in range(hi - lo)]
                for v in range(lo + 1, hi):
                    children[int(self.parent[v]) - lo].append(v - lo)
                out[int(pos)] = LabeledTree(
                    children, [int(x) for x in self.vertex_labels[lo:hi]]
                )
            self._trees = out
        return self._trees


@dataclass
class ValidationReport:
    ok: bool
    reasons: list

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# counting

def count_plane_forests(f: int, m: int) -> int:
    """Number of plane forests with f ordered trees and m edges total:
    f/(2m+f) * C(2m+f, m)."""
    if f < 1 or m < 0:
        raise QuadmapsError("need f >= 1 and m >= 0")
    num = f * math.comb(2 * m + f, m)
    assert num % (2 * m + f) == 0
    return num // (2 * m + f)


# ---------------------------------------------------------------------------
# samplers

def sample_bridge(p: int, rng: np.random.Generator) -> DiscreteBridge:
    """Uniform discrete bridge: shuffle p/2 upsteps and p/2 downsteps."""
    if p < 2 or p % 2:
        raise InvalidPerimeter(f"p must be even and >= 2, got {p}")
    steps = np.concatenate([np.ones(p // 2, dtype=_I64), -np.ones(p // 2, dtype=_I64)])
    rng.shuffle(steps)
    labels = np.zeros(p + 1, dtype=_I64)
    np.cumsum(steps, out=labels[1:])
    return DiscreteBridge(labels)


def _admissible_rotations(steps: np.ndarray, f: int) -> np.ndarray:
    """Start indices of cyclic rotations whose proper prefix sums stay > -f.

    The step sum is -f, so the cycle lemma gives exactly f such indices.
    """
    K = len(steps)
    P = np.zeros(K + 1, dtype=_I64)
    np.cumsum(steps, out=P[1:])
    if K == 1:
        return np.zeros(1, dtype=_I64)
    # suffmin[t] = min(P[t:]); premin1[j] = min(P[1 : j + 2])
    suffmin = np.minimum.accumulate(P[::-1])[::-1]
    premin1 = np.minimum.accumulate(P[1:])
    valid = np.empty(K, dtype=bool)
    # rotation from i: first-part prefixes are P[i+1..K] - P[i] (the full
    # prefix j = K is proper only for i >= 1); wrapped proper prefixes are
    # -f - P[i] + P[t] for t = 1..i-1
    valid[0] = premin1[K - 2] > -f
    i = np.arange(1, K)
    cond1 = suffmin[2:] > P[1:K] - f
    cond2 = np.ones(K - 1, dtype=bool)
    cond2[1:] = premin1[: K - 2] > P[2:K]
    valid[1:] = cond1 & cond2
    return np.flatnonzero(valid).astype(_I64)


def sample_plane_forest(f: int, m: int, rng: np.random.Generator):
    """Uniform plane forest with f trees and m edges, by the cycle lemma.

    A forest is encoded as m up-steps and m+f down-steps (each tree's
    contour followed by one separating down-step); a uniform shuffle has
    exactly f admissible rotations and picking one uniformly at random
    yields the uniform forest.  Returns (tree_steps, tree_ptr) in the flat
    representation used by LabeledTreedBridge.
    """
    if f < 1 or m < 0:
        raise QuadmapsError("need f >= 1 and m >= 0")
    seq = np.concatenate([np.ones(m, dtype=np.int8), -np.ones(m + f, dtype=np.int8)])
    rng.shuffle(seq)
    starts = _admissible_rotations(seq.astype(_I64), f)
    assert len(starts) == f, "cycle lemma violated (bug)"
    start = int(starts[rng.integers(len(starts))])
    rot = np.roll(seq, -start)
    # the f separator down-steps are the first visits to levels -1, .., -f
    level = np.cumsum(rot.astype(_I64))
    running = np.minimum.accumulate(level)
    prev_running = np.minimum(np.concatenate(([0], running[:-1])), 0)
    is_sep = level < prev_running
    tree_steps = rot[~is_sep]
    sep_positions = np.flatnonzero(is_sep)
    assert len(sep_positions) == f
    tree_ptr = np.empty(f + 1, dtype=_I64)
    tree_ptr[0] = 0
    tree_ptr[1:] = sep_positions - np.arange(f)
    return tree_steps.astype(np.int8), tree_ptr


def sample_labels(tree_steps, tree_ptr, parent, root_labels, rng: np.random.Generator):
    """I.i.d. uniform {-1,0,+1} edge increments pushed down each tree.

    ``root_labels`` gives one label per tree; returns the preorder vertex
    label array (uniform over all 3^m admissible labelings).
    """
    f = len(tree_ptr) - 1
    nv = len(parent)
    labels = np.zeros(nv, dtype=_I64)
    roots = np.flatnonzero(parent < 0)
    assert len(roots) == f
    labels[roots] = np.asarray(root_labels, dtype=_I64)
    increments = rng.integers(-1, 2, size=nv).astype(_I64)
    increments[roots] = 0
    kernels.propagate_labels(parent, increments, labels)
    return labels


def sample_treed_bridge(p: int, m: int, rng: np.random.Generator) -> LabeledTreedBridge:
    """Uniform labeled treed bridge with p/2 trees and m edges."""
    bridge = sample_bridge(p, rng)
    tree_steps, tree_ptr = sample_plane_forest(p // 2, m, rng)
    parent, _corner = kernels.decode_forest(tree_steps, tree_ptr)
    downs = bridge.downsteps()
    root_labels = bridge.labels[downs]
    labels = sample_labels(tree_steps, tree_ptr, parent, root_labels, rng)
    vertex_ptr = np.empty(len(tree_ptr), dtype=_I64)
    vertex_ptr[:] = tree_ptr // 2 + np.arange(len(tree_ptr))
    return LabeledTreedBridge(bridge, tree_steps, tree_ptr, parent, labels, vertex_ptr)


# ---------------------------------------------------------------------------
# validation

def validate(ltb: LabeledTreedBridge) -> ValidationReport:
    """Check every structural invariant; returns ok plus a reason list."""
    reasons = []
    b = ltb.bridge
    p = b.p
    if p < 2 or p % 2:
        reasons.append(f"perimeter {p} not an even integer >= 2")
    if b.labels[0] != 0 or b.labels[-1] != 0:
        reasons.append("bridge endpoints not 0")
    steps = b.steps()
    if not np.all(np.abs(steps) == 1):
        reasons.append("bridge has a step different from +-1")
    if np.sum(steps > 0) != np.sum(steps < 0):
        reasons.append("bridge up/down step counts differ")
    downs = b.downsteps()
    if ltb.n_trees != len(downs) or ltb.n_trees != p // 2:
        reasons.append(
            f"{ltb.n_trees} trees for {len(downs)} downsteps (p/2 = {p // 2})"
        )
    if len(ltb.tree_steps) != 2 * ltb.m:
        reasons.append("tree step array length is not 2m")
    if ltb.n_trees == len(downs):
        root_ids = ltb.vertex_ptr[:-1]
        if not np.all(ltb.vertex_labels[root_ids] == b.labels[downs]):
            reasons.append("a tree root label differs from its downstep label")
    nonroot = np.flatnonzero(ltb.parent >= 0)
    if nonroot.size:
        jumps = np.abs(ltb.vertex_labels[nonroot] - ltb.vertex_labels[ltb.parent[nonroot]])
        if jumps.max(initial=0) > 1:
            reasons.append("a tree edge label difference exceeds 1")
    return ValidationReport(not reasons, reasons)


# ---------------------------------------------------------------------------
# serialization

def _tree_parens(steps) -> str:
    return "".join("(" if s > 0 else ")" for s in steps)


def serialize_ltb(ltb: LabeledTreedBridge) -> str:
    lines = [f"LTB v1 {ltb.p} {ltb.m}"]
    lines.append(" ".join(str(int(x)) for x in ltb.bridge.labels))
    for t in range(ltb.n_trees):
        steps = ltb.tree_steps[ltb.tree_ptr[t] : ltb.tree_ptr[t + 1]]
        labels = ltb.vertex_labels[ltb.vertex_ptr[t] : ltb.vertex_ptr[t + 1]]
        shape = _tree_parens(steps) or "-"
        lines.append(shape + " " + " ".join(str(int(x)) for x in labels))
    return "\n".join(lines) + "\n"


def parse_ltb(text: str) -> LabeledTreedBridge:
    lines = text.strip().split("\n")
    head = lines[0].split()
    if head[:2] != ["LTB", "v1"]:
        raise QuadmapsError(f"bad header: {lines[0]!r}")
    p, m = int(head[2]), int(head[3])
    labels = np.array([int(x) for x in lines[1].split()], dtype=_I64)
    bridge = DiscreteBridge(labels)
    f = p // 2
    if len(lines) != 2 + f:
        raise QuadmapsError("wrong number of tree lines")
    steps_parts, vlabel_parts = [], []
    tree_ptr = np.zeros(f + 1, dtype=_I64)
    vertex_ptr = np.zeros(f + 1, dtype=_I64)
    for t, line in enumerate(lines[2:]):
        shape, *vals = line.split()
        if shape == "-":
            shape = ""
        steps_parts.append(
            np.array([1 if c == "(" else -1 for c in shape], dtype=np.int8)
        )
        vlabel_parts.append(np.array([int(x) for x in vals], dtype=_I64))
        tree_ptr[t + 1] = tree_ptr[t] + len(shape)
        vertex_ptr[t + 1] = vertex_ptr[t] + len(vals)
    tree_steps = (
        np.concatenate(steps_parts) if steps_parts else np.empty(0, dtype=np.int8)
    )
    vertex_labels = (
        np.concatenate(vlabel_parts) if vlabel_parts else np.empty(0, dtype=_I64)
    )
    if len(tree_steps) != 2 * m:
        raise QuadmapsError("tree shapes disagree with the declared edge count")
    parent, _ = kernels.decode_forest(tree_steps, tree_ptr)
    out = LabeledTreedBridge(bridge, tree_steps, tree_ptr, parent, vertex_labels, vertex_ptr)
    rep = validate(out)
    if not rep:
        raise QuadmapsError("invalid LTB payload: " + "; ".join(rep.reasons))
    return out
