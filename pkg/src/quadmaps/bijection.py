"""From labeled treed bridges to pointed quadrangulations with a boundary.

The construction walks the corners of the bounded face in contour order
(ignoring the p/2 corners at treeless cycle vertices), links every corner
to its successor -- the next corner, cyclically, whose label is one less --
and links minimal-label corners to a new vertex rho labeled
lambda_star = min(corner labels) - 1.  Discarding the original cycle and
tree edges leaves a quadrangulation with boundary of area m, perimeter p,
pointed at rho.  Arc nesting fixes the rotation system:

* around a tree vertex, arc ends are grouped by corner (corners in contour
  order); within a corner the incoming arcs come first, innermost first
  (increasing cyclic distance to their source), then the outgoing arc;
* around rho, the arcs from minimal corners appear in reversed contour
  order.

Shifted labels (label - lambda_star) are the graph distances to rho; this
identity is asserted cheaply on the boundary at every build and can be
verified in full with ``verify_label_distance``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .encoder import LabeledTreedBridge
from .errors import BijectionInternal
from .planemap import PlaneMap, PointedBoundaryQuad

_I64 = np.int64


@dataclass
class CornerSequence:
    """Tree-incident corners of the bounded face, in contour order."""

    corner_vertex: np.ndarray  # treed-bridge vertex id per corner
    corner_label: np.ndarray
    corner_tree: np.ndarray  # tree index per corner
    lambda_star: int
    suc: np.ndarray  # successor corner index, -1 for the added vertex


@dataclass
class TimeChangeTables:
    """T: boundary corner -> first corner time; J: core boundary -> boundary."""

    T: np.ndarray  # length p+1, T[p] = 2m + p/2
    J: np.ndarray  # length core perimeter


class EncodedQuad:
    """Bijection output bundled with its encoding-side data."""

    __slots__ = ("quad", "ltb", "corners", "map_vertex_of_tb", "boundary_tb")

    def __init__(self, quad, ltb, corners, map_vertex_of_tb, boundary_tb):
        self.quad = quad
        self.ltb = ltb
        self.corners = corners
        self.map_vertex_of_tb = map_vertex_of_tb
        self.boundary_tb = boundary_tb  # treed-bridge vertex per boundary corner


def corner_sequence(ltb: LabeledTreedBridge) -> CornerSequence:
    """Contour corners and successors of the embedded treed bridge."""
    parent, corner_vertex = kernels.decode_forest(ltb.tree_steps, ltb.tree_ptr)
    f = ltb.n_trees
    corner_ptr = ltb.tree_ptr + np.arange(f + 1)  # 2*m_t + 1 corners per tree
    corner_tree = np.repeat(np.arange(f, dtype=_I64), np.diff(corner_ptr))
    corner_label = ltb.vertex_labels[corner_vertex]
    lambda_star = int(corner_label.min()) - 1
    suc = kernels.successor_links(corner_label)
    return CornerSequence(corner_vertex, corner_label, corner_tree, lambda_star, suc)


def _root_half(ltb: LabeledTreedBridge, corners: CornerSequence) -> int:
    """Half-edge id of the oriented edge matching the cycle edge rho_0->rho_1."""
    downs = ltb.bridge.downsteps()
    corner_ptr = ltb.tree_ptr + np.arange(ltb.n_trees + 1)
    if ltb.bridge.labels[1] == -1:
        # downstep at position 0: the corresponding arc leaves the last
        # corner of the tree rooted at rho_0
        assert downs[0] == 0
        return 2 * (int(corner_ptr[1]) - 1)
    # upstep at 0: reverse of the arc from suc^(f-1) of the first corner of
    # the first tree, where f is the first downstep position
    fpos = int(downs[0])
    x = 0
    for _ in range(fpos - 1):
        x = int(corners.suc[x])
        if x < 0:
            raise BijectionInternal("root successor chain hit the added vertex")
    return 2 * x + 1


def _assemble(ltb: LabeledTreedBridge, corners: CornerSequence):
    """Build (twin, sigma, root, tb_vertex_of_half) from the corner data."""
    N = len(corners.corner_vertex)
    n_tb = len(ltb.vertex_labels)
    suc = corners.suc
    arcs = np.arange(N, dtype=_I64)

    twin = np.empty(2 * N, dtype=_I64)
    twin[0::2] = 2 * arcs + 1
    twin[1::2] = 2 * arcs

    # sort keys per half-edge: (vertex, corner position, class, nesting)
    vertex_key = np.empty(2 * N, dtype=_I64)
    corner_key = np.empty(2 * N, dtype=_I64)
    class_key = np.zeros(2 * N, dtype=_I64)
    sub_key = np.zeros(2 * N, dtype=_I64)

    vertex_key[0::2] = corners.corner_vertex
    corner_key[0::2] = arcs
    class_key[0::2] = 1

    to_rho = suc < 0
    s_safe = np.where(to_rho, 0, suc)
    vertex_key[1::2] = np.where(to_rho, n_tb, corners.corner_vertex[s_safe])
    corner_key[1::2] = np.where(to_rho, -arcs, s_safe)
    sub_key[1::2] = np.where(to_rho, 0, (s_safe - arcs) % N)

    order = np.lexsort((sub_key, class_key, corner_key, vertex_key))
    groups = vertex_key[order]
    sigma = np.empty(2 * N, dtype=_I64)
    nxt = np.roll(order, -1)
    # close each vertex group into a cycle
    boundaries = np.flatnonzero(np.diff(groups))
    starts = np.concatenate(([0], boundaries + 1))
    ends = np.concatenate((boundaries, [2 * N - 1]))
    nxt[ends] = order[starts]
    sigma[order] = nxt

    tb_vertex_of_half = vertex_key  # by construction
    root = _root_half(ltb, corners)
    return twin, sigma, root, tb_vertex_of_half


def encode_quadrangulation(ltb: LabeledTreedBridge) -> EncodedQuad:
    """Run the construction, validate, and keep the vertex correspondence."""
    corners = corner_sequence(ltb)
    twin, sigma, root, tb_of_half = _assemble(ltb, corners)
    m = PlaneMap(twin, sigma, root)
    n_tb = len(ltb.vertex_labels)

    # vertex tags: treed-bridge vertex id, -1 for the added vertex rho
    tags = np.empty(m.n_vertices, dtype=_I64)
    tags[m.vertex_of_half] = np.where(tb_of_half == n_tb, -1, tb_of_half)
    m.vertex_tags = tags
    map_vertex_of_tb = np.empty(n_tb + 1, dtype=_I64)
    map_vertex_of_tb[tb_of_half] = m.vertex_of_half
    m.point = int(map_vertex_of_tb[n_tb])

    quad = PointedBoundaryQuad(m)
    if quad.area != ltb.m or quad.perimeter != ltb.p:
        raise BijectionInternal(
            f"built area/perimeter {quad.area}/{quad.perimeter}, "
            f"expected {ltb.m}/{ltb.p}"
        )
    # the external corners must carry the bridge labels (shifted)
    walk, _ = quad.boundary_walk()
    lam = ltb.bridge.labels
    lam_star = corners.lambda_star
    boundary_tb = np.empty(ltb.p, dtype=_I64)
    for j, rec in enumerate(walk):
        tb = int(tags[rec.vertex])
        boundary_tb[j] = tb
        have = 0 if tb < 0 else int(ltb.vertex_labels[tb]) - lam_star
        want = int(lam[j]) - lam_star
        if have != want:
            raise BijectionInternal(
                f"boundary corner {j} carries shifted label {have}, expected {want}"
            )
    return EncodedQuad(quad, ltb, corners, map_vertex_of_tb, boundary_tb)


def build_quadrangulation(ltb: LabeledTreedBridge) -> PointedBoundaryQuad:
    """Pointed quadrangulation with boundary encoded by ``ltb``."""
    return encode_quadrangulation(ltb).quad


def shifted_labels_by_map_vertex(enc: EncodedQuad) -> np.ndarray:
    """hat(lambda) per map vertex (0 at rho)."""
    tags = enc.quad.map.vertex_tags
    lam_star = enc.corners.lambda_star
    out = np.zeros(enc.quad.map.n_vertices, dtype=_I64)
    tb = tags >= 0
    out[tb] = enc.ltb.vertex_labels[tags[tb]] - lam_star
    return out


def verify_label_distance(q: PointedBoundaryQuad, ltb: LabeledTreedBridge) -> bool:
    """True iff BFS distances from rho equal the shifted labels exactly."""
    tags = q.map.vertex_tags
    if tags is None:
        return False
    # corner labels are exactly the tree vertex labels
    lam_star = int(ltb.vertex_labels.min()) - 1
    dist = q.map.graph_distances(q.rho)
    expected = np.zeros_like(dist)
    tb = tags >= 0
    expected[tb] = ltb.vertex_labels[tags[tb]] - lam_star
    return bool(np.array_equal(dist, expected))


def label_processes(ltb: LabeledTreedBridge, grid: int):
    """Bridge and contour label processes sampled on a uniform grid of [0,1].

    B(s) is the bridge label at time floor(p*s); L(s) the corner label at
    time floor((2m + p/2 - 1)*s).  Returns (B, L) as int arrays of length
    grid+1 (s = 0, 1/grid, ..., 1).
    """
    corners = corner_sequence(ltb)
    s = np.arange(grid + 1) / grid
    bidx = np.minimum((ltb.p * s).astype(_I64), ltb.p)
    B = ltb.bridge.labels[bidx]
    n_c = len(corners.corner_label)
    lidx = np.minimum(((n_c - 1) * s).astype(_I64), n_c - 1)
    L = corners.corner_label[lidx]
    return B, L


def time_change_tables(enc: EncodedQuad, core_boundary_tb) -> TimeChangeTables:
    """T over boundary corners 0..p (with T[p] = 2m + p/2) and J over the
    core boundary, both in corner/boundary first-visit convention.

    ``core_boundary_tb`` lists the treed-bridge vertex ids of the core's
    boundary contour (the core exists by assumption).
    """
    corners = enc.corners
    seen = {}
    for k, v in enumerate(corners.corner_vertex):
        if int(v) not in seen:
            seen[int(v)] = k
    p = enc.ltb.p
    T = np.empty(p + 1, dtype=_I64)
    for j in range(p):
        tb = int(enc.boundary_tb[j])
        # rho can sit on the boundary when the bridge minimum undershoots
        # every tree label; no tree corner is incident to it
        T[j] = -1 if tb < 0 else seen[tb]
    T[p] = 2 * enc.ltb.m + p // 2
    first_boundary = {}
    for j, tb in enumerate(enc.boundary_tb):
        if int(tb) not in first_boundary:
            first_boundary[int(tb)] = j
    J = np.array([first_boundary[int(tb)] for tb in core_boundary_tb], dtype=_I64)
    return TimeChangeTables(T, J)
