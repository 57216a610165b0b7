"""Restriction operators, regluing, and the encoding-side certificate bounds.

``restrict`` explores a pointed simple-boundary quadrangulation by the
smallest ball around rho that reaches the boundary interval I (numbers
floor((1/3-eps)p_n)..floor(p_n/3) from the root tail), then fills every
hole except the one behind the segment between the last hit vertex v- of I
and the first hit vertex v+ past the target t_{1/3}.  The complement is
the removed part; failed constructions yield the in-band cemetery value.
``restrict_reversed`` runs the same procedure with the boundary numbering
reversed (0 -> 0, i -> p - i).

The certificate sets read the same data off the encoding object (trees
rooted between the first boundary visits of v- and v+), giving the volume
sandwich, the inner-perimeter bound, and an explicit correspondence whose
distortion bounds twice the Gromov-Hausdorff distance between the map and
its restriction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph

from . import kernels
from .bijection import EncodedQuad, time_change_tables
from .coredec import CoreResult
from .errors import (
    CemeteryInput,
    MissingBackReferences,
    NotACorrespondence,
    PerimeterMismatch,
    PreconditionViolated,
)
from .planemap import (
    PlaneMap,
    PointedBoundaryQuad,
    extract_submap,
    glue_boundary,
    one_edge_map,
)
from .scales import perimeter_sequence

_I64 = np.int64


def _face_min_dist(q: PointedBoundaryQuad, dist: np.ndarray) -> np.ndarray:
    """Min vertex distance per face (external face included, ignored later)."""
    m = q.map
    fmin = np.full(m.n_faces, np.iinfo(_I64).max, dtype=_I64)
    np.minimum.at(fmin, m.face_of_half, dist[m.vertex_of_half])
    return fmin


def ball(q: PointedBoundaryQuad, ell: int) -> set:
    """Inner faces incident to a vertex at distance <= ell-1 from rho."""
    if q.rho is None:
        raise CemeteryInput("map is not pointed")
    if ell <= 0 or q.area == 0:
        return set()
    dist = q.map.graph_distances(q.rho)
    fmin = _face_min_dist(q, dist)
    out = np.flatnonzero(fmin <= ell - 1)
    return {int(f) for f in out if f != q.external_face}


class _CemeteryOutcome:
    """Failed restriction; area and perimeter conventions are 0."""

    is_cemetery = True
    area = 0
    perimeter = 0

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def marked_code(self) -> bytes:
        return b"CEMETERY"

    def __repr__(self):
        return "RESTRICTION-CEMETERY"


RESTRICTION_CEMETERY = _CemeteryOutcome()


@dataclass
class RestrictionOutcome:
    """A successful restriction with its complement and marks.

    Vertex ids in ``restriction``/``complement`` are piece-local; the
    ``*_q_vertex`` arrays map them back to the input map, and the marks
    are stored in both indexings.
    """

    restriction: PointedBoundaryQuad
    complement: PointedBoundaryQuad
    rest_q_vertex: np.ndarray
    comp_q_vertex: np.ndarray
    vminus_rest: int
    vplus_rest: int
    vminus_comp: int
    vplus_comp: int
    r: int
    p_right: int
    p_in: int
    p_left: int
    complete: bool
    iminus: int
    iplus: int
    interval_lo: int
    interval_hi: int
    direction: int
    seam_rest_halves: np.ndarray  # cut-part halves of the restriction, v- -> v+

    is_cemetery = False

    @property
    def area(self) -> int:
        return self.restriction.area

    @property
    def perimeter(self) -> int:
        return self.restriction.perimeter

    def marked_code(self) -> bytes:
        return self.restriction.map.canonical_code(
            marks=(self.restriction.rho, self.vminus_rest, self.vplus_rest)
        )


def _restrict_impl(q: PointedBoundaryQuad, p_n: int, eps: float, direction: int):
    if not 0 < eps < 1 / 3:
        raise PreconditionViolated(f"eps must lie in (0, 1/3), got {eps}")
    p = q.perimeter
    if p < p_n / 2:
        raise PreconditionViolated(f"perimeter {p} < p_n/2 = {p_n / 2}")
    walk, simple = q.boundary_walk()
    if not simple:
        raise PreconditionViolated("restriction requires a simple boundary")
    if q.rho is None:
        raise PreconditionViolated("restriction requires a pointed map")

    lo = math.floor((1 / 3 - eps) * p_n)
    hi = math.floor(p_n / 3)
    # slot i: boundary vertex number i in the chosen numbering; slot edge i
    # joins slots i and i+1 and is carried by a forward-walk half-edge
    if direction > 0:
        slot_vertex = [walk[i].vertex for i in range(p)]
        slot_half = [walk[i].half_edge for i in range(p)]
    else:
        slot_vertex = [walk[-i % p].vertex for i in range(p)]
        slot_half = [walk[p - 1 - i].half_edge for i in range(p)]

    if q.area == 0:
        return RESTRICTION_CEMETERY
    m = q.map
    dist = m.graph_distances(q.rho)
    fmin = _face_min_dist(q, dist)
    # radius at which each vertex joins the ball
    vrad = np.full(m.n_vertices, np.iinfo(_I64).max, dtype=_I64)
    inner_half = m.face_of_half != q.external_face
    np.minimum.at(
        vrad, m.vertex_of_half[inner_half], fmin[m.face_of_half[inner_half]] + 1
    )

    i_rads = np.array([vrad[slot_vertex[i]] for i in range(lo, hi + 1)])
    r = int(i_rads.min())
    iminus = lo + int(np.flatnonzero(i_rads == r).max())
    after = np.array([vrad[slot_vertex[i]] for i in range(hi + 1, p)])
    hits = np.flatnonzero(after <= r)
    if len(hits) == 0:
        return RESTRICTION_CEMETERY
    iplus = hi + 1 + int(hits.min())

    segment = list(range(iminus, iplus))
    seg_faces = np.array([m.face_of_half[slot_half[j]] for j in segment], dtype=_I64)
    assert np.all(seg_faces != q.external_face)
    in_ball = fmin[seg_faces] <= r - 1

    vminus_q = slot_vertex[iminus]
    vplus_q = slot_vertex[iplus]
    if vminus_q == q.rho or vplus_q == q.rho:
        # rho on the cut segment violates the structural description of a
        # restriction map (marks at distance r or r+1); possible only at
        # tiny scale, treated as a failed construction
        return RESTRICTION_CEMETERY
    p_right = iminus
    p_left = p - iplus

    if in_ball.all():
        # complete-map case: the restriction is q itself; only possible for
        # a single-edge segment (a longer one would contradict the
        # extremality of v-/v+)
        assert iplus - iminus == 1
        if int(dist[vplus_q]) not in (r, r + 1):
            # the ball swallowed the vertex past the target earlier than it
            # reached I; the marks would violate the distance structure of
            # a restriction map, so the construction fails
            return RESTRICTION_CEMETERY
        rest = PointedBoundaryQuad(q.map, rho=q.rho)
        comp = PointedBoundaryQuad(one_edge_map())
        seam = [slot_half[j] for j in segment]
        if direction < 0:
            seam.reverse()  # store in forward-contour order
        out = RestrictionOutcome(
            restriction=rest,
            complement=comp,
            rest_q_vertex=np.arange(m.n_vertices, dtype=_I64),
            comp_q_vertex=np.array([vminus_q, vplus_q], dtype=_I64),
            vminus_rest=vminus_q,
            vplus_rest=vplus_q,
            vminus_comp=0,
            vplus_comp=1,
            r=r,
            p_right=p_right,
            p_in=iplus - iminus,
            p_left=p_left,
            complete=True,
            iminus=iminus,
            iplus=iplus,
            interval_lo=lo,
            interval_hi=hi,
            direction=direction,
            seam_rest_halves=np.array(seam, dtype=_I64),
        )
        _check_outcome(q, dist, out)
        return out

    assert not in_ball.any(), "segment faces split between ball and holes"
    # group non-ball inner faces by edge adjacency, locate the component
    # behind the segment
    faces = m.face_of_half
    twin = m.twin
    half = np.arange(len(twin))
    nonball_face = (fmin > r - 1) & (np.arange(m.n_faces) != q.external_face)
    both = (
        nonball_face[faces]
        & nonball_face[faces[twin]]
        & (faces[twin] != q.external_face)
        & (half < twin)
    )
    rows, cols = faces[half[both]], faces[twin[half[both]]]
    g = sp.csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)),
        shape=(m.n_faces, m.n_faces),
    )
    _, comp_of_face = csgraph.connected_components(g, directed=False)
    seg_comps = np.unique(comp_of_face[seg_faces])
    assert len(seg_comps) == 1, "segment faces in several hole components"
    c_id = int(seg_comps[0])
    in_c = nonball_face & (comp_of_face == c_id)

    if in_c[faces[m.root]]:
        # the root edge sits behind the cut; treat as a failed construction
        return RESTRICTION_CEMETERY

    keep = ~in_c
    keep[q.external_face] = False
    rest_map, rest_old = extract_submap(m, keep, m.root, point_vertex=q.rho)
    rest = PointedBoundaryQuad(rest_map)

    comp_root = slot_half[min(segment)] if direction > 0 else slot_half[max(segment)]
    comp_map, comp_old = extract_submap(m, in_c, int(comp_root))
    comp = PointedBoundaryQuad(comp_map)

    def _locate(old, v):
        w = np.flatnonzero(old == v)
        assert len(w) == 1
        return int(w[0])

    p_in = rest.perimeter - p_right - p_left
    rest_walk, rest_simple = rest.boundary_walk()
    assert rest_simple
    # the cut part in the restriction's own (forward) contour starts after
    # its kept original prefix: p_right edges forward, p_left reversed
    seam_start = p_right if direction > 0 else p_left
    seam = np.array(
        [rest_walk[j].half_edge for j in range(seam_start, seam_start + p_in)],
        dtype=_I64,
    )
    out = RestrictionOutcome(
        restriction=rest,
        complement=comp,
        rest_q_vertex=rest_old,
        comp_q_vertex=comp_old,
        vminus_rest=_locate(rest_old, vminus_q),
        vplus_rest=_locate(rest_old, vplus_q),
        vminus_comp=_locate(comp_old, vminus_q),
        vplus_comp=_locate(comp_old, vplus_q),
        r=r,
        p_right=p_right,
        p_in=p_in,
        p_left=p_left,
        complete=False,
        iminus=iminus,
        iplus=iplus,
        interval_lo=lo,
        interval_hi=hi,
        direction=direction,
        seam_rest_halves=seam,
    )
    _check_outcome(q, dist, out)
    return out


def _check_outcome(q: PointedBoundaryQuad, dist: np.ndarray, out: RestrictionOutcome):
    rest = out.restriction
    assert rest.perimeter == out.p_right + out.p_in + out.p_left
    assert out.p_in >= 1 and out.p_left >= 1
    assert rest.area + out.complement.area == q.area
    # v-/v+ at distance r or r+1; labels along the common boundary alternate
    walk, _ = rest.boundary_walk()
    seam_start = out.p_right if out.direction > 0 else out.p_left
    seam_q = [out.rest_q_vertex[walk[j].vertex]
              for j in range(seam_start, seam_start + out.p_in + 1)]
    d = dist[np.array(seam_q, dtype=_I64)]
    assert d[0] in (out.r, out.r + 1) and d[-1] in (out.r, out.r + 1)
    assert np.all((d == out.r) | (d == out.r + 1))
    assert np.all(np.abs(np.diff(d)) == 1)
    first_mark = out.vminus_rest if out.direction > 0 else out.vplus_rest
    assert int(walk[seam_start].vertex) == int(first_mark)


def restrict(q: PointedBoundaryQuad, n: int, eps: float, alpha: float = 1.0,
             p_n: int | None = None):
    """Restriction of a pointed simple-boundary quadrangulation (or cemetery)."""
    if p_n is None:
        p_n = perimeter_sequence(n, alpha)
    return _restrict_impl(q, p_n, eps, +1)


def restrict_reversed(q: PointedBoundaryQuad, n: int, eps: float, alpha: float = 1.0,
                      p_n: int | None = None):
    """Same construction after the boundary renumbering 0 -> 0, i -> p - i."""
    if p_n is None:
        p_n = perimeter_sequence(n, alpha)
    return _restrict_impl(q, p_n, eps, -1)


def complement_reglue(outcome: RestrictionOutcome, filler: PointedBoundaryQuad
                      ) -> PointedBoundaryQuad:
    """Glue a simple-boundary quadrangulation onto the restriction's cut part.

    The filler's boundary from its root tail contributes its first
    perimeter - p_in edges as the new external boundary and its last p_in
    edges to the seam; regluing the original complement (rooted at the
    oriented edge following v- in its contour) reconstructs the original
    map exactly.
    """
    if outcome.is_cemetery:
        raise CemeteryInput("cannot reglue the cemetery value")
    p_f = filler.perimeter
    p_in = outcome.p_in
    if filler.area == 0:
        if p_in != 1 or p_f != 2:
            raise PerimeterMismatch(
                f"edge-map filler requires p_in = 1, got p_in={p_in}, p_f={p_f}"
            )
        return PointedBoundaryQuad(outcome.restriction.map,
                                   rho=outcome.restriction.rho)
    if p_f <= p_in:
        raise PerimeterMismatch(f"filler perimeter {p_f} must exceed p_in {p_in}")
    fwalk, fsimple = filler.boundary_walk()
    if not fsimple:
        raise PerimeterMismatch("filler boundary must be simple")
    seam_b = np.array([fwalk[j].half_edge for j in range(p_f - p_in, p_f)], dtype=_I64)
    glued, _a_vertex, _b_vertex = glue_boundary(
        outcome.restriction.map, outcome.seam_rest_halves, filler.map, seam_b
    )
    return PointedBoundaryQuad(glued)


def is_good(outcome, n: int, delta: float, eps: float, alpha: float = 1.0,
            p_n: int | None = None) -> bool:
    """The four scale inequalities of an (n, delta)-good restriction map."""
    if getattr(outcome, "is_cemetery", False):
        raise CemeteryInput("goodness undefined for the cemetery value")
    if not 0 < delta < eps:
        raise PreconditionViolated("need 0 < delta < eps")
    if p_n is None:
        p_n = perimeter_sequence(n, alpha)
    lo = math.floor((1 / 3 - eps) * p_n)
    return (
        lo <= outcome.p_right <= (1 / 3 - delta) * p_n
        and p_n / 2 <= outcome.p_left <= (2 / 3 - delta) * p_n
        and n / 2 <= outcome.restriction.area <= (1 - delta) * n
        and outcome.p_in <= math.sqrt(n) / delta
    )


# ---------------------------------------------------------------------------
# encoding-side certificates (S-sets, geodesics, distortion bound)


@dataclass
class CertificateSets:
    S: set
    S_ge: set
    S_eq: set
    M_low: int
    M_high: int
    r: int
    J_minus: int
    J_plus: int
    merge_tb: int  # treed-bridge vertex id of the geodesic merge point, -1 = rho
    merge_chain_tb: np.ndarray  # merged chain by shifted label, level 0 = rho
    h: int
    h_from_J_window: int


def _successor_chain_vertices(enc: EncodedQuad, start_corner: int, hat: np.ndarray):
    """Vertices of the leftmost geodesic from a corner, indexed by shifted label."""
    corners = enc.corners
    start_hat = int(hat[corners.corner_vertex[start_corner]])
    chain = np.full(start_hat + 1, -1, dtype=_I64)  # index = shifted label; -1 = rho
    c = start_corner
    lvl = start_hat
    while c >= 0:
        chain[lvl] = corners.corner_vertex[c]
        c = int(corners.suc[c])
        lvl -= 1
    assert lvl == 0
    return chain


def certificate_sets(enc: EncodedQuad, core_res: CoreResult,
                     outcome: RestrictionOutcome) -> CertificateSets:
    """S-sets and label extrema read off the encoding object (forward
    restriction of the core of a bijection-built map)."""
    if outcome.is_cemetery:
        raise CemeteryInput("certificates undefined for the cemetery value")
    if core_res.is_cemetery:
        raise CemeteryInput("certificates require a defined core")
    if enc.quad.map.vertex_tags is None:
        raise MissingBackReferences("map was not built by the bijection")
    ltb = enc.ltb
    lam_star = enc.corners.lambda_star
    hat = ltb.vertex_labels - lam_star  # shifted label per treed-bridge vertex

    core_walk, _ = core_res.core.boundary_walk()
    tags = enc.quad.map.vertex_tags
    core_boundary_tb = [
        int(tags[core_res.q_vertex_of_core[rec.vertex]]) for rec in core_walk
    ]
    tables = time_change_tables(enc, core_boundary_tb)
    i_minus, i_plus = outcome.iminus, outcome.iplus
    J_minus = int(tables.J[i_minus])
    J_plus = int(tables.J[i_plus])

    # S: trees whose root vertex is incident to a boundary corner in the
    # window [J(i-), J(i+)], together with every vertex the complement
    # actually touches.  Root vertices can be pinch points visited much
    # earlier than their own downstep corner, and trees rooted just outside
    # the window can still dip into the complement through label-equal
    # edges, so the window alone misses a handful of vertices at desk
    # scale; the augmented set keeps every bound below exact (the added
    # vertices have labels at most r+1 on the common boundary, hence never
    # enter S_ge).
    tree_of_root = {int(ltb.vertex_ptr[t]): t for t in range(ltb.n_trees)}
    S = set()
    for j in range(J_minus, J_plus + 1):
        t = tree_of_root.get(int(enc.boundary_tb[j]))
        if t is not None:
            S.update(range(int(ltb.vertex_ptr[t]), int(ltb.vertex_ptr[t + 1])))
    for cid in outcome.comp_q_vertex:
        tb = int(tags[core_res.q_vertex_of_core[int(cid)]])
        if tb >= 0:
            S.add(tb)

    r = outcome.r
    # ancestral minima of shifted labels along tree root paths
    anc_min = hat.copy()
    parent = ltb.parent
    for v in range(len(parent)):
        if parent[v] >= 0:
            anc_min[v] = min(anc_min[v], anc_min[parent[v]])
    S_ge = {v for v in S if anc_min[v] >= r + 3}
    S_eq = {
        v
        for v in S
        if hat[v] == r and (parent[v] < 0 or anc_min[parent[v]] >= r + 1)
    }

    # geodesics from the corners at v-/v+ and their merge point
    chain_minus = _successor_chain_vertices(enc, int(tables.T[J_minus]), hat)
    chain_plus = _successor_chain_vertices(enc, int(tables.T[J_plus]), hat)
    top = min(len(chain_minus), len(chain_plus)) - 1
    merge_level = 0
    while merge_level + 1 <= top and chain_minus[merge_level + 1] == chain_plus[merge_level + 1]:
        merge_level += 1
    merge_chain = chain_minus[: merge_level + 1].copy()
    merge_tb = int(merge_chain[merge_level])

    if S:
        hats = [int(hat[v]) for v in S]
        M_low, M_high = min(hats), max(hats)
    else:
        # degenerate window with no trees: fall back to the marked vertices
        vm = int(tags[core_res.q_vertex_of_core[outcome.rest_q_vertex[outcome.vminus_rest]]])
        vp = int(tags[core_res.q_vertex_of_core[outcome.rest_q_vertex[outcome.vplus_rest]]])
        M_high = max(int(hat[vm]), int(hat[vp]))
        lvl = 0 if merge_tb < 0 else int(hat[merge_tb])
        M_low = min(M_high, lvl + 1)

    # h: minimal shifted label over the boundary interval I, and the same
    # minimum read on the general-boundary corners through the J window
    def hat_tb(tb):
        return 0 if tb < 0 else int(hat[tb])

    i_lo, i_hi = outcome.interval_lo, outcome.interval_hi
    h = min(hat_tb(core_boundary_tb[i]) for i in range(i_lo, i_hi + 1))
    lam = ltb.bridge.labels
    J_lo, J_hi = int(tables.J[i_lo]), int(tables.J[i_hi])
    h_window = min(int(lam[k]) - lam_star for k in range(J_lo, J_hi + 1))
    return CertificateSets(S, S_ge, S_eq, M_low, M_high, r, J_minus, J_plus,
                           merge_tb, merge_chain, h, h_window)


@dataclass
class BoundsReport:
    volume_sandwich: bool
    pin_bound: bool
    gh_bound: bool
    s_ge_disjoint: bool
    all_but_two_in_s: bool
    h_identity: bool  # diagnostic; degenerate when rho lies on the interval I
    distortion: int
    gh_cap: int

    @property
    def all_ok(self) -> bool:
        return (
            self.volume_sandwich
            and self.pin_bound
            and self.gh_bound
            and self.s_ge_disjoint
            and self.all_but_two_in_s
        )


def correspondence_distortion(map_a: PlaneMap, map_b: PlaneMap, pairs) -> int:
    """Exact distortion of a correspondence between two maps' vertex sets."""
    pairs = [(int(x), int(y)) for x, y in pairs]
    if {x for x, _ in pairs} != set(range(map_a.n_vertices)) or {
        y for _, y in pairs
    } != set(range(map_b.n_vertices)):
        raise NotACorrespondence("pairs must cover both vertex sets")
    pairs.sort()
    xs = np.array([x for x, _ in pairs], dtype=_I64)
    ys = np.array([y for _, y in pairs], dtype=_I64)
    a_indptr, a_indices = map_a.adjacency_csr()
    b_indptr, b_indices = map_b.adjacency_csr()
    return int(kernels.metric_discrepancy(a_indptr, a_indices, b_indptr, b_indices, xs, ys))


def check_bounds(enc: EncodedQuad, core_res: CoreResult,
                 outcome: RestrictionOutcome, certs: CertificateSets) -> BoundsReport:
    """Evaluate the volume sandwich, inner-perimeter bound and distortion cap
    plus the certificate-set sanity claims, all exactly."""
    if outcome.is_cemetery:
        raise CemeteryInput("bounds undefined for the cemetery value")
    ltb = enc.ltb
    tags = enc.quad.map.vertex_tags
    rest = outcome.restriction

    volume_sandwich = (
        core_res.area - len(certs.S) <= rest.area
        and rest.area <= rest.map.n_vertices
        and rest.map.n_vertices <= ltb.m + ltb.p // 2 + 1 - len(certs.S_ge)
    )
    pin_bound = outcome.p_in <= 2 * (1 + len(certs.S_eq)) + 1

    def tb_of_piece(piece_q_vertex):
        return {int(tags[core_res.q_vertex_of_core[int(c)]]) for c in piece_q_vertex}

    rest_tb = tb_of_piece(outcome.rest_q_vertex)
    comp_tb = tb_of_piece(outcome.comp_q_vertex)
    s_ge_disjoint = not (certs.S_ge & rest_tb)
    all_but_two = len(comp_tb - certs.S) <= 2
    h_identity = certs.h == certs.h_from_J_window and certs.h in (
        outcome.r,
        outcome.r + 1,
    )

    # explicit correspondence: identity on the restriction, everything in
    # the complement sent to the geodesic merge point (walked down into the
    # restriction if needed; rho always qualifies)
    rest_of_core = {int(cid): rid for rid, cid in enumerate(outcome.rest_q_vertex)}
    core_of_q = {int(qid): cid for cid, qid in enumerate(core_res.q_vertex_of_core)}
    merge_rest = None
    for lvl in range(len(certs.merge_chain_tb) - 1, -1, -1):
        tb = int(certs.merge_chain_tb[lvl])
        qid = int(enc.quad.rho) if tb < 0 else int(enc.map_vertex_of_tb[tb])
        cid = core_of_q.get(qid)
        if cid is not None and cid in rest_of_core:
            merge_rest = rest_of_core[cid]
            break
    assert merge_rest is not None

    pairs = [(int(cid), rid) for cid, rid in
             zip(outcome.rest_q_vertex, range(rest.map.n_vertices))]
    pairs += [(int(cid), merge_rest) for cid in outcome.comp_q_vertex]
    distortion = correspondence_distortion(core_res.core.map, rest.map, pairs)
    gh_cap = 2 * (certs.M_high - certs.M_low + 1)
    gh_bound = distortion <= gh_cap

    return BoundsReport(
        volume_sandwich=bool(volume_sandwich),
        pin_bound=bool(pin_bound),
        gh_bound=bool(gh_bound),
        s_ge_disjoint=bool(s_ge_disjoint),
        all_but_two_in_s=bool(all_but_two),
        h_identity=bool(h_identity),
        distortion=int(distortion),
        gh_cap=int(gh_cap),
    )


RESTRICT_STATS_CSV_HEADER = (
    "n,alpha,eps,delta,seed,outcome,r,p_right,p_in,p_left,area_restriction,"
    "good,S,S_ge,S_eq,M_low,M_high,bounds_ok"
)


def restrict_stats_csv_row(n, alpha, eps, delta, seed, outcome, good=None,
                           certs=None, bounds=None) -> str:
    base = f"{n},{alpha:.10g},{eps:.10g},{delta:.10g},{seed}"
    if getattr(outcome, "is_cemetery", False):
        return base + ",cemetery,,,,,,,,,,,,"
    good_s = "" if good is None else str(int(good))
    if certs is None:
        return (
            f"{base},ok,{outcome.r},{outcome.p_right},{outcome.p_in},"
            f"{outcome.p_left},{outcome.restriction.area},{good_s},,,,,,"
        )
    return (
        f"{base},ok,{outcome.r},{outcome.p_right},{outcome.p_in},"
        f"{outcome.p_left},{outcome.restriction.area},{good_s},"
        f"{len(certs.S)},{len(certs.S_ge)},{len(certs.S_eq)},"
        f"{certs.M_low},{certs.M_high},{int(bounds.all_ok) if bounds else ''}"
    )
