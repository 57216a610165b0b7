"""Core decomposition of pointed quadrangulations with a boundary.

Cutting the boundary at pinch vertices (vertices visited more than once by
the boundary walk) splits the map into simple-boundary components; the core
is the unique largest one containing the distinguished vertex, or the
cemetery value when the largest is tied or misses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph

from .encoder import sample_treed_bridge
from .bijection import encode_quadrangulation
from .planemap import PlaneMap, PointedBoundaryQuad, extract_submap, one_edge_map
from .scales import perimeter_sequence

_I64 = np.int64


class Cemetery:
    """In-band value for failed constructions; area and perimeter are 0."""

    area = 0
    perimeter = 0

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "CEMETERY"


CEMETERY = Cemetery()


def is_cemetery(x) -> bool:
    return x is CEMETERY


@dataclass
class Component:
    """One simple-boundary piece of the decomposition."""

    quad: PointedBoundaryQuad
    q_vertex_of_piece: np.ndarray  # piece vertex id -> original vertex id
    positions: np.ndarray  # boundary-walk positions of its boundary edges
    attach_vertex: int | None  # pinch vertex in the original map, None for first piece

    @property
    def area(self) -> int:
        return self.quad.area


@dataclass
class BoundaryDecomposition:
    components: list
    sizes: list = field(init=False)

    def __post_init__(self):
        self.sizes = [c.area for c in self.components]


def decompose(q: PointedBoundaryQuad) -> BoundaryDecomposition:
    """Split at pinch vertices into simple-boundary components.

    Components are rooted at their first boundary edge in contour order
    from the root of ``q``; inner faces and boundary edges are conserved.
    """
    m = q.map
    walk, _simple = q.boundary_walk()
    external = q.external_face
    faces = m.face_of_half
    twin = m.twin

    # face components: inner faces joined across interior edges
    half = np.arange(len(twin))
    inner_both = (faces != external) & (faces[twin] != external) & (half < twin)
    rows = faces[half[inner_both]]
    cols = faces[twin[half[inner_both]]]
    g = sp.csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)),
        shape=(m.n_faces, m.n_faces),
    )
    n_comp, face_comp = csgraph.connected_components(g, directed=False)

    # boundary edges grouped by piece: inner-face side for normal edges,
    # one piece per edge whose both sides are external (dangling edges)
    groups = {}
    dangling = {}
    for j, rec in enumerate(walk):
        h = rec.half_edge
        f = int(faces[h])
        if f == external:
            dangling.setdefault(int(min(h, twin[h])), []).append(j)
        else:
            groups.setdefault(int(face_comp[f]), []).append(j)

    components = []
    for comp_id, positions in sorted(groups.items(), key=lambda kv: min(kv[1])):
        keep = np.zeros(m.n_faces, dtype=bool)
        keep[(face_comp == comp_id) & (np.arange(m.n_faces) != external)] = True
        first = min(positions)
        piece_map, old_vertex = extract_submap(m, keep, walk[first].half_edge)
        components.append(
            Component(PointedBoundaryQuad(piece_map), old_vertex,
                      np.asarray(sorted(positions), dtype=_I64),
                      None if first == 0 else walk[first].vertex)
        )
    for _edge_id, positions in sorted(dangling.items(), key=lambda kv: min(kv[1])):
        first = min(positions)
        h = walk[first].half_edge
        old_vertex = np.array(
            [m.vertex_of_half[h], m.vertex_of_half[twin[h]]], dtype=_I64
        )
        components.append(
            Component(PointedBoundaryQuad(one_edge_map()), old_vertex,
                      np.asarray(sorted(positions), dtype=_I64),
                      None if first == 0 else walk[first].vertex)
        )

    components.sort(key=lambda c: int(c.positions[0]))
    deco = BoundaryDecomposition(components)
    _check_conservation(q, deco)
    return deco


def _check_conservation(q, deco):
    areas = sum(c.quad.area for c in deco.components)
    perims = sum(c.quad.perimeter for c in deco.components)
    if areas != q.area or perims != q.perimeter:
        raise AssertionError(
            f"decomposition not conservative: areas {areas}/{q.area}, "
            f"perimeters {perims}/{q.perimeter}"
        )
    for c in deco.components:
        if not c.quad.simple:
            raise AssertionError("component boundary not simple")


@dataclass
class CoreResult:
    """Either the core component (re-rooted, pointed at rho) or the cemetery."""

    core: PointedBoundaryQuad | None
    q_vertex_of_core: np.ndarray | None

    @property
    def is_cemetery(self) -> bool:
        return self.core is None

    @property
    def area(self) -> int:
        return 0 if self.core is None else self.core.area

    @property
    def perimeter(self) -> int:
        return 0 if self.core is None else self.core.perimeter


_CEMETERY_RESULT = CoreResult(None, None)


def core(q: PointedBoundaryQuad) -> CoreResult:
    """Unique largest component containing rho, else the cemetery value."""
    deco = decompose(q)
    sizes = deco.sizes
    best = max(sizes)
    if sizes.count(best) != 1:
        return _CEMETERY_RESULT
    comp = deco.components[sizes.index(best)]
    where = np.flatnonzero(comp.q_vertex_of_piece == q.rho)
    if len(where) != 1:
        return _CEMETERY_RESULT
    piece = comp.quad
    out = PointedBoundaryQuad(piece.map, rho=int(where[0]))
    return CoreResult(out, comp.q_vertex_of_piece)


def core_statistics(n: int, alpha: float, replicates: int, rng) -> dict:
    """Monte Carlo summary of core area/perimeter ratios for Q*_{n,3p_n}."""
    p_n = perimeter_sequence(n, alpha)
    area_ratios, perim_ratios = [], []
    n_cem = 0
    for _ in range(replicates):
        ltb = sample_treed_bridge(3 * p_n, n, rng)
        enc = encode_quadrangulation(ltb)
        res = core(enc.quad)
        if res.is_cemetery:
            n_cem += 1
            continue
        area_ratios.append(res.area / n)
        perim_ratios.append(res.perimeter / p_n)
    out = {
        "n": n,
        "alpha": alpha,
        "replicates": replicates,
        "frac_cemetery": n_cem / replicates,
    }
    for name, vals in (("area_ratio", area_ratios), ("perim_ratio", perim_ratios)):
        arr = np.asarray(vals)
        if len(arr) == 0:
            out[f"mean_{name}"] = math.nan
            out[f"se_{name}"] = math.nan
            out[f"quantiles_{name}"] = [math.nan] * 3
        else:
            out[f"mean_{name}"] = float(arr.mean())
            out[f"se_{name}"] = float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else 0.0
            out[f"quantiles_{name}"] = [float(x) for x in np.quantile(arr, [0.1, 0.5, 0.9])]
    return out


CORE_STATS_CSV_HEADER = (
    "n,alpha,seed,replicates,frac_cemetery,mean_area_ratio,se_area_ratio,"
    "mean_perim_ratio,se_perim_ratio"
)


def core_statistics_csv_row(stats: dict, seed: int) -> str:
    return (
        f"{stats['n']},{stats['alpha']:.10g},{seed},{stats['replicates']},"
        f"{stats['frac_cemetery']:.10g},{stats['mean_area_ratio']:.10g},"
        f"{stats['se_area_ratio']:.10g},{stats['mean_perim_ratio']:.10g},"
        f"{stats['se_perim_ratio']:.10g}"
    )
