"""Rooted combinatorial maps as half-edge permutation pairs.

A map is stored as two permutations on half-edge ids: ``twin`` (a
fixed-point-free involution pairing the two halves of each edge) and
``next_at_vertex`` (the rotation system; counterclockwise order of
half-edges around their origin vertex).  Vertices are the orbits of
``next_at_vertex`` and faces are the orbits of h -> next_at_vertex[twin[h]];
with this convention a face lies on the left of every half-edge in its
orbit, so the oriented edges *incident* to a face (face on the right) are
the twins of its orbit.

The module also provides generic face-subset extraction and boundary-path
gluing, which the core decomposition and the restriction operators build on.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph

from . import kernels
from .errors import Disconnected, MalformedPermutation, NonPlanar, QuadmapsError

_I64 = np.int64


def _as_perm(arr, name: str) -> np.ndarray:
    a = np.asarray(arr, dtype=_I64)
    if a.ndim != 1:
        raise MalformedPermutation(f"{name} must be one-dimensional")
    n = len(a)
    if n == 0 or n % 2:
        raise MalformedPermutation(f"{name} must have positive even length, got {n}")
    if a.min(initial=0) < 0 or a.max(initial=-1) >= n:
        raise MalformedPermutation(f"{name} has out-of-range entries")
    if np.bincount(a, minlength=n).max() != 1:
        raise MalformedPermutation(f"{name} is not a bijection")
    return a


class PlaneMap:
    """Immutable rooted map on the sphere; validated at construction."""

    __slots__ = (
        "twin",
        "next_at_vertex",
        "root",
        "point",
        "vertex_of_half",
        "n_vertices",
        "face_of_half",
        "n_faces",
        "vertex_tags",
        "_csr",
        "_sigma_inv",
    )

    def __init__(self, twin, next_at_vertex, root, point=None, vertex_tags=None):
        twin = _as_perm(twin, "twin")
        sigma = _as_perm(next_at_vertex, "next_at_vertex")
        n = len(twin)
        if len(sigma) != n:
            raise MalformedPermutation("twin and next_at_vertex lengths differ")
        if np.any(twin[twin] != np.arange(n)):
            raise MalformedPermutation("twin is not an involution")
        if np.any(twin == np.arange(n)):
            raise MalformedPermutation("twin has a fixed point")
        root = int(root)
        if not 0 <= root < n:
            raise MalformedPermutation("root out of range")

        self.twin = twin
        self.next_at_vertex = sigma
        self.root = root
        self.vertex_of_half, self.n_vertices = kernels.orbit_labels(sigma)
        self.face_of_half, self.n_faces = kernels.orbit_labels(sigma[twin])
        self._check_connected()
        if self.euler_characteristic() != 2:
            raise NonPlanar(
                f"V-E+F = {self.euler_characteristic()}, expected 2 (sphere embedding)"
            )
        if point is not None:
            point = int(point)
            if not 0 <= point < self.n_vertices:
                raise QuadmapsError("point vertex id out of range")
        self.point = point
        self.vertex_tags = None if vertex_tags is None else np.asarray(vertex_tags, dtype=_I64)
        self._csr = None
        self._sigma_inv = None

    def _check_connected(self):
        n = len(self.twin)
        rows = np.concatenate([np.arange(n), np.arange(n)])
        cols = np.concatenate([self.twin, self.next_at_vertex])
        g = sp.csr_matrix((np.ones(2 * n, dtype=np.int8), (rows, cols)), shape=(n, n))
        count, _ = csgraph.connected_components(g, directed=True, connection="weak")
        if count != 1:
            raise Disconnected(f"{count} connected components")

    # -- basic quantities -------------------------------------------------

    @property
    def half_edge_count(self) -> int:
        return len(self.twin)

    @property
    def n_edges(self) -> int:
        return len(self.twin) // 2

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def face_degrees(self) -> np.ndarray:
        return np.bincount(self.face_of_half, minlength=self.n_faces)

    def sigma_inv(self) -> np.ndarray:
        if self._sigma_inv is None:
            inv = np.empty_like(self.next_at_vertex)
            inv[self.next_at_vertex] = np.arange(len(inv))
            self._sigma_inv = inv
        return self._sigma_inv

    # -- metric ------------------------------------------------------------

    def adjacency_csr(self):
        """(indptr, indices) over vertices; parallel edges kept as-is."""
        if self._csr is None:
            tails = self.vertex_of_half
            heads = self.vertex_of_half[self.twin]
            order = np.argsort(tails, kind="stable")
            indices = heads[order].astype(_I64)
            indptr = np.zeros(self.n_vertices + 1, dtype=_I64)
            np.cumsum(np.bincount(tails, minlength=self.n_vertices), out=indptr[1:])
            self._csr = (indptr, indices)
        return self._csr

    def graph_distances(self, source: int) -> np.ndarray:
        """BFS distances from a vertex, indexed by vertex id."""
        if not 0 <= source < self.n_vertices:
            raise QuadmapsError("source vertex out of range")
        indptr, indices = self.adjacency_csr()
        return kernels.bfs_distances(indptr, indices, int(source))

    # -- isomorphism codes ---------------------------------------------------

    def canonical_code(self, marks: tuple = ()) -> bytes:
        """Deterministic BFS relabeling code from the root half-edge.

        Two rooted maps have equal codes iff they are root-preserving
        isomorphic; ``marks`` (vertex ids, e.g. the point) are appended as
        first-visit ranks so marked maps compare as marked objects.
        """
        n = len(self.twin)
        sigma = self.next_at_vertex
        twin = self.twin
        rank = np.full(n, -1, dtype=_I64)
        order = np.empty(n, dtype=_I64)
        rank[self.root] = 0
        order[0] = self.root
        filled = 1
        head = 0
        while head < filled:
            h = order[head]
            head += 1
            for nb in (sigma[h], twin[h]):
                if rank[nb] < 0:
                    rank[nb] = filled
                    order[filled] = nb
                    filled += 1
        word = np.empty(2 * n + len(marks) + 1, dtype=_I64)
        word[0] = n
        word[1 : 2 * n : 2] = rank[sigma[order]]
        word[2 : 2 * n + 1 : 2] = rank[twin[order]]
        for i, v in enumerate(marks):
            halves = np.flatnonzero(self.vertex_of_half == v)
            word[2 * n + 1 + i] = rank[halves].min()
        return struct.pack("<i", len(marks)) + word.astype("<i8").tobytes()

    def relabeled(self, perm) -> "PlaneMap":
        """Same map with half-edge ids permuted by ``perm`` (id h -> perm[h])."""
        perm = np.asarray(perm, dtype=_I64)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        twin = perm[self.twin[inv]]
        sigma = perm[self.next_at_vertex[inv]]
        point = None
        tags = None
        if self.point is not None or self.vertex_tags is not None:
            # vertex ids change with relabeling; carry marks via a half-edge
            m = PlaneMap(twin, sigma, int(perm[self.root]))
            if self.point is not None:
                h = int(np.flatnonzero(self.vertex_of_half == self.point)[0])
                m.point = int(m.vertex_of_half[perm[h]])
            if self.vertex_tags is not None:
                tags = np.empty(m.n_vertices, dtype=_I64)
                tags[m.vertex_of_half[perm]] = self.vertex_tags[self.vertex_of_half]
                m.vertex_tags = tags
            return m
        return PlaneMap(twin, sigma, int(perm[self.root]), point, tags)

    def mirror(self) -> "PlaneMap":
        """Reflected map: rotations inverted, root reversed."""
        tags = None if self.vertex_tags is None else self.vertex_tags.copy()
        return PlaneMap(self.twin, self.sigma_inv(), int(self.twin[self.root]),
                        self.point, tags)

    # -- serialization -----------------------------------------------------

    def serialize(self) -> str:
        head = f"PLANEMAP v1 {len(self.twin)} {self.root}"
        if self.point is not None:
            head += f" {self.point}"
        lines = [head]
        lines += [f"twin {int(t)}" for t in self.twin]
        lines += [f"nextv {int(s)}" for s in self.next_at_vertex]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "PlaneMap":
        lines = text.strip().split("\n")
        head = lines[0].split()
        if head[:2] != ["PLANEMAP", "v1"]:
            raise QuadmapsError(f"bad header: {lines[0]!r}")
        n = int(head[2])
        root = int(head[3])
        point = int(head[4]) if len(head) > 4 else None
        if len(lines) != 1 + 2 * n:
            raise QuadmapsError("truncated PLANEMAP payload")
        twin = np.array([int(l.split()[1]) for l in lines[1 : 1 + n]], dtype=_I64)
        sigma = np.array([int(l.split()[1]) for l in lines[1 + n :]], dtype=_I64)
        return cls(twin, sigma, root, point)


def build_map(twin, next_at_vertex, root, point=None) -> PlaneMap:
    """Validated constructor; see PlaneMap."""
    return PlaneMap(twin, next_at_vertex, root, point)


def euler_characteristic(m: PlaneMap) -> int:
    return m.euler_characteristic()


def graph_distances(m: PlaneMap, source: int) -> np.ndarray:
    return m.graph_distances(source)


def canonical_code(m: PlaneMap, marks: tuple = ()) -> bytes:
    return m.canonical_code(marks)


def one_edge_map(point_at_head: bool = False) -> PlaneMap:
    """The map with one edge and two vertices (the only element of Q~_{0,2})."""
    twin = np.array([1, 0], dtype=_I64)
    sigma = np.array([0, 1], dtype=_I64)
    m = PlaneMap(twin, sigma, root=0)
    if point_at_head:
        m.point = int(m.vertex_of_half[1])
    return m


# ---------------------------------------------------------------------------
# pointed quadrangulations with a boundary


@dataclass
class CornerRecord:
    vertex: int
    half_edge: int


class PointedBoundaryQuad:
    """A PlaneMap whose faces are quadrangles except one external face.

    The root lies on the boundary with the external face to its right
    (i.e. the external face is the face of twin(root)); ``rho`` is the
    distinguished vertex of the pointing.
    """

    __slots__ = ("map", "external_face", "rho", "area", "perimeter", "_walk")

    def __init__(self, m: PlaneMap, rho=None):
        self.map = m
        self.external_face = int(m.face_of_half[m.twin[m.root]])
        degrees = m.face_degrees()
        inner = np.delete(degrees, self.external_face)
        if inner.size and not np.all(inner == 4):
            bad = int(inner[inner != 4][0])
            raise QuadmapsError(f"inner face of degree {bad} (expected 4)")
        self.rho = m.point if rho is None else int(rho)
        self.area = m.n_faces - 1
        self.perimeter = int(degrees[self.external_face])
        self._walk = None
        if m.n_vertices != self.area + self.perimeter // 2 + 1:
            raise QuadmapsError("vertex count violates V = area + perimeter/2 + 1")

    def boundary_walk(self):
        """Corners of the external face in contour order from the root tail.

        Returns (records, simple): one CornerRecord per boundary corner,
        starting at the origin of the root and following its orientation;
        ``simple`` is true iff the corners lie on distinct vertices.
        """
        if self._walk is None:
            m = self.map
            sigma_inv = m.sigma_inv()
            records = []
            e = m.root
            for _ in range(self.perimeter):
                records.append(CornerRecord(int(m.vertex_of_half[e]), int(e)))
                e = int(sigma_inv[m.twin[e]])
            if e != m.root:
                raise QuadmapsError("boundary walk did not close up")
            verts = [r.vertex for r in records]
            self._walk = (records, len(set(verts)) == len(verts))
        return self._walk

    @property
    def simple(self) -> bool:
        return self.boundary_walk()[1]

    def boundary_vertices(self) -> list:
        return [r.vertex for r in self.boundary_walk()[0]]

    def canonical_code(self, with_point: bool = True) -> bytes:
        marks = (self.rho,) if (with_point and self.rho is not None) else ()
        return self.map.canonical_code(marks)


def boundary_walk(q: PointedBoundaryQuad):
    return q.boundary_walk()


# ---------------------------------------------------------------------------
# face-subset extraction and boundary gluing


def extract_submap(m: PlaneMap, keep_face: np.ndarray, new_root: int,
                   point_vertex=None):
    """Standalone map made of the faces with keep_face[f] True.

    A half-edge survives iff either side of its edge is a kept face;
    rotations are the original ones restricted to surviving half-edges
    (duplicating pinch vertices is automatic since each piece occupies a
    contiguous rotation arc).  Returns (PlaneMap, old_vertex_of_new);
    tags are carried through from ``m`` when present.
    """
    keep_half = keep_face[m.face_of_half] | keep_face[m.face_of_half[m.twin]]
    if not keep_half[new_root]:
        raise QuadmapsError("requested root is not part of the extracted piece")
    new_id = np.cumsum(keep_half) - 1
    old_of_new = np.flatnonzero(keep_half)
    n_new = len(old_of_new)

    sigma = m.next_at_vertex
    sigma_new = np.empty(n_new, dtype=_I64)
    for i, h in enumerate(old_of_new):
        nxt = sigma[h]
        while not keep_half[nxt]:
            nxt = sigma[nxt]
        sigma_new[i] = new_id[nxt]
    twin_new = new_id[m.twin[old_of_new]]

    piece = PlaneMap(twin_new, sigma_new, int(new_id[new_root]))
    old_vertex_of_new = np.empty(piece.n_vertices, dtype=_I64)
    old_vertex_of_new[piece.vertex_of_half] = m.vertex_of_half[old_of_new]
    if m.vertex_tags is not None:
        piece.vertex_tags = m.vertex_tags[old_vertex_of_new]
    if point_vertex is not None:
        where = np.flatnonzero(old_vertex_of_new == point_vertex)
        if len(where) != 1:
            raise QuadmapsError("point vertex not uniquely present in the piece")
        piece.point = int(where[0])
    return piece, old_vertex_of_new


def glue_boundary(map_a: PlaneMap, seam_a, map_b: PlaneMap, seam_b):
    """Glue two maps along boundary paths traversed in opposite directions.

    ``seam_a``/``seam_b`` list boundary half-edges along each walk (the
    halves whose left face is internal); seam_a[j] is identified with the
    reverse of seam_b[len-1-j].  Both maps must have simple boundaries so
    that every seam vertex carries exactly one external corner; the merged
    rotation at a seam vertex is each map's rotation opened at that corner
    and concatenated.  Returns (PlaneMap, a_vertex_of_new, b_vertex_of_new)
    with root and point taken from map_a; the vertex arrays use -1 where a
    merged vertex has no preimage in that map.
    """
    seam_a = np.asarray(seam_a, dtype=_I64)
    seam_b = np.asarray(seam_b, dtype=_I64)
    if len(seam_a) != len(seam_b):
        raise QuadmapsError("seam length mismatch")
    L = len(seam_a)
    na, nb = len(map_a.twin), len(map_b.twin)
    off = na

    twin = np.concatenate([map_a.twin, off + map_b.twin])
    sigma = np.concatenate([map_a.next_at_vertex, off + map_b.next_at_vertex])
    drop = np.zeros(na + nb, dtype=bool)
    drop[map_a.twin[seam_a]] = True
    drop[off + map_b.twin[seam_b]] = True
    twin[seam_a] = off + seam_b[::-1]
    twin[off + seam_b] = seam_a[::-1]

    # cross-link the rotations of the L+1 merged vertex pairs at their
    # external corners (open each cycle before its external-orbit half and
    # continue into the other map)
    ext_a = map_a.face_of_half[map_a.twin[map_a.root]]
    ext_b = map_b.face_of_half[map_b.twin[map_b.root]]
    sigma_inv_a = map_a.sigma_inv()
    sigma_inv_b = map_b.sigma_inv()

    def external_half(m, ext, sigma_inv, vertex):
        halves = np.flatnonzero(
            (m.vertex_of_half == vertex) & (m.face_of_half == ext)
        )
        if len(halves) != 1:
            raise QuadmapsError("seam vertex without a unique external corner")
        return int(halves[0])

    for t in range(L + 1):
        ua = (map_a.vertex_of_half[seam_a[t]] if t < L
              else map_a.vertex_of_half[map_a.twin[seam_a[L - 1]]])
        ub = (map_b.vertex_of_half[map_b.twin[seam_b[L - 1 - t]]] if t < L
              else map_b.vertex_of_half[seam_b[0]])
        ha = external_half(map_a, ext_a, sigma_inv_a, int(ua))
        hb = external_half(map_b, ext_b, sigma_inv_b, int(ub))
        sigma[int(sigma_inv_a[ha])] = off + hb
        sigma[off + int(sigma_inv_b[hb])] = ha

    # skip dropped halves
    keep = ~drop
    for x in np.flatnonzero(keep):
        nxt = sigma[x]
        while drop[nxt]:
            nxt = sigma[nxt]
        sigma[x] = nxt

    new_id = np.cumsum(keep) - 1
    old_of_new = np.flatnonzero(keep)
    glued = PlaneMap(new_id[twin[old_of_new]], new_id[sigma[old_of_new]],
                     int(new_id[map_a.root]))

    a_vertex = np.full(glued.n_vertices, -1, dtype=_I64)
    b_vertex = np.full(glued.n_vertices, -1, dtype=_I64)
    from_a = old_of_new < off
    a_vertex[glued.vertex_of_half[from_a]] = map_a.vertex_of_half[old_of_new[from_a]]
    b_vertex[glued.vertex_of_half[~from_a]] = map_b.vertex_of_half[old_of_new[~from_a] - off]
    if map_a.point is not None:
        where = np.flatnonzero(a_vertex == map_a.point)
        glued.point = int(where[0])
    return glued, a_vertex, b_vertex
