import numpy as np
import pytest

from quadmaps.encoder import sample_treed_bridge
from quadmaps.bijection import encode_quadrangulation
from quadmaps.errors import Disconnected, MalformedPermutation
from quadmaps.planemap import PlaneMap, PointedBoundaryQuad, build_map, one_edge_map

I = np.int64


def four_cycle():
    twin = np.array([1, 0, 3, 2, 5, 4, 7, 6], dtype=I)
    sigma = np.empty(8, dtype=I)
    for v in range(4):
        sigma[2 * v] = 2 * ((v - 1) % 4) + 1
        sigma[2 * ((v - 1) % 4) + 1] = 2 * v
    return build_map(twin, sigma, 0)


def test_one_edge_map():
    m = one_edge_map()
    assert (m.n_vertices, m.n_edges, m.n_faces) == (2, 1, 1)
    assert m.euler_characteristic() == 2
    assert sorted(m.graph_distances(0).tolist()) == [0, 1]


def test_four_cycle():
    m = four_cycle()
    assert (m.n_vertices, m.n_edges, m.n_faces) == (4, 4, 2)
    assert sorted(m.face_degrees().tolist()) == [4, 4]
    assert sorted(m.graph_distances(m.vertex_of_half[0]).tolist()) == [0, 1, 1, 2]


def test_build_map_errors():
    with pytest.raises(MalformedPermutation):
        build_map([0, 1], [1, 0], 0)  # twin has fixed points
    with pytest.raises(MalformedPermutation):
        build_map([1, 0], [0, 0], 0)  # sigma not a bijection
    # two disjoint edges: involution on 4 halves with no connecting rotation
    with pytest.raises(Disconnected):
        build_map([1, 0, 3, 2], [0, 1, 2, 3], 0)


def test_distance_properties(rng):
    for _ in range(30):
        p = 2 * int(rng.integers(1, 7))
        m = int(rng.integers(0, 15))
        q = encode_quadrangulation(sample_treed_bridge(p, m, rng)).quad
        g = q.map
        src = int(rng.integers(g.n_vertices))
        d = g.graph_distances(src)
        assert d[src] == 0 and d.min() == 0
        heads = g.vertex_of_half[g.twin]
        assert np.all(np.abs(d[g.vertex_of_half] - d[heads]) <= 1)
        # triangle inequality on sampled triples
        for _ in range(5):
            a, b = rng.integers(g.n_vertices, size=2)
            da, db = g.graph_distances(int(a)), g.graph_distances(int(b))
            assert np.all(da <= da[b] + db)


def test_canonical_code_relabel_invariance(rng):
    for _ in range(25):
        p = 2 * int(rng.integers(1, 6))
        m = int(rng.integers(0, 10))
        q = encode_quadrangulation(sample_treed_bridge(p, m, rng)).quad
        g = q.map
        code = g.canonical_code()
        pcode = q.canonical_code()
        perm = rng.permutation(len(g.twin))
        relabeled = g.relabeled(perm)
        assert relabeled.canonical_code() == code
        rq = PointedBoundaryQuad(relabeled)
        assert rq.canonical_code() == pcode


def test_canonical_code_distinguishes():
    assert one_edge_map().canonical_code() != four_cycle().canonical_code()


def test_serialization_roundtrip(rng):
    for _ in range(15):
        p = 2 * int(rng.integers(1, 6))
        m = int(rng.integers(0, 10))
        q = encode_quadrangulation(sample_treed_bridge(p, m, rng)).quad
        text = q.map.serialize()
        back = PlaneMap.parse(text)
        assert back.serialize() == text
        assert back.canonical_code() == q.map.canonical_code()
        assert back.point == q.map.point


def test_boundary_walk():
    m = one_edge_map()
    q = PointedBoundaryQuad(m, rho=0)
    walk, simple = q.boundary_walk()
    assert len(walk) == 2 and simple
    assert {r.vertex for r in walk} == {0, 1}


def test_boundary_walk_pinch(rng):
    # find a non-simple boundary instance; its walk revisits a vertex
    hits = 0
    for _ in range(300):
        p = 2 * int(rng.integers(2, 5))
        m = int(rng.integers(1, 8))
        q = encode_quadrangulation(sample_treed_bridge(p, m, rng)).quad
        walk, simple = q.boundary_walk()
        assert len(walk) == q.perimeter
        verts = [r.vertex for r in walk]
        assert simple == (len(set(verts)) == len(verts))
        hits += not simple
    assert hits > 0


def test_vertex_count_identity(rng):
    for _ in range(40):
        p = 2 * int(rng.integers(1, 8))
        m = int(rng.integers(0, 20))
        q = encode_quadrangulation(sample_treed_bridge(p, m, rng)).quad
        assert q.map.n_vertices == q.area + q.perimeter // 2 + 1


def test_mirror_is_valid(rng):
    for _ in range(10):
        p = 2 * int(rng.integers(1, 5))
        m = int(rng.integers(0, 8))
        q = encode_quadrangulation(sample_treed_bridge(p, m, rng)).quad
        mm = q.map.mirror()
        mq = PointedBoundaryQuad(mm)
        assert mq.area == q.area and mq.perimeter == q.perimeter
