import numpy as np
import pytest

from quadmaps.bijection import encode_quadrangulation
from quadmaps.counting import count_simple
from quadmaps.encoder import sample_treed_bridge
from quadmaps.errors import EmptySample, UniverseTooLarge, UnknownCode
from quadmaps.oracle import (
    chi_square_uniformity,
    empirical_tv,
    enumerate_boundary_quads,
    universe_size,
)


def test_enumeration_counts():
    # general-boundary pointed totals and simple filters, tiny cases
    t = enumerate_boundary_quads(0, 2)
    assert len(t.codes) == 1 and t.total_pointed == 2
    t = enumerate_boundary_quads(1, 2, simple_only=True)
    assert len(t.codes) == count_simple(1, 2) == 2
    t = enumerate_boundary_quads(1, 4, simple_only=True)
    assert len(t.codes) == count_simple(1, 4) == 1


def test_enumeration_matches_formula_small():
    for n in range(3):
        for p in (2, 4):
            t = enumerate_boundary_quads(n, p, simple_only=True)
            assert len(t.codes) == count_simple(n, p)
            V = n + p // 2 + 1
            assert all(m == V for m in t.multiplicities)


def test_universe_guard():
    with pytest.raises(UniverseTooLarge):
        enumerate_boundary_quads(12, 10)


def test_universe_cache_roundtrip(tmp_path):
    a = enumerate_boundary_quads(1, 4, simple_only=True, cache_dir=tmp_path)
    b = enumerate_boundary_quads(1, 4, simple_only=True, cache_dir=tmp_path)
    assert a.codes == b.codes and a.multiplicities == b.multiplicities
    assert list(tmp_path.glob("universe_*.txt"))


def test_chi_square_null_calibration(rng):
    # sampling uniformly from the universe itself should not reject
    table = enumerate_boundary_quads(1, 4)
    k = len(table.codes)
    rejections = 0
    runs = 40
    for s in range(runs):
        r = np.random.default_rng(1000 + s)
        samples = [table.codes[i] for i in r.integers(k, size=100 * k)]
        _, p = chi_square_uniformity(samples, table)
        rejections += p <= 1e-3
    assert rejections <= 1


def test_chi_square_power(rng):
    # doubling the weight of one code must be detected at 1e-3
    table = enumerate_boundary_quads(1, 2)  # 2 codes
    k = len(table.codes)
    weights = np.ones(k)
    weights[0] = 2
    weights /= weights.sum()
    r = np.random.default_rng(5)
    samples = [table.codes[i] for i in r.choice(k, size=6000, p=weights)]
    _, p = chi_square_uniformity(samples, table)
    assert p < 1e-3


def test_chi_square_through_bijection(rng):
    # sampler pushed through the construction is uniform on pointed codes
    from quadmaps.oracle import iter_treed_bridges

    pointed = sorted(
        encode_quadrangulation(ltb).quad.canonical_code()
        for ltb in iter_treed_bridges(2, 1)
    )
    from quadmaps.oracle import UniverseTable

    table = UniverseTable(1, 2, False, pointed, [1] * len(pointed))
    samples = []
    for _ in range(6000):
        q = encode_quadrangulation(sample_treed_bridge(2, 1, rng)).quad
        samples.append(q.canonical_code())
    _, p = chi_square_uniformity(samples, table)
    assert p > 1e-3


def test_chi_square_unknown_code():
    table = enumerate_boundary_quads(0, 2)
    with pytest.raises(UnknownCode):
        chi_square_uniformity([b"nonsense"], table)


def test_empirical_tv_properties(rng):
    a = [b"x"] * 50 + [b"y"] * 50
    b = list(a)
    assert empirical_tv(a, b)[0] == 0
    c = [b"z"] * 100
    assert empirical_tv(a, c)[0] == 1
    d = [b"x"] * 80 + [b"z"] * 20
    tab = empirical_tv(a, d)[0]
    assert empirical_tv(a, c)[0] <= empirical_tv(a, d)[0] + empirical_tv(d, c)[0]
    assert empirical_tv(a, d)[0] == empirical_tv(d, a)[0]
    with pytest.raises(EmptySample):
        empirical_tv([], a)
    pt, ci = empirical_tv(a, d, bootstrap=50, rng=rng)
    assert ci[0] <= pt <= ci[1] or abs(pt - ci[0]) < 0.15


def test_universe_size_formula():
    assert universe_size(2, 1) == 6
    assert universe_size(4, 2) == 270
    assert universe_size(6, 3) == 15120
