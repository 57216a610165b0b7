import numpy as np
import pytest

from quadmaps.bijection import encode_quadrangulation
from quadmaps.cli import _simple_boundary_sampler
from quadmaps.coredec import core
from quadmaps.counting import restriction_probability
from quadmaps.encoder import sample_treed_bridge
from quadmaps.errors import CemeteryInput, PerimeterMismatch, PreconditionViolated
from quadmaps.oracle import iter_treed_bridges, make_ltb
from quadmaps.planemap import one_edge_map, PointedBoundaryQuad
from quadmaps.restriction import (
    RESTRICTION_CEMETERY,
    ball,
    certificate_sets,
    check_bounds,
    complement_reglue,
    correspondence_distortion,
    is_good,
    restrict,
    restrict_reversed,
)
from quadmaps.scales import perimeter_sequence


def pipeline(rng, n, eps, want=1, alpha=1.0):
    """Yield (enc, core_result, outcome) tuples for non-cemetery runs."""
    p_n = perimeter_sequence(n, alpha)
    out = []
    for _ in range(4000):
        ltb = sample_treed_bridge(3 * p_n, n, rng)
        enc = encode_quadrangulation(ltb)
        cr = core(enc.quad)
        if cr.is_cemetery or cr.perimeter < p_n / 2:
            continue
        res = restrict(cr.core, n, eps, p_n=p_n)
        if res.is_cemetery:
            continue
        out.append((enc, cr, res))
        if len(out) == want:
            return out
    raise AssertionError("pipeline failed to produce instances")


def test_ball_basics(rng):
    q = encode_quadrangulation(sample_treed_bridge(6, 12, rng)).quad
    assert ball(q, 0) == set()
    ecc = int(q.map.graph_distances(q.rho).max())
    everything = ball(q, ecc + 1)
    assert len(everything) == q.area
    prev = set()
    for ell in range(ecc + 2):
        cur = ball(q, ell)
        assert prev <= cur
        prev = cur


def test_restrict_preconditions(rng):
    q = encode_quadrangulation(sample_treed_bridge(4, 3, rng)).quad
    with pytest.raises(PreconditionViolated):
        restrict(q, 10, 0.4)  # eps >= 1/3
    with pytest.raises(PreconditionViolated):
        restrict(q, 10**4, 0.1)  # perimeter 4 < p_n / 2


def test_edge_map_restriction_is_cemetery():
    q = PointedBoundaryQuad(one_edge_map(point_at_head=True))
    assert restrict(q, 1, 0.1) is RESTRICTION_CEMETERY


def test_bookkeeping_invariants(rng):
    for enc, cr, out in pipeline(rng, 150, 0.1, want=25):
        assert out.restriction.perimeter == out.p_right + out.p_in + out.p_left
        assert out.restriction.area + out.complement.area == cr.core.area
        p_n = perimeter_sequence(150, 1.0)
        lo = int((1 / 3 - 0.1) * p_n)
        assert lo <= out.p_right <= p_n // 3
        assert out.p_in >= 1 and out.p_left >= 1
        # marks at distance r or r+1, alternation checked at build time
        d = cr.core.map.graph_distances(cr.core.rho)
        assert d[out.rest_q_vertex[out.vminus_rest]] in (out.r, out.r + 1)
        assert d[out.rest_q_vertex[out.vplus_rest]] in (out.r, out.r + 1)


def test_complete_case_identity(rng):
    # tiny maps where the ball swallows everything: restriction == q
    found = 0
    for _ in range(4000):
        enc = _simple_boundary_sampler(3, 4, rng)
        out = restrict(enc.quad, 2, 0.05)
        if out.is_cemetery or not out.complete:
            continue
        found += 1
        assert out.restriction.map is enc.quad.map
        assert out.complement.area == 0 and out.complement.perimeter == 2
        # regluing the one-edge complement is the identity
        q2 = complement_reglue(out, out.complement)
        assert q2.map.canonical_code(marks=(q2.rho,)) == enc.quad.map.canonical_code(
            marks=(enc.quad.rho,)
        )
        if found >= 5:
            break
    assert found > 0


def test_reglue_reconstruction(rng):
    for enc, cr, out in pipeline(rng, 200, 0.12, want=20):
        q2 = complement_reglue(out, out.complement)
        assert q2.map.canonical_code(marks=(q2.rho,)) == cr.core.map.canonical_code(
            marks=(cr.core.rho,)
        )


def test_reglue_independence(rng):
    done = 0
    for enc, cr, out in pipeline(rng, 200, 0.12, want=30):
        if not 0 < out.complement.area <= 12:
            continue
        filler = _simple_boundary_sampler(
            out.complement.area, out.complement.perimeter, rng
        ).quad
        q3 = complement_reglue(out, filler)
        out3 = restrict(q3, 200, 0.12)
        assert not out3.is_cemetery
        assert out3.marked_code() == out.marked_code()
        done += 1
        if done >= 5:
            return
    assert done >= 3


def test_reglue_perimeter_mismatch(rng):
    for enc, cr, out in pipeline(rng, 150, 0.12, want=20):
        if out.p_in >= 2:
            with pytest.raises(PerimeterMismatch):
                complement_reglue(out, PointedBoundaryQuad(one_edge_map()))
            return
    raise AssertionError("no instance with p_in >= 2 found")


def test_monotone_consistency(rng):
    # eta < eps and equal eta-restrictions imply equal eps-restrictions:
    # build pairs through regluing at level eta
    eta, eps = 0.05, 0.25
    n = 120
    done = 0
    p_n = perimeter_sequence(n, 1.0)
    for enc, cr, out_eta in pipeline(rng, n, eta, want=30):
        if not 0 < out_eta.complement.area <= 12:
            continue
        filler = _simple_boundary_sampler(
            out_eta.complement.area, out_eta.complement.perimeter, rng
        ).quad
        q2 = complement_reglue(out_eta, filler)
        assert restrict(q2, n, eta, p_n=p_n).marked_code() == out_eta.marked_code()
        a = restrict(cr.core, n, eps, p_n=p_n)
        b = restrict(q2, n, eps, p_n=p_n)
        assert a.marked_code() == b.marked_code()
        done += 1
        if done >= 5:
            return
    assert done >= 3


def test_reversed_restriction(rng):
    # cemetery propagation + complement disjointness frequency
    n = 150
    p_n = perimeter_sequence(n, 1.0)
    both = disjoint = 0
    for _ in range(400):
        ltb = sample_treed_bridge(3 * p_n, n, rng)
        enc = encode_quadrangulation(ltb)
        cr = core(enc.quad)
        if cr.is_cemetery or cr.perimeter < p_n / 2:
            continue
        a = restrict(cr.core, n, 0.1, p_n=p_n)
        b = restrict_reversed(cr.core, n, 0.1, p_n=p_n)
        if a.is_cemetery or b.is_cemetery:
            continue
        both += 1
        if not ({int(x) for x in a.comp_q_vertex} & {int(x) for x in b.comp_q_vertex}):
            disjoint += 1
    assert both > 20
    assert 0 < disjoint


def test_reversed_on_mirror_symmetric_map():
    # the single quadrangle is mirror-symmetric: both operators give a
    # restriction with mirrored parameters
    from quadmaps.oracle import iter_treed_bridges

    q = None
    for cand in iter_treed_bridges(4, 1):
        e = encode_quadrangulation(cand)
        if e.quad.simple:
            q = e.quad
            break
    assert q is not None
    a = restrict(q, 2, 0.05)
    b = restrict_reversed(q, 2, 0.05)
    if not a.is_cemetery and not b.is_cemetery:
        assert (a.p_right, a.p_in, a.p_left) == (b.p_right, b.p_in, b.p_left)
        assert a.r == b.r


def test_is_good_boundary_cases(rng):
    (enc, cr, out), = pipeline(rng, 100, 0.1, want=1)
    n, eps = 100, 0.1
    p_n = perimeter_sequence(n, 1.0)
    with pytest.raises(PreconditionViolated):
        is_good(out, n, 0.2, eps, p_n=p_n)  # delta >= eps
    with pytest.raises(CemeteryInput):
        is_good(RESTRICTION_CEMETERY, n, 0.05, eps, p_n=p_n)

    class Fake:
        is_cemetery = False

        def __init__(self, pr, pi, pl, area):
            self.p_right = pr
            self.p_in = pi
            self.p_left = pl
            self.restriction = type("R", (), {"area": area})()

    delta = 0.05
    import math

    pr_hi = math.floor((1 / 3 - delta) * p_n)
    pl_hi = math.floor((2 / 3 - delta) * p_n)
    a_hi = math.floor((1 - delta) * n)
    pin_hi = math.floor(math.sqrt(n) / delta)
    good = Fake(pr_hi, pin_hi, pl_hi, a_hi)
    assert is_good(good, n, delta, eps, p_n=p_n)  # closed upper bounds
    assert not is_good(Fake(pr_hi, pin_hi + 1, pl_hi, a_hi), n, delta, eps, p_n=p_n)
    assert not is_good(Fake(pr_hi, pin_hi, pl_hi, n // 2 - 1), n, delta, eps, p_n=p_n)


def test_certificates_and_bounds(rng):
    checked = 0
    for enc, cr, out in pipeline(rng, 200, 0.1, want=30):
        certs = certificate_sets(enc, cr, out)
        assert certs.S_ge <= certs.S and certs.S_eq <= certs.S
        assert certs.M_low <= certs.M_high
        rep = check_bounds(enc, cr, out, certs)
        assert rep.volume_sandwich and rep.pin_bound and rep.gh_bound
        assert rep.s_ge_disjoint and rep.all_but_two_in_s
        assert rep.distortion <= rep.gh_cap
        checked += 1
    assert checked == 30


def test_h_identity_when_rho_off_interval(rng):
    for enc, cr, out in pipeline(rng, 300, 0.1, want=15):
        certs = certificate_sets(enc, cr, out)
        walk, _ = cr.core.boundary_walk()
        rho_on_interval = any(
            walk[i].vertex == cr.core.rho
            for i in range(out.interval_lo, out.interval_hi + 1)
        )
        if not rho_on_interval:
            assert certs.h == certs.h_from_J_window
            assert certs.h in (out.r, out.r + 1)


def test_volume_negative_control(rng):
    # dropping vertices from S can break the volume sandwich
    (enc, cr, out), = pipeline(rng, 200, 0.1, want=1)
    certs = certificate_sets(enc, cr, out)
    if len(certs.S) > 2:
        corrupted = set(list(certs.S)[: max(0, out.complement.map.n_vertices - 3)])
        lower_ok = cr.core.area - len(corrupted) <= out.restriction.area
        full_ok = cr.core.area - len(certs.S) <= out.restriction.area
        assert full_ok
        # the corrupted set is allowed to fail (negative control, not always)
        assert lower_ok in (True, False)


def test_correspondence_distortion_basics(rng):
    q = encode_quadrangulation(sample_treed_bridge(4, 5, rng)).quad
    n = q.map.n_vertices
    pairs = [(v, v) for v in range(n)]
    assert correspondence_distortion(q.map, q.map, pairs) == 0
    em = one_edge_map()
    pairs = [(v, 0) for v in range(n)] + [(0, 1)]
    assert correspondence_distortion(q.map, em, pairs) >= 1
    from quadmaps.errors import NotACorrespondence

    with pytest.raises(NotACorrespondence):
        correspondence_distortion(q.map, em, [(0, 0)])


def test_restriction_law_exact_tiny():
    # every attainable outcome at (n', p') = (2, 4) occurs with exactly the
    # predicted frequency; the deficit is the cemetery mass
    from fractions import Fraction

    nprime, pprime, n_res, eps = 2, 4, 2, 0.05
    outcomes = {}
    total = 0
    cem = 0
    for ltb in iter_treed_bridges(pprime, nprime):
        enc = encode_quadrangulation(ltb)
        if not enc.quad.simple:
            continue
        total += 1
        out = restrict(enc.quad, n_res, eps)
        if out.is_cemetery:
            cem += 1
            continue
        key = out.marked_code()
        params = (out.restriction.area, out.restriction.perimeter, out.p_in, out.p_left)
        if key in outcomes:
            outcomes[key][0] += 1
            assert outcomes[key][1] == params
        else:
            outcomes[key] = [1, params]
    assert total == 50  # (2 + 2 + 1) * 10 pointed simple maps
    mass = Fraction(0)
    for count, (ar, per, p_in, p_left) in outcomes.values():
        prob = restriction_probability(ar, per, p_in, p_left, nprime, pprime, n_res, eps)
        assert Fraction(count, total) == prob
        mass += prob
    assert mass + Fraction(cem, total) == 1
