import math
from fractions import Fraction

import numpy as np
import pytest

from quadmaps.counting import (
    asymptotic_ratio,
    count_simple,
    gw_derivative_at_one,
    gw_first_passage_simulation,
    gw_generating_function,
    log_count_exact,
    pointed_count_simple,
    ratio_bound_check,
    restriction_probability,
)
from quadmaps.errors import PreconditionViolated, ZeroDenominator


FROZEN_COUNTS = {
    # cross-checked against brute-force enumeration (test_oracle)
    (0, 2): 1,
    (1, 2): 2,
    (1, 4): 1,
    (2, 2): 9,
    (2, 4): 10,
    (2, 6): 3,
    (3, 2): 54,
    (3, 4): 90,
    (3, 6): 56,
    (0, 4): 0,
    (0, 6): 0,
    (1, 6): 0,
}


def test_count_simple_values():
    for (m, p), want in FROZEN_COUNTS.items():
        assert count_simple(m, p) == want
    assert count_simple(5, 3) == 0  # odd perimeter
    assert count_simple(-1, 2) == 0


def test_count_integrality_sweep():
    for m in range(1, 40):
        for ell in range(1, m + 2):
            count_simple(m, 2 * ell)  # raises NonIntegralProduct on failure


def test_pointed_counts():
    assert pointed_count_simple(0, 2) == 2
    assert pointed_count_simple(1, 2) == 6
    assert pointed_count_simple(1, 4) == 4


def test_log_count_matches_exact():
    for m, ell in ((5, 2), (30, 4), (100, 7)):
        exact = math.log(count_simple(m, 2 * ell))
        assert abs(log_count_exact(m, ell) - exact) < 1e-9


def test_asymptotic_tolerances():
    assert abs(asymptotic_ratio(10**4, 100) - 1) <= 0.02
    assert abs(asymptotic_ratio(10**6, 1000) - 1) <= 0.005
    errs = [abs(asymptotic_ratio(m, math.isqrt(m)) - 1) for m in (10**3, 10**4, 10**5, 10**6)]
    assert all(errs[i] > errs[i + 1] for i in range(len(errs) - 1))


def test_restriction_probability_zero_cases():
    # indicator violated
    assert restriction_probability(1, 4, 1, 10, 5, 12, 8, 0.1) == 0
    # numerator count zero when the filler area would be negative
    assert restriction_probability(6, 4, 1, 2, 5, 12, 8, 0.1) == 0
    with pytest.raises(PreconditionViolated):
        restriction_probability(1, 4, 1, 2, 5, 4, 10**4, 0.1)


def test_ratio_bound_identity_and_nearby():
    assert ratio_bound_check(50, 20, 3, 10**5, 632, 10**5, 632) == 1.0
    r = ratio_bound_check(50, 20, 3, 10**5, 632, 101000, 638)
    assert abs(r - 1.0) <= 0.1
    far = ratio_bound_check(50, 20, 3, 10**5, 632, 2 * 10**5, 632)
    assert far > 0  # out-of-hypothesis: reported, no closeness asserted
    with pytest.raises(ZeroDenominator):
        ratio_bound_check(50, 60, 1, 10**5, 632, 40, 70)


def test_gw_generating_function_shape():
    xs = np.linspace(0, 0.999, 50)
    for gap in (0, 1, 5):
        vals = [gw_generating_function(gap, 0, float(x)) for x in xs]
        assert all(v <= 1.0 for v in vals)
        assert all(vals[i] <= vals[i + 1] + 1e-12 for i in range(len(vals) - 1))
    assert gw_generating_function(3, 3, 1.0) == 1.0
    with pytest.raises(ValueError):
        gw_generating_function(1, 0, 1.5)


def test_gw_derivative_at_one():
    for gap in (0, 1, 5, 50):
        assert abs(gw_derivative_at_one(gap) - 1.0) <= 1e-3


def test_gw_zero_probability_matches_f0():
    # f(0) is the probability of no first-passage vertex
    gap = 1
    f0 = gw_generating_function(gap, 0, 0.0)
    N = 20000
    sim = gw_first_passage_simulation(gap, N, np.random.default_rng(424242))
    phat = float((sim["counts"] == 0).mean())
    se = math.sqrt(f0 * (1 - f0) / N)
    assert abs(phat - f0) <= 3 * se


def test_gw_mean_small(rng):
    res = gw_first_passage_simulation(0, 100, rng)
    assert res["mean"] == 1.0 and res["se"] == 0.0
    res = gw_first_passage_simulation(1, 20000, rng)
    assert abs(res["mean"] - 1.0) <= 3 * res["se"]
    assert res["discard_rate"] < 1e-4
