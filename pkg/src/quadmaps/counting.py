"""Exact and asymptotic enumeration of simple-boundary quadrangulations,
the restriction law, and the critical Galton-Watson first-passage identity.

The closed count for n inner faces and perimeter 2l is

    3^-l (3l)! / (l! (2l-1)!) * 3^n (2n+l-1)! / ((n-l+1)! (n+2l)!)

for n, l >= 1, with the conventions that the one-edge map is the unique
(0,2) object and out-of-range parameters count 0.  Exact values use
arbitrary precision rationals with an integrality assertion; the large
scale goes through log-gamma.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    CemeteryInput,
    NonIntegralProduct,
    PreconditionViolated,
    ZeroDenominator,
)


@lru_cache(maxsize=65536)
def count_simple(m: int, two_ell: int) -> int:
    """Number of rooted quadrangulations with a simple boundary, m inner
    faces and perimeter ``two_ell`` (exact)."""
    if two_ell == 2 and m == 0:
        return 1
    if two_ell < 2 or two_ell % 2 or m < 0:
        return 0
    ell = two_ell // 2
    if m < 1 or ell < 1 or m - ell + 1 < 0:
        return 0
    value = (
        Fraction(math.factorial(3 * ell), math.factorial(ell) * math.factorial(2 * ell - 1))
        * Fraction(3**m, 3**ell)
        * Fraction(
            math.factorial(2 * m + ell - 1),
            math.factorial(m - ell + 1) * math.factorial(m + 2 * ell),
        )
    )
    if value.denominator != 1:
        raise NonIntegralProduct(f"count formula not integral at ({m}, {two_ell})")
    return int(value)


def pointed_count_simple(n: int, p: int) -> int:
    """Pointed count: (n + p/2 + 1) times the rooted count."""
    return (n + p // 2 + 1) * count_simple(n, p)


def log_count_exact(m: int, ell: int) -> float:
    """Natural log of count_simple(m, 2*ell) via log-gamma (m, ell >= 1)."""
    if count_is_zero(m, ell):
        return -math.inf
    return (
        -ell * math.log(3.0)
        + math.lgamma(3 * ell + 1)
        - math.lgamma(ell + 1)
        - math.lgamma(2 * ell)
        + m * math.log(3.0)
        + math.lgamma(2 * m + ell)
        - math.lgamma(m - ell + 2)
        - math.lgamma(m + 2 * ell + 1)
    )


def count_is_zero(m: int, ell: int) -> bool:
    return m < 1 or ell < 1 or m - ell + 1 < 0


def log_count_asymptotic(m: int, ell: int) -> float:
    """Log of the Stirling-scale equivalent
    sqrt(3)/(2 pi) 12^m (9/2)^l m^(-5/2) l^(1/2) exp(-9 l^2 / (4m))."""
    if m < 1 or ell < 1:
        raise ValueError("asymptotic defined for m, ell >= 1")
    return (
        0.5 * math.log(3.0)
        - math.log(2.0 * math.pi)
        + m * math.log(12.0)
        + ell * math.log(4.5)
        - 2.5 * math.log(m)
        + 0.5 * math.log(ell)
        - 9.0 * ell * ell / (4.0 * m)
    )


def asymptotic_ratio(m: int, ell: int) -> float:
    """exact / asymptotic, evaluated in log space."""
    return math.exp(log_count_exact(m, ell) - log_count_asymptotic(m, ell))


# ---------------------------------------------------------------------------
# restriction law

def restriction_probability(area_r: int, per_r: int, p_in: int, p_left: int,
                            n_prime: int, p_prime: int, n: int, eps: float,
                            p_n: int | None = None, alpha: float = 1.0) -> Fraction:
    """Exact probability that the restriction of a uniform pointed
    simple-boundary map with n' faces and perimeter p' equals a given
    restriction map with the stated parameters."""
    from .scales import perimeter_sequence

    if p_n is None:
        p_n = perimeter_sequence(n, alpha)
    if p_prime < p_n / 2:
        raise PreconditionViolated(f"p' = {p_prime} < p_n/2 = {p_n / 2}")
    if not p_prime - p_left > p_n / 3:
        return Fraction(0)
    numer = count_simple(n_prime - area_r, p_prime - per_r + 2 * p_in)
    denom = pointed_count_simple(n_prime, p_prime)
    return Fraction(numer, denom)


def ratio_bound_check(area_r: int, per_r: int, p_in: int, n: int, p_n: int,
                      n_prime: int, p_prime: int) -> float:
    """The two-scale probability ratio of the restriction law, computed in
    log space; identical parameter pairs give exactly 1.0."""
    if (n, p_n) == (n_prime, p_prime):
        return 1.0

    def log_prob(nn, pp):
        if count_is_zero(nn - area_r, (pp - per_r + 2 * p_in) // 2):
            return None
        if count_is_zero(nn, pp // 2) and not (nn == 0 and pp == 2):
            return None
        return (
            log_count_exact(nn - area_r, (pp - per_r + 2 * p_in) // 2)
            - math.log(nn + pp / 2 + 1)
            - log_count_exact(nn, pp // 2)
        )

    a = log_prob(n, p_n)
    b = log_prob(n_prime, p_prime)
    if a is None or b is None:
        raise ZeroDenominator("restriction probability vanishes for these sizes")
    return math.exp(a - b)


# ---------------------------------------------------------------------------
# Galton-Watson first passage

def gw_generating_function(ell: int, r: int, x: float) -> float:
    """Generating function of the number of first vertices at label r in a
    critical geometric tree rooted at label ell >= r, with uniform {-1,0,1}
    edge label increments."""
    if ell < r:
        raise ValueError("need ell >= r")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 1.0:
        return 1.0
    a = (-1.0 + math.sqrt(1.0 + 8.0 / (1.0 - x))) / 2.0
    g = ell - r
    return 1.0 - 2.0 / ((g + a) * (g + a + 1.0))


def gw_derivative_at_one(gap: int, steps=(1e-4, 1e-5, 1e-6, 1e-7)) -> float:
    """One-sided difference quotient of the generating function at x = 1,
    Richardson-extrapolated in sqrt(h) (the natural error scale here)."""

    def quotient(h):
        g = gap
        a = (-1.0 + math.sqrt(1.0 + 8.0 / h)) / 2.0
        return 2.0 / (h * (g + a) * (g + a + 1.0))

    xs = [math.sqrt(h) for h in steps]
    ys = [quotient(h) for h in steps]
    # Neville extrapolation to 0
    n = len(xs)
    tab = list(ys)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            tab[i] = (xs[i - level] * tab[i] - xs[i] * tab[i - 1]) / (
                xs[i - level] - xs[i]
            )
    return tab[n - 1]


def gw_first_passage_simulation(gap: int, replicates: int, rng,
                                max_vertices: int = 10**7) -> dict:
    """Simulate critical geometric trees (offspring P(k) = 2^-(k+1)) with
    uniform {-1,0,1} edge increments, rooted ``gap`` above the target label,
    and count the first vertices reaching the target.

    Exploration is pruned at the target; trees exceeding ``max_vertices``
    explored vertices are discarded and reported.  Returns mean, standard
    error, counts and the discard rate.
    """
    if replicates < 1:
        raise ValueError("need replicates >= 1")
    if gap == 0:
        return {
            "gap": 0,
            "replicates": replicates,
            "mean": 1.0,
            "se": 0.0,
            "discarded": 0,
            "discard_rate": 0.0,
            "counts": np.ones(replicates, dtype=np.int64),
        }
    counts = np.zeros(replicates, dtype=np.int64)
    discarded = np.zeros(replicates, dtype=bool)
    for i in range(replicates):
        # level-synchronous exploration; alive[g] = active vertices at height
        # g above the target (1 <= g <= ...)
        alive = {gap: 1}
        hits = 0
        explored = 1
        while alive:
            nxt = {}
            for g, cnt in alive.items():
                # total children of cnt critical-geometric parents
                children = int(rng.negative_binomial(cnt, 0.5)) if cnt else 0
                if children == 0:
                    continue
                explored += children
                down, stay, up = rng.multinomial(children, [1 / 3, 1 / 3, 1 / 3])
                for shift, c in ((-1, int(down)), (0, int(stay)), (1, int(up))):
                    if c == 0:
                        continue
                    gg = g + shift
                    if gg == 0:
                        hits += c
                    else:
                        nxt[gg] = nxt.get(gg, 0) + c
            if explored > max_vertices:
                discarded[i] = True
                break
            alive = nxt
        counts[i] = hits
    ok = ~discarded
    vals = counts[ok].astype(float)
    mean = float(vals.mean()) if len(vals) else math.nan
    se = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else math.nan
    return {
        "gap": gap,
        "replicates": replicates,
        "mean": mean,
        "se": se,
        "discarded": int(discarded.sum()),
        "discard_rate": float(discarded.mean()),
        "counts": counts[ok],
    }
