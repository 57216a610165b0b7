"""Scale conventions shared by the experiments.

The boundary-length sequence is pinned to p_n = 2*max(1, round(alpha*sqrt(2n)))
so that p_n ~ 2*alpha*sqrt(2n); any even sequence with that asymptotics would
do, this one is frozen for reproducibility.
"""

import math


def perimeter_sequence(n: int, alpha: float = 1.0) -> int:
    """Even boundary length p_n ~ 2*alpha*sqrt(2n), clamped at 2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    # round-half-to-even is fine here; the sequence only needs the asymptotics
    return 2 * max(1, round(alpha * math.sqrt(2.0 * n)))
