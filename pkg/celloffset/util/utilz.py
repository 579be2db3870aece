import logging
import math
from typing import Callable, Optional, Tuple

from scipy import optimize, special

logger = logging.getLogger(__name__)

EXACT_BINOMIAL_LIMIT = 60


def binomial_pmf(k: int, n: int, prob: float) -> float:
    """
    P[Bin(n, prob) = k].

    Exact integer coefficients up to n = 60, log-space above.
    """
    if k < 0 or k > n:
        return 0.0
    if prob <= 0.0:
        return 1.0 if k == 0 else 0.0
    if prob >= 1.0:
        return 1.0 if k == n else 0.0
    if n <= EXACT_BINOMIAL_LIMIT:
        return special.comb(n, k, exact=True) * prob ** k * (1.0 - prob) ** (n - k)
    log_w = (
        special.gammaln(n + 1)
        - special.gammaln(k + 1)
        - special.gammaln(n - k + 1)
        + k * math.log(prob)
        + (n - k) * math.log1p(-prob)
    )
    return math.exp(log_w)


def bracket_upward(g: Callable[[float], float], start: float, ceiling: float) -> Optional[Tuple[float, float]]:
    """
    Double ``x`` from ``start`` until ``g(x) >= 0``.

    :return: ``(lo, hi)`` with ``g(lo) < 0 <= g(hi)``, ``lo`` possibly 0; ``None`` when the ceiling is hit first
    """
    if start <= 0:
        raise ValueError(f"doubling needs a positive start, got {start}")
    lo, hi = 0.0, min(start, ceiling)
    while g(hi) < 0:
        if hi >= ceiling:
            return None
        lo, hi = hi, min(2 * hi, ceiling)
    return lo, hi


def bisect_increasing(g: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    """
    Smallest ``x`` in ``(lo, hi]`` with ``g(x) >= 0`` to within ``xtol``, for non-decreasing ``g``.

    Requires ``g(hi) >= 0``. The returned point always satisfies ``g(x) >= 0``.
    """
    g_lo = g(lo)
    if g_lo >= 0:
        return lo
    if g(hi) == 0:
        return hi
    root = optimize.bisect(g, lo, hi, xtol=xtol, maxiter=400)
    # bisect returns a point within xtol of the sign change; step to the feasible side
    for x in (root, min(root + xtol, hi)):
        if g(x) >= 0:
            return x
    return hi


def last_true(pred: Callable[[int], bool], lo: int, hi: int) -> int:
    """
    Largest integer ``k`` in ``[lo, hi]`` with ``pred(k)``, for ``pred`` true then false.

    Returns ``lo - 1`` when ``pred(lo)`` is already false.
    """
    if not pred(lo):
        return lo - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def first_true(pred: Callable[[int], bool], lo: int, hi: int) -> Optional[int]:
    """Smallest integer in ``[lo, hi]`` with ``pred``, for ``pred`` false then true; ``None`` if never."""
    if not pred(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo
