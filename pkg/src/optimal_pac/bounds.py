"""Sample-complexity bounds for realizable-case PAC learning.

Sample-size bounds take ``(eps, delta, d)`` and return a number of
examples; error bounds take ``(m, delta, d)`` and return an error rate.
Big-O bounds with unknown constants (``hlw_upper``, ``simon_bound``) take
an explicit multiplier ``c0`` and are shape-only.
"""

from __future__ import annotations

import math

HANNEKE_CONSTANT = 1800
_TINY = 1e-300


def _check_unit(name: str, x: float) -> None:
    if not 0 < x < 1:
        raise ValueError(f"{name}={x} outside (0, 1)")
    if x < _TINY:
        raise ValueError(f"{name}={x} below 1e-300 is rejected to avoid underflow")


def _check_d(d: int) -> None:
    if d < 1:
        raise ValueError("VC dimension d must be >= 1")


def cap_log(z: float) -> float:
    """Natural log floored at 1: ``ln(max(z, e))``."""
    if z < 0:
        raise ValueError("cap_log needs z >= 0")
    return math.log(max(z, math.e))


def cap_log2(z: float) -> float:
    """Base-2 log floored at 1: ``log2(max(z, 2))``."""
    if z < 0:
        raise ValueError("cap_log2 needs z >= 0")
    return math.log2(max(z, 2.0))


def iterated_log(K: int, x: float) -> float:
    """K-fold base-2 logarithm, clamped below at 1 at every step."""
    if x <= 0 or K < 0:
        raise ValueError("iterated_log needs x > 0 and K >= 0")
    v = max(x, 1.0)
    for _ in range(K):
        v = max(math.log2(v), 1.0)
    return v


def log_star(x: float) -> int:
    """Smallest K with ``iterated_log(K, x) <= 1``."""
    if x <= 0:
        raise ValueError("log_star needs x > 0")
    K, v = 0, max(x, 1.0)
    while v > 1:
        v = max(math.log2(v), 1.0)
        K += 1
    return K


def lower_bound(eps: float, delta: float, d: int) -> float:
    """``max((d-1)/(32 eps), ((1-eps)/eps) ln(1/delta))``; see :func:`lower_bound_is_valid`."""
    _check_unit("eps", eps)
    _check_unit("delta", delta)
    _check_d(d)
    return max((d - 1) / (32 * eps), (1 - eps) / eps * math.log(1 / delta))


def lower_bound_is_valid(eps: float, delta: float) -> bool:
    """Whether both lower-bound terms are established at these parameters."""
    return 0 < eps <= 1 / 8 and 0 < delta <= 1 / 100


def vc_consistency_bound(m: int, delta: float, d: int) -> float:
    """Error bound holding w.p. ``1 - delta`` for every sample-consistent hypothesis on ``m`` examples."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 < delta <= 1:
        raise ValueError(f"delta={delta} outside (0, 1]")
    _check_d(d)
    return 2 / m * (d * cap_log2(2 * math.e * m / d) + cap_log2(2 / delta))


def invert_vc_bound(eps: float, delta: float, d: int) -> int:
    """Smallest m with ``vc_consistency_bound(m, delta, d) <= eps``.

    Doubling to bracket, then bisection. For ``eps < 1`` the predicate is
    monotone in m: the bound only increases where it exceeds 1.
    """
    _check_unit("eps", eps)
    _check_unit("delta", delta)
    _check_d(d)

    def ok(m: int) -> bool:
        return vc_consistency_bound(m, delta, d) <= eps

    hi = 1
    while not ok(hi):
        hi *= 2
    lo = hi // 2  # ok(lo) is False, or lo == 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def hlw_upper(eps: float, delta: float, d: int, c0: float = 1.0) -> float:
    """Shape-only ``c0 * (d/eps) * Log(1/delta)``."""
    _check_unit("eps", eps)
    _check_unit("delta", delta)
    _check_d(d)
    if c0 <= 0:
        raise ValueError("c0 must be positive")
    return c0 * d / eps * cap_log(1 / delta)


def simon_bound(eps: float, delta: float, d: int, K: int, c0: float = 1.0) -> float:
    """Shape-only bound for the K-level independent-split majority vote."""
    _check_unit("eps", eps)
    _check_unit("delta", delta)
    _check_d(d)
    if K < 1:
        raise ValueError("K must be >= 1")
    if c0 <= 0:
        raise ValueError("c0 must be positive")
    lead = 2 ** (2 * K) * math.sqrt(K) / eps
    return c0 * lead * (d * iterated_log(K, 1 / eps) + K + cap_log(1 / delta))


def simon_opt_K(eps: float, delta: float, d: int) -> int:
    _check_unit("eps", eps)
    _check_unit("delta", delta)
    _check_d(d)
    return max(log_star(1 / eps) - log_star(cap_log(1 / delta) / d) + 1, 1)


def hanneke_sample_bound(eps: float, delta: float, d: int) -> int:
    """``floor((1800/eps)(d + ln(18/delta)))`` examples suffice for the recursive majority learner."""
    _check_unit("eps", eps)
    _check_unit("delta", delta)
    _check_d(d)
    return math.floor(HANNEKE_CONSTANT / eps * (d + math.log(18 / delta)))


def theorem_error_bound(m: int, delta: float, d: int) -> float:
    """Error rate ``(1800/(m+1))(d + ln(18/delta))`` guaranteed w.p. ``1 - delta`` after m examples."""
    if m < 0:
        raise ValueError("m must be >= 0")
    _check_unit("delta", delta)
    _check_d(d)
    return HANNEKE_CONSTANT / (m + 1) * (d + math.log(18 / delta))


def log_factor_check(a: float, b: float, c1: float, c2: float) -> bool:
    """Evaluate ``a ln(c1 (c2 + b/a)) <= a ln(c1 (c2 + e)) + b/e`` at one point."""
    if a < 1 or b < 1 or c1 < 1 or c2 < 0:
        raise ValueError("need a, b, c1 >= 1 and c2 >= 0")
    lhs = a * math.log(c1 * (c2 + b / a))
    rhs = a * math.log(c1 * (c2 + math.e)) + b / math.e
    return lhs <= rhs


def compare(eps: float, delta: float, d: int, K: int | None = None, c0: float = 1.0) -> dict:
    """All sample-size bounds at one parameter point, keyed by the CSV column names."""
    if K is None:
        K = simon_opt_K(eps, delta, d)
    return {
        "eps": eps,
        "delta": delta,
        "d": d,
        "lower": lower_bound(eps, delta, d),
        "classic": invert_vc_bound(eps, delta, d),
        "hlw": hlw_upper(eps, delta, d, c0),
        "simon": simon_bound(eps, delta, d, K, c0),
        "simonK": K,
        "hanneke": hanneke_sample_bound(eps, delta, d),
    }
