"""Extended reals as plain floats.

``-inf < finite < +inf`` is already the ordering of IEEE doubles, so the
only extra machinery needed is an addition that refuses ``inf + -inf``
instead of quietly producing NaN, and a JSON encoding for the infinities.
"""

import math

INF = math.inf
NEG_INF = -math.inf


class IndeterminateSideLimit(ArithmeticError):
    """Opposite infinities met in a sum of one-sided derivative limits."""


def is_finite(v):
    return math.isfinite(v)


def ext_add(values):
    """Sum of extended reals; finite parts are summed with ``math.fsum``."""
    finite = []
    infinite = set()
    for v in values:
        if math.isnan(v):
            raise ValueError("NaN is not an extended real")
        if math.isinf(v):
            infinite.add(v)
        else:
            finite.append(v)
    if len(infinite) > 1:
        raise IndeterminateSideLimit("+inf and -inf in the same sum")
    if infinite:
        return infinite.pop()
    return math.fsum(finite)


def ext_scale(c, v):
    """``c * v`` with ``0 * inf`` taken as 0 (a vanishing weight kills the term)."""
    if c == 0:
        return 0.0
    return c * v


def cmp(a, b):
    return (a > b) - (a < b)


def to_json(v):
    if v == INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    return float(v)


def from_json(v, field="value"):
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return NEG_INF
        raise ValueError(f"{field}: expected a number or 'inf'/'-inf', got {v!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"{field}: expected a number, got {v!r}")
    return float(v)
