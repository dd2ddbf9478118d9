"""Stability of extrema under averaging by a discrete measure.

At a local minimum with one-sided derivative limits ``L <= 0 <= R`` and a
measure with atoms ``t_1 > ... > t_k`` and weights ``p_j``, the numbers

    X_j = L * (p_1 + ... + p_j) + R * (p_{j+1} + ... + p_k),  j = 1..k-1

are the slopes of the averaged function on ``(t_{j+1} a, t_j a)`` in the
small-``a`` limit.  When none vanishes the minimum survives and moves to
``t_m a`` where ``m`` is the first index with ``X_m < 0`` (``m = k`` if
there is none).  Maxima are handled through ``-f``.
"""

import math
from dataclasses import dataclass, field

from .averaging import average, grid_argmin
from .extreal import INF, NEG_INF, is_finite, to_json
from .funcmodel import NotABreakpoint
from .measure import paper_weights
from .snake import PlateauDetected, extract_snake, topologically_equivalent

CONDITIONS = ("a", "b", "convexity", "k1-shift", "indeterminate")
STABLE_CONDITIONS = frozenset(("a", "b", "convexity", "k1-shift"))


class InfiniteSideLimit(ValueError):
    pass


class SingleAtom(ValueError):
    pass


class NoPrediction(ValueError):
    pass


def stability_numbers(L, R, mu):
    """``[X_1, ..., X_{k-1}]`` with weights taken in descending-position order."""
    if not (is_finite(L) and is_finite(R)):
        raise InfiniteSideLimit("X_j needs finite one-sided limits; this is condition (b) territory")
    pw = paper_weights(mu)
    k = len(pw)
    if k < 2:
        raise SingleAtom("a single atom only shifts the function")
    p = [w for _, w in pw]
    return [L * math.fsum(p[:j]) + R * math.fsum(p[j:]) for j in range(1, k)]


def minimum_index(X):
    """First ``j`` (1-based) with ``X_j < 0``; ``k`` when all are positive."""
    for j, x in enumerate(X, start=1):
        if x < 0:
            return j
    return len(X) + 1


@dataclass(frozen=True)
class GermReport:
    extremum: float
    kind: str
    L: float
    R: float
    X: tuple
    condition: str
    m: int = None
    predicted_min_atom: float = None

    @property
    def stable(self):
        return self.condition in STABLE_CONDITIONS

    def to_dict(self):
        return {
            "extremum": self.extremum,
            "kind": self.kind,
            "L": to_json(self.L),
            "R": to_json(self.R),
            "X": list(self.X),
            "condition": self.condition,
            "m": self.m,
            "predicted_min_atom": self.predicted_min_atom,
        }


def _strictly_convex_side(piece, side):
    """Derivative strictly increasing on the piece, read off its terms."""
    signs = [t.curvature_sign(side) for t in piece.terms]
    return all(s >= 0 for s in signs) and any(s > 0 for s in signs)


def _convex_germ(model, i, L, R):
    left, right = model.pieces[i], model.pieces[i + 1]
    if any(t.exponent < 1 for t in left.terms + right.terms):
        return False
    if not (L <= 0 <= R):
        return False
    return _strictly_convex_side(left, -1) and _strictly_convex_side(right, +1)


def analyze_germ(model, x0, mu):
    """Decide whether the extremum at breakpoint ``x0`` survives averaging by ``mu``."""
    i = model.breakpoint_index(float(x0))
    kind = model.kind(x0)
    work = model if kind == "min" else model.negate()
    L = work.side_derivative(x0, "left")
    R = work.side_derivative(x0, "right")
    pw = paper_weights(mu)
    k = len(pw)

    if k == 1:
        return GermReport(float(x0), kind, L, R, (), "k1-shift", 1, pw[0][0])

    X = ()
    if is_finite(L) and is_finite(R):
        X = tuple(stability_numbers(L, R, mu))
        if all(x != 0 for x in X):
            m = minimum_index(X)
            return GermReport(float(x0), kind, L, R, X, "a", m, pw[m - 1][0])
    elif is_finite(L) and R == INF:
        return GermReport(float(x0), kind, L, R, (), "b", k, pw[k - 1][0])
    elif L == NEG_INF and is_finite(R):
        return GermReport(float(x0), kind, L, R, (), "b", 1, pw[0][0])

    if _convex_germ(work, i, L, R):
        return GermReport(float(x0), kind, L, R, X, "convexity")
    return GermReport(float(x0), kind, L, R, X, "indeterminate")


def predicted_min(report, alpha):
    """Where the averaged extremum sits: ``x0 + t_m * alpha``."""
    if report.predicted_min_atom is None:
        raise NoPrediction(f"no prediction for a germ with condition {report.condition!r}")
    return report.extremum + report.predicted_min_atom * alpha


@dataclass(frozen=True)
class GlobalReport:
    germ_reports: tuple
    critical_values_distinct: bool
    verdict: str
    failing_reasons: tuple = ()

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "critical_values_distinct": self.critical_values_distinct,
            "failing_reasons": list(self.failing_reasons),
            "germ_reports": [g.to_dict() for g in self.germ_reports],
        }


def analyze_global(model, mu):
    """Sufficient test for stability of the whole function.

    Stable when the extremum values are pairwise distinct and differ from
    both tail limits, and every extremum passes :func:`analyze_germ`.
    """
    snake = extract_snake(model)
    interior = snake.values[1:-1]
    reasons = []
    distinct = len(set(interior)) == len(interior)
    if not distinct:
        reasons.append("critical-values-not-distinct")
    tails = (snake.values[0], snake.values[-1])
    if any(v in tails for v in interior):
        distinct = False
        reasons.append("critical-value-equals-tail")
    germs = tuple(analyze_germ(model, x, mu) for x in model.breakpoints)
    if any(not g.stable for g in germs):
        reasons.append("germ-indeterminate")
    verdict = "stable" if not reasons else "indeterminate"
    return GlobalReport(germs, distinct, verdict, tuple(reasons))


@dataclass(frozen=True)
class SweepRecord:
    alpha: float
    snake_equivalent: bool
    reason: str
    extremum_count: int
    predicted_vs_observed_min_positions: tuple = ()

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "snake_equivalent": self.snake_equivalent,
            "reason": self.reason,
            "extremum_count": self.extremum_count,
            "predicted_vs_observed_min_positions": [list(t) for t in self.predicted_vs_observed_min_positions],
        }


@dataclass(frozen=True)
class SweepReport:
    records: tuple
    grid_points: int = field(default=10**5)

    @property
    def all_equivalent(self):
        return all(r.snake_equivalent for r in self.records)

    def to_dict(self):
        return {
            "all_equivalent": self.all_equivalent,
            "grid_points": self.grid_points,
            "records": [r.to_dict() for r in self.records],
        }


def sweep_verify(model, mu, alphas, resolution=256, grid_points=10**5):
    """Check ``f`` against its averagings over a decreasing list of ``alpha``.

    For every germ with a predicted position, the grid minimizer (maximizer
    for a maximum) of the averaged function over ``[x0 - 2a, x0 + 2a]`` is
    recorded next to the prediction.
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ValueError("need at least one alpha")
    if any(not a > 0 for a in alphas):
        raise ValueError("alphas must be positive")
    if any(a1 >= a0 for a0, a1 in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be strictly decreasing")
    report = analyze_global(model, mu)
    records = []
    for a in alphas:
        mix = average(model, mu, a)
        verdict = topologically_equivalent(model, mix, resolution)
        snake = extract_snake(mix, resolution)
        count = None if isinstance(snake, PlateauDetected) else snake.n_extrema
        gaps = []
        for g in report.germ_reports:
            if g.predicted_min_atom is None:
                continue
            pred = predicted_min(g, a)
            target = mix if g.kind == "min" else _Negated(mix)
            obs, _ = grid_argmin(target, g.extremum - 2 * a, g.extremum + 2 * a, grid_points)
            gaps.append((pred, obs, abs(pred - obs)))
        records.append(SweepRecord(a, verdict.equivalent, verdict.reason, count, tuple(gaps)))
    return SweepReport(tuple(records), grid_points)


class _Negated:
    def __init__(self, f):
        self.f = f

    def evaluate(self, x):
        return -self.f.evaluate(x)


__all__ = [
    "CONDITIONS",
    "GermReport",
    "GlobalReport",
    "InfiniteSideLimit",
    "NoPrediction",
    "NotABreakpoint",
    "SingleAtom",
    "SweepRecord",
    "SweepReport",
    "analyze_germ",
    "analyze_global",
    "minimum_index",
    "predicted_min",
    "stability_numbers",
    "sweep_verify",
]
