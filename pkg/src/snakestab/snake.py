"""Snakes: tail limits and extremum values in position order.

Two functions of the class handled here (finitely many strict extrema,
strictly monotone in between) are topologically equivalent exactly when
their snakes are order-isomorphic, so equivalence is decided on snakes.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .extreal import cmp, from_json, to_json
from .funcmodel import FunctionModel

ZERO_TOL = 1e-12
BISECT_WIDTH = 1e-12


class SnakeError(ValueError):
    pass


@dataclass(frozen=True)
class Snake:
    values: tuple
    positions: tuple = field(default=(), compare=False)

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "positions", tuple(float(p) for p in self.positions))
        if len(vals) < 2:
            raise SnakeError("a snake has at least the two tail entries")
        for i in range(1, len(vals) - 1):
            if not math.isfinite(vals[i]):
                raise SnakeError(f"interior snake value {i} is not finite")
            if cmp(vals[i], vals[i - 1]) * cmp(vals[i + 1], vals[i]) >= 0:
                raise SnakeError(f"snake value {i} is not a strict local extremum of the sequence")

    @property
    def n_extrema(self):
        return len(self.values) - 2

    def __len__(self):
        return len(self.values)

    def to_dict(self):
        return {"values": [to_json(v) for v in self.values]}

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(from_json(v, f"values[{i}]") for i, v in enumerate(data["values"])))


@dataclass(frozen=True)
class PlateauDetected:
    """Outcome of snake extraction on a function that is constant somewhere."""

    position: float

    def to_dict(self):
        return {"plateau": True, "position": self.position}


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    reason: str

    def to_dict(self):
        return {"equivalent": self.equivalent, "reason": self.reason}


def _bisect_sign_change(deriv, a, b, sign_a):
    # sign_a is the derivative sign just right of a
    while b - a > BISECT_WIDTH:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        d = float(deriv(m))
        if abs(d) <= ZERO_TOL:
            return m
        if (d > 0) == (sign_a > 0):
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def _derivative_samples(evaluable, resolution):
    """Ordered ``(x, derivative)`` samples bracketing every breakpoint."""
    bps = np.asarray(evaluable.all_breakpoints(), dtype=float)
    if bps.size == 0:
        return [], []
    # outer pieces are monotone; a few samples there fix the sign entering/leaving
    reach = max(1.0, bps[-1] - bps[0]) * 2.0 ** np.arange(-8, 1)
    outer_left = (bps[0] - reach)[::-1]
    outer_right = bps[-1] + reach
    xs = outer_left.tolist()
    ds = np.asarray(evaluable.derivative(outer_left)).tolist()
    for i, b in enumerate(bps):
        xs.append(b)
        ds.append(evaluable.side_derivative(b, "left"))
        xs.append(b)
        ds.append(evaluable.side_derivative(b, "right"))
        if i + 1 < bps.size:
            inner = np.linspace(b, bps[i + 1], resolution + 2)[1:-1]
            xs.extend(inner.tolist())
            ds.extend(np.asarray(evaluable.derivative(inner)).tolist())
    xs.extend(outer_right.tolist())
    ds.extend(np.asarray(evaluable.derivative(outer_right)).tolist())
    return xs, ds


def extract_snake(evaluable, resolution=256):
    """Snake of a model or mixture, or :class:`PlateauDetected`.

    For a mixture the derivative is scanned on ``resolution`` points in
    each gap between consecutive shifted breakpoints, plus both one-sided
    limits at every breakpoint.  Smooth sign changes are refined by
    bisection; tails come from the base models.
    """
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    lo_tail = evaluable.tail_limit(-1)
    hi_tail = evaluable.tail_limit(+1)
    if isinstance(evaluable, FunctionModel):
        vals = [float(v) for v in evaluable.evaluate(evaluable.all_breakpoints())]
        return Snake((lo_tail, *vals, hi_tail), evaluable.breakpoints)

    xs, ds = _derivative_samples(evaluable, resolution)
    positions = []
    last = None  # (x, sign) of the most recent nonzero sample
    zero_at = None
    for x, d in zip(xs, ds):
        if abs(d) <= ZERO_TOL:
            if zero_at is not None and x != zero_at:
                return PlateauDetected(float(zero_at))
            zero_at = x
            continue
        zero_at = None
        s = 1 if d > 0 else -1
        if last is not None and s != last[1]:
            xa = last[0]
            if xa == x:
                positions.append(x)
            else:
                positions.append(_bisect_sign_change(evaluable.derivative, xa, x, last[1]))
        last = (x, s)
    vals = [float(evaluable.evaluate(p)) for p in positions]
    return Snake((lo_tail, *vals, hi_tail), positions)


def extract_snake_sampled(signal, flat_tol=0.0):
    """Snake of a sampled signal; the tails are the window-edge values."""
    if flat_tol < 0:
        raise ValueError("flat_tol must be nonnegative")
    ys = np.asarray(signal.ys if hasattr(signal, "ys") else signal, dtype=float)
    xs = np.asarray(signal.xs, dtype=float) if hasattr(signal, "xs") else np.arange(ys.size, dtype=float)
    dy = np.diff(ys)
    flat = np.abs(dy) <= flat_tol
    run = 0
    for i, f in enumerate(flat):
        run = run + 1 if f else 0
        if run >= 2:
            return PlateauDetected(float(xs[i - 1]))
    vals, positions = [], []
    last_sign, last_end = 0, 0
    for i, (d, f) in enumerate(zip(dy, flat)):
        if f:
            continue
        s = 1 if d > 0 else -1
        if last_sign and s != last_sign:
            vals.append(float(ys[last_end]))
            positions.append(float(xs[last_end]))
        last_sign, last_end = s, i + 1
    return Snake((float(ys[0]), *vals, float(ys[-1])), positions)


def snakes_equivalent(s, t):
    """Pairwise order comparison of two snakes of equal length.

    Plain sequences are accepted too: any finite sequence of extended
    reals is a generalized snake, alternation is only needed for the
    snake of a function.
    """
    a = tuple(s.values) if isinstance(s, Snake) else tuple(s)
    b = tuple(t.values) if isinstance(t, Snake) else tuple(t)
    if len(a) != len(b):
        return False
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if cmp(a[i], a[j]) != cmp(b[i], b[j]):
                return False
    return True


def topologically_equivalent(f, g, resolution=256):
    sf = extract_snake(f, resolution)
    sg = extract_snake(g, resolution)
    if isinstance(sf, PlateauDetected) or isinstance(sg, PlateauDetected):
        return EquivalenceVerdict(False, "plateau-detected")
    if len(sf) != len(sg):
        return EquivalenceVerdict(False, "different-extreme-count")
    if snakes_equivalent(sf, sg):
        return EquivalenceVerdict(True, "same-snake-class")
    return EquivalenceVerdict(False, "snake-order-mismatch")
