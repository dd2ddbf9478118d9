"""Averaging of function models by discrete measures, exact and sampled.

``average(f, mu, alpha)`` is kept as a formal mixture
``x -> sum_i p_i * f(x - t_i * alpha)`` rather than expanded into one
piecewise model; shifted terms keep their own anchors, so evaluation and
one-sided derivatives stay exact.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .extreal import ext_add, ext_scale
from .funcmodel import FunctionModel
from .measure import DiscreteMeasure

ORACLE_POINTS = 10**5
SNAP_TOL = 1e-12


class NonpositiveAlpha(ValueError):
    pass


class GridMismatch(ValueError):
    """A shift ``t_i * alpha`` is not a whole number of grid steps."""


@dataclass(frozen=True)
class MixtureModel:
    """Weighted sum of shifted evaluables, ``sum w * base(x - shift)``.

    Built by :func:`average` the weights are the measure's and the shifts
    are ``t_i * alpha``.  :func:`combine` builds general linear
    combinations with ``alpha`` and ``source_measure`` left unset.
    """

    components: tuple
    alpha: float = None
    source_measure: DiscreteMeasure = None

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for w, s, base in self.components:
            out = out + w * np.asarray(base.evaluate(x - s))
        return out if out.ndim else float(out)

    __call__ = evaluate

    def derivative(self, x):
        """Derivative at ``x``; right derivative where a component has a breakpoint."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for w, s, base in self.components:
            out = out + w * np.asarray(base.derivative(x - s))
        return out if out.ndim else float(out)

    def side_derivative(self, x0, side):
        return ext_add(
            ext_scale(w, base.side_derivative(_snap(x0 - s, base.all_breakpoints()), side))
            for w, s, base in self.components
        )

    def tail_limit(self, direction):
        return ext_add(ext_scale(w, base.tail_limit(direction)) for w, _, base in self.components)

    def all_breakpoints(self):
        """Sorted union of the shifted breakpoints of every component."""
        parts = [base.all_breakpoints() + s for _, s, base in self.components]
        if not parts:
            return np.empty(0)
        return np.unique(np.concatenate(parts))

    @property
    def base(self):
        """The common base model when every component shares one."""
        bases = {id(b) for _, _, b in self.components}
        if len(bases) != 1:
            raise ValueError("mixture has several base models")
        return self.components[0][2]

    def to_dict(self):
        if self.source_measure is None:
            raise ValueError("only mixtures built by average() serialize")
        base = self.base
        return {
            "base": base.to_dict(),
            "measure": self.source_measure.to_dict(),
            "alpha": self.alpha,
        }


def _snap(y, breakpoints, rel=SNAP_TOL):
    """Undo the rounding in ``(b + s) - s`` so side limits land on ``b``."""
    if breakpoints.size == 0:
        return y
    i = int(np.argmin(np.abs(breakpoints - y)))
    b = float(breakpoints[i])
    return b if abs(b - y) <= rel * max(1.0, abs(b)) else y


def average(model, mu, alpha):
    """``x -> sum_i p_i * model(x - t_i * alpha)``."""
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha > 0):
        raise NonpositiveAlpha(f"alpha must be positive, got {alpha!r}")
    comps = tuple((p, t * alpha, model) for t, p in mu.atoms)
    return MixtureModel(comps, alpha, mu)


def combine(coeffs, models):
    """Linear combination ``sum c_j * model_j`` as an unshifted mixture."""
    return MixtureModel(tuple((float(c), 0.0, m) for c, m in zip(coeffs, models)))


def evaluate_mixture(mix, x):
    return mix.evaluate(x)


def side_derivative_mixture(mix, x0, side):
    return mix.side_derivative(x0, side)


def envelope_bounds(model, x, alpha):
    """Exact ``(inf, sup)`` of ``model`` over ``[x - alpha, x + alpha]``.

    Pieces are monotone, so the extremes sit at window ends or at
    breakpoints inside the window.
    """
    if not alpha > 0:
        raise NonpositiveAlpha(f"alpha must be positive, got {alpha!r}")
    lo, hi = x - alpha, x + alpha
    bps = np.asarray(model.breakpoints, dtype=float)
    cand = np.concatenate([[lo, hi], bps[(bps > lo) & (bps < hi)]])
    vals = np.asarray(model.evaluate(cand))
    return float(vals.min()), float(vals.max())


@dataclass(frozen=True)
class SampledSignal:
    xs: np.ndarray
    ys: np.ndarray
    step: float

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValueError("xs and ys must be 1-D of equal length >= 2")
        if not self.step > 0:
            raise ValueError("step must be positive")
        dx = np.diff(xs)
        if np.any(dx <= 0):
            raise ValueError("xs must be strictly increasing")
        if np.max(np.abs(dx - self.step)) > 1e-12 * max(1.0, np.max(np.abs(xs))):
            raise ValueError("xs is not uniform with the given step")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __len__(self):
        return self.xs.size

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y"])
        for x, y in zip(self.xs, self.ys):
            w.writerow([f"{x:.17g}", f"{y:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["x", "y"]:
            raise ValueError("expected a CSV header 'x,y'")
        data = np.array([[float(a), float(b)] for a, b in rows[1:]])
        xs, ys = data[:, 0], data[:, 1]
        return cls(xs, ys, float((xs[-1] - xs[0]) / (xs.size - 1)))


def sample(evaluable, lo, hi, n_points):
    """Evaluate on ``n_points`` equally spaced points of ``[lo, hi]``."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    if n_points < 2:
        raise ValueError("need at least 2 points")
    xs = np.linspace(lo, hi, int(n_points))
    return SampledSignal(xs, np.asarray(evaluable.evaluate(xs)), (hi - lo) / (n_points - 1))


def average_sampled(signal, mu, alpha, shift_tol=1e-9):
    """Discrete averaging of a sampled signal (an FIR filter with taps ``p_i``).

    Every shift ``t_i * alpha`` must be a whole number of grid steps.  The
    output covers the sub-window where all shifted samples exist, so it
    loses ``max|t_i| * alpha`` at most at each end.
    """
    if not alpha > 0:
        raise NonpositiveAlpha(f"alpha must be positive, got {alpha!r}")
    raw = np.array([t * alpha / signal.step for t, _ in mu.atoms])
    shifts = np.rint(raw)
    if np.any(np.abs(raw - shifts) > shift_tol):
        raise GridMismatch("shifts t_i * alpha are not multiples of the grid step")
    shifts = shifts.astype(int)
    n = len(signal)
    start = max(0, shifts.max())
    stop = min(n - 1, n - 1 + shifts.min())
    if stop - start < 1:
        raise ValueError("averaging window is wider than the signal")
    idx = np.arange(start, stop + 1)
    ys = np.zeros(idx.size)
    for (_, p), s in zip(mu.atoms, shifts):
        ys = ys + p * signal.ys[idx - s]
    return SampledSignal(signal.xs[idx], ys, signal.step)


def grid_argmin(evaluable, lo, hi, n_points=ORACLE_POINTS):
    """Leftmost grid minimizer over ``[lo, hi]`` and the grid step."""
    xs = np.linspace(lo, hi, int(n_points))
    ys = np.asarray(evaluable.evaluate(xs))
    return float(xs[int(np.argmin(ys))]), (hi - lo) / (n_points - 1)
