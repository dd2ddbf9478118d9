"""Piecewise functions built from anchored power and cusp terms.

Every piece of a :class:`FunctionModel` is ``constant + sum(terms)`` where a
term is ``c * |x - a|**e`` or, when signed, ``c * sgn(x - a) * |x - a|**e``,
with the anchor ``a`` sitting on an endpoint of the piece.  Keeping the
anchor at the breakpoint makes one-sided derivative limits closed-form,
including the infinite ones produced by exponents below 1.
"""

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .extreal import INF, NEG_INF, IndeterminateSideLimit, ext_add, from_json, to_json

__all__ = [
    "Term",
    "Piece",
    "FunctionModel",
    "make_model",
    "piecewise_linear",
    "abs_model",
    "germ_model",
    "IndeterminateSideLimit",
]

CONTINUITY_TOL = 1e-12
N_MONO_SAMPLES = 256


class ModelError(ValueError):
    pass


class CoverageGap(ModelError):
    pass


class InvalidAnchor(ModelError):
    pass


class ContinuityViolation(ModelError):
    pass


class NotStrictlyMonotonePiece(ModelError):
    pass


class NonAlternatingExtrema(ModelError):
    pass


class NotABreakpoint(ValueError):
    pass


def _side_sign(side):
    if side == "left":
        return -1
    if side == "right":
        return 1
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


@dataclass(frozen=True)
class Term:
    coeff: float
    exponent: float
    signed: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.exponent) and self.exponent > 0):
            raise ModelError(f"term exponent must be positive, got {self.exponent!r}")
        if not math.isfinite(self.coeff) or self.coeff == 0:
            raise ModelError(f"term coefficient must be finite and nonzero, got {self.coeff!r}")

    def value(self, u):
        a = np.abs(u) ** self.exponent
        if self.signed:
            a = np.sign(u) * a
        return self.coeff * a

    def derivative(self, u):
        """Derivative at ``u != 0``."""
        with np.errstate(divide="ignore"):
            d = self.coeff * self.exponent * np.abs(u) ** (self.exponent - 1.0)
        if self.signed:
            return d
        return d * np.sign(u)

    def side_limit(self, side):
        """Limit of the derivative as ``u -> 0`` from ``side`` (+1 or -1)."""
        if self.exponent > 1:
            return 0.0
        s = 1.0 if self.signed else float(side)
        if self.exponent == 1:
            return self.coeff * s
        return math.copysign(INF, self.coeff * s)

    def curvature_sign(self, side):
        """Sign of the second derivative on the ``side`` of the anchor."""
        if self.exponent == 1:
            return 0
        s = self.coeff * (self.exponent - 1.0) * (side if self.signed else 1)
        return (s > 0) - (s < 0)

    def to_dict(self):
        return {"coeff": self.coeff, "exponent": self.exponent, "signed": self.signed}


@dataclass(frozen=True)
class Piece:
    left: float
    right: float
    anchor: float
    constant: float = 0.0
    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.left < self.right:
            raise CoverageGap(f"empty piece interval ({self.left}, {self.right})")

    @property
    def side(self):
        """+1 if the piece lies right of its anchor, -1 if left (0 if it straddles)."""
        if self.left == self.anchor:
            return 1
        if self.right == self.anchor:
            return -1
        return 0

    def value(self, x):
        u = np.asarray(x, dtype=float) - self.anchor
        out = np.full(u.shape, float(self.constant))
        for t in self.terms:
            out = out + t.value(u)
        return out

    def derivative(self, x):
        """Derivative at ``x``; at the anchor the limit from inside the piece."""
        u = np.asarray(x, dtype=float) - self.anchor
        out = np.zeros(u.shape)
        at_anchor = u == 0
        inside = self.side if self.side else 1
        for t in self.terms:
            d = t.derivative(np.where(at_anchor, 1.0, u))
            out = out + np.where(at_anchor, t.side_limit(inside), d)
        return out

    def side_derivative(self, x0, side):
        s = _side_sign(side)
        u = x0 - self.anchor
        if u == 0:
            return ext_add(t.side_limit(s) for t in self.terms)
        return ext_add(float(t.derivative(np.float64(u))) for t in self.terms)

    def negate(self):
        return Piece(
            self.left,
            self.right,
            self.anchor,
            -self.constant,
            tuple(Term(-t.coeff, t.exponent, t.signed) for t in self.terms),
        )

    def sample_points(self):
        """Interior points used to certify monotonicity."""
        a, b = self.left, self.right
        if math.isfinite(a) and math.isfinite(b):
            return np.linspace(a, b, N_MONO_SAMPLES + 2)[1:-1]
        spread = 2.0 ** np.linspace(-8, 8, N_MONO_SAMPLES)
        if math.isfinite(b):
            return (b - spread)[::-1]
        if math.isfinite(a):
            return a + spread
        half = 2.0 ** np.linspace(-8, 8, N_MONO_SAMPLES // 2)
        return np.concatenate([(self.anchor - half)[::-1], self.anchor + half])

    def to_dict(self):
        return {
            "interval": [to_json(self.left), to_json(self.right)],
            "anchor": self.anchor,
            "constant": self.constant,
            "terms": [t.to_dict() for t in self.terms],
        }


@dataclass(frozen=True)
class FunctionModel:
    """A continuous function, strictly monotone between its breakpoints.

    Construct through :func:`make_model`, which validates coverage,
    continuity, monotonicity and alternation; the breakpoints are then
    exactly the local extrema.
    """

    breakpoints: tuple
    pieces: tuple
    directions: tuple = field(default=(), compare=False)

    @property
    def n(self):
        return len(self.breakpoints)

    def _piece_index(self, x):
        return bisect.bisect_right(self.breakpoints, x)

    def evaluate(self, x):
        """Value at ``x`` (scalar or array)."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(np.asarray(self.breakpoints, dtype=float), x, side="right")
        out = np.empty(x.shape)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = piece.value(x[mask])
        return out if out.ndim else float(out)

    __call__ = evaluate

    def derivative(self, x):
        """Derivative at ``x``; at breakpoints the right derivative."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(np.asarray(self.breakpoints, dtype=float), x, side="right")
        out = np.empty(x.shape)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = piece.derivative(x[mask])
        return out if out.ndim else float(out)

    def side_derivative(self, x0, side):
        """One-sided limit of the derivative at ``x0`` as an extended real."""
        s = _side_sign(side)
        x0 = float(x0)
        i = bisect.bisect_left(self.breakpoints, x0)
        if i < self.n and self.breakpoints[i] == x0:
            piece = self.pieces[i] if s < 0 else self.pieces[i + 1]
        else:
            piece = self.pieces[i]
        return piece.side_derivative(x0, side)

    def tail_limit(self, direction):
        """``lim f(x)`` as ``x -> direction`` (``-inf`` or ``+inf``).

        Outer pieces are nonconstant power sums, hence unbounded.
        """
        if direction < 0:
            return NEG_INF if self.directions[0] > 0 else INF
        return INF if self.directions[-1] > 0 else NEG_INF

    def kind(self, x0):
        """``'min'`` or ``'max'`` for a breakpoint."""
        i = self.breakpoint_index(x0)
        return "min" if self.directions[i] < 0 else "max"

    def breakpoint_index(self, x0):
        i = bisect.bisect_left(self.breakpoints, x0)
        if i == self.n or self.breakpoints[i] != x0:
            raise NotABreakpoint(f"{x0!r} is not a breakpoint of the model")
        return i

    def negate(self):
        return FunctionModel(
            self.breakpoints,
            tuple(p.negate() for p in self.pieces),
            tuple(-d for d in self.directions),
        )

    def __neg__(self):
        return self.negate()

    def all_breakpoints(self):
        return np.asarray(self.breakpoints, dtype=float)

    def to_dict(self):
        return {
            "breakpoints": list(self.breakpoints),
            "pieces": [p.to_dict() for p in self.pieces],
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ModelError("model: expected a JSON object")
        for key in ("breakpoints", "pieces"):
            if key not in data:
                raise ModelError(f"model: missing field '{key}'")
        bps = data["breakpoints"]
        if not isinstance(bps, list):
            raise ModelError("breakpoints: expected a list")
        bps = [from_json(b, f"breakpoints[{i}]") for i, b in enumerate(bps)]
        raw = data["pieces"]
        if not isinstance(raw, list):
            raise ModelError("pieces: expected a list")
        pieces = []
        for i, p in enumerate(raw):
            where = f"pieces[{i}]"
            if not isinstance(p, dict):
                raise ModelError(f"{where}: expected an object")
            for key in ("interval", "anchor", "terms"):
                if key not in p:
                    raise ModelError(f"{where}: missing field '{key}'")
            iv = p["interval"]
            if not isinstance(iv, list) or len(iv) != 2:
                raise ModelError(f"{where}.interval: expected [left, right]")
            left = from_json(iv[0], f"{where}.interval[0]")
            right = from_json(iv[1], f"{where}.interval[1]")
            anchor = from_json(p["anchor"], f"{where}.anchor")
            constant = from_json(p.get("constant", 0.0), f"{where}.constant")
            if not isinstance(p["terms"], list):
                raise ModelError(f"{where}.terms: expected a list")
            terms = []
            for j, t in enumerate(p["terms"]):
                tw = f"{where}.terms[{j}]"
                if not isinstance(t, dict):
                    raise ModelError(f"{tw}: expected an object")
                for key in ("coeff", "exponent"):
                    if key not in t:
                        raise ModelError(f"{tw}: missing field '{key}'")
                signed = t.get("signed", False)
                if not isinstance(signed, bool):
                    raise ModelError(f"{tw}.signed: expected true or false")
                terms.append(
                    Term(from_json(t["coeff"], f"{tw}.coeff"), from_json(t["exponent"], f"{tw}.exponent"), signed)
                )
            pieces.append(Piece(left, right, anchor, constant, tuple(terms)))
        return make_model(bps, pieces)


def _monotone_direction(piece, index):
    xs = piece.sample_points()
    ys = piece.value(xs)
    dy = np.diff(ys)
    if np.all(dy > 0):
        direction = 1
    elif np.all(dy < 0):
        direction = -1
    else:
        raise NotStrictlyMonotonePiece(f"piece {index} on ({piece.left}, {piece.right}) is not strictly monotone")
    d = piece.derivative(xs)
    if np.any(np.isnan(d)) or np.any(d * direction < 0):
        raise NotStrictlyMonotonePiece(f"piece {index}: derivative changes sign on ({piece.left}, {piece.right})")
    return direction


def make_model(breakpoints, pieces):
    """Validate and assemble a :class:`FunctionModel`."""
    bps = tuple(float(b) for b in breakpoints)
    pieces = tuple(pieces)
    if any(not math.isfinite(b) for b in bps):
        raise CoverageGap("breakpoints must be finite")
    if any(b0 >= b1 for b0, b1 in zip(bps, bps[1:])):
        raise CoverageGap("breakpoints must be strictly increasing")
    if len(pieces) != len(bps) + 1:
        raise CoverageGap(f"{len(bps)} breakpoints need {len(bps) + 1} pieces, got {len(pieces)}")
    edges = (NEG_INF,) + bps + (INF,)
    for i, piece in enumerate(pieces):
        if piece.left != edges[i] or piece.right != edges[i + 1]:
            raise CoverageGap(
                f"piece {i} covers ({piece.left}, {piece.right}), expected ({edges[i]}, {edges[i + 1]})"
            )
        if not math.isfinite(piece.anchor):
            raise InvalidAnchor(f"piece {i}: anchor must be finite")
        if bps and piece.anchor not in (piece.left, piece.right):
            raise InvalidAnchor(f"piece {i}: anchor {piece.anchor} is not an endpoint of its interval")
    for i, b in enumerate(bps):
        lv = float(pieces[i].value(b))
        rv = float(pieces[i + 1].value(b))
        if abs(lv - rv) > CONTINUITY_TOL * max(1.0, abs(lv), abs(rv)):
            raise ContinuityViolation(f"pieces disagree at breakpoint {b}: {lv!r} vs {rv!r}")
    directions = tuple(_monotone_direction(p, i) for i, p in enumerate(pieces))
    for i, b in enumerate(bps):
        if directions[i] == directions[i + 1]:
            raise NonAlternatingExtrema(f"breakpoint {b} is not a local extremum")
    return FunctionModel(bps, pieces, directions)


def piecewise_linear(breakpoints, slopes, value_at_first=0.0):
    """Continuous piecewise-linear model; ``slopes`` has one entry per piece.

    Without breakpoints the single line passes through ``(0, value_at_first)``.
    """
    bps = [float(b) for b in breakpoints]
    slopes = [float(s) for s in slopes]
    if len(slopes) != len(bps) + 1:
        raise CoverageGap(f"{len(bps)} breakpoints need {len(bps) + 1} slopes")
    if not bps:
        return make_model([], [Piece(NEG_INF, INF, 0.0, value_at_first, (Term(slopes[0], 1.0, True),))])
    values = [float(value_at_first)]
    for b0, b1, s in zip(bps, bps[1:], slopes[1:]):
        values.append(values[-1] + s * (b1 - b0))
    edges = [NEG_INF] + bps + [INF]
    pieces = []
    for i, s in enumerate(slopes):
        # anchor on the left breakpoint except for the leftmost piece
        if i == 0:
            anchor, const = bps[0], values[0]
        else:
            anchor, const = bps[i - 1], values[i - 1]
        pieces.append(Piece(edges[i], edges[i + 1], anchor, const, (Term(s, 1.0, True),)))
    return make_model(bps, pieces)


def abs_model():
    """``f(x) = |x|``."""
    t = (Term(1.0, 1.0),)
    return make_model([0.0], [Piece(NEG_INF, 0.0, 0.0, 0.0, t), Piece(0.0, INF, 0.0, 0.0, t)])


def germ_model(left_terms, right_terms, x0=0.0, value=0.0):
    """Model with a single breakpoint at ``x0``; terms are anchored there."""
    return make_model(
        [x0],
        [
            Piece(NEG_INF, x0, x0, value, tuple(left_terms)),
            Piece(x0, INF, x0, value, tuple(right_terms)),
        ],
    )
