"""Discrete probability measures on [-1, 1] with finite support."""

import math
from dataclasses import dataclass

import numpy as np

WEIGHT_TOL = 1e-12


class MeasureError(ValueError):
    pass


class PositionOutOfRange(MeasureError):
    pass


class DuplicatePosition(MeasureError):
    pass


class NonpositiveWeight(MeasureError):
    pass


class WeightsNotNormalized(MeasureError):
    pass


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atoms ``(t, p)`` stored with ``t`` strictly ascending.

    Use :meth:`paper_weights` for the descending order in which the
    stability numbers are indexed (``t_1`` is the rightmost atom).
    """

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(t), float(p)) for t, p in self.atoms)
        if not atoms:
            raise MeasureError("a measure needs at least one atom")
        for t, p in atoms:
            if not math.isfinite(t) or abs(t) > 1.0:
                raise PositionOutOfRange(f"atom position {t!r} outside [-1, 1]")
            if not (math.isfinite(p) and p > 0.0):
                raise NonpositiveWeight(f"atom weight {p!r} at t={t!r} is not positive")
        atoms = tuple(sorted(atoms))
        for (t0, _), (t1, _) in zip(atoms, atoms[1:]):
            if t0 == t1:
                raise DuplicatePosition(f"two atoms at t={t0!r}")
        total = math.fsum(p for _, p in atoms)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise WeightsNotNormalized(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", atoms)

    @property
    def k(self):
        return len(self.atoms)

    def __len__(self):
        return len(self.atoms)

    @property
    def positions(self):
        return np.array([t for t, _ in self.atoms])

    @property
    def weights(self):
        return np.array([p for _, p in self.atoms])

    def paper_weights(self):
        return paper_weights(self)

    def to_dict(self):
        return {"atoms": [{"t": t, "p": p} for t, p in self.atoms], "renormalize": False}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise MeasureError("measure: expected a JSON object")
        if "atoms" not in data:
            raise MeasureError("measure: missing field 'atoms'")
        raw = data["atoms"]
        if not isinstance(raw, list):
            raise MeasureError("atoms: expected a list")
        atoms = []
        for i, a in enumerate(raw):
            if isinstance(a, dict):
                for key in ("t", "p"):
                    if key not in a:
                        raise MeasureError(f"atoms[{i}]: missing field '{key}'")
                    if isinstance(a[key], bool) or not isinstance(a[key], (int, float)):
                        raise MeasureError(f"atoms[{i}].{key}: expected a number")
                atoms.append((a["t"], a["p"]))
            elif isinstance(a, (list, tuple)) and len(a) == 2:
                atoms.append(tuple(a))
            else:
                raise MeasureError(f"atoms[{i}]: expected {{'t': ..., 'p': ...}}")
        renormalize = data.get("renormalize", False)
        if not isinstance(renormalize, bool):
            raise MeasureError("renormalize: expected true or false")
        return make_measure(atoms, renormalize=renormalize)


def make_measure(atoms, renormalize=False):
    """Build a validated measure from ``(position, weight)`` pairs.

    With ``renormalize`` the weights are divided by their sum; otherwise
    they must already sum to 1 within ``1e-12``.
    """
    atoms = [(float(t), float(p)) for t, p in atoms]
    if not atoms:
        raise MeasureError("a measure needs at least one atom")
    if renormalize:
        for t, p in atoms:
            if not (math.isfinite(p) and p > 0.0):
                raise NonpositiveWeight(f"atom weight {p!r} at t={t!r} is not positive")
        total = math.fsum(p for _, p in atoms)
        atoms = [(t, p / total) for t, p in atoms]
    return DiscreteMeasure(tuple(atoms))


def paper_weights(mu):
    """Atoms in descending position order: element ``j-1`` is ``(t_j, p_j)``."""
    return list(reversed(mu.atoms))


def arithmetic_measure():
    """Equal mass at -1 and +1: ``f_a(x) = (f(x + a) + f(x - a)) / 2``."""
    return DiscreteMeasure(((-1.0, 0.5), (1.0, 0.5)))


def point_mass(t):
    return DiscreteMeasure(((t, 1.0),))
