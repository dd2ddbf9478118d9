"""Topological stability of piecewise functions under discrete averaging."""

from .averaging import (
    MixtureModel,
    SampledSignal,
    average,
    average_sampled,
    combine,
    envelope_bounds,
    evaluate_mixture,
    grid_argmin,
    sample,
    side_derivative_mixture,
)
from .funcmodel import FunctionModel, Piece, Term, abs_model, germ_model, make_model, piecewise_linear
from .measure import DiscreteMeasure, arithmetic_measure, make_measure, paper_weights, point_mass
from .snake import (
    EquivalenceVerdict,
    PlateauDetected,
    Snake,
    extract_snake,
    extract_snake_sampled,
    snakes_equivalent,
    topologically_equivalent,
)
from .stability import (
    GermReport,
    GlobalReport,
    SweepReport,
    analyze_germ,
    analyze_global,
    predicted_min,
    stability_numbers,
    sweep_verify,
)

__version__ = "0.1.0"
