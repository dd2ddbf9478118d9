import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from snakestab import (
    SampledSignal,
    arithmetic_measure,
    average,
    average_sampled,
    combine,
    envelope_bounds,
    make_measure,
    piecewise_linear,
    point_mass,
    sample,
)
from snakestab.averaging import GridMismatch, NonpositiveAlpha, grid_argmin

from .oracles import direct_average


def test_point_mass_is_shift(zigzag):
    mix = average(zigzag, point_mass(0.4), 0.5)
    xs = np.linspace(-3, 5, 41)
    assert np.array_equal(mix.evaluate(xs), zigzag.evaluate(xs - 0.2))


def test_parabola_closed_form(parabola, arith):
    a = 0.3
    mix = average(parabola, arith, a)
    xs = np.linspace(-2, 2, 81)
    np.testing.assert_allclose(mix.evaluate(xs), xs**2 + a**2, atol=1e-14)


def test_counterexample_closed_form(vee, arith):
    for a in (0.5, 0.1):
        mix = average(vee, arith, a)
        xs = np.linspace(-3, 3, 601)
        np.testing.assert_allclose(mix.evaluate(xs), np.maximum(np.abs(xs), a), atol=1e-15)
    assert average(vee, arith, 0.5).evaluate(0.0) == 0.5


def test_weighted_abs_value(vee, w37):
    mix = average(vee, w37, 0.1)
    assert mix.evaluate(0.1) == pytest.approx(0.06, abs=1e-15)
    assert direct_average(vee, w37, 0.1, 0.1) == pytest.approx(0.06, abs=1e-15)


def test_identity_averaging(zigzag):
    mix = average(zigzag, point_mass(0.0), 0.7)
    xs = np.linspace(-2, 4, 33)
    assert np.array_equal(mix.evaluate(xs), zigzag.evaluate(xs))


def test_mixture_matches_direct_sum(zigzag):
    mu = make_measure([(-0.8, 0.2), (-0.1, 0.5), (0.6, 0.3)])
    mix = average(zigzag, mu, 0.37)
    xs = np.linspace(-2, 4, 25)
    np.testing.assert_allclose(mix.evaluate(xs), direct_average(zigzag, mu, 0.37, xs), atol=1e-14)


def test_nonpositive_alpha(vee, arith):
    with pytest.raises(NonpositiveAlpha):
        average(vee, arith, 0.0)


def test_mixture_side_derivatives(vee, arith, w37):
    flat = average(vee, arith, 0.5)
    for x0 in (-0.25, 0.0, 0.3):
        assert flat.side_derivative(x0, "left") == 0.0
        assert flat.side_derivative(x0, "right") == 0.0
    tilted = average(vee, w37, 0.1)
    assert tilted.side_derivative(0.0, "right") == pytest.approx(-0.4, abs=1e-15)
    shifted = average(vee, point_mass(0.5), 0.2)
    assert shifted.side_derivative(0.1, "left") == vee.side_derivative(0.0, "left")


def test_mixture_side_derivative_at_rounded_breakpoint(zigzag, w37):
    # 2 + 0.05 - 0.05 != 2 in floating point; the right limit must still see slope 4
    mix = average(zigzag, w37, 0.05)
    assert mix.side_derivative(2.05, "right") == pytest.approx(4.0)
    assert mix.side_derivative(2.05, "left") == pytest.approx(0.3 * 4 + 0.7 * -3)


def test_breakpoint_union(zigzag, w37):
    mix = average(zigzag, w37, 0.05)
    np.testing.assert_allclose(mix.all_breakpoints(), [-0.05, 0.05, 0.95, 1.05, 1.95, 2.05])


def test_sample(vee):
    s = sample(vee, -1, 1, 5)
    assert list(s.ys) == [1.0, 0.5, 0.0, 0.5, 1.0]
    assert s.step == 0.5


def test_sample_counterexample_window(vee, arith):
    s = sample(average(vee, arith, 0.5), -0.25, 0.25, 17)
    assert np.all(s.ys == 0.5)


def test_sampled_signal_validation():
    with pytest.raises(ValueError):
        SampledSignal([0, 1, 3], [0, 0, 0], 1.0)
    with pytest.raises(ValueError):
        SampledSignal([0], [0], 1.0)


def test_csv_roundtrip(zigzag):
    s = sample(zigzag, -1, 3, 9)
    text = s.to_csv()
    assert text.splitlines()[0] == "x,y"
    back = SampledSignal.from_csv(text)
    assert np.array_equal(back.xs, s.xs) and np.array_equal(back.ys, s.ys)


def test_envelope_examples(vee, zigzag):
    assert envelope_bounds(vee, 0.0, 1.0) == (0.0, 1.0)
    line = piecewise_linear([], [1.0])
    assert envelope_bounds(line, 0.3, 0.2) == pytest.approx((0.1, 0.5))
    # window [0.8, 1.2] holds the max at 1; the lower edge is the right end
    lo, hi = envelope_bounds(zigzag, 1.0, 0.2)
    assert (lo, hi) == pytest.approx((1.4, 2.0), abs=1e-15)
    xs = np.linspace(0.8, 1.2, 10**4)
    ys = zigzag.evaluate(xs)
    assert lo <= ys.min() and ys.max() <= hi
    assert ys.min() == pytest.approx(lo, abs=1e-3) and ys.max() == pytest.approx(hi, abs=1e-3)


def test_average_sampled_requires_grid_shifts(zigzag, w37):
    s = sample(zigzag, -3, 5, 801)
    with pytest.raises(GridMismatch):
        average_sampled(s, w37, 0.0123)


def test_average_sampled_window(zigzag, w37):
    s = sample(zigzag, -3, 5, 801)  # step 0.01
    out = average_sampled(s, w37, 0.05)
    assert out.xs[0] == pytest.approx(-2.95) and out.xs[-1] == pytest.approx(4.95)
    np.testing.assert_allclose(out.ys, average(zigzag, w37, 0.05).evaluate(out.xs), atol=1e-12)


def test_grid_argmin_leftmost(vee, arith):
    x, step = grid_argmin(average(vee, arith, 0.5), -1, 1, 201)
    assert x == pytest.approx(-0.5)


def test_combine_linearity(vee, zigzag, w37):
    combo = combine([2.0, -0.5], [vee, zigzag])
    lhs = average(combo, w37, 0.2)
    xs = np.linspace(-3, 4, 50)
    rhs = 2.0 * average(vee, w37, 0.2).evaluate(xs) - 0.5 * average(zigzag, w37, 0.2).evaluate(xs)
    np.testing.assert_allclose(lhs.evaluate(xs), rhs, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 5), st.floats(0.001, 2.0))
def test_sandwich(x, alpha):
    zigzag = piecewise_linear([0.0, 1.0, 2.0], [-1.0, 2.0, -3.0, 4.0])
    mu = make_measure([(-1.0, 0.2), (0.25, 0.5), (0.9, 0.3)])
    lo, hi = envelope_bounds(zigzag, x, alpha)
    v = average(zigzag, mu, alpha).evaluate(x)
    assert lo - 1e-12 <= v <= hi + 1e-12


def test_mixture_json(vee, w37):
    d = average(vee, w37, 0.1).to_dict()
    assert d["alpha"] == 0.1 and d["measure"]["atoms"][0] == {"t": -1.0, "p": 0.3}
    assert d["base"]["breakpoints"] == [0.0]
