import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdres.errors import ValidityError, WaveformError
from tdres.genopt import (
    FULL_PERIOD, HALF_PERIOD, GeneratingInterval, choose_generating_interval, half_period_interval,
    optimal_input, optimality_report, predicted_vs_simulated, rank_inputs, s0,
)
from tdres.oscillator import (
    SecondOrderOscillator, first_order_impulse_response, impulse_response, simplified_impulse_response,
)
from tdres.quadrature import QuadratureConfig
from tdres.waveform import AntiperiodicExtension, PeriodicExtension, Sine, Square, Sum, Triangle, norm

from strategies import kernels_and_intervals, waveforms

FINE = QuadratureConfig(points=1024)


def test_sine_kernel_takes_half_period():
    gi = choose_generating_interval(Sine(1.0, 1.0, 0.0), 2 * math.pi)
    assert gi.mode == HALF_PERIOD
    assert gi.length == pytest.approx(math.pi)
    assert gi.symmetry_defect < 1e-9


def test_damped_kernel_breaks_symmetry():
    o = SecondOrderOscillator.from_q(10, 1.0)
    gi = choose_generating_interval(impulse_response(o), o.t_d)
    assert gi.mode == FULL_PERIOD and gi.length == pytest.approx(o.t_d)
    assert gi.symmetry_defect > 1e-3


def test_asymmetric_kernel_takes_full_period():
    h = Sum((Sine(1.0, 1.0, 0.0), Sine(0.5, 2.0, 0.0)))
    gi = choose_generating_interval(h, 2 * math.pi)
    assert gi.mode == FULL_PERIOD


def test_non_oscillatory_kernel_rejected():
    with pytest.raises(ValidityError, match="not oscillatory"):
        choose_generating_interval(first_order_impulse_response(1.0), 1.0)
    with pytest.raises(WaveformError):
        GeneratingInterval(0.0, HALF_PERIOD)


def test_optimal_input_for_sine_kernel_is_sine():
    h = Sine(1.0, 1.0, 0.0)
    gi = choose_generating_interval(h, 2 * math.pi)
    f = optimal_input(h, gi, target_norm=math.sqrt(math.pi / 2))
    assert isinstance(f, AntiperiodicExtension)
    t = np.linspace(0.01, 20, 300)
    np.testing.assert_allclose(f(t), np.sin(t), atol=1e-9)


def test_optimal_input_norm_and_extension():
    o = SecondOrderOscillator.from_q(10, 1.0)
    h = impulse_response(o)
    gi = choose_generating_interval(h, o.t_d)
    f = optimal_input(h, gi, target_norm=2.0)
    assert isinstance(f, PeriodicExtension)
    assert norm(f, gi.interval) == pytest.approx(2.0, rel=1e-9)
    with pytest.raises(WaveformError):
        optimal_input(h, gi, target_norm=0.0)


def test_s0_examples():
    # sine drive on a sine kernel, half period: integral of sin**2 over [0, pi)
    h = Sine(1.0, 1.0, 0.0)
    gi = GeneratingInterval(math.pi, HALF_PERIOD)
    assert s0(h, h, gi, FINE) == pytest.approx(math.pi / 2, rel=1e-10)
    assert s0(Square(1.0, 2 * math.pi), h, gi, FINE) == pytest.approx(2.0, rel=1e-10)


def test_rank_inputs_orders_and_norm_matches():
    h = Sine(1.0, 1.0, 0.0)
    gi = GeneratingInterval(math.pi, HALF_PERIOD)
    ranked = rank_inputs([Square(1.0, 2 * math.pi), Triangle(1.0, 2 * math.pi), Sine()], h, gi)
    assert [r.index for r in ranked] == [2, 1, 0]
    assert ranked[0].miss == 0.0
    for r in ranked:
        assert norm(r.waveform, gi.interval) == pytest.approx(1.0, rel=1e-9)
    assert all(a.s0 >= b.s0 for a, b in zip(ranked, ranked[1:]))
    with pytest.raises(WaveformError):
        rank_inputs([Sine()], h, gi)


def test_predicted_vs_simulated_low_damping():
    o = SecondOrderOscillator.from_q(200, 1.0)
    cmp = predicted_vs_simulated(o, Square(1.0, o.t_d), 5)
    assert cmp.max_relative_error < 0.03
    with pytest.raises(ValidityError, match="damping"):
        predicted_vs_simulated(SecondOrderOscillator.from_q(10, 1.0), Square(1.0, 2 * math.pi), 5)


def test_predicted_extremes_alternate():
    h = Sine(1.0, 1.0, 0.0)
    rep = optimality_report(Square(1.0, 2 * math.pi), h, GeneratingInterval(math.pi, HALF_PERIOD), FINE, k_max=4)
    np.testing.assert_allclose(rep.predicted_extremes, [2, -4, 6, -8], rtol=1e-9)


# --- properties ----------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(kernels_and_intervals(), waveforms())
def test_bound_holds_and_optimum_attains_it(kg, f):
    h, gi = kg
    rep = optimality_report(f, h, gi)
    assert rep.s0 <= rep.bound * (1 + 1e-12) + 1e-300
    opt = optimal_input(h, gi, target_norm=1.0)
    assert optimality_report(opt, h, gi).gap_ratio == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(kernels_and_intervals(), waveforms(), st.floats(0.1, 20.0))
def test_gap_ratio_scale_invariant(kg, f, c):
    from tdres.waveform import Scaled
    h, gi = kg
    a = optimality_report(f, h, gi)
    b = optimality_report(Scaled(f, c), h, gi)
    assert b.s0 == pytest.approx(c * a.s0, rel=1e-9, abs=1e-300)
    assert b.gap_ratio == pytest.approx(a.gap_ratio, rel=1e-9, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(3.0, 300.0), st.floats(0.3, 3.0))
def test_half_period_interval_matches_kernel(Q, w0):
    o = SecondOrderOscillator.from_q(Q, w0)
    gi = half_period_interval(o)
    assert gi.length == pytest.approx(math.pi / o.omega_d)
    h = simplified_impulse_response(o)
    assert h(gi.length * 0.5) == pytest.approx(math.sin(o.omega0 * gi.length * 0.5))
