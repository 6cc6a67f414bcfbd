import math

import numpy as np
import pytest

from tdres.errors import OscillatorError
from tdres.oscillator import (
    RlcParams, SecondOrderOscillator, derived_quantities, first_order_impulse_response, from_rlc,
    impulse_response, oscillator_from_dict, simplified_impulse_response,
)
from tdres.waveform import norm, waveform_from_dict


def test_from_rlc_examples():
    o = from_rlc(RlcParams(0.1, 1.0, 1.0))
    assert o.gamma == pytest.approx(0.05) and o.omega0 == pytest.approx(1.0)
    o = from_rlc(RlcParams(0.0, 1.0, 1.0))
    assert o.gamma == 0.0 and o.q == math.inf
    with pytest.raises(OscillatorError, match="gamma=1.5"):
        from_rlc(RlcParams(3.0, 1.0, 1.0))


@pytest.mark.parametrize("kw", [dict(R=-1, L=1, C=1), dict(R=1, L=0, C=1), dict(R=1, L=1, C=-2),
                                dict(R=1, L=1, C=1, v_m=0)])
def test_rlc_validation(kw):
    with pytest.raises(OscillatorError):
        RlcParams(**kw)


def test_derived_quantities():
    d = derived_quantities(SecondOrderOscillator(0.05, 1.0))
    assert d.q == pytest.approx(10.0)
    assert d.t_o == pytest.approx(2 * math.pi)
    d0 = derived_quantities(SecondOrderOscillator(0.0, 1.0))
    assert d0.omega_d == 1.0 and d0.q == math.inf


@pytest.mark.parametrize("Q", [10, 30, 100, 1000])
def test_omega_d_second_order_expansion(Q):
    # sqrt(1 - 1/(4Q^2)) = 1 - 1/(8Q^2) + O(Q^-4)
    o = SecondOrderOscillator.from_q(Q, 1.0)
    assert abs(o.omega_d - (1 - 1 / (8 * Q ** 2))) < 1e-6


def test_omega_d_quarter_q_squared_form_is_off_by_one_over_eight_q_squared():
    # the 1 - 1/(4Q^2) form misses by about 1/(8Q^2); documented, not used
    o = SecondOrderOscillator.from_q(10, 1.0)
    assert abs(o.omega_d - (1 - 1 / 400)) == pytest.approx(1 / 800, rel=1e-2)


def test_oscillator_validation():
    with pytest.raises(OscillatorError):
        SecondOrderOscillator(1.0, 1.0)
    with pytest.raises(OscillatorError):
        SecondOrderOscillator(-0.1, 1.0)
    with pytest.raises(OscillatorError):
        SecondOrderOscillator(0.0, 0.0)
    with pytest.raises(OscillatorError):
        SecondOrderOscillator.from_q(0.5)


def test_oscillator_from_dict_variants():
    a = oscillator_from_dict({"q": 10, "omega0": 2.0})
    b = oscillator_from_dict({"gamma": 0.1, "omega0": 2.0})
    c = oscillator_from_dict({"R": 0.2, "L": 1.0, "C": 0.25})
    assert a.gamma == pytest.approx(b.gamma) == pytest.approx(c.gamma)
    assert oscillator_from_dict(a.to_dict()) == a
    with pytest.raises(OscillatorError):
        oscillator_from_dict({"omega0": 1.0})


def test_impulse_response_values():
    o = SecondOrderOscillator(0.05, 1.0)
    for flavor in ("exact", "normalized"):
        assert impulse_response(o, flavor)(0.0) == 0.0
    t = np.linspace(0, 30, 301)
    h0 = impulse_response(SecondOrderOscillator(0.0, 1.0), "normalized")
    np.testing.assert_array_equal(h0(t), np.sin(t))
    hn = impulse_response(o, "normalized")
    k = np.arange(1, 8)
    np.testing.assert_allclose(hn(k * math.pi / o.omega_d), 0.0, atol=1e-14)
    np.testing.assert_allclose(hn.zero_crossings(0, 7.5 * math.pi / o.omega_d), k * math.pi / o.omega_d)


def test_first_peak_near_quarter_period():
    o = SecondOrderOscillator.from_q(50, 1.0)
    h = impulse_response(o, "normalized")
    t = np.linspace(0, math.pi / o.omega_d, 20001)
    t_peak = t[np.argmax(h(t))]
    assert abs(t_peak - math.pi / (2 * o.omega_d)) < 0.02


def test_exact_is_scaled_normalized():
    o = SecondOrderOscillator.from_q(7, 1.3)
    t = np.linspace(0.01, 40, 999)
    ratio = impulse_response(o, "exact")(t) / np.where(np.abs(impulse_response(o)(t)) > 1e-12,
                                                         impulse_response(o)(t), np.nan)
    ratio = ratio[np.isfinite(ratio)]
    np.testing.assert_allclose(ratio, o.omega0 ** 2 / o.omega_d, rtol=1e-12)


def test_simplified_cutoff_examples():
    o = SecondOrderOscillator(0.05, 1.0)
    h = simplified_impulse_response(o)
    assert h.cutoff == pytest.approx(6 * math.pi)
    assert h(6 * math.pi + 0.1) == 0.0 and h(100.0) == 0.0
    assert h(1.0) == pytest.approx(math.sin(1.0))
    with pytest.raises(OscillatorError, match="no finite cutoff"):
        simplified_impulse_response(SecondOrderOscillator(0.0, 1.0))


@pytest.mark.parametrize("gamma,expected_n", [(0.9, 1), (1 / (2.5 * math.pi), 3), (1 / (3.4 * math.pi), 3)])
def test_simplified_cutoff_rounding(gamma, expected_n):
    # nearest whole half-wave count, ties round up, at least one
    h = simplified_impulse_response(SecondOrderOscillator(gamma, 1.0))
    assert h.cutoff == pytest.approx(expected_n * math.pi)


@pytest.mark.parametrize("Q", [5, 10, 37])
def test_simplified_energy(Q):
    o = SecondOrderOscillator.from_q(Q, 1.0)
    h = simplified_impulse_response(o)
    assert norm(h, (0, h.cutoff)) ** 2 == pytest.approx(h.cutoff / 2, rel=1e-9)


def test_first_order_kernel():
    h = first_order_impulse_response(1.0)
    assert h(0.0) == 1.0
    assert h(1.0) == pytest.approx(math.exp(-1), rel=1e-12)
    assert first_order_impulse_response(2.0)(-0.5) == 0.0
    assert not h.oscillatory and h.zero_crossings(0, 10).size == 0
    with pytest.raises(OscillatorError):
        first_order_impulse_response(0.0)


def test_impulse_response_descriptor_round_trip():
    o = SecondOrderOscillator.from_q(10, 1.0)
    for h in (impulse_response(o, "exact"), simplified_impulse_response(o), first_order_impulse_response(2.0)):
        g = waveform_from_dict(h.to_dict())
        assert g == h
