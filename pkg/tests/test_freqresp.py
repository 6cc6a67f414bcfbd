import math

import numpy as np
import pytest

from tdres.errors import OscillatorError, SweepError, ValidityError
from tdres.freqresp import (
    ResonanceCurve, half_power, resonance_sweep, rlc_equivalent, steady_amplitude_exact,
    steady_amplitude_lorentzian, transient_duration,
)
from tdres.oscillator import RlcParams, SecondOrderOscillator


@pytest.fixture
def circuit():
    return RlcParams(0.1, 1.0, 1.0)  # gamma = 0.05, omega0 = 1, Q = 10


def test_exact_amplitude_examples(circuit):
    assert steady_amplitude_exact(circuit, 1.0) == pytest.approx(10.0)
    assert steady_amplitude_exact(RlcParams(0.0, 1.0, 1.0), 1.0) == math.inf
    x = 2.0 - 0.5
    assert steady_amplitude_exact(circuit, 2.0) == pytest.approx(1 / math.hypot(0.1, x))


def test_lorentzian_close_to_exact_near_resonance():
    # at Q = 100 the two forms agree within 1 percent inside |omega - omega0| <= 2 gamma
    p = rlc_equivalent(SecondOrderOscillator.from_q(100, 1.0))
    for w in np.linspace(0.99, 1.01, 11):
        assert steady_amplitude_lorentzian(p, w) == pytest.approx(steady_amplitude_exact(p, w), rel=0.01)


def test_lorentzian_validity_guard(circuit):
    with pytest.raises(ValidityError, match="omega0"):
        steady_amplitude_lorentzian(circuit, 1.5)
    assert steady_amplitude_lorentzian(circuit, 1.2) > 0


def test_exact_rejects_nonpositive_frequency(circuit):
    with pytest.raises(ValidityError):
        steady_amplitude_exact(circuit, 0.0)


def test_rlc_equivalent_round_trip():
    from tdres.oscillator import from_rlc
    o = SecondOrderOscillator.from_q(25, 3.0)
    back = from_rlc(rlc_equivalent(o))
    assert back.gamma == pytest.approx(o.gamma) and back.omega0 == pytest.approx(o.omega0)


def test_half_power_bandwidth(circuit):
    w = np.linspace(0.8, 1.2, 4001)
    hp = half_power(resonance_sweep(circuit, w))
    assert hp.delta_omega == pytest.approx(2 * 0.05, rel=1e-3)
    assert hp.q_est == pytest.approx(10.0, rel=1e-3)
    assert hp.omega1 < 1.0 < hp.omega2
    assert set(hp.to_dict()) == {"omega1", "omega2", "delta_omega", "q_est"}


def test_half_power_too_narrow(circuit):
    with pytest.raises(SweepError, match="too narrow"):
        half_power(resonance_sweep(circuit, np.linspace(0.99, 1.01, 21)))
    with pytest.raises(SweepError, match="too narrow"):
        half_power(resonance_sweep(circuit, np.linspace(1.0, 1.5, 21)))


def test_half_power_lossless_peak():
    with pytest.raises(SweepError, match="infinite"):
        half_power(resonance_sweep(RlcParams(0.0, 1.0, 1.0), [0.9, 1.0, 1.1]))


def test_sweep_validation(circuit):
    with pytest.raises(SweepError):
        resonance_sweep(circuit, [])
    with pytest.raises(SweepError):
        resonance_sweep(circuit, [1.0, 0.9])
    with pytest.raises(SweepError):
        resonance_sweep(circuit, [1.0], method="bogus")
    with pytest.raises(SweepError):
        resonance_sweep(SecondOrderOscillator(0.0, 1.0), [1.0], method="timedomain")


def test_timedomain_sweep_tracks_transfer():
    o = SecondOrderOscillator.from_q(10, 1.0)
    w = np.array([0.9, 1.0, 1.1])
    td = resonance_sweep(o, w, "timedomain")
    expected = o.omega_d / np.abs(1 - w ** 2 + 2j * o.gamma * w)
    np.testing.assert_allclose(td.amplitudes, expected, rtol=1e-3)


def test_curve_invariants():
    with pytest.raises(SweepError):
        ResonanceCurve([1.0, 2.0], [1.0], "analytic")
    with pytest.raises(SweepError):
        ResonanceCurve([1.0, 2.0], [1.0, -1.0], "analytic")
    c = ResonanceCurve([1.0, 2.0, 3.0], [1.0, 4.0, 2.0], "analytic")
    np.testing.assert_allclose(c.peak_normalized(), [0.25, 1.0, 0.5])
    assert c.peak_frequency == 2.0


def test_transient_duration_forms_agree():
    for Q in (5, 10, 80):
        o = SecondOrderOscillator.from_q(Q, 2.0)
        d = transient_duration(o)
        assert d.tau == pytest.approx(d.q_t_o_over_pi, rel=1e-12)
    with pytest.raises(OscillatorError):
        transient_duration(SecondOrderOscillator(0.0, 1.0))
