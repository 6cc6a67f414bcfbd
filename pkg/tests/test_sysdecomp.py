import math

import numpy as np
import pytest

from tdres.errors import ConvolutionError, OscillatorError, ValidityError
from tdres.oscillator import SecondOrderOscillator, impulse_response
from tdres.quadrature import QuadratureConfig
from tdres.sysdecomp import (
    FirstOrderProblem, asymptotic_tail, first_order_solve, kernel_transfer, laplace_check,
    laplace_numeric, laplace_periodic_output, newton_velocity, second_order_closed_form,
)
from tdres.waveform import Exponential, Sine, Square, UnitStep


def test_first_order_parts():
    p = FirstOrderProblem(a=2.0, A=4.0, y0=3.0)
    t = np.linspace(0, 5, 51)
    sol = first_order_solve(p, t)
    np.testing.assert_allclose(sol.zir, 3 * np.exp(-2 * t))
    np.testing.assert_allclose(sol.zsr, 2 * (1 - np.exp(-2 * t)))
    np.testing.assert_allclose(sol.total, sol.zir + sol.zsr)
    # satisfies y' + a y = A
    dy = np.gradient(sol.total, t, edge_order=2)
    np.testing.assert_allclose(dy[5:-5] + 2 * sol.total[5:-5], 4.0, atol=2e-2)
    with pytest.raises(OscillatorError):
        FirstOrderProblem(a=0.0)


def test_closed_form_satisfies_ode():
    o = SecondOrderOscillator.from_q(10, 1.0)
    for flavor, gain in (("exact", 1.0), ("normalized", o.omega_d)):
        y = second_order_closed_form(o, Sine(1.0, 1.2, 0.4), flavor)
        assert y(0.0) == pytest.approx(0.0, abs=1e-14)
        assert y.derivative(0.0) == pytest.approx(0.0, abs=1e-14)
        t = np.linspace(0.5, 30, 200)
        eps = 1e-4
        ydd = (y.derivative(t + eps) - y.derivative(t - eps)) / (2 * eps)
        lhs = ydd + 2 * o.gamma * y.derivative(t) + y(t)
        np.testing.assert_allclose(lhs, gain * np.sin(1.2 * t + 0.4), atol=1e-6)


def test_closed_form_guards():
    with pytest.raises(ValidityError):
        second_order_closed_form(SecondOrderOscillator(0.0, 1.0), Sine(1.0, 1.0, 0.0))
    with pytest.raises(OscillatorError):
        second_order_closed_form(SecondOrderOscillator.from_q(10), Sine(), "simplified")


def test_newton_velocity():
    r = newton_velocity(UnitStep(0.0), 2.0, 1.0, 3.0)
    assert r.zir == 1.0 and r.zsr == pytest.approx(1.5) and r.total == pytest.approx(2.5)
    # growing mass m(t) = 1 + t under unit force gives ln(1 + t)
    r = newton_velocity(UnitStep(0.0), lambda t: 1 + t, 0.0, 1.0)
    assert r.zsr == pytest.approx(math.log(2), abs=1e-8)
    assert newton_velocity(UnitStep(0.0), 1.0, 0.5, 0.0).total == 0.5
    with pytest.raises(ValidityError):
        newton_velocity(UnitStep(0.0), 0.0, 0.0, 1.0)
    with pytest.raises(ValidityError):
        newton_velocity(UnitStep(0.0), lambda t: 1 - t, 0.0, 2.0)


def test_asymptotic_tail_is_steady_state():
    o = SecondOrderOscillator.from_q(10, 1.0)
    h = impulse_response(o, "exact")
    drive = Sine(1.0, 0.9, 0.0)
    ref = second_order_closed_form(o, drive)
    for t in (3.0, 7.5):
        steady = ref.amplitude * math.sin(0.9 * t + ref.phase)
        assert asymptotic_tail(h, drive, t, QuadratureConfig(points=1024)) == pytest.approx(steady, abs=1e-9)
    with pytest.raises(ConvolutionError):
        asymptotic_tail(impulse_response(SecondOrderOscillator(0.0, 1.0)), drive, 1.0)


def test_kernel_transfer_matches_numeric_transform():
    o = SecondOrderOscillator.from_q(5, 1.0)
    s = 0.4 + 0.3j
    t = np.linspace(0, 120, 60001)
    num = laplace_numeric(t, impulse_response(o, "exact")(t), s)
    assert abs(num - kernel_transfer(o, s)) / abs(kernel_transfer(o, s)) < 1e-9


def test_laplace_of_exponential():
    t = np.linspace(0, 60, 30001)
    assert laplace_numeric(t, Exponential(1.0, 1.0)(t), 1.0) == pytest.approx(0.5, rel=1e-9)


def test_laplace_periodic_formula_against_simulation():
    o = SecondOrderOscillator.from_q(10, 1.0)
    chk = laplace_check(o, Square(1.0, o.t_d), 0.5)
    assert chk.rel_err < 1e-6
    assert set(chk.to_dict()) >= {"s_re", "formula_re", "numeric_re", "rel_err", "kernel_gain"}


def test_laplace_guards():
    o = SecondOrderOscillator.from_q(10, 1.0)
    with pytest.raises(ValidityError, match="Re"):
        laplace_periodic_output(o, Square(), -0.1)
    with pytest.raises(ValidityError, match="not periodic"):
        laplace_periodic_output(o, UnitStep(0.0), 1.0)
