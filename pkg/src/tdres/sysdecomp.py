"""Closed forms and decompositions that back up the convolution engine.

* first-order problem ``y' + a y = A u(t)``, split into zero-input and
  zero-state parts;
* second-order ODE under sine drive, solved in closed form from zero
  initial conditions (transient plus steady sinusoid);
* velocity of a mass under a force, possibly with time-varying mass;
* steady-state (infinite lower limit) convolution for periodic inputs;
* Laplace transform of the response to a periodic input, with a numeric
  cross-check on a simulated trace.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import simpson

from .convolve import zsr
from .errors import ConvolutionError, OscillatorError, ValidityError
from .oscillator import ImpulseResponse, SecondOrderOscillator, impulse_response
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate
from .waveform import Sine, Waveform, common_time_scale

__all__ = [
    "FirstOrderProblem", "DecomposedSolution", "ClosedFormSecondOrder", "VelocityResult",
    "LaplaceCheck", "TAIL_SPAN", "first_order_solve", "second_order_closed_form",
    "newton_velocity", "asymptotic_tail", "kernel_transfer", "laplace_periodic_output",
    "laplace_numeric", "laplace_check",
]

TAIL_SPAN = 40.0  # asymptotic integrals are cut at TAIL_SPAN / gamma


@dataclass(frozen=True)
class FirstOrderProblem:
    """``y' + a y = A`` for ``t > 0`` with ``y(0) = y0``."""

    a: float
    A: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise OscillatorError(f"first-order rate a must be positive, got {self.a}")


class DecomposedSolution(NamedTuple):
    t: np.ndarray
    zir: np.ndarray
    zsr: np.ndarray
    total: np.ndarray


def first_order_solve(p: FirstOrderProblem, grid) -> DecomposedSolution:
    """Zero-input ``y0 e^{-at}`` plus zero-state ``(A/a)(1 - e^{-at})``."""
    t = np.asarray(grid, dtype=float)
    decay = np.exp(-p.a * t)
    zir = p.y0 * decay
    zs = (p.A / p.a) * (1.0 - decay)
    return DecomposedSolution(t, zir, zs, zir + zs)


@dataclass(frozen=True)
class ClosedFormSecondOrder:
    """Solution of ``y'' + 2 gamma y' + omega0**2 y = g A sin(omega t + phi)``, zero start.

    ``y = e^{-gamma t}(K1 cos wd t + K2 sin wd t) + amplitude sin(omega t + phase)``.
    The gain ``g`` is ``omega0**2`` for the exact kernel and ``omega_d`` for
    the normalized one; with either, the solution equals the zero-state
    convolution with that kernel.
    """

    gamma: float
    omega_d: float
    omega: float
    K1: float
    K2: float
    amplitude: float
    phase: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        trans = np.exp(-self.gamma * t) * (self.K1 * np.cos(self.omega_d * t)
                                           + self.K2 * np.sin(self.omega_d * t))
        y = trans + self.amplitude * np.sin(self.omega * t + self.phase)
        return float(y) if y.ndim == 0 else y

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        g, wd = self.gamma, self.omega_d
        e = np.exp(-g * t)
        c, s = np.cos(wd * t), np.sin(wd * t)
        d = e * ((-g * self.K1 + wd * self.K2) * c + (-g * self.K2 - wd * self.K1) * s)
        d = d + self.amplitude * self.omega * np.cos(self.omega * t + self.phase)
        return float(d) if d.ndim == 0 else d


def second_order_closed_form(osc: SecondOrderOscillator, drive: Sine,
                             flavor: str = "exact") -> ClosedFormSecondOrder:
    """Closed-form zero-state response to a sine drive."""
    w0, g, wd, w = osc.omega0, osc.gamma, osc.omega_d, drive.omega
    if g == 0 and w == w0:
        raise ValidityError("lossless oscillator driven exactly at omega0 has no steady "
                            "sinusoid; use the convolution engine (tdres.convolve.zsr) instead")
    if flavor == "exact":
        gain = w0 ** 2
    elif flavor == "normalized":
        gain = wd
    else:
        raise OscillatorError(f"closed form supports 'exact' and 'normalized', got {flavor!r}")
    H = gain / complex(w0 ** 2 - w ** 2, 2 * g * w)
    amp = drive.amplitude * abs(H)
    phase = drive.phase + cmath.phase(H)
    y0 = amp * math.sin(phase)
    dy0 = amp * w * math.cos(phase)
    K1 = -y0
    K2 = (g * K1 - dy0) / wd
    return ClosedFormSecondOrder(g, wd, w, K1, K2, amp, phase)


class VelocityResult(NamedTuple):
    zir: float
    zsr: float
    total: float


def newton_velocity(F: Waveform, m, v0: float, t: float,
                    q: QuadratureConfig = DEFAULT_QUADRATURE) -> VelocityResult:
    """``v(t) = v0 + integral_0^t F/m``; ``m`` is a number, a Waveform or a callable."""
    if t < 0:
        raise ValidityError(f"t must be >= 0, got {t}")
    if isinstance(m, Waveform):
        mass: Callable = m._eval
    elif callable(m):
        mass = lambda x: np.asarray(m(x), dtype=float) * np.ones_like(x)  # noqa: E731
    else:
        mv = float(m)
        if not mv > 0:
            raise ValidityError(f"mass must be positive, got {mv}")
        mass = lambda x: np.full_like(x, mv)  # noqa: E731
    if t == 0:
        return VelocityResult(v0, 0.0, v0)
    check = mass(np.linspace(0.0, t, 1025))
    if np.any(check <= 0):
        raise ValidityError("mass must be positive everywhere on [0, t]")

    def accel(x):
        mx = mass(x)
        if np.any(mx <= 0):
            raise ValidityError("mass must be positive everywhere on [0, t]")
        return F._eval(x) / mx

    breaks = F.breakpoints(0.0, t)
    if isinstance(m, Waveform):
        breaks = np.concatenate([breaks, m.breakpoints(0.0, t)])
    dv = float(integrate(accel, 0.0, t, breaks, common_time_scale(F), q))
    return VelocityResult(v0, dv, v0 + dv)


def asymptotic_tail(h: ImpulseResponse, f_inp: Waveform, t: float,
                    q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``integral_0^inf h(lam) f(t - lam) dlam``, cut at ``40/gamma``.

    The input is taken as extending to negative times, so this is the
    steady state the zero-state response settles to.
    """
    if t < 0:
        raise ValidityError(f"t must be >= 0, got {t}")
    if not h.decay_rate > 0:
        raise ConvolutionError("asymptotic integral diverges for an undamped kernel (gamma = 0)")
    span = TAIL_SPAN / h.decay_rate
    parts = [h.breakpoints(0.0, span), t - f_inp.breakpoints(t - span, t), h.zero_crossings(0.0, span)]
    breaks = np.concatenate(parts)
    return float(integrate(lambda lam: h._eval(lam) * f_inp._eval(t - lam), 0.0, span, breaks,
                           common_time_scale(h, f_inp), q))


def kernel_transfer(osc: SecondOrderOscillator, s: complex, flavor: str = "exact") -> complex:
    """Laplace transform of the kernel: ``g / ((s + gamma)**2 + omega_d**2)``."""
    den = (s + osc.gamma) ** 2 + osc.omega_d ** 2
    if flavor == "exact":
        return osc.omega0 ** 2 / den
    if flavor == "normalized":
        return osc.omega_d / den
    raise OscillatorError(f"transfer defined for 'exact' and 'normalized', got {flavor!r}")


def laplace_periodic_output(osc: SecondOrderOscillator, f_inp: Waveform, s: complex,
                            q: QuadratureConfig = DEFAULT_QUADRATURE, flavor: str = "exact") -> complex:
    """``H(s) * integral_0^T f e^{-st} dt / (1 - e^{-sT})`` for a periodic input."""
    s = complex(s)
    if not s.real > 0:
        raise ValidityError(f"Re(s) must be positive, got s={s}")
    T = f_inp.repeat_period()
    if T is None:
        raise ValidityError(f"input {f_inp.kind!r} is not periodic")
    den = 1.0 - cmath.exp(-s * T)
    if abs(den) < 1e-12:
        raise ValidityError(f"s={s} is a pole of the periodic transform (1 - e^(-sT) = 0)")
    one_period = integrate(lambda t: f_inp._eval(t) * np.exp(-s * t), 0.0, T,
                           f_inp.breakpoints(0.0, T), common_time_scale(f_inp), q)
    return complex(kernel_transfer(osc, s, flavor) * one_period / den)


def laplace_numeric(t, values, s: complex) -> complex:
    """Truncated transform ``integral f(t) e^{-st} dt`` of a sampled trace (Simpson)."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(values, dtype=float) * np.exp(-complex(s) * t)
    return complex(simpson(y.real, x=t) + 1j * simpson(y.imag, x=t))


class LaplaceCheck(NamedTuple):
    s: complex
    formula: complex
    numeric: complex
    rel_err: float
    flavor: str
    horizon: float

    def to_dict(self) -> dict:
        return {"s_re": self.s.real, "s_im": self.s.imag,
                "formula_re": self.formula.real, "formula_im": self.formula.imag,
                "numeric_re": self.numeric.real, "numeric_im": self.numeric.imag,
                "rel_err": self.rel_err, "flavor": self.flavor, "horizon": self.horizon,
                "kernel_gain": "omega0**2" if self.flavor == "exact" else "omega_d"}


def laplace_check(osc: SecondOrderOscillator, f_inp: Waveform, s: complex,
                  q: QuadratureConfig = DEFAULT_QUADRATURE, flavor: str = "exact",
                  horizon: float | None = None, dt: float | None = None) -> LaplaceCheck:
    """Compare the periodic-transform formula with a simulated, truncated transform.

    The response is simulated on ``[0, horizon]`` (default ``30/Re(s)``,
    so the neglected tail is below ``e^{-30}`` of the integrand scale).
    """
    s = complex(s)
    formula = laplace_periodic_output(osc, f_inp, s, q, flavor)
    if horizon is None:
        horizon = 30.0 / s.real
    dt = osc.t_d / 64 if dt is None else dt
    trace = zsr(impulse_response(osc, flavor), f_inp, horizon, dt, q)
    numeric = laplace_numeric(trace.times, trace.values, s)
    err = abs(numeric - formula) / abs(formula)
    return LaplaceCheck(s, formula, numeric, float(err), flavor, float(horizon))
