"""Steady-state amplitude formulas, resonance curves and bandwidth.

These are the frequency-domain counterparts of the time-domain engine,
kept here so the two views can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .convolve import steady_amplitude
from .errors import OscillatorError, SweepError, ValidityError
from .io import write_csv
from .oscillator import RlcParams, SecondOrderOscillator, from_rlc, impulse_response
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .waveform import Sine

__all__ = [
    "ResonanceCurve", "HalfPower", "TransientDuration", "METHODS", "LORENTZIAN_RANGE",
    "steady_amplitude_exact", "steady_amplitude_lorentzian", "resonance_sweep",
    "half_power", "transient_duration", "rlc_equivalent",
]

METHODS = ("analytic", "lorentzian", "timedomain")
LORENTZIAN_RANGE = 0.2  # |omega - omega0| <= 0.2 omega0


def rlc_equivalent(osc: SecondOrderOscillator, v_m: float = 1.0) -> RlcParams:
    """Series circuit with ``L = 1`` realising the oscillator's gamma and omega0."""
    return RlcParams(2 * osc.gamma, 1.0, 1.0 / osc.omega0 ** 2, v_m)


def _as_rlc(system) -> RlcParams:
    if isinstance(system, RlcParams):
        return system
    if isinstance(system, SecondOrderOscillator):
        return rlc_equivalent(system)
    raise TypeError(f"expected RlcParams or SecondOrderOscillator, got {type(system).__name__}")


def steady_amplitude_exact(p: RlcParams, omega: float) -> float:
    """Phasor current amplitude ``v_m / |Z(omega)|``.

    Returns ``math.inf`` for a lossless circuit driven exactly at resonance.
    """
    if not omega > 0:
        raise ValidityError(f"omega must be positive, got {omega}")
    x = omega * p.L - 1.0 / (omega * p.C)
    z = math.hypot(p.R, x)
    return math.inf if z == 0 else p.v_m / z


def steady_amplitude_lorentzian(p: RlcParams, omega: float) -> float:
    """Near-resonance form ``v_m / (2 L sqrt(gamma**2 + (omega - omega0)**2))``.

    Only meaningful close to resonance; raises :class:`ValidityError`
    outside ``|omega - omega0| <= 0.2 omega0``.
    """
    w0 = p.omega0
    if not omega > 0 or abs(omega - w0) > LORENTZIAN_RANGE * w0 * (1 + 1e-12):
        raise ValidityError(
            f"near-resonance approximation valid only for |omega - omega0| <= "
            f"{LORENTZIAN_RANGE:g}*omega0 (omega0={w0:g}), got omega={omega:g}")
    d = math.hypot(p.gamma, omega - w0)
    return math.inf if d == 0 else p.v_m / (2 * p.L * d)


@dataclass(frozen=True, eq=False)
class ResonanceCurve:
    frequencies: np.ndarray
    amplitudes: np.ndarray
    method: str

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        a = np.asarray(self.amplitudes, dtype=float)
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "amplitudes", a)
        if len(f) != len(a):
            raise SweepError("frequencies and amplitudes differ in length")
        if len(f) == 0:
            raise SweepError("empty frequency grid")
        if np.any(np.diff(f) <= 0):
            raise SweepError("frequencies must be strictly increasing")
        if np.any(a < 0):
            raise SweepError("amplitudes must be non-negative")

    def peak_normalized(self) -> np.ndarray:
        return self.amplitudes / self.amplitudes.max()

    @property
    def peak_frequency(self) -> float:
        return float(self.frequencies[int(np.argmax(self.amplitudes))])

    def to_csv(self, path):
        return write_csv(path, ["omega", "amplitude"], [self.frequencies, self.amplitudes])


def resonance_sweep(system, omegas, method: str = "analytic",
                    q: QuadratureConfig = DEFAULT_QUADRATURE) -> ResonanceCurve:
    """Amplitude versus drive frequency.

    Parameters
    ----------
    system : SecondOrderOscillator or RlcParams
        An oscillator is mapped to the circuit ``L = 1, C = 1/omega0**2,
        R = 2 gamma``.
    method : {"analytic", "lorentzian", "timedomain"}
        ``analytic`` uses the exact phasor amplitude, ``lorentzian`` its
        near-resonance form, ``timedomain`` the steady peak of the convolved
        response to a unit sine (normalized kernel).
    """
    w = np.asarray(omegas, dtype=float)
    if w.size == 0:
        raise SweepError("empty frequency grid")
    if np.any(w <= 0):
        raise SweepError("all sweep frequencies must be positive")
    if np.any(np.diff(w) <= 0):
        raise SweepError("sweep frequencies must be strictly increasing")
    if method == "analytic":
        p = _as_rlc(system)
        amps = [steady_amplitude_exact(p, x) for x in w]
    elif method == "lorentzian":
        p = _as_rlc(system)
        amps = [steady_amplitude_lorentzian(p, x) for x in w]
    elif method == "timedomain":
        osc = from_rlc(system) if isinstance(system, RlcParams) else system
        if osc.gamma <= 0:
            raise SweepError("time-domain sweep needs gamma > 0 (no steady state otherwise)")
        h = impulse_response(osc, "normalized")
        amps = [steady_amplitude(osc, Sine(1.0, x, 0.0), q, kernel=h) for x in w]
    else:
        raise SweepError(f"unknown sweep method {method!r}; expected one of {METHODS}")
    return ResonanceCurve(w, np.array(amps, dtype=float), method)


class HalfPower(NamedTuple):
    omega1: float
    omega2: float
    delta_omega: float
    q_est: float
    omega_peak: float

    def to_dict(self) -> dict:
        return {"omega1": self.omega1, "omega2": self.omega2,
                "delta_omega": self.delta_omega, "q_est": self.q_est}


def half_power(curve: ResonanceCurve) -> HalfPower:
    """Half-power points by linear interpolation at ``peak / sqrt(2)``."""
    a, w = curve.amplitudes, curve.frequencies
    i = int(np.argmax(a))
    peak = a[i]
    if not np.isfinite(peak):
        raise SweepError("curve peak is infinite (lossless resonance); bandwidth undefined")
    if i == 0 or i == len(a) - 1:
        raise SweepError("sweep range too narrow: peak lies on the grid edge")
    level = peak / math.sqrt(2)
    left = np.nonzero(a[:i] < level)[0]
    right = np.nonzero(a[i + 1:] < level)[0]
    if len(left) == 0 or len(right) == 0:
        raise SweepError("sweep range too narrow: half-power level not crossed on both sides")
    j = int(left[-1])
    w1 = w[j] + (level - a[j]) * (w[j + 1] - w[j]) / (a[j + 1] - a[j])
    j = i + 1 + int(right[0])
    w2 = w[j - 1] + (level - a[j - 1]) * (w[j] - w[j - 1]) / (a[j] - a[j - 1])
    dw = float(w2 - w1)
    return HalfPower(float(w1), float(w2), dw, float(w[i] / dw), float(w[i]))


class TransientDuration(NamedTuple):
    tau: float
    q_t_o_over_pi: float


def transient_duration(osc: SecondOrderOscillator) -> TransientDuration:
    """Build-up time ``1/gamma`` and the equal form ``Q T_o / pi``."""
    if osc.gamma <= 0:
        raise OscillatorError("lossless oscillator: build-up never ends (gamma = 0)")
    return TransientDuration(1.0 / osc.gamma, osc.q * osc.t_o / math.pi)
