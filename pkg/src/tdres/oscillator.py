"""System models: RLC mapping, second-order oscillator and impulse responses.

Kernel flavors
--------------
``exact``         ``(w0**2/wd) exp(-g t) sin(wd t)`` -- unit DC gain, gain Q at resonance
``normalized``    ``exp(-g t) sin(wd t)``            -- the shape used for figure work
``simplified``    ``sin(w0 t)`` cut to zero after an integer number of half-waves near 1/g
``first_order``   ``exp(-a t) u(t)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, NamedTuple

import numpy as np

from .errors import OscillatorError
from .waveform import DampedSine, Exponential, Sine, Windowed, _grid_points, _register, _Wrapper

__all__ = [
    "RlcParams", "SecondOrderOscillator", "DerivedQuantities", "ImpulseResponse",
    "from_rlc", "derived_quantities", "impulse_response", "simplified_impulse_response",
    "first_order_impulse_response", "oscillator_from_dict",
]

FLAVORS = ("exact", "normalized", "simplified", "first_order")


@dataclass(frozen=True)
class RlcParams:
    """Series RLC circuit driven by ``v_m sin(wt)``."""

    R: float
    L: float
    C: float
    v_m: float = 1.0

    def __post_init__(self):
        if not self.L > 0 or not self.C > 0:
            raise OscillatorError(f"L and C must be positive, got L={self.L}, C={self.C}")
        if not self.R >= 0:
            raise OscillatorError(f"R must be >= 0, got {self.R}")
        if not self.v_m > 0:
            raise OscillatorError(f"drive amplitude v_m must be positive, got {self.v_m}")

    @property
    def gamma(self) -> float:
        return self.R / (2 * self.L)

    @property
    def omega0(self) -> float:
        return 1.0 / math.sqrt(self.L * self.C)


@dataclass(frozen=True)
class SecondOrderOscillator:
    """Underdamped oscillator ``y'' + 2 gamma y' + omega0**2 y = ...``."""

    gamma: float
    omega0: float

    def __post_init__(self):
        if not (np.isfinite(self.omega0) and self.omega0 > 0):
            raise OscillatorError(f"omega0 must be positive, got {self.omega0}")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise OscillatorError(f"gamma must be >= 0, got {self.gamma}")
        if self.gamma >= self.omega0:
            raise OscillatorError(
                f"only underdamped systems are supported: gamma={self.gamma} >= omega0={self.omega0}")

    @classmethod
    def from_q(cls, q: float, omega0: float = 1.0) -> "SecondOrderOscillator":
        if not q > 0.5:
            raise OscillatorError(f"Q must exceed 1/2 for an underdamped system, got {q}")
        if math.isinf(q):
            return cls(0.0, omega0)
        return cls(omega0 / (2 * q), omega0)

    @property
    def q(self) -> float:
        return math.inf if self.gamma == 0 else self.omega0 / (2 * self.gamma)

    @property
    def omega_d(self) -> float:
        return math.sqrt(self.omega0 ** 2 - self.gamma ** 2)

    @property
    def t_o(self) -> float:
        return 2 * math.pi / self.omega0

    @property
    def t_d(self) -> float:
        return 2 * math.pi / self.omega_d

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "omega0": self.omega0}


def oscillator_from_dict(d: dict) -> SecondOrderOscillator:
    """Accepts ``{gamma, omega0}``, ``{q, omega0}`` or ``{R, L, C}``."""
    if {"R", "L", "C"} <= d.keys():
        return from_rlc(RlcParams(float(d["R"]), float(d["L"]), float(d["C"]),
                                  float(d.get("v_m", 1.0))))
    omega0 = float(d.get("omega0", 1.0))
    if "gamma" in d:
        return SecondOrderOscillator(float(d["gamma"]), omega0)
    if "q" in d or "Q" in d:
        return SecondOrderOscillator.from_q(float(d.get("q", d.get("Q"))), omega0)
    raise OscillatorError("oscillator needs (gamma, omega0), (q, omega0) or (R, L, C)")


def from_rlc(p: RlcParams) -> SecondOrderOscillator:
    g, w0 = p.gamma, p.omega0
    if g >= w0:
        raise OscillatorError(f"RLC circuit is not underdamped: gamma={g:g} >= omega0={w0:g}")
    return SecondOrderOscillator(g, w0)


class DerivedQuantities(NamedTuple):
    q: float
    omega_d: float
    t_o: float
    t_d: float


def derived_quantities(osc: SecondOrderOscillator) -> DerivedQuantities:
    return DerivedQuantities(osc.q, osc.omega_d, osc.t_o, osc.t_d)


@_register
@dataclass(frozen=True)
class ImpulseResponse(_Wrapper):
    """A kernel ``h(t)``: the underlying waveform plus what produced it.

    Behaves as a :class:`~tdres.waveform.Waveform`, so it can be used as a
    convolution input too.
    """

    flavor: str = "normalized"
    gamma: float = 0.0
    omega_d: float | None = None
    cutoff: float | None = None
    kind: ClassVar[str] = "impulse_response"

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise OscillatorError(f"unknown impulse response flavor {self.flavor!r}")

    @property
    def waveform(self):
        return self.inner

    @property
    def oscillatory(self) -> bool:
        return self.omega_d is not None and self.omega_d > 0

    @property
    def decay_rate(self) -> float:
        return self.gamma

    def _eval(self, t):
        return self.inner._eval(t)

    def breakpoints(self, a, b):
        return self.inner.breakpoints(a, b)

    def zero_crossings(self, a: float, b: float) -> np.ndarray:
        """Instants ``k*pi/omega_d`` inside ``(a, b)``; empty for first-order kernels."""
        if not self.oscillatory:
            return np.empty(0)
        return _grid_points(math.pi / self.omega_d, 0.0, a, b)

    def params(self):
        return {"flavor": self.flavor, "gamma": self.gamma, "omega_d": self.omega_d,
                "cutoff": self.cutoff}


def impulse_response(osc: SecondOrderOscillator, flavor: str = "normalized") -> ImpulseResponse:
    wd = osc.omega_d
    if flavor == "normalized":
        amp = 1.0
    elif flavor == "exact":
        amp = osc.omega0 ** 2 / wd
    elif flavor == "simplified":
        return simplified_impulse_response(osc)
    else:
        raise OscillatorError(f"impulse_response supports 'exact' and 'normalized', got {flavor!r}")
    return ImpulseResponse(DampedSine(amp, osc.gamma, wd, 0.0), flavor, osc.gamma, wd)


def simplified_impulse_response(osc: SecondOrderOscillator) -> ImpulseResponse:
    """Undamped ``sin(w0 t)`` kept for the whole number of half-waves nearest ``1/gamma``."""
    if osc.gamma == 0:
        raise OscillatorError("lossless system has no finite cutoff")
    half = math.pi / osc.omega0
    n = max(1, math.floor((1.0 / osc.gamma) / half + 0.5))
    cutoff = n * half
    w = Windowed(Sine(1.0, osc.omega0, 0.0), 0.0, cutoff)
    return ImpulseResponse(w, "simplified", osc.gamma, osc.omega0, cutoff)


def first_order_impulse_response(a: float) -> ImpulseResponse:
    if not a > 0:
        raise OscillatorError(f"first-order rate a must be positive, got {a}")
    return ImpulseResponse(Exponential(1.0, a), "first_order", a, None)
