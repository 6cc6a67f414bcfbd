"""Harmonic analysis with a bank of simulated resonators.

Each resonator is tuned to ``k * 2pi/T`` and driven by the periodic input.
Its saturated response, divided by its response to a unit sine at the
same frequency, estimates the k-th sine coefficient. No transform is
used anywhere.

The bank uses the exact kernel (peak gain ``Q`` at every tuning), so raw
saturated levels are already in proportion to the coefficients; the
calibration run removes the common gain.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .convolve import saturation_level
from .errors import ProbeError
from .io import write_csv
from .oscillator import SecondOrderOscillator, impulse_response
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate
from .waveform import Sine, Square, Waveform

__all__ = [
    "ProbeResult", "MIN_Q", "harmonic_probe", "calibration_level", "coefficient_estimate",
    "direct_fourier_coefficient", "stretched_wave_ratio", "retuned_circuit_ratio",
    "probe_table", "write_probe_csv",
]

MIN_Q = 10.0


class ProbeResult(NamedTuple):
    k: int
    omega: float
    saturated: float
    calibration: float | None = None

    @property
    def estimate(self) -> float:
        return coefficient_estimate(self)


def _bank_oscillator(omega0: float, Q: float) -> SecondOrderOscillator:
    return SecondOrderOscillator.from_q(Q, omega0)


@lru_cache(maxsize=256)
def _calibration(omega0: float, Q: float, flavor: str, q: QuadratureConfig) -> float:
    osc = _bank_oscillator(omega0, Q)
    return saturation_level(osc, Sine(1.0, omega0, 0.0), q, impulse_response(osc, flavor))


def calibration_level(omega0: float, Q: float, q: QuadratureConfig = DEFAULT_QUADRATURE,
                      flavor: str = "exact") -> float:
    """Saturated level of a unit sine at ``omega0`` through the bank resonator."""
    return _calibration(float(omega0), float(Q), flavor, q)


def harmonic_probe(f_inp: Waveform, harmonics, Q: float = 50.0,
                   q: QuadratureConfig = DEFAULT_QUADRATURE, flavor: str = "exact",
                   calibrate: bool = True) -> list[ProbeResult]:
    """Saturated level of one resonator per harmonic index in ``harmonics``."""
    if not Q >= MIN_Q:
        raise ProbeError(f"bank Q must be >= {MIN_Q:g} for harmonic selectivity, got {Q}")
    ks = [int(k) for k in harmonics]
    if not ks:
        raise ProbeError("no harmonics requested")
    if any(k < 1 for k in ks):
        raise ProbeError(f"harmonic indices must be positive, got {ks}")
    T = f_inp.repeat_period()
    if T is None:
        raise ProbeError(f"input {f_inp.kind!r} is not periodic")
    out = []
    for k in sorted(ks):
        w0 = k * 2 * math.pi / T
        osc = _bank_oscillator(w0, Q)
        level = saturation_level(osc, f_inp, q, impulse_response(osc, flavor))
        cal = calibration_level(w0, Q, q, flavor) if calibrate else None
        out.append(ProbeResult(k, w0, level, cal))
    return out


def coefficient_estimate(probe: ProbeResult, calibration: float | None = None) -> float:
    """``saturated / calibration``: the magnitude of the k-th sine coefficient."""
    cal = probe.calibration if calibration is None else calibration
    if cal is None:
        raise ProbeError(f"no calibration run for harmonic k={probe.k}")
    if not cal > 0:
        raise ProbeError(f"calibration level must be positive, got {cal}")
    return probe.saturated / cal


def direct_fourier_coefficient(f_inp: Waveform, k: int, T: float,
                               q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``(2/T) integral_0^T f(t) sin(2 pi k t / T) dt``."""
    if not T > 0:
        raise ProbeError(f"period must be positive, got {T}")
    w = 2 * math.pi * k / T
    val = integrate(lambda t: f_inp._eval(t) * np.sin(w * t), 0.0, T,
                    f_inp.breakpoints(0.0, T), T / max(k, 1), q)
    return float(2.0 / T * val)


def stretched_wave_ratio(osc: SecondOrderOscillator, stretch: int = 3,
                         q: QuadratureConfig = DEFAULT_QUADRATURE, flavor: str = "exact") -> float:
    """Saturation with a square wave of period ``stretch*T_d`` over that with period ``T_d``.

    Same circuit, slower wave.
    """
    h = impulse_response(osc, flavor)
    base = saturation_level(osc, Square(1.0, osc.t_d), q, h)
    slow = saturation_level(osc, Square(1.0, stretch * osc.t_d), q, h)
    return slow / base


def retuned_circuit_ratio(f_inp: Waveform, Q: float = 50.0, harmonic: int = 3,
                          q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Raw level of the resonator tuned to ``harmonic`` over the fundamental's.

    Same wave, faster circuit.
    """
    r = harmonic_probe(f_inp, [1, harmonic], Q, q, calibrate=False)
    return r[1].saturated / r[0].saturated


def probe_table(f_inp: Waveform, harmonics, Q: float = 50.0,
                q: QuadratureConfig = DEFAULT_QUADRATURE) -> dict:
    """Columns ``k, omega, saturated, estimate, direct, relative_error``.

    ``relative_error`` is ``|estimate - |direct|| / max_k |direct|``.
    """
    T = f_inp.repeat_period()
    probes = harmonic_probe(f_inp, harmonics, Q, q)
    est = np.array([p.estimate for p in probes])
    direct = np.array([direct_fourier_coefficient(f_inp, p.k, T, q) for p in probes])
    scale = np.abs(direct).max()
    rel = np.abs(est - np.abs(direct)) / scale if scale > 0 else np.abs(est)
    return {"k": np.array([p.k for p in probes]), "omega": np.array([p.omega for p in probes]),
            "saturated": np.array([p.saturated for p in probes]), "estimate": est,
            "direct": direct, "relative_error": rel}


def write_probe_csv(path, table: dict):
    cols = ["k", "omega", "saturated", "estimate", "direct", "relative_error"]
    return write_csv(path, cols, [table[c] for c in cols])
