"""Norm-constrained optimal periodic drive for a given impulse response.

Over one generating interval ``[0, T_gen)`` the first response extreme is
``S0 = |integral f_inp(T_gen - t) h(t) dt|``. With ``||f||`` fixed, the
Cauchy-Schwarz bound ``S0 <= ||f|| ||h||`` is attained exactly when
``f_inp(t)`` is proportional to ``h(T_gen - t)``. Nothing is searched: the
optimum is built in closed form and then certified numerically.

All three quantities (``S0`` and the two norms) are computed on one shared
set of positive-weight quadrature nodes, so the discrete bound holds to
rounding error for any input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .convolve import extreme_samples
from .errors import ValidityError, WaveformError
from .oscillator import ImpulseResponse, SecondOrderOscillator, impulse_response
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, nodes_and_weights
from .waveform import (
    AntiperiodicExtension, PeriodicExtension, TimeReversedOnInterval, Waveform,
    common_breakpoints, common_time_scale, scale_to_norm,
)

__all__ = [
    "GeneratingInterval", "OptimalityReport", "RankedInput", "ExtremesComparison",
    "HALF_PERIOD", "FULL_PERIOD", "SYMMETRY_TOL", "DAMPING_GUARD",
    "choose_generating_interval", "half_period_interval", "optimal_input", "s0",
    "optimality_report", "rank_inputs", "predicted_vs_simulated",
]

HALF_PERIOD = "HalfPeriod"
FULL_PERIOD = "FullPeriod"
SYMMETRY_TOL = 1e-3
DAMPING_GUARD = 0.3


@dataclass(frozen=True)
class GeneratingInterval:
    """``[0, length)`` plus how it tiles the full drive."""

    length: float
    mode: str
    symmetry_defect: float = 0.0
    period: float | None = None

    def __post_init__(self):
        if not self.length > 0:
            raise WaveformError(f"generating interval must have positive length, got {self.length}")
        if self.mode not in (HALF_PERIOD, FULL_PERIOD):
            raise WaveformError(f"unknown generating-interval mode {self.mode!r}")

    @property
    def interval(self) -> tuple:
        return (0.0, self.length)

    def to_dict(self) -> dict:
        return {"length": self.length, "mode": self.mode,
                "symmetry_defect": self.symmetry_defect, "period": self.period}


def choose_generating_interval(h: Waveform, T: float,
                               q: QuadratureConfig = DEFAULT_QUADRATURE) -> GeneratingInterval:
    """Half period when ``h(t + T/2) = -h(t)`` (defect < 1e-3), else the full period."""
    if not T > 0:
        raise WaveformError(f"kernel period T must be positive, got {T}")
    if isinstance(h, ImpulseResponse) and not h.oscillatory:
        raise ValidityError("kernel not oscillatory: a first-order response never changes sign")
    probe = h(np.linspace(0.0, T, 2049)[1:-1])
    if not (probe.max() > 0 and probe.min() < 0):
        raise ValidityError("kernel not oscillatory: no sign change on [0, T]")
    half = 0.5 * T
    breaks = np.concatenate([h.breakpoints(0.0, half), h.breakpoints(half, T) - half])
    x, w = nodes_and_weights(0.0, half, breaks, common_time_scale(h), q)
    a, b = h._eval(x), h._eval(x + half)
    hn = math.sqrt(np.dot(w, a * a))
    defect = math.sqrt(np.dot(w, (a + b) ** 2)) / hn if hn > 0 else math.inf
    mode = HALF_PERIOD if defect < SYMMETRY_TOL else FULL_PERIOD
    return GeneratingInterval(half if mode == HALF_PERIOD else T, mode, float(defect), T)


def half_period_interval(osc: SecondOrderOscillator) -> GeneratingInterval:
    """The interval ``[0, pi/omega_d)`` between consecutive extremes."""
    return GeneratingInterval(math.pi / osc.omega_d, HALF_PERIOD, 0.0, osc.t_d)


def _shared_nodes(f: Waveform, h: Waveform, gi: GeneratingInterval, q: QuadratureConfig):
    """Nodes on ``[0, T_gen)`` with ``f(T_gen - t)`` and ``h(t)`` evaluated there."""
    Tg = gi.length
    fr = TimeReversedOnInterval(f, Tg)
    x, w = nodes_and_weights(0.0, Tg, common_breakpoints(0.0, Tg, fr, h),
                             common_time_scale(f, h), q)
    return w, fr._eval(x), h._eval(x)


def _l2(w, a) -> float:
    """Discrete norm, scaled first so tiny or huge samples do not under/overflow."""
    m = np.abs(a).max() if a.size else 0.0
    if m == 0:
        return 0.0
    return float(m * math.sqrt(np.dot(w, (a / m) ** 2)))


def optimal_input(h: Waveform, gi: GeneratingInterval, target_norm: float = 1.0,
                  q: QuadratureConfig = DEFAULT_QUADRATURE) -> Waveform:
    """``K h(T_gen - t)`` on the generating interval, continued periodically.

    A half-period interval is continued with alternating sign, so that the
    drive keeps the kernel's antisymmetry.
    """
    if not target_norm > 0:
        raise WaveformError(f"target norm must be positive, got {target_norm}")
    Tg = gi.length
    rev = TimeReversedOnInterval(h, Tg)
    try:
        piece = scale_to_norm(rev, target_norm, (0.0, Tg), q)
    except WaveformError as exc:
        raise WaveformError("kernel has zero norm on the generating interval") from exc
    if gi.mode == HALF_PERIOD:
        return AntiperiodicExtension(piece, Tg)
    return PeriodicExtension(piece, Tg)


def s0(f: Waveform, h: Waveform, gi: GeneratingInterval,
       q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``|integral_0^T_gen f(T_gen - t) h(t) dt|``."""
    w, a, b = _shared_nodes(f, h, gi, q)
    return float(abs(np.dot(w, a * b)))


class OptimalityReport(NamedTuple):
    s0: float
    bound: float
    gap_ratio: float
    predicted_extremes: np.ndarray

    def to_dict(self) -> dict:
        return {"S_o": self.s0, "bound": self.bound, "gap_ratio": self.gap_ratio,
                "predicted_extremes": list(self.predicted_extremes)}


def optimality_report(f: Waveform, h: Waveform, gi: GeneratingInterval,
                      q: QuadratureConfig = DEFAULT_QUADRATURE, k_max: int = 5) -> OptimalityReport:
    """``S0``, the bound ``||f|| ||h||``, their ratio and ``(-1)**(k+1) S0 k``."""
    w, a, b = _shared_nodes(f, h, gi, q)
    s = float(abs(np.dot(w, a * b)))
    bound = _l2(w, a) * _l2(w, b)
    gap = s / bound if bound > 0 else 0.0
    k = np.arange(1, k_max + 1)
    return OptimalityReport(s, float(bound), float(gap), np.where(k % 2 == 1, 1.0, -1.0) * s * k)


class RankedInput(NamedTuple):
    index: int
    waveform: Waveform
    s0: float
    miss: float


def rank_inputs(candidates, h: Waveform, gi: GeneratingInterval, target_norm: float = 1.0,
                q: QuadratureConfig = DEFAULT_QUADRATURE) -> list[RankedInput]:
    """Norm-match every candidate, then order by ``S0`` (ties keep input order).

    ``miss`` is ``(S0_best - S0) / S0_best``.
    """
    candidates = list(candidates)
    if len(candidates) < 2:
        raise WaveformError("rank_inputs needs at least two candidates")
    scored = []
    for i, c in enumerate(candidates):
        try:
            m = scale_to_norm(c, target_norm, gi.interval, q)
        except WaveformError as exc:
            raise WaveformError(f"candidate {i} ({c.kind}) has zero norm on the generating interval") from exc
        scored.append((i, m, s0(m, h, gi, q)))
    scored.sort(key=lambda r: -r[2])
    best = scored[0][2]
    return [RankedInput(i, m, s, (best - s) / best if best > 0 else 0.0) for i, m, s in scored]


class ExtremesComparison(NamedTuple):
    k: np.ndarray
    predicted: np.ndarray
    simulated: np.ndarray
    relative_error: np.ndarray
    s0: float

    @property
    def max_relative_error(self) -> float:
        return float(self.relative_error.max())


def predicted_vs_simulated(osc: SecondOrderOscillator, f_inp: Waveform, k_max: int,
                           q: QuadratureConfig = DEFAULT_QUADRATURE,
                           kernel: ImpulseResponse | None = None) -> ExtremesComparison:
    """Compare simulated ``|f_out(t_k)|`` with ``S0 k`` (half-period ``S0``).

    Only valid while damping is negligible: requires ``gamma t_kmax < 0.3``.
    """
    t_last = k_max * math.pi / osc.omega_d
    if osc.gamma * t_last >= DAMPING_GUARD:
        raise ValidityError(
            f"gamma*t_k = {osc.gamma * t_last:.3g} >= {DAMPING_GUARD} at k={k_max}: "
            "damping is no longer negligible")
    h = impulse_response(osc, "normalized") if kernel is None else kernel
    s = s0(f_inp, h, half_period_interval(osc), q)
    env = extreme_samples(osc, f_inp, k_max, q, kernel=h)
    pred = s * env.k
    err = np.abs(env.magnitudes - pred) / pred
    return ExtremesComparison(env.k, pred, env.magnitudes, err, s)
