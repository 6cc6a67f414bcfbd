"""Zero-state response by direct convolution, and what can be read off it.

``f_out(t) = integral_0^t h(lam) f_inp(t - lam) dlam`` is evaluated per
output instant with the splitting quadrature of :mod:`tdres.quadrature`:
the integration interval is cut at the kernel's zero crossings, at the
kernel's own jumps, and at ``t - b`` for every jump ``b`` of the input.

Envelopes are read at the analytic instants ``t_k = k pi / omega_d``
rather than by peak picking on a sampled trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConvolutionError, NoBeatsError, ValidityError
from .io import sidecar_path, write_csv, write_json
from .oscillator import (
    ImpulseResponse, SecondOrderOscillator, impulse_response, simplified_impulse_response,
)
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate
from .waveform import Sine, Waveform, common_time_scale

__all__ = [
    "ResponseTrace", "Envelope", "EnvelopeFit", "TailCheck", "BeatProfile",
    "zsr", "zsr_at", "zsr_many", "extreme_samples", "envelope_slope_fit",
    "saturation_level", "steady_amplitude", "periodic_tail_check", "beat_profile",
    "beat_period_from_trace", "resonant_sine", "settling_time",
]

SATURATION_WINDOW = (8.0, 12.0)
MIN_BEAT_DEPTH = 0.05  # envelope must dip at least this fraction below its peak


@dataclass(frozen=True, eq=False)
class ResponseTrace:
    """Sampled zero-state response on ``t0 + i*dt``."""

    t0: float
    dt: float
    values: np.ndarray
    input: Waveform
    kernel: Waveform
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.dt > 0:
            raise ConvolutionError(f"trace dt must be positive, got {self.dt}")
        if len(self.values) < 2:
            raise ConvolutionError("trace needs at least two samples")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.values))

    def metadata(self) -> dict:
        meta = {"input": self.input.to_dict(), "kernel": self.kernel.to_dict(),
                "quadrature": self.quadrature.to_dict(), "dt": self.dt, "t0": self.t0,
                "samples": len(self.values)}
        meta.update(self.extra)
        return meta

    def to_csv(self, path, sidecar: bool = True):
        write_csv(path, ["t", "f_out"], [self.times, self.values])
        if sidecar:
            write_json(sidecar_path(path), self.metadata())
        return path


@dataclass(frozen=True, eq=False)
class Envelope:
    """Response values at the instants ``t_k``; expected sign ``(-1)**(k+1)``."""

    k: np.ndarray
    t: np.ndarray
    values: np.ndarray

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def expected_signs(self) -> np.ndarray:
        return np.where(self.k % 2 == 1, 1, -1)

    def signs_alternate(self) -> bool:
        return bool(np.all(np.sign(self.values) == self.expected_signs))

    def to_csv(self, path, metadata: dict | None = None):
        write_csv(path, ["k", "t_k", "value"], [self.k, self.t, self.values])
        if metadata is not None:
            write_json(sidecar_path(path), metadata)
        return path


class EnvelopeFit(NamedTuple):
    slope: float
    intercept: float
    max_relative_residual: float
    k_range: tuple


class TailCheck(NamedTuple):
    is_periodic: bool
    measured_period: float
    max_relative_mismatch: float
    cutoff: float


class BeatProfile(NamedTuple):
    beat_period: float
    minima: np.ndarray
    envelope_t: np.ndarray
    envelope: np.ndarray


def resonant_sine(osc: SecondOrderOscillator, amplitude: float = 1.0) -> Sine:
    """``amplitude * sin(omega_d t)``: the drive whose half-waves line up with the kernel's."""
    return Sine(amplitude, osc.omega_d if osc.omega_d > 0 else osc.omega0, 0.0)


def _default_kernel(osc, kernel):
    return impulse_response(osc, "normalized") if kernel is None else kernel


def _crossing_step(h: Waveform) -> float | None:
    if isinstance(h, ImpulseResponse) and h.oscillatory:
        return math.pi / h.omega_d
    return None


def zsr_at(h: Waveform, f_inp: Waveform, t: float, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Convolution integral at a single instant."""
    if t < 0:
        raise ConvolutionError(f"zero-state response is defined for t >= 0, got {t}")
    if t == 0:
        return 0.0
    parts = [h.breakpoints(0.0, t), t - f_inp.breakpoints(0.0, t)]
    if isinstance(h, ImpulseResponse):
        parts.append(h.zero_crossings(0.0, t))
    if isinstance(f_inp, ImpulseResponse):
        parts.append(t - f_inp.zero_crossings(0.0, t))
    breaks = np.concatenate(parts)
    scale = common_time_scale(h, f_inp)
    return float(integrate(lambda lam: h._eval(lam) * f_inp._eval(t - lam), 0.0, t, breaks, scale, q))


def zsr_many(h: Waveform, f_inp: Waveform, times, q: QuadratureConfig = DEFAULT_QUADRATURE) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    return np.array([zsr_at(h, f_inp, float(t), q) for t in times.ravel()]).reshape(times.shape)


def zsr(h: Waveform, f_inp: Waveform, horizon: float, dt: float,
        q: QuadratureConfig = DEFAULT_QUADRATURE) -> ResponseTrace:
    """Zero-state response sampled on ``[0, horizon]`` with step ``dt``.

    For an oscillatory kernel ``dt`` must resolve its period with at least
    64 samples.
    """
    if not horizon > 0:
        raise ConvolutionError(f"horizon must be positive, got {horizon}")
    if not dt > 0:
        raise ConvolutionError(f"dt must be positive, got {dt}")
    if isinstance(h, ImpulseResponse) and h.oscillatory:
        limit = 2 * math.pi / h.omega_d / 64
        if dt > limit * (1 + 1e-12):
            raise ConvolutionError(f"dt={dt:g} too coarse for the kernel; need dt <= T_d/64 = {limit:g}")
    n = int(math.floor(horizon / dt + 1e-9)) + 1
    if n < 2:
        raise ConvolutionError("horizon shorter than one time step")
    times = dt * np.arange(n)
    return ResponseTrace(0.0, dt, zsr_many(h, f_inp, times, q), f_inp, h, q)


def extreme_samples(osc: SecondOrderOscillator, f_inp: Waveform, k_max: int,
                    q: QuadratureConfig = DEFAULT_QUADRATURE, kernel: ImpulseResponse | None = None,
                    stride: int = 1) -> Envelope:
    """Response at ``t_k = k*pi/omega_d`` for ``k = stride, 2*stride, ..``.

    ``stride=3`` reads the envelope of a drive three times slower than the
    oscillator.
    """
    if k_max < 1:
        raise ConvolutionError(f"k_max must be >= 1, got {k_max}")
    h = _default_kernel(osc, kernel)
    step = _crossing_step(h) or math.pi / osc.omega_d
    k = stride * np.arange(1, k_max + 1)
    t = k * step
    return Envelope(k, t, zsr_many(h, f_inp, t, q))


def envelope_slope_fit(env: Envelope, k_from: int, k_to: int) -> EnvelopeFit:
    """Least-squares line through ``(t_k, |f_out(t_k)|)`` for ``k_from <= k <= k_to``."""
    if k_to < k_from + 1:
        raise ConvolutionError(f"need k_to >= k_from + 1, got [{k_from}, {k_to}]")
    sel = (env.k >= k_from) & (env.k <= k_to)
    if sel.sum() < 2:
        raise ConvolutionError("fewer than 2 envelope points in the requested k range")
    t, m = env.t[sel], env.magnitudes[sel]
    slope, intercept = np.polyfit(t, m, 1)
    resid = np.abs(slope * t + intercept - m)
    return EnvelopeFit(float(slope), float(intercept), float(resid.max() / m.max()), (k_from, k_to))


def _window_instants(osc, h, window):
    step = _crossing_step(h) or math.pi / osc.omega_d
    lo, hi = window[0] / osc.gamma, window[1] / osc.gamma
    k = np.arange(math.ceil(lo / step - 1e-9), math.floor(hi / step + 1e-9) + 1)
    return k * step


def saturation_level(osc: SecondOrderOscillator, f_inp: Waveform,
                     q: QuadratureConfig = DEFAULT_QUADRATURE, kernel: ImpulseResponse | None = None,
                     window: tuple = SATURATION_WINDOW) -> float:
    """Mean ``|f_out(t_k)|`` over ``t_k`` in ``[8/gamma, 12/gamma]``."""
    if osc.gamma <= 0:
        raise ConvolutionError("lossless oscillator never saturates (gamma = 0)")
    h = _default_kernel(osc, kernel)
    t = _window_instants(osc, h, window)
    return float(np.mean(np.abs(zsr_many(h, f_inp, t, q))))


def settling_time(osc: SecondOrderOscillator, f_inp: Waveform,
                  q: QuadratureConfig = DEFAULT_QUADRATURE, kernel: ImpulseResponse | None = None,
                  fraction: float = 1.0 - math.exp(-1.0)) -> float:
    """First time the envelope reaches ``fraction`` of the saturation level.

    The envelope is read at the instants ``t_k`` and interpolated linearly
    between them.
    """
    level = fraction * saturation_level(osc, f_inp, q, kernel)
    h = _default_kernel(osc, kernel)
    step = _crossing_step(h) or math.pi / osc.omega_d
    k_max = int(math.ceil(SATURATION_WINDOW[0] / osc.gamma / step))
    env = extreme_samples(osc, f_inp, k_max, q, kernel=h)
    m = env.magnitudes
    above = np.nonzero(m >= level)[0]
    if len(above) == 0:
        raise ConvolutionError("envelope never reaches the requested fraction of saturation")
    i = int(above[0])
    if i == 0:
        return float(env.t[0] * level / m[0])
    t0, t1, m0, m1 = env.t[i - 1], env.t[i], m[i - 1], m[i]
    return float(t0 + (level - m0) * (t1 - t0) / (m1 - m0))


def _refine_peak(x, y, i):
    """Vertex of the parabola through three samples around index ``i``."""
    if i == 0 or i == len(y) - 1:
        return x[i], y[i]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    den = y0 - 2 * y1 + y2
    if den == 0:
        return x[i], y1
    d = 0.5 * (y0 - y2) / den
    h = x[i + 1] - x[i]
    return x[i] + d * h, y1 - 0.25 * (y0 - y2) * d


def steady_amplitude(osc: SecondOrderOscillator, f_inp: Waveform,
                     q: QuadratureConfig = DEFAULT_QUADRATURE, kernel: ImpulseResponse | None = None,
                     start: float = 10.0, periods: float = 2.0, samples_per_period: int = 128) -> float:
    """Peak ``|f_out|`` after the transient has died (``t >= start/gamma``).

    Unlike :func:`saturation_level` this does not assume the response
    peaks at the kernel zero crossings, so it holds for detuned drives.
    """
    if osc.gamma <= 0:
        raise ConvolutionError("lossless oscillator has no steady state (gamma = 0)")
    h = _default_kernel(osc, kernel)
    period = f_inp.repeat_period() or osc.t_d
    period = max(period, osc.t_d)
    t0 = start / osc.gamma
    n = int(periods * samples_per_period) + 1
    t = t0 + period * np.arange(n) / samples_per_period
    y = np.abs(zsr_many(h, f_inp, t, q))
    i = int(np.argmax(y))
    return float(_refine_peak(t, y, i)[1])


def periodic_tail_check(osc: SecondOrderOscillator, f_inp: Waveform,
                        q: QuadratureConfig = DEFAULT_QUADRATURE, kernel: ImpulseResponse | None = None,
                        samples_per_period: int = 128, tol: float = 1e-6) -> TailCheck:
    """Check ``f_out(t + T) == f_out(t)`` past the cut-off of the simplified kernel."""
    if osc.gamma <= 0:
        raise ConvolutionError("periodic tail check needs gamma > 0")
    T = f_inp.repeat_period()
    if T is None:
        raise ConvolutionError(f"input {f_inp.kind!r} is not periodic")
    h = simplified_impulse_response(osc) if kernel is None else kernel
    cutoff = h.cutoff if isinstance(h, ImpulseResponse) and h.cutoff is not None else 12 / osc.gamma
    dt = T / samples_per_period
    t0 = cutoff + 0.25 * T
    t = t0 + dt * np.arange(int(2.5 * samples_per_period) + 1)
    y = zsr_many(h, f_inp, t, q)
    scale = np.abs(y).max()

    # mismatch against the declared period
    a = zsr_many(h, f_inp, t[:samples_per_period], q)
    b = zsr_many(h, f_inp, t[:samples_per_period] + T, q)
    mismatch = float(np.abs(a - b).max() / scale)

    # measured period: lag minimising the mismatch, searched in [T/2, 3T/2]
    lags = np.arange(samples_per_period // 2, samples_per_period * 3 // 2 + 1)
    m = samples_per_period
    err = np.array([np.sum((y[lag:lag + m] - y[:m]) ** 2) for lag in lags])
    i = int(np.argmin(err))
    lag_t, _ = _refine_peak(lags * dt, -err, i)
    return TailCheck(mismatch < tol, float(lag_t), mismatch, float(cutoff))


def beat_period_from_trace(t, y) -> BeatProfile:
    """Beat period from the minima of the rectified-extremes envelope.

    The envelope is the sequence of local maxima of ``|y|``; the beat
    period is the median spacing between its interior minima.
    """
    t = np.asarray(t, dtype=float)
    a = np.abs(np.asarray(y, dtype=float))
    idx = np.where((a[1:-1] >= a[:-2]) & (a[1:-1] > a[2:]))[0] + 1
    if len(idx) < 5:
        raise NoBeatsError("too few oscillation peaks to build an envelope")
    pk = np.array([_refine_peak(t, a, i) for i in idx])
    et, ev = pk[:, 0], pk[:, 1]
    if ev.max() - ev.min() < MIN_BEAT_DEPTH * ev.max():
        raise NoBeatsError("no beats detected: envelope is flat")
    mid = ev.min() + 0.5 * (ev.max() - ev.min())
    mins = []
    for i in range(1, len(ev) - 1):
        if ev[i] < ev[i - 1] and ev[i] <= ev[i + 1] and ev[i] < mid:
            c = np.polyfit(et[i - 1:i + 2] - et[i], ev[i - 1:i + 2], 2)
            tm = et[i] - c[1] / (2 * c[0]) if c[0] > 0 else et[i]
            mins.append(tm)
    if len(mins) < 2:
        raise NoBeatsError("no beats detected: envelope has fewer than two minima")
    mins = np.array(mins)
    return BeatProfile(float(np.median(np.diff(mins))), mins, et, ev)


def beat_profile(osc: SecondOrderOscillator, omega_drive: float, horizon: float,
                 q: QuadratureConfig = DEFAULT_QUADRATURE, kernel: ImpulseResponse | None = None,
                 amplitude: float = 1.0) -> BeatProfile:
    """Beats of the zero-state response to a detuned sine drive."""
    detune = abs(omega_drive - osc.omega0)
    if not detune > 3 * osc.gamma:
        raise ValidityError(
            f"drive must be clearly detuned: |omega - omega0| = {detune:g} <= 3*gamma = {3 * osc.gamma:g}")
    expected = 2 * math.pi / detune
    if horizon < 3 * expected:
        raise ConvolutionError(
            f"horizon {horizon:g} shorter than 3 beat periods (~{3 * expected:g})")
    h = _default_kernel(osc, kernel)
    dt = min(osc.t_d, 2 * math.pi / omega_drive) / 64
    trace = zsr(h, Sine(amplitude, omega_drive, 0.0), horizon, dt, q)
    return beat_period_from_trace(trace.times, trace.values)
