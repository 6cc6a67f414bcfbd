"""Time functions and the interval-restricted function space built on them.

A :class:`Waveform` is an immutable, vectorised description of a signal
``f(t)``. Besides evaluation, every variant reports

* ``breakpoints(a, b)`` -- instants in ``(a, b)`` where it jumps or kinks,
  so the quadrature can split there;
* ``time_scale()`` -- its shortest characteristic period (or ``None``),
  which sets the quadrature resolution;
* ``repeat_period()`` -- its exact period if it is periodic, else ``None``.

Waveforms nest (``Scaled(Windowed(Sine(...)))``) and round-trip through a
JSON descriptor ``{"kind": ..., "params": {...}, "inner": {...}}``.

The second half of the module is the Euclidean space of functions on a
finite interval: :func:`norm`, :func:`inner_product`,
:func:`scale_to_norm`, :func:`periodic_extend` and
:func:`time_reverse_on_interval`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar

import numpy as np

from .errors import IntervalError, WaveformError
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate

__all__ = [
    "Waveform", "Sine", "Square", "Triangle", "UnitStep", "PulseTrain", "Windowed",
    "Scaled", "TimeReversedOnInterval", "PeriodicExtension", "AntiperiodicExtension",
    "Sampled", "DampedSine", "Exponential", "Sum",
    "Interval", "eval_waveform", "norm", "inner_product", "scale_to_norm",
    "periodic_extend", "time_reverse_on_interval", "standard_waveform",
    "waveform_from_dict", "common_breakpoints", "common_time_scale",
]

_EMPTY = np.empty(0)
_REGISTRY: dict[str, type] = {}


def _register(cls):
    _REGISTRY[cls.kind] = cls
    return cls


def _grid_points(step: float, offset: float, a: float, b: float) -> np.ndarray:
    """Points ``offset + n*step`` strictly inside ``(a, b)``."""
    lo = math.floor((a - offset) / step)
    hi = math.ceil((b - offset) / step)
    x = offset + step * np.arange(lo, hi + 1)
    return x[(x > a) & (x < b)]


def _positive(name: str, value: float):
    if not (np.isfinite(value) and value > 0):
        raise WaveformError(f"{name} must be positive and finite, got {value}")


class Waveform:
    """Base class; subclasses are frozen dataclasses."""

    kind: ClassVar[str] = "abstract"

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = self._eval(arr)
        if out.ndim == 0:
            return float(out)
        return out

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        return _EMPTY

    def time_scale(self) -> float | None:
        return None

    def repeat_period(self) -> float | None:
        return None

    def params(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def __neg__(self):
        return Scaled(self, -1.0)

    def __mul__(self, factor):
        return Scaled(self, float(factor))

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, Waveform):
            return NotImplemented
        return Sum((self, other))


@_register
@dataclass(frozen=True)
class Sine(Waveform):
    amplitude: float = 1.0
    omega: float = 1.0
    phase: float = 0.0
    kind: ClassVar[str] = "sine"

    def __post_init__(self):
        if not np.isfinite(self.omega) or self.omega == 0:
            raise WaveformError(f"sine omega must be nonzero and finite, got {self.omega}")

    def _eval(self, t):
        return self.amplitude * np.sin(self.omega * t + self.phase)

    def time_scale(self):
        return 2 * math.pi / abs(self.omega)

    def repeat_period(self):
        return 2 * math.pi / abs(self.omega)

    def params(self):
        return {"amplitude": self.amplitude, "omega": self.omega, "phase": self.phase}


@_register
@dataclass(frozen=True)
class Square(Waveform):
    """+amplitude on the first half-period, -amplitude on the second.

    A switching instant belongs to the half-period on its left, so
    ``Square(A, T)(T/2) == A`` and ``Square(A, T)(0) == -A``.
    """

    amplitude: float = 1.0
    period: float = 2 * math.pi
    kind: ClassVar[str] = "square"

    def __post_init__(self):
        _positive("square period", self.period)

    def _eval(self, t):
        x = t / self.period
        frac = x - np.floor(x)
        return np.where((frac > 0) & (frac <= 0.5), self.amplitude, -self.amplitude)

    def breakpoints(self, a, b):
        return _grid_points(self.period / 2, 0.0, a, b)

    def time_scale(self):
        return self.period

    def repeat_period(self):
        return self.period

    def params(self):
        return {"amplitude": self.amplitude, "period": self.period}


@_register
@dataclass(frozen=True)
class Triangle(Waveform):
    """Odd triangle wave: 0 at t=0, +amplitude at T/4, -amplitude at 3T/4."""

    amplitude: float = 1.0
    period: float = 2 * math.pi
    kind: ClassVar[str] = "triangle"

    def __post_init__(self):
        _positive("triangle period", self.period)

    def _eval(self, t):
        x = t / self.period
        frac = x - np.floor(x)
        y = np.where(frac < 0.25, 4 * frac, np.where(frac < 0.75, 2 - 4 * frac, 4 * frac - 4))
        return self.amplitude * y

    def breakpoints(self, a, b):
        return _grid_points(self.period / 2, self.period / 4, a, b)

    def time_scale(self):
        return self.period

    def repeat_period(self):
        return self.period

    def params(self):
        return {"amplitude": self.amplitude, "period": self.period}


@_register
@dataclass(frozen=True)
class UnitStep(Waveform):
    onset: float = 0.0
    kind: ClassVar[str] = "step"

    def _eval(self, t):
        return np.where(t >= self.onset, 1.0, 0.0)

    def breakpoints(self, a, b):
        return np.array([self.onset]) if a < self.onset < b else _EMPTY

    def params(self):
        return {"onset": self.onset}


@_register
@dataclass(frozen=True)
class PulseTrain(Waveform):
    """Periodic piecewise-constant wave; ``levels`` split one period evenly."""

    levels: tuple = (1.0, 0.0)
    period: float = 2 * math.pi
    kind: ClassVar[str] = "pulse_train"

    def __post_init__(self):
        _positive("pulse train period", self.period)
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        if len(self.levels) < 1:
            raise WaveformError("pulse train needs at least one level")

    def _eval(self, t):
        n = len(self.levels)
        x = t / self.period
        frac = x - np.floor(x)
        idx = np.minimum((frac * n).astype(np.int64), n - 1)
        return np.asarray(self.levels)[idx]

    def breakpoints(self, a, b):
        return _grid_points(self.period / len(self.levels), 0.0, a, b)

    def time_scale(self):
        return self.period

    def repeat_period(self):
        return self.period

    def params(self):
        return {"levels": list(self.levels), "period": self.period}


@dataclass(frozen=True)
class _Wrapper(Waveform):
    inner: Waveform

    def to_dict(self):
        return {"kind": self.kind, "params": self.params(), "inner": self.inner.to_dict()}

    def time_scale(self):
        return self.inner.time_scale()


@_register
@dataclass(frozen=True)
class Windowed(_Wrapper):
    """``inner`` on ``[t_on, t_off)``, zero elsewhere."""

    t_on: float = 0.0
    t_off: float = 1.0
    kind: ClassVar[str] = "windowed"

    def __post_init__(self):
        if not self.t_off > self.t_on:
            raise WaveformError(f"window requires t_off > t_on, got [{self.t_on}, {self.t_off})")

    def _eval(self, t):
        inside = (t >= self.t_on) & (t < self.t_off)
        return np.where(inside, self.inner._eval(t), 0.0)

    def breakpoints(self, a, b):
        lo, hi = max(a, self.t_on), min(b, self.t_off)
        parts = [np.array([x for x in (self.t_on, self.t_off) if a < x < b])]
        if hi > lo:
            parts.append(self.inner.breakpoints(lo, hi))
        return np.concatenate(parts)

    def params(self):
        return {"t_on": self.t_on, "t_off": self.t_off}


@_register
@dataclass(frozen=True)
class Scaled(_Wrapper):
    factor: float = 1.0
    kind: ClassVar[str] = "scaled"

    def _eval(self, t):
        return self.factor * self.inner._eval(t)

    def breakpoints(self, a, b):
        return self.inner.breakpoints(a, b)

    def repeat_period(self):
        return self.inner.repeat_period()

    def params(self):
        return {"factor": self.factor}


@_register
@dataclass(frozen=True)
class TimeReversedOnInterval(_Wrapper):
    """``inner(T - t)`` for ``t`` in ``[0, T)``, zero elsewhere."""

    T: float = 1.0
    kind: ClassVar[str] = "time_reversed"

    def __post_init__(self):
        _positive("reversal interval T", self.T)

    def _eval(self, t):
        inside = (t >= 0) & (t < self.T)
        return np.where(inside, self.inner._eval(self.T - t), 0.0)

    def breakpoints(self, a, b):
        parts = [np.array([x for x in (0.0, self.T) if a < x < b])]
        lo, hi = max(a, 0.0), min(b, self.T)
        if hi > lo:
            parts.append(self.T - self.inner.breakpoints(self.T - hi, self.T - lo))
        return np.concatenate(parts)

    def params(self):
        return {"T": self.T}


@_register
@dataclass(frozen=True)
class PeriodicExtension(_Wrapper):
    """``inner`` on ``[0, T)`` repeated with period ``T``."""

    T: float = 1.0
    kind: ClassVar[str] = "periodic"

    def __post_init__(self):
        _positive("extension period T", self.T)

    def _eval(self, t):
        return self.inner._eval(np.mod(t, self.T))

    def breakpoints(self, a, b):
        base = np.concatenate([[0.0], self.inner.breakpoints(0.0, self.T)])
        n = np.arange(math.floor(a / self.T), math.floor(b / self.T) + 1)
        x = (n[:, None] * self.T + base[None, :]).ravel()
        return x[(x > a) & (x < b)]

    def time_scale(self):
        ts = self.inner.time_scale()
        return self.T if ts is None else min(ts, self.T)

    def repeat_period(self):
        return self.T

    def params(self):
        return {"T": self.T}


@_register
@dataclass(frozen=True)
class AntiperiodicExtension(_Wrapper):
    """``inner`` on ``[0, H)`` continued with alternating sign.

    ``f(t + H) = -f(t)``; the result is periodic with period ``2H``. This
    is how a half-period generating piece becomes a full periodic drive.
    """

    half_period: float = 1.0
    kind: ClassVar[str] = "antiperiodic"

    def __post_init__(self):
        _positive("half period", self.half_period)

    def _eval(self, t):
        n = np.floor(t / self.half_period)
        sign = 1.0 - 2.0 * np.mod(n, 2)
        return sign * self.inner._eval(t - n * self.half_period)

    def breakpoints(self, a, b):
        H = self.half_period
        base = np.concatenate([[0.0], self.inner.breakpoints(0.0, H)])
        n = np.arange(math.floor(a / H), math.floor(b / H) + 1)
        x = (n[:, None] * H + base[None, :]).ravel()
        return x[(x > a) & (x < b)]

    def time_scale(self):
        ts = self.inner.time_scale()
        return 2 * self.half_period if ts is None else min(ts, 2 * self.half_period)

    def repeat_period(self):
        return 2 * self.half_period

    def params(self):
        return {"half_period": self.half_period}


@_register
@dataclass(frozen=True)
class Sampled(Waveform):
    """Uniform samples, linearly interpolated, zero outside the grid."""

    t0: float = 0.0
    dt: float = 1.0
    values: tuple = (0.0, 0.0)
    kind: ClassVar[str] = "sampled"
    _arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _positive("sample spacing dt", self.dt)
        vals = tuple(float(v) for v in np.asarray(self.values, dtype=float).ravel())
        if len(vals) < 2:
            raise WaveformError(f"sampled waveform needs >= 2 values, got {len(vals)}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_arr", np.asarray(vals))

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (len(self.values) - 1)

    def _eval(self, t):
        grid = self.t0 + self.dt * np.arange(len(self.values))
        inside = (t >= self.t0) & (t <= self.t_end)
        return np.where(inside, np.interp(t, grid, self._arr), 0.0)

    def breakpoints(self, a, b):
        x = self.t0 + self.dt * np.arange(len(self.values))
        return x[(x > a) & (x < b)]

    def params(self):
        return {"t0": self.t0, "dt": self.dt, "values": list(self.values)}

    def to_dict(self):
        return {"kind": self.kind, "params": self.params()}


@_register
@dataclass(frozen=True)
class DampedSine(Waveform):
    """``amplitude * exp(-gamma t) * sin(omega t + phase)``."""

    amplitude: float = 1.0
    gamma: float = 0.0
    omega: float = 1.0
    phase: float = 0.0
    kind: ClassVar[str] = "damped_sine"

    def __post_init__(self):
        if not np.isfinite(self.omega) or self.omega == 0:
            raise WaveformError(f"damped sine omega must be nonzero, got {self.omega}")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise WaveformError(f"damped sine gamma must be >= 0, got {self.gamma}")

    def _eval(self, t):
        return self.amplitude * np.exp(-self.gamma * t) * np.sin(self.omega * t + self.phase)

    def time_scale(self):
        return 2 * math.pi / abs(self.omega)

    def repeat_period(self):
        return 2 * math.pi / abs(self.omega) if self.gamma == 0 else None

    def params(self):
        return {"amplitude": self.amplitude, "gamma": self.gamma, "omega": self.omega,
                "phase": self.phase}


@_register
@dataclass(frozen=True)
class Exponential(Waveform):
    """Causal exponential ``amplitude * exp(-rate t) * u(t)``."""

    amplitude: float = 1.0
    rate: float = 1.0
    kind: ClassVar[str] = "exponential"

    def __post_init__(self):
        _positive("exponential rate", self.rate)

    def _eval(self, t):
        return np.where(t >= 0, self.amplitude * np.exp(-self.rate * np.maximum(t, 0.0)), 0.0)

    def breakpoints(self, a, b):
        return np.array([0.0]) if a < 0 < b else _EMPTY

    def time_scale(self):
        return 2 * math.pi / self.rate

    def params(self):
        return {"amplitude": self.amplitude, "rate": self.rate}


@_register
@dataclass(frozen=True)
class Sum(Waveform):
    terms: tuple = ()
    kind: ClassVar[str] = "sum"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise WaveformError("sum needs at least one term")

    def _eval(self, t):
        out = self.terms[0]._eval(t)
        for w in self.terms[1:]:
            out = out + w._eval(t)
        return out

    def breakpoints(self, a, b):
        return np.concatenate([w.breakpoints(a, b) for w in self.terms])

    def time_scale(self):
        return common_time_scale(*self.terms)

    def repeat_period(self):
        periods = [w.repeat_period() for w in self.terms]
        if any(p is None for p in periods):
            return None
        longest = max(periods)
        for p in periods:
            r = longest / p
            if abs(r - round(r)) > 1e-9 * r:
                return None
        return longest

    def to_dict(self):
        return {"kind": self.kind, "params": {}, "terms": [w.to_dict() for w in self.terms]}


# --------------------------------------------------------------------------
# helpers shared with the convolution engine


def common_breakpoints(a: float, b: float, *waves) -> np.ndarray:
    parts = [w.breakpoints(a, b) for w in waves]
    return np.concatenate(parts) if parts else _EMPTY


def common_time_scale(*waves) -> float | None:
    scales = [w.time_scale() for w in waves]
    scales = [s for s in scales if s is not None]
    return min(scales) if scales else None


def waveform_from_dict(d: dict) -> Waveform:
    """Rebuild a waveform from its JSON descriptor."""
    try:
        kind = d["kind"]
    except (KeyError, TypeError):
        raise WaveformError(f"waveform descriptor needs a 'kind' field: {d!r}") from None
    if kind not in _REGISTRY:
        raise WaveformError(f"unknown waveform kind {kind!r}")
    cls = _REGISTRY[kind]
    p = dict(d.get("params", {}))
    if kind == "sum":
        return Sum(tuple(waveform_from_dict(x) for x in d["terms"]))
    if kind == "pulse_train":
        p["levels"] = tuple(p["levels"])
    if kind == "sampled":
        p["values"] = tuple(p["values"])
    if issubclass(cls, _Wrapper):
        if "inner" not in d:
            raise WaveformError(f"{kind} descriptor needs an 'inner' waveform")
        return cls(waveform_from_dict(d["inner"]), **p)
    return cls(**p)


def standard_waveform(kind: str, **params) -> Waveform:
    """Constructor hub for the waveforms used throughout the package.

    ``kind`` is one of ``sine``, ``cosine``, ``square``, ``triangle``,
    ``step``, ``pulse`` (``duty`` in (0, 1)), ``pulse_train``,
    ``damped_sine``, ``exponential``. Periodic kinds accept either
    ``period`` or ``omega``.

    >>> standard_waveform("square", amplitude=1.0, period=2.0)(0.5)
    1.0
    """
    p = dict(params)

    def _period():
        if "period" in p:
            return float(p.pop("period"))
        if "omega" in p:
            return 2 * math.pi / float(p.pop("omega"))
        raise WaveformError(f"{kind} needs 'period' or 'omega'")

    if kind == "sine":
        return Sine(float(p.get("amplitude", 1.0)), float(p["omega"]), float(p.get("phase", 0.0)))
    if kind == "cosine":
        return Sine(float(p.get("amplitude", 1.0)), float(p["omega"]),
                    float(p.get("phase", 0.0)) + math.pi / 2)
    if kind == "square":
        A = float(p.pop("amplitude", 1.0))
        return Square(A, _period())
    if kind == "triangle":
        A = float(p.pop("amplitude", 1.0))
        return Triangle(A, _period())
    if kind == "step":
        return UnitStep(float(p.get("onset", 0.0)))
    if kind == "pulse":
        A = float(p.pop("amplitude", 1.0))
        duty = float(p.pop("duty", 0.5))
        if not 0 < duty < 1:
            raise WaveformError(f"pulse duty must lie in (0, 1), got {duty}")
        frac = Fraction(duty).limit_denominator(1000)
        n_on, n = frac.numerator, frac.denominator
        return PulseTrain(tuple([A] * n_on + [0.0] * (n - n_on)), _period())
    if kind == "pulse_train":
        levels = tuple(p.pop("levels"))
        return PulseTrain(levels, _period())
    if kind == "damped_sine":
        return DampedSine(float(p.get("amplitude", 1.0)), float(p.get("gamma", 0.0)),
                          float(p["omega"]), float(p.get("phase", 0.0)))
    if kind == "exponential":
        return Exponential(float(p.get("amplitude", 1.0)), float(p["rate"]))
    raise WaveformError(f"unknown standard waveform kind {kind!r}")


def eval_waveform(w: Waveform, t):
    return w(t)


# --------------------------------------------------------------------------
# function space on an interval


@dataclass(frozen=True)
class Interval:
    start: float
    end: float

    def __post_init__(self):
        if not self.end > self.start:
            raise IntervalError(f"interval requires end > start, got ({self.start}, {self.end})")

    @property
    def length(self) -> float:
        return self.end - self.start


def _as_interval(iv) -> Interval:
    if isinstance(iv, Interval):
        return iv
    return Interval(*iv)


def _integrate_over(fn, waves, iv: Interval, q: QuadratureConfig):
    breaks = common_breakpoints(iv.start, iv.end, *waves)
    return integrate(fn, iv.start, iv.end, breaks, common_time_scale(*waves), q)


def norm(w: Waveform, iv, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """L2 norm ``sqrt(integral of w**2)`` over the interval."""
    iv = _as_interval(iv)
    sq = _integrate_over(lambda t: w._eval(t) ** 2, (w,), iv, q)
    return math.sqrt(max(float(sq), 0.0))


def inner_product(w1: Waveform, w2: Waveform, iv, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``integral of w1*w2`` over the interval."""
    iv = _as_interval(iv)
    return float(_integrate_over(lambda t: w1._eval(t) * w2._eval(t), (w1, w2), iv, q))


def scale_to_norm(w: Waveform, target: float, iv, q: QuadratureConfig = DEFAULT_QUADRATURE) -> Scaled:
    """Return ``Scaled(w, K)`` with ``K > 0`` and norm ``target`` on ``iv``."""
    if not target > 0:
        raise WaveformError(f"target norm must be positive, got {target}")
    n = norm(w, iv, q)
    if n <= 1e-300:
        raise WaveformError("waveform vanishes on the interval; cannot scale it to a norm")
    return Scaled(w, target / n)


def periodic_extend(w: Waveform, T: float) -> PeriodicExtension:
    if not T > 0:
        raise WaveformError(f"extension period must be positive, got {T}")
    return PeriodicExtension(w, T)


def time_reverse_on_interval(w: Waveform, T: float) -> TimeReversedOnInterval:
    if not T > 0:
        raise WaveformError(f"reversal interval must be positive, got {T}")
    return TimeReversedOnInterval(w, T)
