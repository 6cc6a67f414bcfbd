"""Exception hierarchy shared by all tdres modules."""


class TdresError(ValueError):
    """Base class for every error raised by tdres."""


class WaveformError(TdresError):
    """Invalid waveform parameters or a waveform unusable for an operation."""


class IntervalError(TdresError):
    """Interval with end <= start."""


class OscillatorError(TdresError):
    """Oscillator parameters outside the supported (underdamped) regime."""


class ConvolutionError(TdresError):
    """Bad grid, horizon or kernel for a convolution run."""


class ValidityError(TdresError):
    """An approximation was requested outside its validity region."""


class NoBeatsError(TdresError):
    """The response envelope has no interior minima to measure beats from."""


class ProbeError(TdresError):
    """Resonator-bank configuration or calibration problem."""


class ConfigError(TdresError):
    """Run configuration that violates the documented schema."""


class SweepError(TdresError):
    """Frequency grid or resonance curve unusable for the requested analysis."""
