"""Time-domain response of linear oscillators by direct convolution."""

from .errors import TdresError
from .oscillator import SecondOrderOscillator, impulse_response, simplified_impulse_response
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig

__version__ = "0.1.0"

__all__ = [
    "TdresError", "SecondOrderOscillator", "impulse_response", "simplified_impulse_response",
    "QuadratureConfig", "DEFAULT_QUADRATURE", "__version__",
]
