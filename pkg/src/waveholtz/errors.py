"""Exception hierarchy shared across the package."""


class WaveHoltzError(Exception):
    """Base class for all errors raised by this package."""


class InvalidFrequencyError(WaveHoltzError, ValueError):
    """A frequency argument was zero or negative."""


class ConfigurationError(WaveHoltzError, ValueError):
    """Inconsistent or unsupported problem/run configuration."""


class DimensionMismatchError(WaveHoltzError, ValueError):
    """A state vector does not match the system it is used with."""


class SizeLimitError(WaveHoltzError, ValueError):
    """A dense computation was requested above its degree-of-freedom cap."""


class DegenerateHistoryError(WaveHoltzError, ValueError):
    """A rate computation hit a zero denominator in its history."""


class ResonanceError(WaveHoltzError, RuntimeError):
    """The frequency-domain system is singular or too ill-conditioned to trust."""


class DivergenceError(WaveHoltzError, RuntimeError):
    """The fixed-point iteration produced a non-finite state."""


class EigendecompositionError(WaveHoltzError, RuntimeError):
    """Dense eigendecomposition failed to converge."""
