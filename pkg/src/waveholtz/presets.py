"""Named forcing and initial-condition presets used by the experiments.

The frequency-scaled Gaussian source has unit mass at every ``omega`` and a
width that shrinks like ``1/omega``, so a frequency sweep solves comparable
problems.  The windowed-sine state (a ``sin^2`` envelope times a carrier at
the driving frequency) seeds the iteration with an error concentrated on
the slowest-contracting near-resonant modes.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigurationError
from .system import DiscreteSystem

FORCING_PRESETS = ("zero", "gaussian-point-source", "implicit-from-initial-error")
INITIAL_PRESETS = ("zero", "windowed-sine")

DEFAULT_CENTER_1D = (-0.7,)
DEFAULT_CENTER_2D = (-0.7, -0.1)


def gaussian_point_source(omega: float, dim: int, center=None):
    """Unit-mass Gaussian concentrated near ``center`` with width ``1/omega``."""
    if dim == 1:
        cx = (center or DEFAULT_CENTER_1D)[0]
        return lambda x: (omega / math.sqrt(math.pi)) * np.exp(-(omega**2) * (x - cx) ** 2)
    if dim == 2:
        cx, cy = center or DEFAULT_CENTER_2D
        return lambda x, y: (omega**2 / math.pi) * np.exp(
            -(omega**2) * ((x - cx) ** 2 + (y - cy) ** 2)
        )
    raise ConfigurationError(f"dim must be 1 or 2, got {dim}")


def forcing_callable(preset: str, omega: float, dim: int, center=None):
    """Source function for a named forcing preset (``None`` means no forcing)."""
    if preset in ("zero", "implicit-from-initial-error"):
        return None
    if preset == "gaussian-point-source":
        return gaussian_point_source(omega, dim, center)
    raise ConfigurationError(f"unknown forcing preset {preset!r}")


def windowed_sine_profile(omega: float, x: np.ndarray):
    """Carrier-modulated window ``2 sin^2(pi x) sin(omega x)`` and its derivative."""
    u = 2.0 * np.sin(math.pi * x) ** 2 * np.sin(omega * x)
    du = 2.0 * math.pi * np.sin(2.0 * math.pi * x) * np.sin(omega * x) + (
        2.0 * omega * np.sin(math.pi * x) ** 2 * np.cos(omega * x)
    )
    return u, du


def initial_state(system: DiscreteSystem, preset: str) -> np.ndarray:
    """Initial iterate for a named preset on a 1D system.

    ``windowed-sine`` fills the two state blocks with ``(u0, -u0')``.
    """
    if preset == "zero":
        return np.zeros(system.m_total)
    if preset == "windowed-sine":
        if system.layout.dim != 1 or system.layout.coords is None:
            raise ConfigurationError("windowed-sine initial state is defined for 1D systems")
        x = system.layout.coords[:, 0]
        u0, du0 = windowed_sine_profile(system.omega, x)
        w = np.zeros(system.m_total)
        names = list(system.layout.fields)
        w[system.layout.fields[names[0]]] = u0
        w[system.layout.fields[names[1]]] = -du0
        return w
    raise ConfigurationError(f"unknown initial-state preset {preset!r}")
