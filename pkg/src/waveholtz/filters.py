"""Time filter of the WaveHoltz iteration and its transfer function.

One filtered period maps a time-harmonic mode ``e^{lambda t}`` to
``beta(lambda)`` times itself, where ``beta`` is the transfer function of the
kernel ``cos(omega t) - 1/4`` over one period ``T = 2 pi / omega``.  Its
frequency-independent form is

    beta_hat(z) = (1/pi) * integral_0^{2 pi} (cos s - 1/4) e^{z s} ds,

with ``beta(lambda) = beta_hat(lambda / omega)``.  The closed form

    beta_hat(z) = (3 z^2 - 1) / (4 pi z (z^2 + 1)) * (e^{2 pi z} - 1)

has removable singularities at ``z = 0`` (value -1/2) and ``z = +-i``
(value 1).  Near those points the closed form loses digits to cancellation,
so this module switches to local Taylor expansions computed from analytic
moment recurrences; everywhere the function is entire.

The module also provides the parabolic-distance geometry that controls the
contraction of the filtered propagation: a mode with scaled eigenvalue
``z = x + i y`` separated from ``+-i`` by parabolic distance ``eps``
satisfies ``|beta_hat(z)| <= max(3/4, 1 - eps)`` in the closed left
half-plane.

Everything here is a pure function of its arguments and safe to call
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InvalidFrequencyError

__all__ = [
    "ALPHA",
    "DELTA",
    "FilterConstants",
    "SeriesCoefficients",
    "AxisBound",
    "filter_weight",
    "beta",
    "beta_hat",
    "beta_hat_quadrature",
    "beta_series",
    "parabolic_distance",
    "check_axis_bounds",
    "contraction_bound",
]

#: Curvature of the parabolas bounding the contraction region.
ALPHA = (2.0 * math.pi**2 - 3.0) / (12.0 * math.pi)

#: Universal contraction floor: |beta_hat| <= max(1 - DELTA, 1 - eps) = max(3/4, 1 - eps).
DELTA = 0.25

#: Distance to a removable singularity below which the Taylor evaluation is used.
SWITCH_RADIUS = 1e-3

#: Degree of the local Taylor expansions about 0 and +-i.
TAYLOR_DEGREE = 12

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FilterConstants:
    """The two universal constants of the contraction theory."""

    alpha: float = ALPHA
    delta: float = DELTA


@dataclass(frozen=True)
class SeriesCoefficients:
    """Power-series coefficients of ``beta_hat`` about the origin.

    ``coeffs[n]`` multiplies ``z**n``; all coefficients are real and satisfy
    ``|coeffs[n]| <= (2 pi)^n / n!``.
    """

    coeffs: np.ndarray
    n_max: int

    def __call__(self, z):
        return npoly.polyval(z, self.coeffs)


class AxisBound(NamedTuple):
    bound: float
    satisfied: bool


def filter_weight(t, omega: float):
    """Kernel ``cos(omega t) - 1/4`` of the one-period time filter."""
    if omega <= 0.0:
        raise InvalidFrequencyError(f"omega must be positive, got {omega}")
    return np.cos(omega * np.asarray(t)) - 0.25 if np.ndim(t) else math.cos(omega * t) - 0.25


def _exp_moments(a: complex, degree: int) -> np.ndarray:
    """Moments E_k = integral_0^{2 pi} s^k e^{a s} ds for k = 0..degree.

    Computed by the integration-by-parts recurrence
    ``E_k = ((2 pi)^k e^{2 pi a} - k E_{k-1}) / a``; for ``a = 0`` the
    moments are ``(2 pi)^{k+1} / (k + 1)``.  When ``a`` is an exact integer
    multiple of ``i`` the factor ``e^{2 pi a}`` is taken as exactly 1.
    """
    out = np.empty(degree + 1, dtype=complex)
    if a == 0:
        for k in range(degree + 1):
            out[k] = _TWO_PI ** (k + 1) / (k + 1)
        return out
    if a.real == 0.0 and a.imag == round(a.imag):
        e2 = 1.0 + 0.0j
    else:
        e2 = np.exp(_TWO_PI * a)
    out[0] = (e2 - 1.0) / a
    for k in range(1, degree + 1):
        out[k] = (_TWO_PI**k * e2 - k * out[k - 1]) / a
    return out


def _filter_moment_coeffs(center: complex, degree: int) -> np.ndarray:
    """Taylor coefficients of beta_hat about ``center`` from analytic moments.

    beta_hat(center + d) = sum_k c_k d^k with
    c_k = (1 / (pi k!)) integral (cos s - 1/4) s^k e^{center s} ds,
    and the cosine split as (e^{i s} + e^{-i s}) / 2.
    """
    plus = _exp_moments(center + 1j, degree)
    minus = _exp_moments(center - 1j, degree)
    bare = _exp_moments(center, degree)
    coeffs = np.empty(degree + 1, dtype=complex)
    fact = 1.0
    for k in range(degree + 1):
        if k > 0:
            fact *= k
        coeffs[k] = (0.5 * (plus[k] + minus[k]) - 0.25 * bare[k]) / (math.pi * fact)
    return coeffs


@lru_cache(maxsize=None)
def _taylor_at(which: int) -> np.ndarray:
    """Cached degree-12 expansions about the removable singularities.

    ``which`` is -1, 0, or +1 for centers -i, 0, +i.  The constant term is
    pinned to the analytic limit (1 at +-i, -1/2 at 0).
    """
    center = which * 1j
    coeffs = _filter_moment_coeffs(center, TAYLOR_DEGREE)
    coeffs[0] = -0.5 if which == 0 else 1.0
    return coeffs


def beta_hat(z):
    """Scaled filter-transfer function; entire, vectorized over ``z``.

    Uses the closed form away from ``0`` and ``+-i`` and switches to local
    Taylor expansions within :data:`SWITCH_RADIUS` of those points, so the
    evaluation is continuous through the removable singularities.
    """
    zz = np.asarray(z, dtype=complex)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    out = np.empty(zz.shape, dtype=complex)

    near0 = np.abs(zz) < SWITCH_RADIUS
    nearp = np.abs(zz - 1j) < SWITCH_RADIUS
    nearm = np.abs(zz + 1j) < SWITCH_RADIUS
    far = ~(near0 | nearp | nearm)

    if np.any(far):
        w = zz[far]
        with np.errstate(over="ignore", invalid="ignore"):
            out[far] = (3.0 * w**2 - 1.0) / (4.0 * math.pi * w * (w**2 + 1.0)) * (
                np.exp(_TWO_PI * w) - 1.0
            )
    for mask, which in ((near0, 0), (nearp, 1), (nearm, -1)):
        if np.any(mask):
            out[mask] = npoly.polyval(zz[mask] - which * 1j, _taylor_at(which))
    return complex(out[0]) if scalar else out


def beta(lam, omega: float):
    """Transfer function at an unscaled eigenvalue: ``beta_hat(lam / omega)``."""
    if omega <= 0.0:
        raise InvalidFrequencyError(f"omega must be positive, got {omega}")
    return beta_hat(np.asarray(lam, dtype=complex) / omega) if np.ndim(lam) else beta_hat(
        complex(lam) / omega
    )


def beta_hat_quadrature(z, order: int = 200):
    """Defining-integral evaluation of beta_hat by Gauss-Legendre quadrature.

    Independent of the closed form; used as the oracle in the test suite.
    ``order`` nodes resolve |Im z| up to a few tens to machine precision.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    s = math.pi * (x + 1.0)  # map [-1, 1] -> [0, 2 pi]; ds = pi dx cancels the 1/pi
    kernel = (np.cos(s) - 0.25) * w
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    vals = np.exp(np.multiply.outer(zz, s)) @ kernel
    return complex(vals[0]) if np.ndim(z) == 0 else vals


_PI_60 = Decimal("3.14159265358979323846264338327950288419716939937510582097494")


def beta_series(n_max: int) -> SeriesCoefficients:
    """Real power-series coefficients of beta_hat about the origin.

    Integration by parts gives the cosine moments ``I_n = int s^n cos s ds``
    over one period through ``I_n = -n J_{n-1}``,
    ``J_n = -(2 pi)^n + n I_{n-1}``; then
    ``coeffs[n] = (I_n - (2 pi)^{n+1} / (4 (n+1))) / (pi n!)``.  The
    recurrence runs in 60-digit fixed-point arithmetic: in doubles its
    forward error floor (~1e-14) would swamp the coefficients beyond
    ``n ~ 35``, which decay like ``(2 pi)^n / n!``.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    coeffs = np.empty(n_max + 1)
    coeffs[0] = -0.5
    with localcontext() as ctx:
        ctx.prec = 60
        two_pi = 2 * _PI_60
        cos_mom = Decimal(0)  # I_n
        sin_mom = Decimal(0)  # J_n
        power = Decimal(1)  # (2 pi)^n
        fact = 1
        for n in range(1, n_max + 1):
            cos_mom, sin_mom = -n * sin_mom, -power * two_pi + n * cos_mom
            power *= two_pi
            fact *= n
            val = (cos_mom - power * two_pi / (4 * (n + 1))) / (_PI_60 * fact)
            coeffs[n] = float(val)
    return SeriesCoefficients(coeffs=coeffs, n_max=n_max)


def parabolic_distance(z):
    """Separation of ``z = x + i y`` from ``+-i`` in the parabolic metric.

    Returns ``min(-x + ALPHA (y - 1)^2, -x + ALPHA (y + 1)^2)``; positive
    throughout the open left half-plane away from ``+-i``, zero at ``+-i``.
    """
    zz = np.asarray(z, dtype=complex)
    x, y = zz.real, zz.imag
    d = np.minimum(-x + ALPHA * (y - 1.0) ** 2, -x + ALPHA * (y + 1.0) ** 2)
    return float(d) if np.ndim(z) == 0 else d


def contraction_bound(eps):
    """Upper bound ``max(3/4, 1 - eps)`` on |beta_hat| at parabolic distance eps."""
    return np.maximum(1.0 - DELTA, 1.0 - np.asarray(eps, dtype=float))


def check_axis_bounds(y):
    """Three-case bound on |beta_hat(iy)| along the imaginary axis.

    The bound is ``1 - (y - 1)^2`` for ``|y - 1| <= 1/2``, ``1 - (y + 1)^2``
    for ``|y + 1| <= 1/2``, and ``3/4`` otherwise.  ``satisfied`` reports
    whether the evaluated |beta_hat(iy)| respects it (with 1e-12 slack for
    rounding; the inequality itself is non-strict).
    """
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    bound = np.full(ya.shape, 0.75)
    hi = np.abs(ya - 1.0) <= 0.5
    lo = np.abs(ya + 1.0) <= 0.5
    bound[hi] = 1.0 - (ya[hi] - 1.0) ** 2
    bound[lo] = 1.0 - (ya[lo] + 1.0) ** 2
    satisfied = np.abs(beta_hat(1j * ya)) <= bound + 1e-12
    if np.ndim(y) == 0:
        return AxisBound(float(bound[0]), bool(satisfied[0]))
    return AxisBound(bound, satisfied)
