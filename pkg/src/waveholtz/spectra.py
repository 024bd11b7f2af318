"""Eigenvalue diagnostics of the contraction theory.

For a stable system the filtered propagation contracts each eigenvector of
``A`` by ``beta_hat(lambda / omega)``, so three numbers summarize a run
before it happens: the smallest parabolic separation ``eps*`` of the scaled
spectrum from ``+-i`` (with its minimizer ``lambda*``), the spectral radius
``rho = max |beta_hat(lambda_j / omega)|`` of the homogeneous filtered map,
and the eigenvector condition number ``kappa`` that bounds the transient
between the coefficient-space contraction and the observable error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg as la

from .errors import ConfigurationError, EigendecompositionError, SizeLimitError
from .filters import ALPHA, DELTA, beta_hat
from .system import DiscreteSystem

__all__ = [
    "EigenDecomposition",
    "SpectralReport",
    "SweepFit",
    "eigendecompose",
    "epsilon_star",
    "rho_filtered",
    "spectral_report",
    "predicted_iterations",
    "fit_power_law",
    "calibrate_condition_bound",
]

#: Dense eigendecompositions refuse systems above this size by default.
DENSE_EIG_CAP = 5000

#: Relative smallest singular value of R below which A is flagged non-diagonalizable.
DIAGONALIZABLE_SV_RATIO = 1e-12


@dataclass
class EigenDecomposition:
    """Eigenvalues and unit-column eigenvector basis of a system matrix."""

    values: np.ndarray
    vectors: np.ndarray
    kappa: float
    diagonalizable: bool
    sv_ratio: float


class EpsilonStar(NamedTuple):
    lambda_star: complex
    eps_star: float
    euclidean_gap: float


def eigendecompose(system, dof_cap: int = DENSE_EIG_CAP) -> EigenDecomposition:
    """Dense nonsymmetric eigendecomposition with conditioning diagnostics.

    Accepts a :class:`DiscreteSystem` or a plain square matrix.  Eigenvector
    columns are normalized to unit Euclidean norm before the condition
    number ``kappa = sigma_max / sigma_min`` is computed, so reported values
    do not depend on solver scaling conventions.
    """
    if isinstance(system, DiscreteSystem):
        n = system.m_total
        if n > dof_cap:
            raise SizeLimitError(
                f"{n} degrees of freedom exceed the dense cap {dof_cap}; "
                "raise dof_cap explicitly for large spectra"
            )
        dense = system.assemble_dense()
    else:
        dense = np.asarray(system)
        if dense.shape[0] != dense.shape[1]:
            raise ConfigurationError("eigendecompose needs a square matrix")
        if dense.shape[0] > dof_cap:
            raise SizeLimitError(
                f"{dense.shape[0]} degrees of freedom exceed the dense cap {dof_cap}"
            )
    try:
        values, vectors = la.eig(dense)
    except la.LinAlgError as exc:
        raise EigendecompositionError(f"dense eigendecomposition failed: {exc}") from exc
    norms = np.linalg.norm(vectors, axis=0)
    norms[norms == 0.0] = 1.0
    vectors = vectors / norms
    sv = la.svdvals(vectors)
    ratio = float(sv[-1] / sv[0]) if sv[0] > 0.0 else 0.0
    kappa = float(sv[0] / sv[-1]) if sv[-1] > 0.0 else math.inf
    return EigenDecomposition(
        values=values,
        vectors=vectors,
        kappa=kappa,
        diagonalizable=ratio >= DIAGONALIZABLE_SV_RATIO,
        sv_ratio=ratio,
    )


def epsilon_star(eigenvalues, omega: float) -> EpsilonStar:
    """Minimizer of ``-x + ALPHA (y - 1)^2`` over the scaled spectrum.

    Ties break toward the smaller Euclidean gap ``|lambda - i omega|`` and
    then the lower index.  For the conjugate-symmetric spectrum of a real
    matrix this equals the two-sided parabolic distance minimum.
    """
    lam = np.asarray(eigenvalues, dtype=complex)
    if lam.size == 0:
        raise ConfigurationError("empty spectrum")
    z = lam / omega
    objective = -z.real + ALPHA * (z.imag - 1.0) ** 2
    gap = np.abs(lam - 1j * omega)
    best = np.lexsort((np.arange(lam.size), gap, objective))[0]
    return EpsilonStar(
        lambda_star=complex(lam[best]),
        eps_star=float(objective[best]),
        euclidean_gap=float(gap[best]),
    )


def rho_filtered(eigenvalues, omega: float) -> float:
    """Spectral radius of the filtered propagation: ``max |beta_hat(lambda/omega)|``."""
    lam = np.asarray(eigenvalues, dtype=complex)
    if lam.size == 0:
        raise ConfigurationError("empty spectrum")
    return float(np.max(np.abs(beta_hat(lam / omega))))


@dataclass
class SpectralReport:
    """Contraction summary of one spectrum.

    ``rate_bound = max(1 - eps_star, 1 - DELTA)`` is the theoretical ceiling
    on ``rho_filtered`` for a real stable operator (conjugate-symmetric
    spectrum in the closed left half-plane).
    """

    omega: float
    eigenvalues: np.ndarray
    kappa: float
    diagonalizable: bool
    lambda_star: complex
    eps_star: float
    euclidean_gap: float
    rho_filtered: float
    rate_bound: float

    @property
    def max_real_part(self) -> float:
        return float(np.max(self.eigenvalues.real))


def spectral_report(system: DiscreteSystem, dof_cap: int = DENSE_EIG_CAP,
                    eigen: EigenDecomposition | None = None) -> SpectralReport:
    """Eigendecompose (unless given) and summarize the contraction numbers."""
    if eigen is None:
        eigen = eigendecompose(system, dof_cap=dof_cap)
    star = epsilon_star(eigen.values, system.omega)
    return SpectralReport(
        omega=system.omega,
        eigenvalues=eigen.values,
        kappa=eigen.kappa,
        diagonalizable=eigen.diagonalizable,
        lambda_star=star.lambda_star,
        eps_star=star.eps_star,
        euclidean_gap=star.euclidean_gap,
        rho_filtered=rho_filtered(eigen.values, system.omega),
        rate_bound=max(1.0 - star.eps_star, 1.0 - DELTA),
    )


def predicted_iterations(tau: float, omega: float, M: float, gamma: float, eps: float) -> float:
    """Iterations guaranteeing ``|w(n) - w*| <= tau |w(0) - w*|``.

    ``(gamma ln(M omega) - ln tau) / eps`` with ``kappa <= M omega^gamma``
    bounding the eigenvector conditioning and ``eps`` the parabolic margin.
    """
    if not 0.0 < tau < 1.0:
        raise ConfigurationError(f"tau must lie in (0, 1), got {tau}")
    if M <= 0.0:
        raise ConfigurationError(f"M must be positive, got {M}")
    if eps <= 0.0:
        raise ConfigurationError(f"contraction margin eps must be positive, got {eps}")
    return (gamma * math.log(M * omega) - math.log(tau)) / eps


@dataclass(frozen=True)
class SweepFit:
    """Least-squares power law ``value ~ exp(intercept) * omega^slope``."""

    omegas: np.ndarray
    values: np.ndarray
    slope: float
    intercept: float

    def predict(self, omega):
        return np.exp(self.intercept) * np.asarray(omega) ** self.slope


def fit_power_law(omegas, values) -> SweepFit:
    """Fit ``log value`` against ``log omega`` by least squares."""
    om = np.asarray(omegas, dtype=float)
    val = np.asarray(values, dtype=float)
    if om.size != val.size or om.size < 3:
        raise ConfigurationError("need at least 3 matching samples for a power-law fit")
    if np.any(om <= 0.0) or np.any(val <= 0.0):
        raise ConfigurationError("power-law fit needs strictly positive data")
    slope, intercept = np.polyfit(np.log(om), np.log(val), 1)
    return SweepFit(omegas=om, values=val, slope=float(slope), intercept=float(intercept))


def calibrate_condition_bound(omegas, kappas) -> tuple[float, float]:
    """Envelope constants ``(M, gamma)`` with ``kappa_j <= M omega_j^gamma``.

    The exponent comes from the least-squares fit; the prefactor is inflated
    to cover every sample, as required for a usable iteration bound.
    """
    fit = fit_power_law(omegas, kappas)
    om = np.asarray(omegas, dtype=float)
    kap = np.asarray(kappas, dtype=float)
    m = float(np.max(kap / om**fit.slope))
    return m, fit.slope
