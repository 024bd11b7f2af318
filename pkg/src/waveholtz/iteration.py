"""Fixed-point iteration of the filtered propagation and its oracles.

The iterate map is one filtered period of the real-valued wave system; its
fixed point is the real part of the frequency-domain solution ``w*`` of
``(A - i omega I) w* = F_c`` (``F_c`` the complex forcing amplitude).  The
complex solution is recovered from a converged real state at reporting time
only.  ``direct_helmholtz_solve`` provides ``w*`` independently of the
iteration, as the error oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    ConfigurationError,
    DegenerateHistoryError,
    DivergenceError,
    InvalidFrequencyError,
    ResonanceError,
)
from .system import DiscreteSystem
from .timestepping import TimeGrid, propagate_and_filter

__all__ = [
    "IterationReport",
    "direct_helmholtz_solve",
    "real_fixed_point",
    "waveholtz_iterate",
    "average_rate",
    "recover_complex_fd",
    "recover_complex_dg",
    "recover_complex_state",
]

#: Dense factorization is used up to this many degrees of freedom.
DENSE_SOLVE_CAP = 4000


@dataclass
class IterationReport:
    """Convergence bookkeeping of one fixed-point run.

    ``residuals[n-1]`` is ``res(n) = |w(n) - w(n-1)| / |w(1) - w(0)|`` (so the
    first entry is 1 by construction).  Error histories against the oracle
    and in eigenvector coefficients start at iterate 0 and are present only
    when the corresponding inputs were supplied.  Rates averaged over the
    whole recorded history use the mean of successive ratios.
    """

    residuals: np.ndarray
    n_iterations: int
    iterations_to_tol: int | None
    converged_at_start: bool = False
    err_e: np.ndarray | None = None
    err_mu: np.ndarray | None = None
    first_iteration_rate: float | None = None
    avg_rate_e: float | None = None
    avg_rate_mu: float | None = None
    final_state: np.ndarray | None = field(default=None, repr=False)

    @property
    def reached_tolerance(self) -> bool:
        return self.converged_at_start or self.iterations_to_tol is not None


def _shifted_operator(system: DiscreteSystem):
    a = system.matrix
    n = system.m_total
    if sp.issparse(a):
        return (a.astype(complex) - 1j * system.omega * sp.identity(n, format="csr")).tocsc()
    return np.asarray(a, dtype=complex) - 1j * system.omega * np.eye(n)


def direct_helmholtz_solve(
    system: DiscreteSystem,
    method: str = "auto",
    dense_cap: int = DENSE_SOLVE_CAP,
    residual_tol: float = 1e-8,
) -> np.ndarray:
    """Frequency-domain solution ``w*`` of ``(A - i omega I) w* = F_c``.

    ``method`` is ``"dense"`` (LU), ``"sparse"`` (sparse LU), ``"krylov"``
    (unpreconditioned BiCGStab, checked to 1e-10), or ``"auto"`` which picks
    dense below ``dense_cap`` degrees of freedom and sparse LU above.  The
    returned solution always carries a relative-residual check; failure
    raises :class:`ResonanceError` since it signals a (near-)singular
    frequency-domain system.
    """
    fc = system.complex_forcing
    if not np.any(fc):
        return np.zeros(system.m_total, dtype=complex)
    if method == "auto":
        method = "dense" if system.m_total <= dense_cap else "sparse"

    shifted = _shifted_operator(system)
    try:
        if method == "dense":
            dense = shifted.toarray() if sp.issparse(shifted) else shifted
            with warnings.catch_warnings():
                # an ill-conditioning warning from LAPACK means the shifted
                # operator is numerically singular, i.e. omega is resonant
                warnings.simplefilter("error", la.LinAlgWarning)
                sol = la.solve(dense, fc)
        elif method == "sparse":
            mat = shifted if sp.issparse(shifted) else sp.csc_matrix(shifted)
            sol = spla.splu(mat).solve(fc)
        elif method == "krylov":
            mat = shifted if sp.issparse(shifted) else sp.csc_matrix(shifted)
            sol, info = _bicgstab(mat, fc, rtol=1e-12, maxiter=50 * system.m_total)
            if info != 0:
                raise ResonanceError(f"BiCGStab did not converge (info={info})")
        else:
            raise ConfigurationError(f"unknown solve method {method!r}")
    except (la.LinAlgError, la.LinAlgWarning) as exc:
        raise ResonanceError(f"frequency-domain solve failed: {exc}") from exc
    except RuntimeError as exc:  # singular sparse factorization
        raise ResonanceError(f"frequency-domain solve failed: {exc}") from exc

    check = 1e-10 if method == "krylov" else residual_tol
    residual = np.linalg.norm(shifted @ sol - fc) / np.linalg.norm(fc)
    if not np.isfinite(residual) or residual > check:
        raise ResonanceError(
            f"frequency-domain system is numerically singular "
            f"(relative residual {residual:.2e} at omega={system.omega})"
        )
    return sol


def _bicgstab(mat, rhs, rtol, maxiter):
    try:
        return spla.bicgstab(mat, rhs, rtol=rtol, maxiter=maxiter)
    except TypeError:  # scipy < 1.12 spells it tol
        return spla.bicgstab(mat, rhs, tol=rtol, maxiter=maxiter)


def real_fixed_point(solution: np.ndarray) -> np.ndarray:
    """Initial state whose filtered trajectory is stationary: ``Re w*``."""
    return np.ascontiguousarray(solution.real)


def waveholtz_iterate(
    system: DiscreteSystem,
    w0: np.ndarray,
    tgrid: TimeGrid,
    tol: float = 1e-6,
    max_iters: int = 5000,
    oracle: np.ndarray | None = None,
    eigen=None,
) -> IterationReport:
    """Iterate the filtered propagation until the relative update stalls below ``tol``.

    ``oracle`` (complex frequency-domain solution) enables the error history
    ``|w(n) - Re w*|``; ``eigen`` (an eigendecomposition of ``A``) enables
    the history of eigenvector-coefficient errors ``|R^{-1} (w(n) - Re w*)|``.
    Euclidean norms throughout.
    """
    if tol < 0.0:
        raise ConfigurationError(f"tol must be nonnegative, got {tol}")
    if max_iters < 1:
        raise ConfigurationError(f"max_iters must be at least 1, got {max_iters}")
    w = np.array(w0, dtype=float)
    system.check_state(w)

    wstar_real = None
    err_e = err_mu = None
    lu = None
    if oracle is not None:
        wstar_real = real_fixed_point(np.asarray(oracle, dtype=complex))
        err_e = [float(np.linalg.norm(w - wstar_real))]
        if eigen is not None:
            lu = la.lu_factor(np.asarray(eigen.vectors, dtype=complex))
            err_mu = [float(np.linalg.norm(la.lu_solve(lu, (w - wstar_real).astype(complex))))]

    residuals: list[float] = []
    denom = None
    iterations_to_tol = None
    n_done = 0
    for n in range(1, max_iters + 1):
        w_next = propagate_and_filter(system, w, tgrid)
        diff = float(np.linalg.norm(w_next - w))
        if not np.isfinite(diff):
            raise DivergenceError(f"non-finite state at iteration {n} (unstable time step?)")
        if denom is None:
            if diff == 0.0:
                return IterationReport(
                    residuals=np.array([]),
                    n_iterations=0,
                    iterations_to_tol=0,
                    converged_at_start=True,
                    err_e=None if err_e is None else np.asarray(err_e),
                    err_mu=None if err_mu is None else np.asarray(err_mu),
                    final_state=w,
                )
            denom = diff
        residuals.append(diff / denom)
        w = w_next
        n_done = n
        if wstar_real is not None:
            e = w - wstar_real
            err_e.append(float(np.linalg.norm(e)))
            if lu is not None:
                err_mu.append(float(np.linalg.norm(la.lu_solve(lu, e.astype(complex)))))
        if residuals[-1] <= tol:
            iterations_to_tol = n
            break

    first_rate = None
    avg_e = avg_mu = None
    ee = emu = None
    if err_e is not None:
        ee = np.asarray(err_e)
        if ee[0] > 0.0 and len(ee) > 1:
            first_rate = float(ee[1] / ee[0])
            if np.all(ee[:-1] > 0.0):
                avg_e = average_rate(ee, len(ee) - 1)
    if err_mu is not None:
        emu = np.asarray(err_mu)
        if len(emu) > 1 and np.all(emu[:-1] > 0.0):
            avg_mu = average_rate(emu, len(emu) - 1)

    return IterationReport(
        residuals=np.asarray(residuals),
        n_iterations=n_done,
        iterations_to_tol=iterations_to_tol,
        err_e=ee,
        err_mu=emu,
        first_iteration_rate=first_rate,
        avg_rate_e=avg_e,
        avg_rate_mu=avg_mu,
        final_state=w,
    )


def average_rate(history, K: int) -> float:
    """Mean of the first ``K`` successive ratios ``history[k+1] / history[k]``."""
    h = np.asarray(history, dtype=float)
    if K < 1 or h.size < K + 1:
        raise ConfigurationError(f"need K+1 = {K + 1} history entries, got {h.size}")
    denom = h[:K]
    if np.any(denom == 0.0):
        raise DegenerateHistoryError("zero entry in rate history denominator")
    return float(np.mean(h[1 : K + 1] / denom))


def recover_complex_fd(u: np.ndarray, v: np.ndarray, omega: float) -> np.ndarray:
    """Helmholtz solution from the converged velocity-form pair: ``u + v/(i omega)``."""
    if omega <= 0.0:
        raise InvalidFrequencyError(f"omega must be positive, got {omega}")
    return u - 1j * np.asarray(v) / omega


def recover_complex_state(system: DiscreteSystem, w: np.ndarray) -> np.ndarray:
    """Full complex frequency-domain state from a converged real iterate.

    At the fixed point the real part of ``(A - i omega) w* = F_c`` gives
    ``Im w* = -(A Re w* - Re F_c) / omega``, so one extra operator
    application reconstructs the imaginary part exactly (up to iteration and
    time-discretization error).
    """
    resid = system.apply(w)
    if system.phase == "cos":
        resid = resid - system.forcing  # Re F_c = F for cosine forcing
    return w - 1j * resid / system.omega


def recover_complex_dg(system: DiscreteSystem, w: np.ndarray) -> np.ndarray:
    """Complex pressure from a converged DG state: ``p - (div u) / (i omega)``.

    The divergence is the discrete one of the assembled operator, including
    its face-flux terms, read off the pressure rows of one application.
    """
    if system.layout.kind != "dg":
        raise ConfigurationError("recover_complex_dg expects a DG system")
    full = recover_complex_state(system, w)
    return full[system.layout.fields["p"]]
