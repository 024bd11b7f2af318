"""Helmholtz solutions from time-filtered wave-equation solves.

The package assembles semi-discrete wave systems (finite differences or
nodal discontinuous Galerkin), advances them with classical RK4 while
accumulating the one-period time filter, iterates the resulting affine map
to its Helmholtz fixed point, and validates the contraction theory through
eigenvalue diagnostics.  The :mod:`waveholtz.cli` entry point reproduces the
standard experiments as CSV tables and SVG charts.
"""

__version__ = "0.1.0"

from . import errors
from .filters import (
    ALPHA,
    DELTA,
    FilterConstants,
    beta,
    beta_hat,
    beta_hat_quadrature,
    beta_series,
    check_axis_bounds,
    contraction_bound,
    filter_weight,
    parabolic_distance,
)
from .system import BoundarySpec, DiscreteSystem, Layout
from .fd import Grid, build_fd_1d, build_fd_2d, fd_resolution
from .dg import CENTRAL, UPWIND, DGMesh, build_dg, dg_resolution, lgl_reference
from .timestepping import TimeGrid, choose_time_grid, propagate_and_filter, rk4_step
from .iteration import (
    IterationReport,
    average_rate,
    direct_helmholtz_solve,
    real_fixed_point,
    recover_complex_dg,
    recover_complex_fd,
    recover_complex_state,
    waveholtz_iterate,
)
from .spectra import (
    EigenDecomposition,
    SpectralReport,
    SweepFit,
    eigendecompose,
    epsilon_star,
    fit_power_law,
    predicted_iterations,
    rho_filtered,
    spectral_report,
)

__all__ = [
    "__version__",
    "errors",
    "ALPHA",
    "DELTA",
    "FilterConstants",
    "beta",
    "beta_hat",
    "beta_hat_quadrature",
    "beta_series",
    "check_axis_bounds",
    "contraction_bound",
    "filter_weight",
    "parabolic_distance",
    "BoundarySpec",
    "DiscreteSystem",
    "Layout",
    "Grid",
    "fd_resolution",
    "build_fd_1d",
    "build_fd_2d",
    "DGMesh",
    "CENTRAL",
    "UPWIND",
    "lgl_reference",
    "dg_resolution",
    "build_dg",
    "TimeGrid",
    "choose_time_grid",
    "rk4_step",
    "propagate_and_filter",
    "IterationReport",
    "direct_helmholtz_solve",
    "real_fixed_point",
    "waveholtz_iterate",
    "average_rate",
    "recover_complex_fd",
    "recover_complex_dg",
    "recover_complex_state",
    "EigenDecomposition",
    "SpectralReport",
    "SweepFit",
    "eigendecompose",
    "epsilon_star",
    "rho_filtered",
    "spectral_report",
    "predicted_iterations",
    "fit_power_law",
]
