"""Second-order finite differences for the velocity-form wave system.

The wave equation on ``(-1, 1)^dim`` is written as ``u_t = v``,
``v_t = Lap u - f(x) cos(omega t)`` and discretized with the standard
central stencil on a uniform grid ``x_j = -1 + j h``.  Boundary conditions
enter through ghost-point elimination with the centered first difference:

* wall (Neumann): ``(u_{m+1} - u_{m-1}) / 2h = 0`` mirrors the ghost value,
* outflow: ``v_m + n (u_{m+1} - u_{m-1}) / 2h = 0`` trades the ghost value
  for a ``-2 v_m / h`` damping term in the boundary row.

In 2D the one-dimensional eliminations apply independently per direction;
corner nodes simply accumulate both sides' contributions.  The state is
ordered u-block then v-block, row-major over grid points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError, InvalidFrequencyError
from .system import OUTFLOW, BoundarySpec, DiscreteSystem, Layout

__all__ = ["Grid", "fd_resolution", "build_fd_1d", "build_fd_2d"]


@dataclass(frozen=True)
class Grid:
    """Uniform grid on ``[-1, 1]^dim`` with ``m`` cells (``m + 1`` points) per direction."""

    dim: int
    m: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ConfigurationError(f"grid dim must be 1 or 2, got {self.dim}")
        if self.m < 2:
            raise ConfigurationError(f"need at least 2 cells per direction, got {self.m}")

    @property
    def h(self) -> float:
        return 2.0 / self.m

    @property
    def points_per_dim(self) -> int:
        return self.m + 1

    def axis(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.m + 1)

    @property
    def n_points(self) -> int:
        return (self.m + 1) ** self.dim


def fd_resolution(omega: float, constant: float = 10.0, dim: int = 1) -> Grid:
    """Coarsest grid keeping the dispersion-error proxy ``h^2 omega^3`` below ``constant``."""
    if omega <= 0.0:
        raise InvalidFrequencyError(f"omega must be positive, got {omega}")
    if constant <= 0.0:
        raise ConfigurationError(f"resolution constant must be positive, got {constant}")
    h_max = math.sqrt(constant / omega**3)
    m = max(2, math.ceil(2.0 / h_max))
    return Grid(dim=dim, m=m)


def _second_difference(m: int, h: float, left: str, right: str):
    """1D ghost-eliminated second-difference matrix and outflow damping weights.

    Both wall and outflow give the mirrored stencil ``(2 u_1 - 2 u_0)/h^2``
    in the boundary row of the u-part; outflow additionally couples the
    boundary node's own velocity with weight ``-2/h``.
    """
    n = m + 1
    main = np.full(n, -2.0)
    off = np.ones(n - 1)
    d2 = sp.diags([off, main, off], [-1, 0, 1], format="lil")
    d2[0, 1] = 2.0
    d2[n - 1, n - 2] = 2.0
    d2 = (d2 / h**2).tocsr()
    vdamp = np.zeros(n)
    if left == OUTFLOW:
        vdamp[0] = -2.0 / h
    if right == OUTFLOW:
        vdamp[n - 1] = -2.0 / h
    return d2, vdamp


def _assemble(omega, lap, vdamp, forcing_values, layout) -> DiscreteSystem:
    n = lap.shape[0]
    a = sp.bmat(
        [[None, sp.identity(n, format="csr")], [lap, sp.diags(vdamp)]], format="csr"
    )
    forcing = np.concatenate([np.zeros(n), forcing_values])
    return DiscreteSystem(omega=omega, matrix=a, forcing=forcing, phase="cos", layout=layout)


def build_fd_1d(omega: float, grid: Grid, bc: BoundarySpec, source=None) -> DiscreteSystem:
    """Assemble the 1D system; ``source`` is ``f(x)`` evaluated at the nodes."""
    if grid.dim != 1 or bc.dim != 1:
        raise ConfigurationError("build_fd_1d needs a 1D grid and 1D boundary spec")
    x = grid.axis()
    lap, vdamp = _second_difference(grid.m, grid.h, bc.sides[0], bc.sides[1])
    f = np.zeros_like(x) if source is None else np.asarray(source(x), dtype=float)
    n = x.size
    layout = Layout(
        kind="fd",
        dim=1,
        fields={"u": slice(0, n), "v": slice(n, 2 * n)},
        grid=grid,
        bc=bc,
        coords=x[:, None],
    )
    return _assemble(omega, lap, vdamp, f, layout)


def build_fd_2d(omega: float, grid: Grid, bc: BoundarySpec, source=None) -> DiscreteSystem:
    """Assemble the 2D system; ``source`` is ``f(x, y)`` on the tensor grid."""
    if grid.dim != 2 or bc.dim != 2:
        raise ConfigurationError("build_fd_2d needs a 2D grid and 2D boundary spec")
    left, right, bottom, top = bc.sides
    n = grid.points_per_dim
    d2x, vdx = _second_difference(grid.m, grid.h, left, right)
    d2y, vdy = _second_difference(grid.m, grid.h, bottom, top)
    eye = sp.identity(n, format="csr")
    lap = (sp.kron(d2x, eye) + sp.kron(eye, d2y)).tocsr()
    vdamp = (vdx[:, None] + vdy[None, :]).ravel()

    ax = grid.axis()
    xg, yg = np.meshgrid(ax, ax, indexing="ij")
    f = np.zeros(n * n) if source is None else np.asarray(source(xg, yg), dtype=float).ravel()
    nn = n * n
    layout = Layout(
        kind="fd",
        dim=2,
        fields={"u": slice(0, nn), "v": slice(nn, 2 * nn)},
        grid=grid,
        bc=bc,
        coords=np.column_stack([xg.ravel(), yg.ravel()]),
    )
    return _assemble(omega, lap, vdamp, f, layout)
