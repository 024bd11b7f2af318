"""Nodal discontinuous Galerkin for the conservative acoustic system.

The wave equation is written as ``p_t + div u = -(1/omega) f(x) sin(omega t)``,
``u_t + grad p = 0`` and discretized on uniform (tensor-product in 2D)
elements with degrees of freedom at Legendre-Gauss-Lobatto nodes.  Volume
integrals use LGL quadrature (exact at degree 2P-1, so exact for every
volume term of this linear system); the local mass matrix is the exact one,
whose inverse spreads face lifts over the whole element.  A collocation-
lumped mass would leave weakly damped staggered modes next to ``+-i omega``
that visibly degrade the contraction of the filtered iteration.

Interface coupling uses either the central flux

    p# = (p- + p+)/2,            (u.n)# = (u- + u+)/2 . n

or the upwind flux with jump penalties

    p# = (p- + p+)/2 + n.(u- - u+)/2,
    (u.n)# = n.(u- + u+)/2 + (p- - p+)/2.

Boundary faces synthesize a ghost exterior state: a wall mirrors the trace
(``p+ = p-``, ``u+.n = -u-.n``) and keeps the interior flux, so walls are
energy-conserving under the central flux; an outflow face uses a zero
exterior state with the upwind flux regardless of the interior flux choice,
which zeroes the incoming characteristic exactly.  On axis-aligned faces
only the normal velocity component enters any flux, so tangential
components carry no interface term.

State ordering: p block, then u (1D) or u1, u2 (2D); nodes element-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numpy.polynomial import legendre as npleg

from .errors import ConfigurationError, InvalidFrequencyError
from .system import NEUMANN, OUTFLOW, BoundarySpec, DiscreteSystem, Layout

__all__ = ["DGMesh", "LocalOperators", "lgl_reference", "dg_resolution", "build_dg",
           "energy", "CENTRAL", "UPWIND"]

CENTRAL = "central"
UPWIND = "upwind"


@dataclass(frozen=True)
class DGMesh:
    """Uniform mesh of ``n_elements`` per direction on ``[-1, 1]^dim``."""

    dim: int
    n_elements: int
    poly_degree: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ConfigurationError(f"mesh dim must be 1 or 2, got {self.dim}")
        if self.n_elements < 1:
            raise ConfigurationError("need at least one element per direction")
        if self.poly_degree < 1:
            raise ConfigurationError(f"polynomial degree must be >= 1, got {self.poly_degree}")

    @property
    def h(self) -> float:
        return 2.0 / self.n_elements

    @property
    def nodes_per_element(self) -> int:
        return self.poly_degree + 1


@dataclass(frozen=True)
class LocalOperators:
    """Reference-element operators on LGL nodes.

    ``mass`` is the exact local mass matrix (symmetric positive definite),
    ``diff`` maps nodal values to nodal derivative values (exact up to the
    element degree), and ``lift`` holds the columns ``mass^{-1} e_face`` for
    the left and right endpoints.
    """

    nodes: np.ndarray
    weights: np.ndarray
    mass: np.ndarray
    diff: np.ndarray
    lift: np.ndarray


def lgl_reference(P: int) -> LocalOperators:
    """Legendre-Gauss-Lobatto nodes, weights, and nodal operators for degree ``P``."""
    if P < 1:
        raise ConfigurationError(f"polynomial degree must be >= 1, got {P}")
    if P == 1:
        nodes = np.array([-1.0, 1.0])
    else:
        dlegendre = npleg.Legendre.basis(P).deriv()
        interior = np.sort(dlegendre.roots().real)
        nodes = np.concatenate([[-1.0], interior, [1.0]])
    lp = npleg.Legendre.basis(P)(nodes)
    weights = 2.0 / (P * (P + 1) * lp**2)

    n = P + 1
    # barycentric differentiation matrix: diff[i, j] = l_j'(x_i)
    bw = np.ones(n)
    for i in range(n):
        bw[i] = 1.0 / np.prod(nodes[i] - np.delete(nodes, i))
    diff = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                diff[i, j] = bw[j] / (bw[i] * (nodes[i] - nodes[j]))
        diff[i, i] = -np.sum(diff[i, np.arange(n) != i])

    # exact mass from Gauss-Legendre quadrature of the Lagrange basis
    xq, wq = np.polynomial.legendre.leggauss(P + 2)
    vand = np.ones((xq.size, n))
    for j in range(n):
        for m2 in range(n):
            if m2 != j:
                vand[:, j] *= (xq - nodes[m2]) / (nodes[j] - nodes[m2])
    mass = (vand * wq[:, None]).T @ vand
    mass = 0.5 * (mass + mass.T)

    ends = np.zeros((n, 2))
    ends[0, 0] = 1.0
    ends[-1, 1] = 1.0
    lift = np.linalg.solve(mass, ends)
    return LocalOperators(nodes=nodes, weights=weights, mass=mass, diff=diff, lift=lift)


def dg_resolution(omega: float, P: int, constant: float = 10.0, dim: int = 1) -> DGMesh:
    """Coarsest mesh keeping ``h^{P+1/2} omega^{P+3/2}`` below ``constant``."""
    if omega <= 0.0:
        raise InvalidFrequencyError(f"omega must be positive, got {omega}")
    if P < 1:
        raise ConfigurationError(f"polynomial degree must be >= 1, got {P}")
    if constant <= 0.0:
        raise ConfigurationError(f"resolution constant must be positive, got {constant}")
    h_max = (constant / omega ** (P + 1.5)) ** (1.0 / (P + 0.5))
    n = max(2, math.ceil(2.0 / h_max))
    return DGMesh(dim=dim, n_elements=n, poly_degree=P)


def _flux_coeffs(kind: str, n: float):
    """Trace coefficients of the interface fluxes for face normal ``n``.

    Returns ``(cn, cp)``: weights of (u-, u+, p-, p+) in the normal-velocity
    flux (u.n)# and in p#.
    """
    if kind == CENTRAL:
        return (0.5 * n, 0.5 * n, 0.0, 0.0), (0.0, 0.0, 0.5, 0.5)
    if kind == UPWIND:
        return (0.5 * n, 0.5 * n, 0.5, -0.5), (0.5 * n, -0.5 * n, 0.5, 0.5)
    raise ConfigurationError(f"unknown flux kind {kind!r}")


def _boundary_coeffs(flux: str, side: str, n: float):
    """Ghost-collapsed flux weights (interior trace only) at a boundary face."""
    if side == OUTFLOW:
        (ua, _, pa, _), (va, _, qa, _) = _flux_coeffs(UPWIND, n)
        return (ua, pa), (va, qa)
    if side == NEUMANN:
        (ua, ub, pa, pb), (va, vb, qa, qb) = _flux_coeffs(flux, n)
        return (ua - ub, pa + pb), (va - vb, qa + qb)
    raise ConfigurationError(f"unknown boundary condition {side!r}")


class _Coo:
    """Accumulator for broadcastable COO triplets."""

    def __init__(self):
        self.rows, self.cols, self.vals = [], [], []

    def add(self, rows, cols, vals):
        rows, cols, vals = np.broadcast_arrays(rows, cols, vals)
        self.rows.append(rows.ravel())
        self.cols.append(cols.ravel())
        self.vals.append(np.ascontiguousarray(vals, dtype=float).ravel())

    def matrix(self, size: int) -> sp.csr_matrix:
        rows = np.concatenate(self.rows)
        cols = np.concatenate(self.cols)
        vals = np.concatenate(self.vals)
        return sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()


def _add_face(coo, n, minus, plus, cn, cp):
    """Interface contributions for one batch of faces with normal ``n``.

    ``minus``/``plus`` are ``(p_rows, u_rows, lift, p_trace, u_trace)``
    where the row blocks span the element nodes along the lift direction
    (last axis), trace id arrays carry a singleton lift axis, and ``lift``
    is broadcast along it.  ``plus`` of ``None`` marks a boundary face whose
    ghost is already collapsed into the coefficients.
    """
    cn_ua, cn_ub, cn_pa, cn_pb = cn
    cp_ua, cp_ub, cp_pa, cp_pb = cp
    p_a, u_a = minus[3], minus[4]
    p_b, u_b = (plus[3], plus[4]) if plus is not None else (None, None)
    sides = [(minus, -1.0, -n)]
    if plus is not None:
        sides.append((plus, +1.0, +n))
    for (p_rows, u_rows, lift, _, _), sgn_p, sgn_u in sides:
        for col, c in ((u_a, cn_ua), (u_b, cn_ub), (p_a, cn_pa), (p_b, cn_pb)):
            if col is not None and c != 0.0:
                coo.add(p_rows, col, sgn_p * c * lift)
        for col, c in ((u_a, cp_ua), (u_b, cp_ub), (p_a, cp_pa), (p_b, cp_pb)):
            if col is not None and c != 0.0:
                coo.add(u_rows, col, sgn_u * c * lift)


def build_dg(omega: float, mesh: DGMesh, flux: str, bc: BoundarySpec, source=None) -> DiscreteSystem:
    """Assemble the DG system; ``source`` samples ``f`` at the global nodes."""
    if flux not in (CENTRAL, UPWIND):
        raise ConfigurationError(f"unknown flux kind {flux!r}")
    if bc.dim != mesh.dim:
        raise ConfigurationError(f"boundary spec is {bc.dim}D but mesh is {mesh.dim}D")
    if mesh.dim == 1:
        return _build_dg_1d(omega, mesh, flux, bc, source)
    return _build_dg_2d(omega, mesh, flux, bc, source)


def _volume_matrix(ops: LocalOperators, jac: float) -> np.ndarray:
    # weak-form volume kernel: mass^{-1} (diff^T W) / jac
    return np.linalg.solve(ops.mass, ops.diff.T * ops.weights[None, :]) / jac


def _build_dg_1d(omega, mesh, flux, bc, source):
    k, n = mesh.n_elements, mesh.nodes_per_element
    ops = lgl_reference(mesh.poly_degree)
    jac = 0.5 * mesh.h
    vol = _volume_matrix(ops, jac)
    lift_lo = ops.lift[:, 0] / jac
    lift_hi = ops.lift[:, 1] / jac

    nfield = k * n
    p_id = np.arange(nfield).reshape(k, n)
    u_id = nfield + p_id
    coo = _Coo()

    rows_p = np.broadcast_to(p_id[:, :, None], (k, n, n))
    cols_u = np.broadcast_to(u_id[:, None, :], (k, n, n))
    volk = np.broadcast_to(vol[None, :, :], (k, n, n))
    coo.add(rows_p, cols_u, volk)
    coo.add(nfield + rows_p, cols_u - nfield, volk)

    if k > 1:
        cn, cp = _flux_coeffs(flux, 1.0)
        minus = (p_id[:-1, :], u_id[:-1, :], lift_hi[None, :],
                 p_id[:-1, -1:], u_id[:-1, -1:])
        plus = (p_id[1:, :], u_id[1:, :], lift_lo[None, :],
                p_id[1:, :1], u_id[1:, :1])
        _add_face(coo, 1.0, minus, plus, cn, cp)
    left, right = bc.sides
    for side, nrm, elem, trace, lift in (
        (left, -1.0, 0, 0, lift_lo),
        (right, +1.0, k - 1, n - 1, lift_hi),
    ):
        cn1, cp1 = _boundary_coeffs(flux, side, nrm)
        minus = (p_id[elem, :], u_id[elem, :], lift,
                 p_id[elem, trace : trace + 1], u_id[elem, trace : trace + 1])
        _add_face(coo, nrm, minus, None, (cn1[0], 0.0, cn1[1], 0.0), (cp1[0], 0.0, cp1[1], 0.0))

    x = (-1.0 + np.arange(k)[:, None] * mesh.h + (ops.nodes[None, :] + 1.0) * jac).ravel()
    forcing = np.zeros(2 * nfield)
    if source is not None:
        forcing[:nfield] = np.asarray(source(x), dtype=float) / omega

    layout = Layout(
        kind="dg",
        dim=1,
        fields={"p": slice(0, nfield), "u": slice(nfield, 2 * nfield)},
        grid=mesh,
        bc=bc,
        coords=x[:, None],
    )
    return DiscreteSystem(
        omega=omega, matrix=coo.matrix(2 * nfield), forcing=forcing, phase="sin", layout=layout
    )


def _build_dg_2d(omega, mesh, flux, bc, source):
    k, n = mesh.n_elements, mesh.nodes_per_element
    ops = lgl_reference(mesh.poly_degree)
    jac = 0.5 * mesh.h
    vol = _volume_matrix(ops, jac)
    lift_lo = ops.lift[:, 0] / jac
    lift_hi = ops.lift[:, 1] / jac

    nfield = k * k * n * n
    p_id = np.arange(nfield).reshape(k, k, n, n)  # [ex, ey, i, j]
    u1_id = nfield + p_id
    u2_id = 2 * nfield + p_id
    coo = _Coo()

    # volume terms, one direction at a time (the transverse mass cancels)
    shape_x = (k, k, n, n, n)  # (ex, ey, i, q, j)
    rows_x = np.broadcast_to(p_id[:, :, :, None, :], shape_x)
    cols_x = np.broadcast_to(p_id[:, :, None, :, :], shape_x)
    vol_x = np.broadcast_to(vol[None, None, :, :, None], shape_x)
    coo.add(rows_x, cols_x + nfield, vol_x)  # p <- u1
    coo.add(rows_x + nfield, cols_x, vol_x)  # u1 <- p

    shape_y = (k, k, n, n, n)  # (ex, ey, i, j, q)
    rows_y = np.broadcast_to(p_id[:, :, :, :, None], shape_y)
    cols_y = np.broadcast_to(p_id[:, :, :, None, :], shape_y)
    vol_y = np.broadcast_to(vol[None, None, None, :, :], shape_y)
    coo.add(rows_y, cols_y + 2 * nfield, vol_y)  # p <- u2
    coo.add(rows_y + 2 * nfield, cols_y, vol_y)  # u2 <- p

    if k > 1:
        cn, cp = _flux_coeffs(flux, 1.0)
        # x-direction interior faces (normal +x, velocity u1); lift along i
        minus = (p_id[:-1], u1_id[:-1], lift_hi[None, None, :, None],
                 p_id[:-1, :, -1:, :], u1_id[:-1, :, -1:, :])
        plus = (p_id[1:], u1_id[1:], lift_lo[None, None, :, None],
                p_id[1:, :, :1, :], u1_id[1:, :, :1, :])
        _add_face(coo, 1.0, minus, plus, cn, cp)
        # y-direction interior faces (normal +y, velocity u2); lift along j
        minus = (p_id[:, :-1], u2_id[:, :-1], lift_hi[None, None, None, :],
                 p_id[:, :-1, :, -1:], u2_id[:, :-1, :, -1:])
        plus = (p_id[:, 1:], u2_id[:, 1:], lift_lo[None, None, None, :],
                p_id[:, 1:, :, :1], u2_id[:, 1:, :, :1])
        _add_face(coo, 1.0, minus, plus, cn, cp)

    left, right, bottom, top = bc.sides
    boundary = (
        (left, -1.0, p_id[0], u1_id[0], lift_lo[:, None], np.s_[0:1, :]),
        (right, +1.0, p_id[-1], u1_id[-1], lift_hi[:, None], np.s_[n - 1 : n, :]),
        (bottom, -1.0, np.swapaxes(p_id[:, 0], -1, -2), np.swapaxes(u2_id[:, 0], -1, -2),
         lift_lo[:, None], np.s_[0:1, :]),
        (top, +1.0, np.swapaxes(p_id[:, -1], -1, -2), np.swapaxes(u2_id[:, -1], -1, -2),
         lift_hi[:, None], np.s_[n - 1 : n, :]),
    )
    for side, nrm, pr, ur, lift, trace in boundary:
        # pr/ur have the lift direction as the second-to-last axis
        cn1, cp1 = _boundary_coeffs(flux, side, nrm)
        minus = (pr, ur, lift, pr[(Ellipsis,) + trace], ur[(Ellipsis,) + trace])
        _add_face(coo, nrm, minus, None, (cn1[0], 0.0, cn1[1], 0.0), (cp1[0], 0.0, cp1[1], 0.0))

    line = -1.0 + np.arange(k)[:, None] * mesh.h + (ops.nodes[None, :] + 1.0) * jac  # (k, n)
    x = np.broadcast_to(line[:, None, :, None], (k, k, n, n)).ravel()
    y = np.broadcast_to(line[None, :, None, :], (k, k, n, n)).ravel()
    forcing = np.zeros(3 * nfield)
    if source is not None:
        forcing[:nfield] = np.asarray(source(x, y), dtype=float) / omega

    layout = Layout(
        kind="dg",
        dim=2,
        fields={
            "p": slice(0, nfield),
            "u1": slice(nfield, 2 * nfield),
            "u2": slice(2 * nfield, 3 * nfield),
        },
        grid=mesh,
        bc=bc,
        coords=np.column_stack([x, y]),
    )
    return DiscreteSystem(
        omega=omega, matrix=coo.matrix(3 * nfield), forcing=forcing, phase="sin", layout=layout
    )


def apply_mass(system: DiscreteSystem, field_values: np.ndarray) -> np.ndarray:
    """Global mass action on one scalar field of a DG system."""
    if system.layout.kind != "dg":
        raise ConfigurationError("mass action is defined for DG systems only")
    mesh = system.layout.grid
    ops = lgl_reference(mesh.poly_degree)
    k, n = mesh.n_elements, mesh.nodes_per_element
    jac = 0.5 * mesh.h
    if mesh.dim == 1:
        vals = field_values.reshape(k, n)
        return (jac * vals @ ops.mass.T).ravel()
    vals = field_values.reshape(k, k, n, n)
    out = np.einsum("iq,xyqj->xyij", ops.mass, vals)
    out = np.einsum("jq,xyiq->xyij", ops.mass, out)
    return (jac * jac * out).ravel()


def energy(system: DiscreteSystem, w: np.ndarray) -> float:
    """Discrete energy ``(1/2) sum_fields w^T M w`` of a DG state."""
    total = 0.0
    for sl in system.layout.fields.values():
        total += float(w[sl] @ apply_mass(system, w[sl]))
    return 0.5 * total
