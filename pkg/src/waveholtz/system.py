"""Shared containers for semi-discrete wave systems.

A :class:`DiscreteSystem` holds the real matrix ``A`` and forcing vector
``F`` of the first-order-in-time system ``dw/dt = A w - F * phase(omega t)``
with ``phase`` either cosine (velocity form) or sine (conservative form),
together with layout metadata describing how the state vector is split into
physical fields on the grid or mesh.  Systems are immutable after assembly;
``apply`` may be called concurrently on distinct vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError, DimensionMismatchError, InvalidFrequencyError

NEUMANN = "neumann"
OUTFLOW = "outflow"
_SIDE_NAMES = {1: ("left", "right"), 2: ("left", "right", "bottom", "top")}


@dataclass(frozen=True)
class BoundarySpec:
    """One condition per side of the square domain.

    ``sides`` is ``(left, right)`` in 1D or ``(left, right, bottom, top)``
    in 2D, each entry ``"neumann"`` (rigid wall) or ``"outflow"``
    (first-order radiating closure).
    """

    sides: tuple[str, ...]

    def __post_init__(self):
        if len(self.sides) not in (2, 4):
            raise ConfigurationError(f"expected 2 or 4 sides, got {len(self.sides)}")
        for s in self.sides:
            if s not in (NEUMANN, OUTFLOW):
                raise ConfigurationError(f"unknown boundary condition {s!r}")

    @property
    def dim(self) -> int:
        return len(self.sides) // 2

    @property
    def has_outflow(self) -> bool:
        return OUTFLOW in self.sides

    @classmethod
    def one_d(cls, left: str, right: str) -> "BoundarySpec":
        return cls((left, right))

    @classmethod
    def two_d(cls, left: str, right: str, bottom: str, top: str) -> "BoundarySpec":
        return cls((left, right, bottom, top))

    @classmethod
    def half_open(cls, dim: int) -> "BoundarySpec":
        """Walls on the low sides, radiating closures on the high sides."""
        if dim == 1:
            return cls((NEUMANN, OUTFLOW))
        if dim == 2:
            return cls((NEUMANN, OUTFLOW, NEUMANN, OUTFLOW))
        raise ConfigurationError(f"dim must be 1 or 2, got {dim}")

    @classmethod
    def closed(cls, dim: int) -> "BoundarySpec":
        return cls((NEUMANN,) * (2 * dim))

    @classmethod
    def open(cls, dim: int) -> "BoundarySpec":
        return cls((OUTFLOW,) * (2 * dim))

    def named(self) -> dict[str, str]:
        return dict(zip(_SIDE_NAMES[self.dim], self.sides))


@dataclass(frozen=True)
class Layout:
    """How a state vector maps onto physical fields.

    ``fields`` assigns a slice of the state to each scalar field (``u``/``v``
    for finite differences, ``p``/``u1``/... for DG).  ``coords`` gives the
    spatial location of each entry of one scalar block, ``mass_diag`` the
    diagonal quadrature mass used for mesh-weighted norms (DG only).
    """

    kind: str  # "fd" | "dg" | "generic"
    dim: int
    fields: dict[str, slice] = field(default_factory=dict)
    grid: object | None = None
    bc: BoundarySpec | None = None
    coords: np.ndarray | None = None
    mass_diag: np.ndarray | None = None


@dataclass
class DiscreteSystem:
    """Semi-discrete system ``dw/dt = A w - F * phase(omega t)``."""

    omega: float
    matrix: object  # scipy sparse matrix or dense ndarray
    forcing: np.ndarray
    phase: str
    layout: Layout

    def __post_init__(self):
        if self.omega <= 0.0:
            raise InvalidFrequencyError(f"omega must be positive, got {self.omega}")
        if self.phase not in ("cos", "sin"):
            raise ConfigurationError(f"phase must be 'cos' or 'sin', got {self.phase!r}")
        n = self.matrix.shape[0]
        if self.matrix.shape != (n, n):
            raise ConfigurationError("system matrix must be square")
        self.forcing = np.asarray(self.forcing, dtype=float)
        if self.forcing.shape != (n,):
            raise DimensionMismatchError(
                f"forcing has length {self.forcing.shape}, state has {n} entries"
            )
        self._forced = bool(np.any(self.forcing))

    @classmethod
    def from_matrix(cls, matrix, omega: float, forcing=None, phase: str = "cos",
                    layout: Layout | None = None) -> "DiscreteSystem":
        """Wrap a plain matrix (surrogates, tests) as a system."""
        n = matrix.shape[0]
        if forcing is None:
            forcing = np.zeros(n)
        if layout is None:
            layout = Layout(kind="generic", dim=0)
        return cls(omega=omega, matrix=matrix, forcing=forcing, phase=phase, layout=layout)

    @property
    def m_total(self) -> int:
        return self.matrix.shape[0]

    def check_state(self, w: np.ndarray) -> None:
        if w.shape != (self.m_total,):
            raise DimensionMismatchError(
                f"state has shape {w.shape}, system expects ({self.m_total},)"
            )

    def apply(self, w: np.ndarray) -> np.ndarray:
        """Action ``w -> A w``; linear, no forcing."""
        return self.matrix @ w

    def rhs(self, w: np.ndarray, t: float) -> np.ndarray:
        out = self.matrix @ w
        if self._forced:
            c = np.cos(self.omega * t) if self.phase == "cos" else np.sin(self.omega * t)
            out = out - c * self.forcing
        return out

    @property
    def complex_forcing(self) -> np.ndarray:
        """Amplitude of the forcing written as ``Re(F_c e^{i omega t})``.

        Cosine phase gives ``F_c = F``; sine phase gives ``F_c = -i F``.
        The frequency-domain fixed point solves ``(A - i omega I) w = F_c``
        and its real part is the fixed point of the real-valued iteration.
        """
        if self.phase == "cos":
            return self.forcing.astype(complex)
        return -1j * self.forcing

    def homogeneous(self) -> "DiscreteSystem":
        """Same propagation operator with the forcing removed."""
        return replace(self, forcing=np.zeros(self.m_total))

    def assemble_dense(self) -> np.ndarray:
        a = self.matrix
        return a.toarray() if sp.issparse(a) else np.asarray(a, dtype=float)

    def block(self, w: np.ndarray, name: str) -> np.ndarray:
        """View of one named field inside a state vector."""
        try:
            return w[self.layout.fields[name]]
        except KeyError:
            raise ConfigurationError(f"system has no field {name!r}") from None
