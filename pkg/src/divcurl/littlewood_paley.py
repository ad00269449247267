"""
Dyadic frequency decomposition and kernel bounds for quantized symbols.

The partition is telescoping, phi_0 = S(|xi|) and
phi_j = S(2^-j |xi|) - S(2^-(j-1) |xi|), where S is a smooth step equal to 1
on [0, 1] and 0 on [2, inf).  Kernel studies run in one dimension, where the
full N x N kernel matrix of each piece is cheap to form exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComponentMismatchError, GridSizeError, SizeLimitError, SymbolOrderError
from .hodge import transition
from .measures import VectorMeasure, mollify, require_resolved
from .spectral import TWO_PI, SpectralField, Symbol, TorusGrid, apply_multiplier, lp_norm, quantize

KERNEL_MAX_N = 1024


def smooth_step(t) -> np.ndarray:
    """1 on [0, 1], 0 on [2, inf), smooth in between."""
    return 1.0 - transition(np.asarray(t, dtype=float) / 2.0, 0.5)


def _radius(xi) -> np.ndarray:
    return np.sqrt(np.sum(np.asarray(xi, dtype=float) ** 2, axis=0))


def dyadic_piece(j: int, r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if j == 0:
        return smooth_step(r)
    return smooth_step(r / 2.0**j) - smooth_step(r / 2.0 ** (j - 1))


@dataclass(frozen=True)
class DyadicPartition:
    """Pieces phi_0 .. phi_J; their sum is S(2^-J |xi|), equal to 1 for |xi| <= 2^J."""

    J: int

    def __post_init__(self) -> None:
        if self.J < 1:
            raise GridSizeError(f"partition depth J must be >= 1, got {self.J}")

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(
            Symbol.from_multiplier(lambda xi, j=j: dyadic_piece(j, _radius(xi)), order=0.0, name=f"phi_{j}")
            for j in range(self.J + 1)
        )

    def piece(self, j: int, r) -> np.ndarray:
        if not 0 <= j <= self.J:
            raise ValueError(f"level {j} outside 0..{self.J}")
        return dyadic_piece(j, r)

    def partial_sum(self, r) -> np.ndarray:
        return sum(dyadic_piece(j, r) for j in range(self.J + 1))

    def check_grid(self, grid: TorusGrid) -> None:
        if 2 ** (self.J + 1) > grid.n // 2:
            raise GridSizeError(f"J={self.J} needs 2^(J+1) <= N/2, grid has N={grid.n}")


def dyadic_partition(J: int, grid: TorusGrid | None = None) -> DyadicPartition:
    part = DyadicPartition(J)
    if grid is not None:
        part.check_grid(grid)
    return part


def lp_project(u: SpectralField, j: int, partition: DyadicPartition) -> SpectralField:
    """Littlewood-Paley piece phi_j(D) u."""
    if not 0 <= j <= partition.J:
        raise ValueError(f"level {j} outside 0..{partition.J}")
    return apply_multiplier(partition.symbols[j], u)


def _require_1d(grid: TorusGrid) -> None:
    if grid.dim != 1:
        raise ComponentMismatchError(f"kernel studies are one-dimensional, grid is {grid.dim}D")
    if grid.n > KERNEL_MAX_N:
        raise SizeLimitError(f"kernel matrices are capped at N={KERNEL_MAX_N}, got {grid.n}")


def kernel_matrix(a: Symbol, j: int, partition: DyadicPartition, grid: TorusGrid) -> np.ndarray:
    """
    K_j[x, y] = (2pi)^-1 sum_k exp(i (x - y) k) a(x, k) phi_j(k), by direct summation.

    Rows are indexed by x, columns by y, so that Op(a) phi_j(D) u(x) is
    approximated by ``K @ u * spacing``.
    """
    _require_1d(grid)
    x = grid.axis_points
    k = grid.axis_freqs
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        A = a(x[None, :, None], k[None, None, :])
    B = A * partition.piece(j, np.abs(k))[None, :]
    left = B * np.exp(1j * np.outer(x, k))
    right = np.exp(-1j * np.outer(k, x))
    return (left @ right).real / TWO_PI


@dataclass(frozen=True)
class KernelMassRow:
    j: int
    mass: float
    scaled_mass: float
    sup: float
    sup_bound: float


def kernel_l1_profile(
    a: Symbol,
    J: int,
    grid: TorusGrid,
    levels=None,
    integrate_over: str = "y",
) -> list[KernelMassRow]:
    """
    Per-level kernel masses and their 2^(-j order) rescaling.

    ``mass`` is max_x int |K_j(x, y)| dy (``integrate_over="y"``) or
    max_y int |K_j(x, y)| dx (``"x"``).  ``sup_bound`` is the frequency-sum
    majorant max_x sum_k |a(x, k) phi_j(k)| / 2pi of sup |K_j|.
    """
    _require_1d(grid)
    part = dyadic_partition(J, grid)
    axis = {"y": 1, "x": 0}[integrate_over]
    levels = range(J + 1) if levels is None else levels
    x = grid.axis_points
    k = grid.axis_freqs
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        A = np.abs(a(x[None, :, None], k[None, None, :]))
    rows = []
    for j in levels:
        K = kernel_matrix(a, j, part, grid)
        mass = float(np.max(np.sum(np.abs(K), axis=axis)) * grid.spacing)
        bound = float(np.max(np.sum(A * part.piece(j, np.abs(k))[None, :], axis=1)) / TWO_PI)
        rows.append(
            KernelMassRow(
                j=int(j),
                mass=mass,
                scaled_mass=mass * 2.0 ** (-j * a.order),
                sup=float(np.max(np.abs(K))),
                sup_bound=bound,
            )
        )
    return rows


@dataclass(frozen=True)
class MeasureBoundRow:
    h: float
    l1_norm: float


def measure_action_bound(a: Symbol, mu: VectorMeasure, h_list, grid: TorusGrid) -> list[MeasureBoundRow]:
    """L^1 norms of Op(a) applied to heat-mollified copies of ``mu``, one row per h."""
    _require_1d(grid)
    if a.order >= 0:
        raise SymbolOrderError(f"the measure-to-L1 bound needs a negative order, got {a.order}")
    rows = []
    for h in h_list:
        require_resolved(h, grid.n)
        f = mollify(mu, h, grid)
        rows.append(MeasureBoundRow(h=float(h), l1_norm=lp_norm(quantize(a, f), 1)))
    return rows


def bessel_potential(order: float) -> Symbol:
    """(1 + |xi|^2)^(order/2)."""
    return Symbol.from_multiplier(
        lambda xi: (1.0 + np.sum(np.asarray(xi, float) ** 2, axis=0)) ** (order / 2.0),
        order=order,
        name=f"bessel({order})",
    )


def modulated_bessel_potential(order: float, amplitude: float = 0.5) -> Symbol:
    """(1 + amplitude sin x_1)(1 + |xi|^2)^(order/2), an x-dependent symbol of the same order."""
    return Symbol.from_xdependent(
        lambda x, xi: (1.0 + amplitude * np.sin(x[0]))
        * (1.0 + np.sum(np.asarray(xi, float) ** 2, axis=0)) ** (order / 2.0),
        order=order,
        name=f"modulated-bessel({order})",
    )
