"""
Periodic pseudospectral substrate on the torus T^d = [0, 2pi)^d.

Fourier coefficients are normalized so that

    u(x) = sum_k  u_hat(k) exp(i k.x),     k in [-N/2, N/2)^d,

i.e. ``coeffs = fftn(values, norm="forward")``.  With this convention the
trigonometric interpolant, the multiplier action and the direct quantization
sum all share one normalization.

Odd symbols (first derivatives) are evaluated with the unmatched -N/2 mode
set to zero so that real fields stay real.  Even symbols such as |k|^2 use
the full lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ComponentMismatchError,
    GridMismatchError,
    GridSizeError,
    ResolutionError,
    SingularSymbolError,
    SizeLimitError,
)

TWO_PI = 2.0 * np.pi

MAX_N = {1: 4096, 2: 1024, 3: 128}
QUANTIZE_MAX_POINTS = 2**20
_QUANTIZE_CHUNK = 2**22


# ---------------------------------------------------------------------------
# grid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusGrid:
    """
    Uniform grid on [0, 2pi)^dim with ``n`` points per axis.

    Parameters
    ----------
    dim : int
        Spatial dimension, 1, 2 or 3.
    n : int
        Points per axis; even, at least 8, at most 4096/1024/128 for
        dim = 1/2/3.
    """

    dim: int
    n: int

    def __post_init__(self) -> None:
        if self.dim not in MAX_N:
            raise GridSizeError(f"dim must be 1, 2 or 3, got {self.dim}")
        if int(self.n) != self.n or self.n % 2 != 0:
            raise GridSizeError(f"n must be an even integer, got {self.n}")
        if not 8 <= self.n <= MAX_N[self.dim]:
            raise GridSizeError(
                f"n must lie in [8, {MAX_N[self.dim]}] for dim={self.dim}, got {self.n}"
            )

    @property
    def n_per_axis(self) -> int:
        return self.n

    @property
    def spacing(self) -> float:
        return TWO_PI / self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        return self.n**self.dim

    @property
    def cell_volume(self) -> float:
        """Quadrature weight (2pi/N)^d."""
        return self.spacing**self.dim

    @property
    def spatial_axes(self) -> tuple[int, ...]:
        """Axes of a ``(components, *shape)`` array that carry space."""
        return tuple(range(1, self.dim + 1))

    @cached_property
    def axis_points(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    @cached_property
    def axis_freqs(self) -> np.ndarray:
        """Integer frequencies in FFT order: 0, 1, ..., N/2-1, -N/2, ..., -1."""
        return np.fft.fftfreq(self.n, 1.0 / self.n)

    @cached_property
    def points(self) -> np.ndarray:
        """Grid coordinates, shape ``(dim, *shape)``."""
        return np.stack(np.meshgrid(*([self.axis_points] * self.dim), indexing="ij"))

    @cached_property
    def freqs(self) -> np.ndarray:
        """Lattice frequencies, shape ``(dim, *shape)``."""
        return np.stack(np.meshgrid(*([self.axis_freqs] * self.dim), indexing="ij"))

    @cached_property
    def deriv_freqs(self) -> np.ndarray:
        """Frequencies for odd symbols: the -N/2 entry of each axis is zeroed."""
        k = self.freqs.copy()
        k[k == -self.n // 2] = 0.0
        return k

    @cached_property
    def freq_sq(self) -> np.ndarray:
        """|k|^2 on the full lattice."""
        return np.sum(self.freqs**2, axis=0)


def make_grid(dim: int, n: int) -> TorusGrid:
    """Build a :class:`TorusGrid`, raising :class:`GridSizeError` on bad sizes."""
    return TorusGrid(dim=dim, n=n)


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


class SpectralField:
    """
    Immutable scalar or vector field sampled on a :class:`TorusGrid`.

    Physical samples are canonical; Fourier coefficients are computed on first
    access and cached.  Arrays are stored with shape ``(components, *grid.shape)``
    and flagged read-only.

    Parameters
    ----------
    grid : TorusGrid
    values : array_like
        Shape ``grid.shape`` (scalar) or ``(components, *grid.shape)``.
    vector : bool, optional
        Mark the field as a vector field.  Defaults to ``components > 1``.
        Vector fields must have exactly ``grid.dim`` components.
    """

    def __init__(self, grid: TorusGrid, values, vector: bool | None = None):
        arr = np.array(values, dtype=float)
        if arr.shape == grid.shape:
            arr = arr[None]
        if arr.ndim != grid.dim + 1 or arr.shape[1:] != grid.shape:
            raise ComponentMismatchError(
                f"values of shape {arr.shape} do not fit grid shape {grid.shape}"
            )
        if vector is None:
            vector = arr.shape[0] > 1
        expected = grid.dim if vector else 1
        if arr.shape[0] != expected:
            kind = "vector" if vector else "scalar"
            raise ComponentMismatchError(
                f"{kind} field on a {grid.dim}D grid needs {expected} components, got {arr.shape[0]}"
            )
        arr.setflags(write=False)
        self._grid = grid
        self._values = arr
        self._vector = bool(vector)

    @classmethod
    def from_coeffs(cls, grid: TorusGrid, coeffs, vector: bool | None = None) -> "SpectralField":
        c = np.asarray(coeffs, dtype=complex)
        if c.shape == grid.shape:
            c = c[None]
        values = np.fft.ifftn(c, axes=grid.spatial_axes, norm="forward").real
        return cls(grid, values, vector=vector)

    @classmethod
    def from_function(cls, grid: TorusGrid, func: Callable, vector: bool | None = None) -> "SpectralField":
        """Sample ``func(*coords)``; a sequence return value gives a vector field."""
        out = func(*grid.points)
        if isinstance(out, (list, tuple)):
            out = np.stack([np.broadcast_to(np.asarray(c, float), grid.shape) for c in out])
            if vector is None:
                vector = True
        else:
            out = np.broadcast_to(np.asarray(out, float), grid.shape)
        return cls(grid, out, vector=vector)

    @classmethod
    def zeros(cls, grid: TorusGrid, vector: bool = False) -> "SpectralField":
        comps = grid.dim if vector else 1
        return cls(grid, np.zeros((comps,) + grid.shape), vector=vector)

    @property
    def grid(self) -> TorusGrid:
        return self._grid

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def is_vector(self) -> bool:
        return self._vector

    @property
    def components(self) -> int:
        return self._values.shape[0]

    @cached_property
    def coeffs(self) -> np.ndarray:
        c = np.fft.fftn(self._values, axes=self._grid.spatial_axes, norm="forward")
        c.setflags(write=False)
        return c

    def component(self, i: int) -> "SpectralField":
        return SpectralField(self._grid, self._values[i], vector=False)

    def max_norm(self) -> float:
        return float(np.max(np.abs(self._values))) if self._values.size else 0.0

    def _check_same(self, other: "SpectralField") -> None:
        if other.grid != self._grid:
            raise GridMismatchError("fields live on different grids")
        if other.components != self.components:
            raise ComponentMismatchError("fields have different component counts")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_same(other)
        return SpectralField(self._grid, self._values + other.values, vector=self._vector)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_same(other)
        return SpectralField(self._grid, self._values - other.values, vector=self._vector)

    def __neg__(self) -> "SpectralField":
        return SpectralField(self._grid, -self._values, vector=self._vector)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self._grid, self._values * float(scalar), vector=self._vector)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        kind = "vector" if self._vector else "scalar"
        return f"SpectralField({kind}, dim={self._grid.dim}, n={self._grid.n})"


@dataclass(frozen=True)
class TensorField:
    """Matrix-valued field, values of shape ``(dim, dim, *grid.shape)``."""

    grid: TorusGrid
    values: np.ndarray

    def entry(self, i: int, j: int) -> SpectralField:
        return SpectralField(self.grid, self.values[i, j])

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


def random_field(
    grid: TorusGrid,
    rng: np.random.Generator,
    bandwidth: int | None = None,
    vector: bool = False,
) -> SpectralField:
    """Gaussian random field keeping only modes with max_a |k_a| <= bandwidth (default N/3)."""
    if bandwidth is None:
        bandwidth = grid.n // 3
    if not 0 <= bandwidth < grid.n // 2:
        raise ResolutionError(f"bandwidth {bandwidth} not below N/2 = {grid.n // 2}")
    comps = grid.dim if vector else 1
    raw = rng.standard_normal((comps,) + grid.shape)
    c = np.fft.fftn(raw, axes=grid.spatial_axes, norm="forward")
    mask = np.max(np.abs(grid.freqs), axis=0) <= bandwidth
    return SpectralField.from_coeffs(grid, c * mask, vector=vector)


def bandwidth(u: SpectralField, rtol: float = 1e-12) -> int:
    """Largest max_a |k_a| carrying a coefficient above ``rtol`` times the peak."""
    mag = np.max(np.abs(u.coeffs), axis=0)
    peak = mag.max()
    if peak == 0.0:
        return 0
    kmax = np.max(np.abs(u.grid.freqs), axis=0)
    return int(kmax[mag > rtol * peak].max())


def dilate(u: SpectralField, factor: int) -> SpectralField:
    """Return x -> u(factor * x) by moving each coefficient from k to factor*k."""
    factor = int(factor)
    if factor < 1:
        raise ResolutionError(f"dilation factor must be >= 1, got {factor}")
    if factor == 1:
        return u
    grid = u.grid
    if factor * bandwidth(u) >= grid.n // 2:
        raise ResolutionError(
            f"dilation by {factor} of a field with bandwidth {bandwidth(u)} aliases on N={grid.n}"
        )
    k = grid.axis_freqs.astype(int)
    src = np.flatnonzero(factor * np.abs(k) < grid.n // 2)
    dst = (factor * k[src]) % grid.n
    out = np.zeros_like(u.coeffs)
    out[(slice(None),) + np.ix_(*([dst] * grid.dim))] = u.coeffs[(slice(None),) + np.ix_(*([src] * grid.dim))]
    return SpectralField.from_coeffs(grid, out, vector=u.is_vector)


# ---------------------------------------------------------------------------
# symbols, multipliers, quantization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Symbol:
    """
    Symbol a(x, xi) of order ``order``.

    ``func`` takes ``xi`` (shape ``(d, ...)``) when ``multiplier`` is true and
    ``(x, xi)`` otherwise, and returns an array broadcastable to the trailing
    shape.
    """

    func: Callable
    order: float
    multiplier: bool = True
    name: str = ""

    @classmethod
    def from_multiplier(cls, func: Callable, order: float, name: str = "") -> "Symbol":
        return cls(func=func, order=order, multiplier=True, name=name)

    @classmethod
    def from_xdependent(cls, func: Callable, order: float, name: str = "") -> "Symbol":
        return cls(func=func, order=order, multiplier=False, name=name)

    def __call__(self, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        if self.multiplier:
            val = self.func(xi)
            shape = np.broadcast_shapes(np.shape(x)[1:], np.shape(xi)[1:])
        else:
            val = self.func(x, xi)
            shape = np.broadcast_shapes(np.shape(x)[1:], np.shape(xi)[1:])
        return np.broadcast_to(np.asarray(val, dtype=complex), shape)

    def on_lattice(self, grid: TorusGrid) -> np.ndarray:
        """Multiplier values on the lattice, shape ``grid.shape``."""
        if not self.multiplier:
            raise ValueError("on_lattice needs an x-independent symbol")
        return np.broadcast_to(np.asarray(self.func(grid.freqs), dtype=complex), grid.shape)

    def seminorm(self, grid: TorusGrid, beta: int | Sequence[int] = 0, x_samples: int = 8) -> float:
        """
        Discrete analogue of sup |d_xi^beta a(x, xi)| (1 + |xi|)^(|beta| - order).

        Derivatives in xi are forward differences with unit lattice step; x is
        sampled on a sub-grid with ``x_samples`` points per axis.
        """
        if np.isscalar(beta):
            beta = (int(beta),) + (0,) * (grid.dim - 1)
        beta = tuple(int(b) for b in beta)
        ks = np.arange(-grid.n // 2, grid.n // 2, dtype=float)
        xi = np.stack(np.meshgrid(*([ks] * grid.dim), indexing="ij"))
        if self.multiplier:
            vals = self(np.zeros((grid.dim, 1)), xi)[None]
        else:
            step = max(1, grid.n // x_samples)
            xs = grid.axis_points[::step]
            xg = np.stack(np.meshgrid(*([xs] * grid.dim), indexing="ij")).reshape(grid.dim, -1)
            vals = self(xg.reshape((grid.dim, -1) + (1,) * grid.dim), xi[:, None])
        for axis, b in enumerate(beta):
            if b:
                vals = np.diff(vals, n=b, axis=axis + 1)
        corner = tuple(slice(0, vals.shape[a + 1]) for a in range(grid.dim))
        absxi = np.sqrt(np.sum(xi[(slice(None),) + corner] ** 2, axis=0))
        weight = (1.0 + absxi) ** (sum(beta) - self.order)
        return float(np.max(np.abs(vals) * weight))


def constant_symbol(value: complex = 1.0) -> Symbol:
    return Symbol.from_multiplier(lambda xi: value, order=0.0, name=f"const({value})")


def _checked_lattice_values(m: Symbol, grid: TorusGrid) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = m.on_lattice(grid)
    if not np.all(np.isfinite(vals)):
        bad = np.argwhere(~np.isfinite(vals))[0]
        k = grid.freqs[(slice(None),) + tuple(bad)]
        raise SingularSymbolError(f"symbol {m.name or ''} is not finite at k={k.tolist()}")
    return vals


def apply_multiplier(m: Symbol, u: SpectralField) -> SpectralField:
    """Return the field with coefficients m(k) * u_hat(k); real part is kept."""
    vals = _checked_lattice_values(m, u.grid)
    return SpectralField.from_coeffs(u.grid, u.coeffs * vals, vector=u.is_vector)


def quantize(a: Symbol, u: SpectralField) -> SpectralField:
    """
    Direct-summation quantization Op(a)u(x) = sum_k exp(i x.k) a(x, k) u_hat(k).

    O(points x modes); capped at 2^20 grid points.  This is the slow reference
    path, so no separable or FFT shortcuts are taken.
    """
    grid = u.grid
    if grid.size > QUANTIZE_MAX_POINTS:
        raise SizeLimitError(f"quantize is capped at {QUANTIZE_MAX_POINTS} points, grid has {grid.size}")
    d, P = grid.dim, grid.size
    X = grid.points.reshape(d, P)
    XI = grid.freqs.reshape(d, P)
    c = u.coeffs.reshape(u.components, P)
    out = np.empty((u.components, P))
    chunk = max(1, _QUANTIZE_CHUNK // P)
    for s in range(0, P, chunk):
        xs = X[:, s : s + chunk, None]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            A = a(xs, XI[:, None, :])
        if not np.all(np.isfinite(A)):
            raise SingularSymbolError(f"symbol {a.name or ''} is not finite on the lattice")
        phase = np.exp(1j * np.sum(xs * XI[:, None, :], axis=0))
        out[:, s : s + chunk] = ((phase * A) @ c.T).T.real
    return SpectralField(grid, out.reshape((u.components,) + grid.shape), vector=u.is_vector)


# ---------------------------------------------------------------------------
# differential operators
# ---------------------------------------------------------------------------


def _require_vector(w: SpectralField) -> None:
    if not w.is_vector or w.components != w.grid.dim:
        raise ComponentMismatchError(
            f"expected a vector field with {w.grid.dim} components, got {w.components}"
        )


def _require_scalar(u: SpectralField) -> None:
    if u.is_vector or u.components != 1:
        raise ComponentMismatchError(f"expected a scalar field, got {u.components} components")


def gradient(u: SpectralField) -> SpectralField:
    _require_scalar(u)
    g = u.grid
    return SpectralField.from_coeffs(g, 1j * g.deriv_freqs * u.coeffs, vector=True)


def divergence(w: SpectralField) -> SpectralField:
    _require_vector(w)
    g = w.grid
    return SpectralField.from_coeffs(g, np.sum(1j * g.deriv_freqs * w.coeffs, axis=0), vector=False)


def _curl_coeffs(w: SpectralField) -> np.ndarray:
    k = w.grid.deriv_freqs
    dw = 1j * k[:, None] * w.coeffs[None, :]  # dw[i, j] = d_i w_j
    return dw - np.swapaxes(dw, 0, 1)


def curl(w: SpectralField) -> TensorField:
    """(curl w)_ij = d_i w_j - d_j w_i."""
    _require_vector(w)
    g = w.grid
    vals = np.fft.ifftn(_curl_coeffs(w), axes=tuple(range(2, g.dim + 2)), norm="forward").real
    return TensorField(g, vals)


def curl_curl(w: SpectralField) -> SpectralField:
    """curl_curl(w)_j = sum_i d_i (curl w)_ji, which equals d_j div w - Lap w_j."""
    _require_vector(w)
    g = w.grid
    C = _curl_coeffs(w)
    cc = np.sum(1j * g.deriv_freqs[None, :] * C, axis=1)
    return SpectralField.from_coeffs(g, cc, vector=True)


def laplacian(u: SpectralField) -> SpectralField:
    g = u.grid
    return SpectralField.from_coeffs(g, -g.freq_sq * u.coeffs, vector=u.is_vector)


# ---------------------------------------------------------------------------
# dealiased products
# ---------------------------------------------------------------------------


def _axis_index(ndim: int, axis: int, sl) -> tuple:
    idx = [slice(None)] * ndim
    idx[axis] = sl
    return tuple(idx)


def _pad_axis(c: np.ndarray, axis: int, m: int) -> np.ndarray:
    n = c.shape[axis]
    h = n // 2
    shape = list(c.shape)
    shape[axis] = m
    out = np.zeros(shape, dtype=complex)
    ix = lambda sl: _axis_index(c.ndim, axis, sl)  # noqa: E731
    out[ix(slice(0, h))] = c[ix(slice(0, h))]
    out[ix(slice(m - h + 1, m))] = c[ix(slice(h + 1, n))]
    # the -N/2 coefficient stands for cos(N x / 2): split it over +-N/2
    half = 0.5 * c[ix(slice(h, h + 1))]
    out[ix(slice(h, h + 1))] += half
    out[ix(slice(m - h, m - h + 1))] += half
    return out


def _truncate_axis(c: np.ndarray, axis: int, n: int) -> np.ndarray:
    m = c.shape[axis]
    h = n // 2
    shape = list(c.shape)
    shape[axis] = n
    out = np.zeros(shape, dtype=complex)
    ix = lambda sl: _axis_index(c.ndim, axis, sl)  # noqa: E731
    out[ix(slice(0, h))] = c[ix(slice(0, h))]
    out[ix(slice(h + 1, n))] = c[ix(slice(m - h + 1, m))]
    return out


def padded_size(n: int) -> int:
    return -(-3 * n // 2)


def _to_padded_values(u: SpectralField, m: int) -> np.ndarray:
    c = u.coeffs
    for axis in u.grid.spatial_axes:
        c = _pad_axis(c, axis, m)
    return np.fft.ifftn(c, axes=u.grid.spatial_axes, norm="forward").real


def dealiased_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """
    Pointwise product computed on a 3/2-padded grid and truncated back.

    Component counts broadcast: scalar * vector gives a vector, equal counts
    multiply componentwise.  The truncation keeps |k_a| < N/2, so the result is
    the exact projection of the product onto those modes whenever neither
    factor has content at -N/2.
    """
    if f.grid != g.grid:
        raise GridMismatchError("dealiased_product needs operands on one grid")
    if f.components != g.components and 1 not in (f.components, g.components):
        raise ComponentMismatchError(
            f"cannot multiply fields with {f.components} and {g.components} components"
        )
    grid = f.grid
    m = padded_size(grid.n)
    prod = _to_padded_values(f, m) * _to_padded_values(g, m)
    c = np.fft.fftn(prod, axes=grid.spatial_axes, norm="forward")
    for axis in grid.spatial_axes:
        c = _truncate_axis(c, axis, grid.n)
    vector = f.is_vector or g.is_vector
    return SpectralField.from_coeffs(grid, c, vector=vector)


def dealiased_dot(v: SpectralField, w: SpectralField) -> SpectralField:
    """Dealiased v . w for two vector fields (or two scalars)."""
    if v.components != w.components:
        raise ComponentMismatchError("dot product needs equal component counts")
    p = dealiased_product(v, w)
    return SpectralField(v.grid, p.values.sum(axis=0), vector=False)


# ---------------------------------------------------------------------------
# evaluation, pairing, norms
# ---------------------------------------------------------------------------


_EVAL_SUBSCRIPTS = {1: "ca,pa->pc", 2: "cab,pa,pb->pc", 3: "cabz,pa,pb,pz->pc"}


def eval_at(u: SpectralField, x) -> np.ndarray | float:
    """
    Evaluate the trigonometric interpolant of ``u`` at off-grid points.

    ``x`` is one point (shape ``(d,)``) or many (shape ``(P, d)``).  Returns a
    float for a scalar field at one point, otherwise an array of shape
    ``(components,)``, ``(P,)`` or ``(P, components)``.
    """
    grid = u.grid
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != grid.dim:
        raise ComponentMismatchError(f"points must have {grid.dim} coordinates")
    k = grid.axis_freqs
    factors = [np.exp(1j * pts[:, a, None] * k[None, :]) for a in range(grid.dim)]
    out = np.einsum(_EVAL_SUBSCRIPTS[grid.dim], u.coeffs, *factors, optimize=True).real
    if not u.is_vector:
        out = out[:, 0]
        return float(out[0]) if single else out
    return out[0] if single else out


def pair(u: SpectralField, phi: SpectralField) -> float:
    """Quadrature pairing sum_j u(x_j) . phi(x_j) (2pi/N)^d."""
    if u.grid != phi.grid:
        raise GridMismatchError("pairing needs fields on one grid")
    if u.components != phi.components:
        raise ComponentMismatchError("pairing needs equal component counts")
    return float(np.sum(u.values * phi.values) * u.grid.cell_volume)


def lp_norm(u: SpectralField, p: float) -> float:
    """Discrete L^p norm of the pointwise Euclidean magnitude."""
    mag = np.sqrt(np.sum(u.values**2, axis=0)) if u.components > 1 else np.abs(u.values[0])
    if np.isinf(p):
        return float(mag.max())
    if p < 1:
        raise ValueError(f"p must be in [1, inf], got {p}")
    return float((np.sum(mag**p) * u.grid.cell_volume) ** (1.0 / p))


def bessel_symbol(s: float) -> Symbol:
    return Symbol.from_multiplier(
        lambda xi: (1.0 + np.sum(xi**2, axis=0)) ** (s / 2.0), order=s, name=f"bessel({s})"
    )


def sobolev_norm(u: SpectralField, s: float, p: float) -> float:
    """L^p norm of (1 - Lap)^(s/2) u."""
    if s == 0:
        return lp_norm(u, p)
    return lp_norm(apply_multiplier(bessel_symbol(s), u), p)


def resample(u: SpectralField, n: int) -> SpectralField:
    """Spectral interpolation of ``u`` onto the grid with ``n`` points per axis.

    Refinement zero-pads the coefficients (splitting the -N/2 mode);
    coarsening truncates to |k_a| < n/2.
    """
    src = u.grid
    dst = TorusGrid(src.dim, n)
    if n == src.n:
        return u
    c = u.coeffs
    for axis in src.spatial_axes:
        c = _pad_axis(c, axis, n) if n > src.n else _truncate_axis(c, axis, n)
    return SpectralField.from_coeffs(dst, c, vector=u.is_vector)


def constant_field(grid: TorusGrid, value) -> SpectralField:
    """Constant field: a scalar value gives a scalar field, a length-dim sequence a vector field."""
    vector = np.ndim(value) == 1
    value = np.atleast_1d(np.asarray(value, dtype=float))
    vals = np.broadcast_to(value.reshape((-1,) + (1,) * grid.dim), (value.size,) + grid.shape)
    return SpectralField(grid, vals, vector=vector)
