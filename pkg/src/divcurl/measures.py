"""
Finite vector measures on the torus: atoms plus an optional smooth density.

Measures enter the spectral pipeline through the periodic heat kernel
G_h with coefficients exp(-h |k|^2) / (2pi)^d, which is positive with unit
mass, so mollification never changes total mass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ComponentMismatchError, DomainError, ResolutionError
from .fieldio import read_field, write_field
from .spectral import TWO_PI, SpectralField, TorusGrid, lp_norm


@dataclass(frozen=True)
class Atom:
    location: tuple[float, ...]
    weight: tuple[float, ...]


@dataclass(frozen=True)
class VectorMeasure:
    """Sum of weighted Dirac masses plus an optional vector density field."""

    dim: int
    atoms: tuple[Atom, ...] = ()
    density: SpectralField | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for atom in self.atoms:
            if len(atom.location) != self.dim or len(atom.weight) != self.dim:
                raise ComponentMismatchError(f"atom {atom} does not match dimension {self.dim}")
            loc = np.asarray(atom.location)
            if np.any(loc < 0) or np.any(loc >= TWO_PI) or not np.all(np.isfinite(loc)):
                raise DomainError(f"atom location {atom.location} outside [0, 2pi)^{self.dim}")
            if not np.all(np.isfinite(atom.weight)):
                raise ValueError(f"atom weight {atom.weight} is not finite")
        if self.density is not None:
            if self.density.grid.dim != self.dim or not self.density.is_vector:
                raise ComponentMismatchError("density must be a vector field of matching dimension")

    @property
    def locations(self) -> np.ndarray:
        return np.array([a.location for a in self.atoms], dtype=float).reshape(-1, self.dim)

    @property
    def weights(self) -> np.ndarray:
        return np.array([a.weight for a in self.atoms], dtype=float).reshape(-1, self.dim)

    def total_variation(self) -> float:
        tv = float(np.sum(np.linalg.norm(self.weights, axis=1)))
        if self.density is not None:
            tv += lp_norm(self.density, 1)
        return tv

    def scaled(self, factor: float) -> "VectorMeasure":
        atoms = tuple(Atom(a.location, tuple(factor * np.asarray(a.weight))) for a in self.atoms)
        dens = None if self.density is None else self.density * factor
        return VectorMeasure(self.dim, atoms, dens)

    def to_dict(self, density_manifest: str | None = None) -> dict:
        out: dict = {"atoms": [{"x": list(a.location), "w": list(a.weight)} for a in self.atoms]}
        if density_manifest is not None:
            out["density_manifest"] = density_manifest
        return out

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        manifest = None
        if self.density is not None:
            manifest = path.with_name(path.stem + "_density.json")
            write_field(self.density, manifest)
            manifest = manifest.name
        path.write_text(json.dumps(self.to_dict(manifest), indent=2) + "\n")
        return path

    @classmethod
    def load(cls, path: str | Path, dim: int | None = None) -> "VectorMeasure":
        path = Path(path)
        data = json.loads(path.read_text())
        density = None
        if data.get("density_manifest"):
            density = read_field(path.parent / data["density_manifest"])
        atoms = [(a["x"], a["w"]) for a in data.get("atoms", [])]
        if dim is None:
            dim = len(atoms[0][0]) if atoms else (density.grid.dim if density else None)
        if dim is None:
            raise ValueError("cannot infer the dimension of an empty measure")
        mu = atomic_measure(atoms, dim=dim)
        return VectorMeasure(mu.dim, mu.atoms, density)


def atomic_measure(atoms: Iterable, dim: int | None = None) -> VectorMeasure:
    """
    Build a purely atomic measure from ``(location, weight)`` pairs.

    ``dim`` is required for an empty atom list.
    """
    parsed = []
    for loc, w in atoms:
        loc = tuple(float(c) for c in np.atleast_1d(loc))
        w = tuple(float(c) for c in np.atleast_1d(w))
        parsed.append(Atom(loc, w))
    if dim is None:
        if not parsed:
            raise ValueError("dim is required for an empty measure")
        dim = len(parsed[0].location)
    return VectorMeasure(dim=dim, atoms=tuple(parsed))


def total_variation_estimate(obj: VectorMeasure | SpectralField) -> float:
    """Total variation of a measure, or the discrete L^1 norm of a field."""
    if isinstance(obj, VectorMeasure):
        return obj.total_variation()
    return lp_norm(obj, 1)


def heat_multiplier(grid: TorusGrid, h: float) -> np.ndarray:
    return np.exp(-h * grid.freq_sq)


def resolved(h: float, n: int) -> bool:
    """Heat kernel spans at least six grid cells: h >= (6/N)^2."""
    return h >= (6.0 / n) ** 2


def require_resolved(h: float, n: int) -> None:
    if not resolved(h, n):
        raise ResolutionError(f"h={h} is below the resolved regime (6/N)^2={(6.0 / n) ** 2:.3g} for N={n}")


def _atom_coeffs(grid: TorusGrid, locations: np.ndarray, weights: np.ndarray) -> np.ndarray:
    out = np.zeros((grid.dim,) + grid.shape, dtype=complex)
    for x0, w0 in zip(locations, weights):
        phase = np.exp(-1j * np.tensordot(x0, grid.freqs, axes=1))
        out += w0.reshape((-1,) + (1,) * grid.dim) * phase
    return out / TWO_PI**grid.dim


def mollify(mu: VectorMeasure, h: float, grid: TorusGrid) -> SpectralField:
    """Convolve ``mu`` with the periodic heat kernel of time ``h``."""
    if not h > 0:
        raise ValueError(f"mollification parameter must be positive, got {h}")
    if mu.dim != grid.dim:
        raise ComponentMismatchError(f"measure is {mu.dim}D, grid is {grid.dim}D")
    heat = heat_multiplier(grid, h)
    coeffs = _atom_coeffs(grid, mu.locations, mu.weights) * heat
    if mu.density is not None:
        if mu.density.grid != grid:
            raise ComponentMismatchError("density lives on a different grid")
        coeffs = coeffs + mu.density.coeffs * heat
    return SpectralField.from_coeffs(grid, coeffs, vector=True)


def heat_kernel(grid: TorusGrid, h: float, x0=None) -> SpectralField:
    """Scalar heat kernel G_h(x - x0)."""
    x0 = np.zeros(grid.dim) if x0 is None else np.asarray(x0, dtype=float)
    phase = np.exp(-1j * np.tensordot(x0, grid.freqs, axes=1))
    return SpectralField.from_coeffs(grid, heat_multiplier(grid, h) * phase / TWO_PI**grid.dim)


def point_vortex(x0, h: float, grid: TorusGrid) -> SpectralField:
    """
    Mollified point vortex v_h = perp-grad G with G_hat = exp(-h|k|^2) / |k|^2.

    perp-grad = (-d_2, d_1), so div v_h vanishes identically in coefficient
    space and the scalar curl d_1 v_2 - d_2 v_1 equals Lap G, which is minus
    the mean-free heat kernel centred at x0.
    """
    if grid.dim != 2:
        raise ComponentMismatchError(f"point_vortex is two-dimensional, grid is {grid.dim}D")
    if not h > 0:
        raise ValueError(f"mollification parameter must be positive, got {h}")
    x0 = np.asarray(x0, dtype=float)
    k2 = grid.freq_sq
    inv = np.zeros_like(k2)
    inv[k2 > 0] = 1.0 / k2[k2 > 0]
    phase = np.exp(-1j * np.tensordot(x0, grid.freqs, axes=1))
    g_hat = np.exp(-h * k2) * inv * phase / TWO_PI**2
    k = grid.deriv_freqs
    v_hat = np.stack([-1j * k[1] * g_hat, 1j * k[0] * g_hat])
    return SpectralField.from_coeffs(grid, v_hat, vector=True)
