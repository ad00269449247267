"""Deterministic banks of band-limited test functions."""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .spectral import SpectralField, TorusGrid

BANKS = {"v1": "test_functions.v1.json"}


def raised_cosine(grid: TorusGrid, center, power: int) -> SpectralField:
    """prod_a ((1 + cos(x_a - c_a)) / 2)^power; bandwidth ``power`` per axis."""
    center = np.asarray(center, dtype=float)[: grid.dim]
    vals = np.ones(grid.shape)
    for a in range(grid.dim):
        vals = vals * ((1.0 + np.cos(grid.points[a] - center[a])) / 2.0) ** power
    return SpectralField(grid, vals)


def trig_monomial(grid: TorusGrid, k, phase: str) -> SpectralField:
    arg = np.tensordot(np.asarray(k, dtype=float), grid.points, axes=1)
    if phase == "cos":
        return SpectralField(grid, np.cos(arg))
    if phase == "sin":
        return SpectralField(grid, np.sin(arg))
    raise ValueError(f"unknown phase {phase!r}")


def _entry_field(entry: dict, grid: TorusGrid) -> SpectralField | None:
    if entry["kind"] == "trig":
        k = entry["k"]
        if any(k[grid.dim :]):
            return None
        return trig_monomial(grid, k[: grid.dim], entry["phase"])
    if entry["kind"] == "raised_cosine":
        return raised_cosine(grid, entry["center"], int(entry["power"]))
    raise ValueError(f"unknown test-function kind {entry['kind']!r}")


def load_bank_definition(bank_id: str = "v1") -> dict:
    if bank_id not in BANKS:
        raise ValueError(f"unknown test-function bank {bank_id!r}")
    text = resources.files("divcurl").joinpath("assets").joinpath(BANKS[bank_id]).read_text()
    return json.loads(text)


def load_bank(grid: TorusGrid, bank_id: str = "v1") -> list[SpectralField]:
    """Instantiate every bank entry usable in ``grid.dim`` dimensions, in file order."""
    definition = load_bank_definition(bank_id)
    out = []
    for entry in definition["functions"]:
        f = _entry_field(entry, grid)
        if f is not None:
            out.append(f)
    return out
