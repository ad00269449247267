"""
Field container format.

A field is stored as a JSON manifest plus a raw little-endian float64 file::

    {"dim": 2, "n_per_axis": 64, "components": 2, "dtype": "f64le",
     "data_file": "w.bin", "vector": true}

The data file holds ``components * n_per_axis**dim`` doubles, component-major,
then row-major over the spatial axes.  ``data_file`` is resolved relative to the
manifest.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .spectral import SpectralField, TorusGrid

DTYPE = "f64le"


def write_field(u: SpectralField, manifest_path: str | Path, data_file: str | None = None) -> Path:
    manifest_path = Path(manifest_path)
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    if data_file is None:
        data_file = manifest_path.with_suffix(".bin").name
    np.ascontiguousarray(u.values, dtype="<f8").tofile(manifest_path.parent / data_file)
    manifest = {
        "dim": u.grid.dim,
        "n_per_axis": u.grid.n,
        "components": u.components,
        "dtype": DTYPE,
        "data_file": data_file,
        "vector": u.is_vector,
    }
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest_path


def read_field(manifest_path: str | Path) -> SpectralField:
    manifest_path = Path(manifest_path)
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("dtype") != DTYPE:
        raise ValueError(f"unsupported dtype {manifest.get('dtype')!r}, expected {DTYPE!r}")
    grid = TorusGrid(dim=int(manifest["dim"]), n=int(manifest["n_per_axis"]))
    comps = int(manifest["components"])
    raw = np.fromfile(manifest_path.parent / manifest["data_file"], dtype="<f8")
    expected = comps * grid.size
    if raw.size != expected:
        raise ValueError(f"data file holds {raw.size} values, manifest implies {expected}")
    vector = manifest.get("vector", comps > 1)
    return SpectralField(grid, raw.reshape((comps,) + grid.shape), vector=vector)
