"""
Microlocal Hodge splitting w = Y w + grad Z w with a low-frequency cutoff chi.

    Z w = -chi(D) (-Lap)^{-1} div w,      Y w = w - grad Z w.

Unlike the classical Helmholtz split, Y w is not divergence free; only the
frequencies where chi < 1 keep their divergence.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DivCurlError
from .spectral import (
    SpectralField,
    Symbol,
    _require_vector,
    curl_curl,
    divergence,
    gradient,
)


def _bump_tail(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def transition(t, inner: float = 0.5) -> np.ndarray:
    """Smooth step: 0 for t <= inner, 1 for t >= 1, C-infinity in between."""
    t = np.asarray(t, dtype=float)
    a = _bump_tail(t - inner)
    b = _bump_tail(1.0 - t)
    den = a + b
    # den > 0 everywhere since inner < 1
    return a / den


@dataclass(frozen=True)
class CutoffSpec:
    """
    Radial cutoff chi(xi) = transition(|xi| / delta).

    chi vanishes for |xi| <= inner * delta and equals 1 for |xi| >= delta.
    """

    delta: float
    inner: float = 0.5
    profile: str = "exp"

    def __post_init__(self) -> None:
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise DivCurlError(f"cutoff radius must be positive, got {self.delta}")
        if not 0 < self.inner < 1:
            raise DivCurlError(f"inner fraction must lie in (0, 1), got {self.inner}")
        if self.profile != "exp":
            raise DivCurlError(f"unknown cutoff profile {self.profile!r}")

    def radial(self, r) -> np.ndarray:
        return transition(np.asarray(r, dtype=float) / self.delta, self.inner)

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        return self.radial(np.sqrt(np.sum(np.asarray(xi, dtype=float) ** 2, axis=0)))

    def symbol(self) -> Symbol:
        return Symbol.from_multiplier(self, order=0.0, name=f"chi(delta={self.delta})")

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "CutoffSpec":
        d = json.loads(text)
        return cls(delta=float(d["delta"]), inner=float(d.get("inner", 0.5)), profile=d.get("profile", "exp"))


def make_cutoff(delta: float, inner: float = 0.5) -> CutoffSpec:
    return CutoffSpec(delta=delta, inner=inner)


DEFAULT_CUTOFF = CutoffSpec(0.5)


def _inv_lap_cut(chi: CutoffSpec, xi: np.ndarray) -> np.ndarray:
    """chi(xi) / |xi|^2, zero where chi vanishes."""
    k2 = np.sum(np.asarray(xi, dtype=float) ** 2, axis=0)
    c = chi(xi)
    out = np.zeros_like(c)
    nz = c != 0
    out[nz] = c[nz] / k2[nz]
    return out


def z_symbol(chi: CutoffSpec) -> Symbol:
    """Order -2 multiplier -chi(xi)/|xi|^2 taking div w to Z w."""
    return Symbol.from_multiplier(lambda xi: -_inv_lap_cut(chi, xi), order=-2.0, name="Z-from-div")


def _div_hat(w: SpectralField) -> np.ndarray:
    return np.sum(1j * w.grid.deriv_freqs * w.coeffs, axis=0)


def hodge_z(w: SpectralField, chi: CutoffSpec = DEFAULT_CUTOFF) -> SpectralField:
    """Scalar part Z w = -chi(D)(-Lap)^{-1} div w; the zero mode is 0."""
    _require_vector(w)
    return SpectralField.from_coeffs(w.grid, -_inv_lap_cut(chi, w.grid.freqs) * _div_hat(w))


def z_difference_coeffs(w: SpectralField, chi1: CutoffSpec, chi2: CutoffSpec) -> np.ndarray:
    """Coefficients of Z_chi1 w - Z_chi2 w, formed before any inverse FFT.

    (chi1 - chi2) vanishes identically for |k| >= max(delta1, delta2), so
    these coefficients are exactly zero there.
    """
    _require_vector(w)
    k = w.grid.freqs
    return -(_inv_lap_cut(chi1, k) - _inv_lap_cut(chi2, k)) * _div_hat(w)


def hodge_y(w: SpectralField, chi: CutoffSpec = DEFAULT_CUTOFF, method: str = "definition") -> SpectralField:
    """
    Remainder Y w.

    ``method="definition"`` computes w - grad Z w.  ``method="curlcurl"``
    computes (1 - chi(D)) w + chi(D)(-Lap)^{-1} curl curl w, which shares no
    code with the first route beyond the FFT.
    """
    _require_vector(w)
    if method == "definition":
        return w - gradient(hodge_z(w, chi))
    if method == "curlcurl":
        g = w.grid
        c = chi(g.freqs)
        cc = curl_curl(w)
        coeffs = (1.0 - c) * w.coeffs + _inv_lap_cut(chi, g.freqs) * cc.coeffs
        return SpectralField.from_coeffs(g, coeffs, vector=True)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class HodgeDecomposition:
    y: SpectralField
    z: SpectralField
    chi: CutoffSpec
    residual: float
    relative_residual: float

    def report(self) -> dict:
        return {
            "chi": asdict(self.chi),
            "residual": self.residual,
            "relative_residual": self.relative_residual,
            "y_max": self.y.max_norm(),
            "z_max": self.z.max_norm(),
        }


def decompose(w: SpectralField, chi: CutoffSpec = DEFAULT_CUTOFF) -> HodgeDecomposition:
    """Split w into (Y w, Z w) and record the sup-norm reconstruction residual."""
    z = hodge_z(w, chi)
    y = w - gradient(z)
    res = (w - y - gradient(z)).max_norm()
    scale = w.max_norm()
    rel = res / scale if scale > 0 else res
    return HodgeDecomposition(y=y, z=z, chi=chi, residual=res, relative_residual=rel)


def divergence_of_y(w: SpectralField, chi: CutoffSpec = DEFAULT_CUTOFF) -> SpectralField:
    """(1 - chi(D)) div w, the closed form of div Y w."""
    g = w.grid
    d = divergence(w)
    return SpectralField.from_coeffs(g, (1.0 - chi(g.freqs)) * d.coeffs)
