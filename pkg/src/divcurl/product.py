"""
Distributional product (v . w)_H built on the microlocal Hodge split of w:

    (v . w)_chi = v . Y w - (div v) Z w + div(v Z w).

For smooth v the product is returned as a field.  For atomic v only the
pairing against a test function phi is defined; the last term is always moved
onto grad phi, and the div v term onto grad(Z w phi), so v is never
differentiated.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import GridMismatchError
from .hodge import DEFAULT_CUTOFF, CutoffSpec, hodge_y, hodge_z, z_difference_coeffs
from .measures import VectorMeasure, total_variation_estimate
from .spectral import (
    SpectralField,
    _require_vector,
    dealiased_dot,
    dealiased_product,
    divergence,
    eval_at,
    gradient,
    pair,
)


def _check_grids(*fields: SpectralField) -> None:
    grids = {f.grid for f in fields}
    if len(grids) > 1:
        raise GridMismatchError("all operands must share one grid")


def hodge_product_terms(v: SpectralField, w: SpectralField, chi: CutoffSpec = DEFAULT_CUTOFF):
    """The three fields v.Yw, -(div v) Zw and div(v Zw), all dealiased."""
    _check_grids(v, w)
    _require_vector(v)
    _require_vector(w)
    y = hodge_y(w, chi)
    z = hodge_z(w, chi)
    t1 = dealiased_dot(v, y)
    t2 = -dealiased_product(divergence(v), z)
    t3 = divergence(dealiased_product(v, z))
    return t1, t2, t3


def hodge_product_field(v: SpectralField, w: SpectralField, chi: CutoffSpec = DEFAULT_CUTOFF) -> SpectralField:
    t1, t2, t3 = hodge_product_terms(v, w, chi)
    return t1 + t2 + t3


@dataclass(frozen=True)
class PairingRequest:
    v: SpectralField | VectorMeasure
    w: SpectralField
    phi: SpectralField
    chi: CutoffSpec = DEFAULT_CUTOFF


@dataclass(frozen=True)
class PairingResult:
    t1: float
    t2: float
    t3: float
    chi: CutoffSpec
    residuals: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.t1 + self.t2 + self.t3

    def to_dict(self) -> dict:
        return {
            "terms": {"t1": self.t1, "t2": self.t2, "t3": self.t3},
            "total": self.total,
            "chi": asdict(self.chi),
            "residuals": dict(self.residuals),
        }


def _field_terms(v: SpectralField, y: SpectralField, z: SpectralField, phi: SpectralField) -> tuple[float, float, float]:
    t1 = pair(dealiased_dot(v, y), phi)
    t2 = -pair(dealiased_product(divergence(v), z), phi)
    t3 = -pair(dealiased_product(v, z), gradient(phi))
    return t1, t2, t3


def _atom_terms(mu: VectorMeasure, y: SpectralField, z: SpectralField, phi: SpectralField) -> tuple[float, float, float]:
    if not mu.atoms:
        return 0.0, 0.0, 0.0
    x = mu.locations
    a = mu.weights
    yx = eval_at(y, x).reshape(len(x), -1)
    zx = eval_at(z, x)
    gzx = eval_at(gradient(z), x).reshape(len(x), -1)
    px = eval_at(phi, x)
    gpx = eval_at(gradient(phi), x).reshape(len(x), -1)
    t1 = float(np.sum(np.sum(a * yx, axis=1) * px))
    # <div v, Z phi> = -sum a . grad(Z phi)(x_k), product rule on the interpolants
    t2 = float(np.sum(a * (gzx * px[:, None] + zx[:, None] * gpx)))
    t3 = -float(np.sum(np.sum(a * gpx, axis=1) * zx))
    return t1, t2, t3


def hodge_product_pair(req: PairingRequest) -> PairingResult:
    """<(v . w)_H, phi> for a smooth field v or a vector measure v."""
    w, phi, chi = req.w, req.phi, req.chi
    _require_vector(w)
    _check_grids(w, phi)
    y = hodge_y(w, chi)
    z = hodge_z(w, chi)
    if isinstance(req.v, VectorMeasure):
        mu = req.v
        if mu.dim != w.grid.dim:
            raise GridMismatchError(f"measure is {mu.dim}D, grid is {w.grid.dim}D")
        terms = np.array(_atom_terms(mu, y, z, phi))
        if mu.density is not None:
            _check_grids(mu.density, w)
            terms = terms + np.array(_field_terms(mu.density, y, z, phi))
        t1, t2, t3 = (float(t) for t in terms)
    else:
        _check_grids(req.v, w)
        _require_vector(req.v)
        t1, t2, t3 = _field_terms(req.v, y, z, phi)
    return PairingResult(t1=t1, t2=t2, t3=t3, chi=chi)


def extended_product_field(v: SpectralField, w: SpectralField, chi: CutoffSpec = DEFAULT_CUTOFF) -> SpectralField:
    """
    Two-sided product from the splits of both v and w::

        Yv.Yw + div(Zv Yw) - (div Yw) Zv - (div Yv) Zw + div(Yv Zw) + grad Zv . grad Zw
    """
    _check_grids(v, w)
    yv, zv = hodge_y(v, chi), hodge_z(v, chi)
    yw, zw = hodge_y(w, chi), hodge_z(w, chi)
    return (
        dealiased_dot(yv, yw)
        + divergence(dealiased_product(zv, yw))
        - dealiased_product(divergence(yw), zv)
        - dealiased_product(divergence(yv), zw)
        + divergence(dealiased_product(yv, zw))
        + dealiased_dot(gradient(zv), gradient(zw))
    )


@dataclass(frozen=True)
class ChiIndependenceReport:
    chi1: CutoffSpec
    chi2: CutoffSpec
    differences: tuple[float, ...]
    scales: tuple[float, ...]
    delta_max: float
    delta_bandwidth_ok: bool
    identity_residual: float
    degenerate: bool

    @property
    def max_abs_difference(self) -> float:
        return max(self.differences, default=0.0)

    @property
    def max_rel_difference(self) -> float:
        return max((d / s if s > 0 else d for d, s in zip(self.differences, self.scales)), default=0.0)

    def to_dict(self) -> dict:
        return {
            "chi1": asdict(self.chi1),
            "chi2": asdict(self.chi2),
            "differences": list(self.differences),
            "scales": list(self.scales),
            "max_abs_difference": self.max_abs_difference,
            "max_rel_difference": self.max_rel_difference,
            "delta_max": self.delta_max,
            "delta_bandwidth_ok": self.delta_bandwidth_ok,
            "identity_residual": self.identity_residual,
            "degenerate": self.degenerate,
        }


def pairing_scale(v: SpectralField | VectorMeasure, w: SpectralField, phi: SpectralField) -> float:
    """Upper bound TV(v) |w|_inf |phi|_inf for |<v . w, phi>|, used to make differences relative."""
    return total_variation_estimate(v) * w.max_norm() * phi.max_norm()


def chi_independence_report(
    v: SpectralField | VectorMeasure,
    w: SpectralField,
    chi1: CutoffSpec,
    chi2: CutoffSpec,
    phi_bank: list[SpectralField],
) -> ChiIndependenceReport:
    """
    Compare <(v . w)_chi1, phi> with <(v . w)_chi2, phi> over a bank of test functions.

    Also returns the smooth difference d = Z_chi1 w - Z_chi2 w and the residual
    of -v . grad d - (div v) d + div(v d) = 0 (Y_chi1 w - Y_chi2 w = -grad d):
    the sup norm of the residual field for smooth v, the largest pairing of it
    over the bank for atomic v.
    """
    if len(phi_bank) < 8:
        raise ValueError(f"phi_bank needs at least 8 test functions, got {len(phi_bank)}")
    diffs, scales = [], []
    for phi in phi_bank:
        p1 = hodge_product_pair(PairingRequest(v, w, phi, chi1)).total
        p2 = hodge_product_pair(PairingRequest(v, w, phi, chi2)).total
        diffs.append(abs(p1 - p2))
        scales.append(pairing_scale(v, w, phi))

    d_hat = z_difference_coeffs(w, chi1, chi2)
    band_ok = bool(np.all(d_hat[np.sqrt(w.grid.freq_sq) >= max(chi1.delta, chi2.delta)] == 0))
    d = SpectralField.from_coeffs(w.grid, d_hat)

    if isinstance(v, VectorMeasure):
        residual = 0.0
        for phi in phi_bank:
            t1, t2, t3 = _atom_terms(v, -gradient(d), d, phi)
            residual = max(residual, abs(t1 + t2 + t3))
    else:
        r = (
            -dealiased_dot(v, gradient(d))
            - dealiased_product(divergence(v), d)
            + divergence(dealiased_product(v, d))
        )
        residual = r.max_norm()
    return ChiIndependenceReport(
        chi1=chi1,
        chi2=chi2,
        differences=tuple(diffs),
        scales=tuple(scales),
        delta_max=d.max_norm(),
        delta_bandwidth_ok=band_ok,
        identity_residual=residual,
        degenerate=chi1 == chi2,
    )
