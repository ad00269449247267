"""
Sequence generators and the convergence harness.

Experiments
-----------
E1  smooth consistency: (v.w)_H against the dealiased classical product.
E2  cutoff independence of <(v.w)_chi, phi> for smooth and atomic v.
E3  oscillating div-free v_n against oscillating gradients w_n.
E4  concentrating point vortex against oscillating gradients, joint (h, n) schedule.
E5  concentration at the oscillation scale with div v_n unbounded; the gap to
    <v.w, phi> does not close.  Demonstrative only.
"""

from __future__ import annotations

import json
import platform
import time
from dataclasses import asdict, dataclass
from importlib import metadata, resources

import jsonschema
import numpy as np

from .errors import ResolutionError
from .hodge import CutoffSpec, make_cutoff
from .measures import atomic_measure, heat_kernel, point_vortex, require_resolved
from .product import (
    PairingRequest,
    chi_independence_report,
    extended_product_field,
    hodge_product_field,
    hodge_product_pair,
)
from .report import Check, ExperimentReport, ExperimentRow
from .spectral import (
    TWO_PI,
    SpectralField,
    TorusGrid,
    bandwidth,
    constant_field,
    curl,
    dealiased_dot,
    dealiased_product,
    dilate,
    divergence,
    gradient,
    lp_norm,
    pair,
    random_field,
    resample,
)
from .testfunctions import load_bank, raised_cosine

EXPERIMENTS = ("E1", "E2", "E3", "E4", "E5")
SCHEMA_FILE = "config_schema.v1.json"

DEFAULTS: dict[str, dict] = {
    "E1": {"dim": 2, "grids": [32, 64, 128], "base_bandwidth": 4, "bump_power": 8, "bump_center": [2.0, 3.0, 1.0]},
    "E2": {"dim": 2, "grid": 64, "cutoff_pairs": [[1.5, 3.0]], "atoms": 3},
    "E3": {
        "dim": 2,
        "grid": 256,
        "n_list": [2, 4, 8, 16, 32],
        "cutoffs": [0.5],
        "bump_power": 64,
        "bump_center": [3.141592653589793, 3.141592653589793, 0.0],
    },
    "E4": {
        "dim": 2,
        "grid": 256,
        "n_list": [4, 8, 16],
        "h_list": [0.05, 0.02, 0.01],
        "cutoffs": [0.5],
        "x0": [3.141592653589793, 3.141592653589793, 0.0],
        "bump_power": 4,
        "bump_center": [3.9, 3.6, 0.0],
    },
    "E5": {
        "dim": 2,
        "grid": 256,
        "n_list": [4, 8, 16],
        "cutoffs": [0.5],
        "x0": [3.141592653589793, 3.141592653589793, 0.0],
        "bump_power": 4,
        "bump_center": [3.4, 3.0, 0.0],
    },
}


def load_schema() -> dict:
    return json.loads(resources.files("divcurl").joinpath("assets").joinpath(SCHEMA_FILE).read_text())


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    dim: int = 2
    grid: int = 64
    grids: tuple[int, ...] = ()
    cutoffs: tuple[float, ...] = (0.5,)
    cutoff_pairs: tuple[tuple[float, float], ...] = ()
    n_list: tuple[int, ...] = ()
    h_list: tuple[float, ...] = ()
    bank: str = "v1"
    seed: int = 0
    bump_power: int = 8
    bump_center: tuple[float, ...] = (2.0, 3.0, 1.0)
    x0: tuple[float, ...] = (np.pi, np.pi, 0.0)
    base_bandwidth: int = 4
    atoms: int = 3

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ValueError(f"n_list must be strictly increasing, got {list(self.n_list)}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        """Validate against the shipped schema and fill in per-experiment defaults."""
        jsonschema.validate(data, load_schema())
        exp = data["experiment"]
        merged = {**DEFAULTS[exp], **data}
        merged.pop("schema_version", None)
        kwargs = {}
        for key, value in merged.items():
            if key not in cls.__dataclass_fields__:
                continue
            if isinstance(value, list):
                value = tuple(tuple(v) if isinstance(v, list) else v for v in value)
            kwargs[key] = value
        return cls(**kwargs)

    @classmethod
    def default(cls, experiment: str, **overrides) -> "ExperimentConfig":
        return cls.from_dict({"experiment": experiment, **overrides})

    def to_dict(self) -> dict:
        """JSON-ready echo that validates against the schema (unused empty lists omitted)."""
        data = json.loads(json.dumps(asdict(self)))
        return {k: v for k, v in data.items() if v != []}

    def make_grid(self, n: int | None = None) -> TorusGrid:
        return TorusGrid(self.dim, self.grid if n is None else n)


# ---------------------------------------------------------------------------
# sequence generators
# ---------------------------------------------------------------------------


def _resolvable(n: int, band: int, grid: TorusGrid) -> None:
    if n * band > grid.n // 3:
        raise ResolutionError(f"oscillation n={n} with bandwidth {band} exceeds N/3={grid.n // 3}")


def gen_gradient_oscillation(potential: SpectralField, c, n: int) -> SpectralField:
    """w_n(x) = (grad potential)(n x) + c: curl free, bounded, weak limit c."""
    grid = potential.grid
    _resolvable(n, bandwidth(potential), grid)
    return dilate(gradient(potential), n) + constant_field(grid, c)


def stream_field(psi: SpectralField) -> SpectralField:
    """(d_2 psi, -d_1 psi) for a scalar stream function (2D)."""
    g = gradient(psi)
    return SpectralField(psi.grid, np.stack([g.values[1], -g.values[0]]), vector=True)


def gen_divfree_oscillation(V: SpectralField, rho: SpectralField, n: int, tol: float = 1e-12) -> SpectralField:
    """v_n(x) = rho(x) V(n x) for divergence-free V; div v_n = V(n x) . grad rho."""
    res = divergence(V).max_norm()
    if res > tol:
        raise ValueError(f"V is not divergence free (residual {res:.3g})")
    grid = V.grid
    band = n * bandwidth(V) + bandwidth(rho)
    if band > grid.n // 3:
        raise ResolutionError(f"rho V(n x) has bandwidth {band} beyond N/3={grid.n // 3}")
    return dealiased_product(rho, dilate(V, n))


def canonical_divfree(grid: TorusGrid, mean=(1.0, 0.0)) -> SpectralField:
    """mean + (d_2 psi, -d_1 psi) with psi = sin x_1 sin x_2."""
    psi = SpectralField.from_function(grid, lambda x, y: np.sin(x) * np.sin(y))
    return stream_field(psi) + constant_field(grid, list(mean))


def curl_norm(w: SpectralField) -> float:
    return curl(w).max_norm() if w.grid.dim > 1 else 0.0


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def _bump(cfg: ExperimentConfig, grid: TorusGrid) -> SpectralField:
    return raised_cosine(grid, cfg.bump_center, cfg.bump_power)


def _chi(cfg: ExperimentConfig) -> CutoffSpec:
    return make_cutoff(cfg.cutoffs[0])


def _run_e1(cfg: ExperimentConfig, rep: ExperimentReport) -> None:
    rng = np.random.default_rng(cfg.seed)
    base = TorusGrid(cfg.dim, 32)
    v0 = random_field(base, rng, bandwidth=cfg.base_bandwidth, vector=True)
    w0 = random_field(base, rng, bandwidth=cfg.base_bandwidth, vector=True)
    chi = _chi(cfg)
    for n in cfg.grids:
        v, w = resample(v0, n), resample(w0, n)
        grid = v.grid
        phi = _bump(cfg, grid)
        classical = dealiased_dot(v, w)
        scale = classical.max_norm()
        hp = hodge_product_field(v, w, chi)
        ext = extended_product_field(v, w, chi)
        field_err = (hp - classical).max_norm() / scale
        ext_err = (ext - classical).max_norm() / scale
        paired = hodge_product_pair(PairingRequest(v, w, phi, chi)).total
        row = ExperimentRow.build("E1", "smooth", "N", n, n, paired, pair(classical, phi))
        rep.rows.append(row)
        rep.checks.append(Check.at_most(f"N={n} sup|(v.w)_H - v.w|/|v.w|", field_err, 1e-10))
        rep.checks.append(Check.at_most(f"N={n} sup|extended - v.w|/|v.w|", ext_err, 1e-10))
        rep.checks.append(Check.at_most(f"N={n} pairing rel error", row.rel_error, 1e-10))


def _run_e2(cfg: ExperimentConfig, rep: ExperimentReport) -> None:
    rng = np.random.default_rng(cfg.seed)
    grid = cfg.make_grid()
    v = random_field(grid, rng, vector=True)
    w = random_field(grid, rng, vector=True)
    locs = rng.uniform(0.0, TWO_PI, size=(cfg.atoms, cfg.dim))
    wts = rng.standard_normal((cfg.atoms, cfg.dim))
    mu = atomic_measure(list(zip(locs, wts)), dim=cfg.dim)
    bank = load_bank(grid, cfg.bank)
    for d1, d2 in cfg.cutoff_pairs:
        c1, c2 = make_cutoff(d1), make_cutoff(d2)
        for kind, vv in (("smooth", v), ("atomic", mu)):
            tag = f"{kind}:delta{d1:g}-vs-delta{d2:g}"
            for i, phi in enumerate(bank):
                p1 = hodge_product_pair(PairingRequest(vv, w, phi, c1)).total
                p2 = hodge_product_pair(PairingRequest(vv, w, phi, c2)).total
                rep.rows.append(ExperimentRow.build("E2", tag, "phi_index", i, grid.n, p1, p2))
            report = chi_independence_report(vv, w, c1, c2, bank)
            rep.checks.append(Check.at_most(f"{tag} max relative pairing difference", report.max_rel_difference, 1e-9))
            rep.checks.append(Check.holds(f"{tag} Z difference band-limited", report.delta_bandwidth_ok))
            scale = max(w.max_norm() * (v.max_norm() if kind == "smooth" else mu.total_variation()), 1.0)
            rep.checks.append(Check.at_most(f"{tag} smooth-difference identity residual", report.identity_residual / scale, 1e-9))


def _run_e3(cfg: ExperimentConfig, rep: ExperimentReport) -> None:
    grid = cfg.make_grid()
    chi = _chi(cfg)
    V = canonical_divfree(grid)
    Phi = SpectralField.from_function(grid, lambda x, y: np.sin(x))
    c = [1.0, 0.0]
    rho = SpectralField.from_function(grid, lambda x, y: 1.0 + 0.5 * np.cos(x))
    phi = _bump(cfg, grid)
    v_mean = V.coeffs[(slice(None),) + (0,) * grid.dim].real
    reference = float(np.dot(v_mean, c)) * pair(rho, phi)

    errors, l1s, div_l1s, w_sups, curls = [], [], [], [], []
    for n in cfg.n_list:
        v_n = gen_divfree_oscillation(V, rho, n)
        w_n = gen_gradient_oscillation(Phi, c, n)
        value = hodge_product_pair(PairingRequest(v_n, w_n, phi, chi)).total
        row = ExperimentRow.build("E3", "divfree-x-gradient", "n", n, grid.n, value, reference)
        rep.rows.append(row)
        errors.append(row.rel_error)
        l1s.append(lp_norm(v_n, 1))
        div_l1s.append(lp_norm(divergence(v_n), 1))
        w_sups.append(w_n.max_norm())
        curls.append(curl_norm(w_n) / w_n.max_norm())

    w_bound = gradient(Phi).max_norm() + float(np.linalg.norm(c))
    rep.checks.append(Check.holds("errors monotone nonincreasing", all(b <= a for a, b in zip(errors, errors[1:]))))
    rep.checks.append(Check.at_most("final relative error", errors[-1], 0.05))
    rep.checks.append(Check.at_most("max curl w_n / |w_n|", max(curls), 1e-12))
    rep.checks.append(Check.at_most("max |w_n|_inf - bound", max(w_sups) - w_bound, 1e-12))
    rep.checks.append(Check.at_most("|v_n|_L1 max/min", max(l1s) / min(l1s), 2.0))
    rep.checks.append(Check.at_most("|div v_n|_L1 max/min", max(div_l1s) / min(div_l1s), 2.0))
    rep.metadata["reference"] = reference


def _run_e4(cfg: ExperimentConfig, rep: ExperimentReport) -> None:
    if len(cfg.h_list) != len(cfg.n_list):
        raise ValueError("E4 needs h_list and n_list of equal length (joint schedule)")
    grid = cfg.make_grid()
    chi = _chi(cfg)
    x0 = cfg.x0[: grid.dim]
    Phi = SpectralField.from_function(grid, lambda x, y: np.sin(x))
    c = [1.0, 0.0]
    phi = _bump(cfg, grid)
    for h in cfg.h_list:
        require_resolved(h, grid.n)
    h_min = min(cfg.h_list)
    reference = hodge_product_pair(PairingRequest(point_vortex(x0, h_min, grid), constant_field(grid, c), phi, chi)).total

    errors, tvs, divs, w_sups, curls = [], [], [], [], []
    schedule = sorted(zip(cfg.h_list, cfg.n_list), key=lambda hn: hn[1])
    for h, n in schedule:
        v = point_vortex(x0, h, grid)
        w_n = gen_gradient_oscillation(Phi, c, n)
        value = hodge_product_pair(PairingRequest(v, w_n, phi, chi)).total
        row = ExperimentRow.build("E4", f"vortex-x-gradient:h={h:g}", "n", n, grid.n, value, reference)
        rep.rows.append(row)
        errors.append(row.rel_error)
        tvs.append(lp_norm(v, 1))
        divs.append(divergence(v).max_norm() / v.max_norm())
        w_sups.append(w_n.max_norm())
        curls.append(curl_norm(w_n) / w_n.max_norm())

    w_bound = gradient(Phi).max_norm() + float(np.linalg.norm(c))
    rep.checks.append(Check.holds("errors strictly decreasing", all(b < a for a, b in zip(errors, errors[1:]))))
    rep.checks.append(Check.at_most("final relative gap", errors[-1], 0.1))
    rep.checks.append(Check.at_most("TV(v_h) max/min", max(tvs) / min(tvs), 2.0))
    rep.checks.append(Check.at_most("max |div v_h| / |v_h|", max(divs), 1e-12))
    rep.checks.append(Check.at_most("max curl w_n / |w_n|", max(curls), 1e-12))
    rep.checks.append(Check.at_most("max |w_n|_inf - bound", max(w_sups) - w_bound, 1e-12))
    rep.metadata["reference"] = reference


def _run_e5(cfg: ExperimentConfig, rep: ExperimentReport) -> None:
    grid = cfg.make_grid()
    chi = _chi(cfg)
    x0 = np.asarray(cfg.x0[: grid.dim])
    Phi = SpectralField.from_function(grid, lambda x, y: np.sin(x))
    c = [1.0, 0.0]
    phi = _bump(cfg, grid)
    # weak limits: v = delta_{x0} e_1, w = c, so <v . w, phi> = phi(x0)
    mu = atomic_measure([(x0, c)], dim=grid.dim)
    reference = hodge_product_pair(PairingRequest(mu, constant_field(grid, c), phi, chi)).total
    gaps = []
    for n in cfg.n_list:
        h = 1.0 / n**2
        require_resolved(h, grid.n)
        g = heat_kernel(grid, h, x0)
        v_n = SpectralField(grid, np.stack([g.values[0], np.zeros(grid.shape)]), vector=True)
        w_n = gen_gradient_oscillation(Phi, c, n)
        value = hodge_product_pair(PairingRequest(v_n, w_n, phi, chi)).total
        rep.rows.append(ExperimentRow.build("E5", "concentrating-x-gradient", "n", n, grid.n, value, reference))
        gaps.append(value - reference)
    rep.metadata["reference"] = reference
    rep.metadata["gaps"] = gaps
    rep.metadata["note"] = "no tolerance: the gap is expected to persist"


_RUNNERS = {"E1": _run_e1, "E2": _run_e2, "E3": _run_e3, "E4": _run_e4, "E5": _run_e5}


def _versions() -> dict:
    try:
        pkg = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        pkg = "unknown"
    return {"divcurl": pkg, "numpy": np.__version__, "python": platform.python_version()}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport(experiment=cfg.experiment)
    start = time.perf_counter()
    _RUNNERS[cfg.experiment](cfg, rep)
    rep.metadata["config"] = cfg.to_dict()
    rep.metadata["versions"] = _versions()
    rep.metadata["wall_time_s"] = time.perf_counter() - start
    return rep
