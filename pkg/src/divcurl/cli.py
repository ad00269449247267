"""
Command-line front end.

Every subcommand writes its outputs under ``--out`` and exits with 0 when all
of its checks pass, 2 when a tolerance check fails and 1 on a usage error
(bad flags, invalid config, unreadable inputs, unresolvable parameters).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from .errors import DivCurlError
from .experiments import EXPERIMENTS, ExperimentConfig, load_schema, run_experiment
from .fieldio import read_field, write_field
from .hodge import decompose, hodge_y, make_cutoff
from .littlewood_paley import (
    bessel_potential,
    kernel_l1_profile,
    measure_action_bound,
    modulated_bessel_potential,
)
from .measures import VectorMeasure, atomic_measure
from .product import PairingRequest, chi_independence_report, hodge_product_field, hodge_product_pair
from .report import Check, emit, write_table
from .spectral import TWO_PI, TorusGrid, constant_symbol, pair, random_field
from .testfunctions import load_bank

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2


class UsageError(Exception):
    """Raised for anything the user can fix by changing the invocation."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    try:
        jsonschema.validate(data, load_schema())
    except jsonschema.ValidationError as exc:
        raise UsageError(f"invalid config {path}: {exc.message}") from exc
    return data


def _settings(args: argparse.Namespace) -> dict:
    """Config file values overridden by the global flags."""
    cfg = _load_config(getattr(args, "config", None))
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    if getattr(args, "grid", None) is not None:
        cfg["grid"] = args.grid
    return cfg


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(getattr(args, "out", None) or "out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _pick(flag, cfg: dict, key: str, default):
    return flag if flag is not None else cfg.get(key, default)


def _print_checks(checks: list[Check]) -> int:
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        bound = "" if c.threshold is None else f" (<= {c.threshold:g})"
        print(f"[{status}] {c.name}: {c.value:.3e}{bound}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def _write_json(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_decompose(args) -> int:
    cfg = _settings(args)
    out = _out_dir(args)
    source = _pick(args.input, cfg, "input", None)
    if source is not None:
        w = read_field(source)
    else:
        grid = TorusGrid(cfg.get("dim", 2), cfg.get("grid", 64))
        w = random_field(grid, np.random.default_rng(cfg.get("seed", 0)), vector=True)
    deltas = args.delta or cfg.get("cutoffs", [0.5])
    checks, reports = [], []
    for delta in deltas:
        chi = make_cutoff(delta)
        dec = decompose(w, chi)
        scale = max(w.max_norm(), np.finfo(float).tiny)
        agreement = (dec.y - hodge_y(w, chi, method="curlcurl")).max_norm() / scale
        tag = f"delta{delta:g}"
        write_field(dec.y, out / f"y_{tag}.json")
        write_field(dec.z, out / f"z_{tag}.json")
        reports.append({**dec.report(), "two_formula_agreement": agreement})
        checks.append(Check.at_most(f"{tag} reconstruction |w - Y - grad Z| / |w|", dec.relative_residual, 1e-12))
        checks.append(Check.at_most(f"{tag} |Y_def - Y_curlcurl| / |w|", agreement, 1e-12))
    _write_json(out / "decompose_report.json", {"grid_n": w.grid.n, "dim": w.grid.dim, "cutoffs": reports})
    return _print_checks(checks)


def cmd_product(args) -> int:
    cfg = _settings(args)
    out = _out_dir(args)
    w_path = _pick(args.w, cfg, "w", None)
    rng = np.random.default_rng(cfg.get("seed", 0))
    if w_path is not None:
        w = read_field(w_path)
        grid = w.grid
    else:
        grid = TorusGrid(cfg.get("dim", 2), cfg.get("grid", 64))
        w = random_field(grid, rng, vector=True)
    measure_path = _pick(args.measure, cfg, "measure", None)
    v_path = _pick(args.v, cfg, "v", None)
    if measure_path is not None:
        v = VectorMeasure.load(measure_path, dim=grid.dim)
    elif v_path is not None:
        v = read_field(v_path)
    else:
        v = random_field(grid, rng, vector=True)
    bank = load_bank(grid, cfg.get("bank", "v1"))
    index = _pick(args.phi_index, cfg, "phi_index", 0)
    if not 0 <= index < len(bank):
        raise UsageError(f"phi index {index} outside 0..{len(bank) - 1}")
    phi = bank[index]
    chi = make_cutoff(args.delta if args.delta is not None else cfg.get("cutoffs", [0.5])[0])
    result = hodge_product_pair(PairingRequest(v, w, phi, chi))
    checks = []
    residuals = {}
    if not isinstance(v, VectorMeasure):
        field = hodge_product_field(v, w, chi)
        write_field(field, out / "product.json")
        via_field = pair(field, phi)
        gap = abs(via_field - result.total) / max(abs(via_field), 1.0)
        residuals["pairing_vs_field_path"] = gap
        checks.append(Check.at_most("pairing path vs field path", gap, 1e-10))
    report = result.to_dict()
    report["residuals"] = residuals
    report["phi_index"] = index
    _write_json(out / "pairing_report.json", report)
    print(f"<(v.w)_H, phi_{index}> = {result.total!r}")
    return _print_checks(checks)


def cmd_chi_check(args) -> int:
    cfg = _settings(args)
    out = _out_dir(args)
    grid = TorusGrid(cfg.get("dim", 2), cfg.get("grid", 64))
    rng = np.random.default_rng(cfg.get("seed", 0))
    v = random_field(grid, rng, vector=True)
    w = random_field(grid, rng, vector=True)
    n_atoms = cfg.get("atoms", 3)
    locs = rng.uniform(0.0, TWO_PI, size=(n_atoms, grid.dim))
    wts = rng.standard_normal((n_atoms, grid.dim))
    mu = atomic_measure(list(zip(locs, wts)), dim=grid.dim)
    if args.delta is not None:
        pairs = [tuple(args.delta)]
    else:
        pairs = [tuple(p) for p in cfg.get("cutoff_pairs", [[1.5, 3.0]])]
    bank = load_bank(grid, cfg.get("bank", "v1"))
    checks, reports = [], []
    for d1, d2 in pairs:
        for kind, vv in (("smooth", v), ("atomic", mu)):
            rep = chi_independence_report(vv, w, make_cutoff(d1), make_cutoff(d2), bank)
            tag = f"{kind} delta {d1:g} vs {d2:g}"
            reports.append({"kind": kind, **rep.to_dict()})
            checks.append(Check.at_most(f"{tag}: max relative pairing difference", rep.max_rel_difference, 1e-9))
            checks.append(Check.holds(f"{tag}: Z difference band-limited", rep.delta_bandwidth_ok))
    _write_json(out / "chi_report.json", {"grid_n": grid.n, "dim": grid.dim, "reports": reports})
    return _print_checks(checks)


def _symbol(order: float, modulated: bool):
    if order == 0 and not modulated:
        return constant_symbol(1.0)
    return modulated_bessel_potential(order) if modulated else bessel_potential(order)


def cmd_lp_kernels(args) -> int:
    cfg = _settings(args)
    out = _out_dir(args)
    grid = TorusGrid(1, cfg.get("grid", 1024))
    J = _pick(args.J, cfg, "J", 6)
    order = _pick(args.order, cfg, "symbol_order", -1.0)
    modulated = args.modulated or cfg.get("modulated", False)
    levels = cfg.get("levels", list(range(2, J + 1)))
    rows = kernel_l1_profile(_symbol(order, modulated), J, grid, levels=levels)
    write_table(out / "lp_kernels.csv", ("j", "mass", "scaled_mass"), [(r.j, r.mass, r.scaled_mass) for r in rows])
    scaled = [r.scaled_mass for r in rows]
    for r in rows:
        print(f"j={r.j}: mass={r.mass:.6g} scaled={r.scaled_mass:.6g}")
    checks = [Check.at_most("scaled mass max/min across levels", max(scaled) / min(scaled), 4.0)]
    checks.append(Check.at_most("max sup|K_j| / frequency-sum bound", max(r.sup / r.sup_bound for r in rows), 4.0))
    return _print_checks(checks)


def cmd_measure_bound(args) -> int:
    cfg = _settings(args)
    out = _out_dir(args)
    grid = TorusGrid(1, cfg.get("grid", 1024))
    order = _pick(args.order, cfg, "symbol_order", -1.0)
    h_list = args.h or cfg.get("h_list", [0.05, 0.02, 0.01])
    measure_path = _pick(args.measure, cfg, "measure", None)
    mu = VectorMeasure.load(measure_path, dim=1) if measure_path else atomic_measure([((np.pi,), (1.0,))], dim=1)
    a = _symbol(order, args.modulated or cfg.get("modulated", False))
    rows = measure_action_bound(a, mu, h_list, grid)
    write_table(out / "measure_bound.csv", ("h", "l1_norm"), [(r.h, r.l1_norm) for r in rows])
    for r in rows:
        print(f"h={r.h:g}: |Op(a) mu_h|_L1 = {r.l1_norm:.6g}")
    norms = [r.l1_norm for r in rows]
    limit = 1.5 if order <= -1 else 2.0
    ratio = max(norms) / min(norms) if min(norms) > 0 else (0.0 if max(norms) == 0 else np.inf)
    return _print_checks([Check.at_most("L1 norm max/min across h", ratio, limit)])


def cmd_experiment(args) -> int:
    cfg = _settings(args)
    out = _out_dir(args)
    if cfg.get("experiment", args.experiment) != args.experiment:
        raise UsageError(f"config is for {cfg['experiment']}, command asked for {args.experiment}")
    cfg["experiment"] = args.experiment
    if args.experiment == "E1" and getattr(args, "grid", None) is not None:
        cfg["grids"] = [args.grid]
    config = ExperimentConfig.from_dict(cfg)
    report = run_experiment(config)
    emit(report, "csv", out / f"{args.experiment}.csv")
    emit(report, "json", out / f"{args.experiment}.json")
    for row in report.sorted_rows():
        print(f"{row.id} {row.param_name}={row.param_value:g} N={row.grid_n}: rel_error={row.rel_error:.3e}")
    return _print_checks(report.checks)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand without the
    # subparser defaults clobbering values given at the top level
    common = _Parser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON run configuration")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory (default: ./out)")
    common.add_argument("--seed", type=_u64, default=argparse.SUPPRESS, help="random seed (unsigned 64-bit)")
    common.add_argument("--grid", type=int, default=argparse.SUPPRESS, help="points per axis N")
    return common


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in an unsigned 64-bit integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="divcurl", description=__doc__.strip().splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", parents=[common], help="Hodge split of a vector field")
    p.add_argument("--input", help="field manifest (default: seeded random field)")
    p.add_argument("--delta", type=float, action="append", help="cutoff radius; repeatable")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("product", parents=[common], help="pair (v.w)_H against a bank test function")
    p.add_argument("--v", help="field manifest for v")
    p.add_argument("--measure", help="measure JSON for v (overrides --v)")
    p.add_argument("--w", help="field manifest for w")
    p.add_argument("--phi-index", type=int, dest="phi_index", help="index into the test-function bank")
    p.add_argument("--delta", type=float, help="cutoff radius")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("chi-check", parents=[common], help="cutoff independence of the pairing")
    p.add_argument("--delta", type=float, nargs=2, metavar=("D1", "D2"), help="cutoff pair")
    p.set_defaults(func=cmd_chi_check)

    p = sub.add_parser("lp-kernels", parents=[common], help="dyadic kernel mass profile (1D)")
    p.add_argument("--J", type=int, help="deepest dyadic level")
    p.add_argument("--order", type=float, help="symbol order (Bessel potential)")
    p.add_argument("--modulated", action="store_true", help="use the x-dependent modulated symbol")
    p.set_defaults(func=cmd_lp_kernels)

    p = sub.add_parser("measure-bound", parents=[common], help="L1 norms of Op(a) on mollified atoms (1D)")
    p.add_argument("--order", type=float, help="negative symbol order")
    p.add_argument("--h", type=float, action="append", help="mollification parameter; repeatable")
    p.add_argument("--measure", help="measure JSON (default: unit atom at pi)")
    p.add_argument("--modulated", action="store_true", help="use the x-dependent modulated symbol")
    p.set_defaults(func=cmd_measure_bound)

    p = sub.add_parser("experiment", parents=[common], help="run a convergence experiment")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except jsonschema.ValidationError as exc:
        print(f"divcurl: error: invalid configuration: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DivCurlError, ValueError, OSError) as exc:
        print(f"divcurl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
