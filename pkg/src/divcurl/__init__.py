"""
Pseudospectral div-curl toolkit on the torus T^d.

Microlocal Hodge splitting, the distributional product (v . w)_H for smooth
and atomic v, Littlewood-Paley kernel estimates for quantized symbols, and a
convergence harness for oscillating and concentrating sequences.
"""

from .errors import (
    ComponentMismatchError,
    DivCurlError,
    DomainError,
    GridMismatchError,
    GridSizeError,
    ResolutionError,
    SingularSymbolError,
    SizeLimitError,
    SymbolOrderError,
)
from .experiments import ExperimentConfig, gen_divfree_oscillation, gen_gradient_oscillation, run_experiment
from .fieldio import read_field, write_field
from .hodge import CutoffSpec, HodgeDecomposition, decompose, hodge_y, hodge_z, make_cutoff
from .littlewood_paley import (
    DyadicPartition,
    dyadic_partition,
    kernel_l1_profile,
    kernel_matrix,
    lp_project,
    measure_action_bound,
)
from .measures import VectorMeasure, atomic_measure, mollify, point_vortex, total_variation_estimate
from .product import (
    PairingRequest,
    PairingResult,
    chi_independence_report,
    extended_product_field,
    hodge_product_field,
    hodge_product_pair,
)
from .report import ExperimentReport, ExperimentRow, emit
from .spectral import (
    SpectralField,
    Symbol,
    TorusGrid,
    apply_multiplier,
    curl,
    curl_curl,
    dealiased_product,
    divergence,
    eval_at,
    gradient,
    make_grid,
    pair,
    quantize,
    sobolev_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
