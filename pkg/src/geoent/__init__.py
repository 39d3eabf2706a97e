"""Geometric entanglement of multi-qubit states via closest product states.

The distance from a normalized target state to the family of unnormalized
product states is minimized numerically and, for highly symmetric targets,
in closed form; exact Hessian eigen-analysis classifies every extremum.
"""

from .distance import (
    CriticalIdentities,
    DistanceReport,
    critical_identities,
    distance_sq,
    gradient,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    GeoentError,
    MultistartError,
    NumericalError,
    SymmetryError,
)
from .hessian import (
    DEGENERATE,
    LOCAL_MINIMUM,
    SADDLE,
    HessianMatrix,
    SpectrumReport,
    SymmetricBlocks,
    analytic_eigenpairs,
    block_hessian,
    build_hessian,
    eig_symmetric,
    gauge_directions,
    jacobi_eigh,
    symmetric_blocks,
)
from .optimize import (
    Extremum,
    OptimOptions,
    default_seed_list,
    gauge_fix,
    minimize,
    multistart,
)
from .schmidt import (
    PolarHessian,
    PolarPoint,
    SchmidtCritical,
    SchmidtFactors,
    polar_distance,
    polar_hessian,
    reduced_density,
    schmidt_critical,
    sigma_entry,
    single_excitation_polar_dsq,
    svd_factors,
    target_in_rotated_basis,
)
from .states import (
    SOFT_QUBIT_LIMIT,
    DickeSpec,
    ProductParams,
    SymmetricParams,
    TargetState,
    contract_all_but,
    embed_symmetric,
    load_state,
    make_dicke,
    make_ring,
    overlap,
    product_coeffs,
    save_state,
)
from .symmetric import DickeSolution, RingSolution, solve_dicke, solve_ring

__version__ = "0.1.0"

__all__ = [
    "CriticalIdentities",
    "DEGENERATE",
    "DickeSolution",
    "DickeSpec",
    "DimensionMismatch",
    "DistanceReport",
    "DomainError",
    "Extremum",
    "GeoentError",
    "HessianMatrix",
    "LOCAL_MINIMUM",
    "MultistartError",
    "NumericalError",
    "OptimOptions",
    "PolarHessian",
    "PolarPoint",
    "ProductParams",
    "RingSolution",
    "SADDLE",
    "SOFT_QUBIT_LIMIT",
    "SchmidtCritical",
    "SchmidtFactors",
    "SpectrumReport",
    "SymmetricBlocks",
    "SymmetricParams",
    "SymmetryError",
    "TargetState",
    "analytic_eigenpairs",
    "block_hessian",
    "build_hessian",
    "contract_all_but",
    "critical_identities",
    "default_seed_list",
    "distance_sq",
    "eig_symmetric",
    "embed_symmetric",
    "gauge_directions",
    "gauge_fix",
    "gradient",
    "jacobi_eigh",
    "load_state",
    "make_dicke",
    "make_ring",
    "minimize",
    "multistart",
    "overlap",
    "polar_distance",
    "polar_hessian",
    "product_coeffs",
    "reduced_density",
    "save_state",
    "schmidt_critical",
    "sigma_entry",
    "single_excitation_polar_dsq",
    "solve_dicke",
    "solve_ring",
    "svd_factors",
    "symmetric_blocks",
    "target_in_rotated_basis",
]
