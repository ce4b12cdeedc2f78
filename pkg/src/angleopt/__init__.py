"""Energies of unoriented-line configurations on spheres.

The package provides: the renormalized-angle kernel family lambda0**alpha
(``geometry``), weighted line configurations with exact frame energies and
equivalence testing (``measures``), the exact integer ledger of
orthogonal-pair optima with its comparison-inequality checks
(``closed_form``), multistart projected gradient ascent at finite alpha
(``optimizer``), an exact rational simplex QP solver (``rational_qp``),
and a CLI front end (``cli``).
"""

from .closed_form import (
    ErrorTerm,
    LemmaCheck,
    LemmaReport,
    PartitionOptimum,
    balanced_partition,
    error_term,
    f_dn,
    f_dnk,
    pair_count,
    partition_oracle,
    verify_comparison_lemma,
)
from .errors import (
    AngleOptError,
    DimensionMismatchError,
    DomainError,
    FalsificationError,
    StructureError,
)
from .geometry import (
    ALPHA_INFINITY,
    UnitVector,
    check_alpha,
    geodesic_distance,
    kernel,
    kernel_matrix,
    lambda0,
)
from .measures import (
    FrameConfig,
    LineConfig,
    WeightMode,
    bilinear,
    conjectured_maximizer,
    conjectured_maximizer_weighted,
    energy,
    equivalent,
    load_config,
    save_config,
    uniform_basis_splits,
    uniform_circle_energy,
    uniform_circle_energy_quadrature,
)
from .optimizer import (
    AlphaOneWarning,
    DegeneratePairWarning,
    OptRun,
    OptimizerParams,
    SweepRow,
    alpha_sweep,
    energy_gradient,
    optimize,
    resolve_workers,
    write_optrun_csv,
    write_sweep_csv,
)
from .rational_qp import (
    RationalSymMatrix,
    SimplexWitness,
    enumerate_face_candidates,
    quadratic_value,
    simplex_extremum,
    support_weight_optimum,
    verify_witness,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_INFINITY",
    "AlphaOneWarning",
    "AngleOptError",
    "DegeneratePairWarning",
    "DimensionMismatchError",
    "DomainError",
    "ErrorTerm",
    "FalsificationError",
    "FrameConfig",
    "LemmaCheck",
    "LemmaReport",
    "LineConfig",
    "OptRun",
    "OptimizerParams",
    "PartitionOptimum",
    "RationalSymMatrix",
    "SimplexWitness",
    "StructureError",
    "SweepRow",
    "UnitVector",
    "WeightMode",
    "alpha_sweep",
    "balanced_partition",
    "bilinear",
    "check_alpha",
    "conjectured_maximizer",
    "conjectured_maximizer_weighted",
    "energy",
    "energy_gradient",
    "enumerate_face_candidates",
    "equivalent",
    "error_term",
    "f_dn",
    "f_dnk",
    "geodesic_distance",
    "kernel",
    "kernel_matrix",
    "lambda0",
    "load_config",
    "optimize",
    "pair_count",
    "partition_oracle",
    "quadratic_value",
    "resolve_workers",
    "save_config",
    "simplex_extremum",
    "support_weight_optimum",
    "uniform_basis_splits",
    "uniform_circle_energy",
    "uniform_circle_energy_quadrature",
    "verify_comparison_lemma",
    "verify_witness",
    "write_optrun_csv",
    "write_sweep_csv",
]
