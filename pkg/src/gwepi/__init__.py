"""Entanglement of generalized W-class qudit states and polygon inequalities."""

from gwepi.harness import (
    SweepConfig,
    enumerate_partitions,
    random_gw,
    run_oracle_certification,
    run_sweep,
)
from gwepi.inequalities import (
    InequalityReport,
    Partition,
    WeightedTerm,
    check_bipartite_sum,
    check_epi_partition,
    check_epi_triple,
    check_monogamy_identity,
    check_triangle,
    check_weighted_epi,
    dyadic_power_bound,
    hamming_weight,
)
from gwepi.measures import (
    Bipartition,
    MeasureSpec,
    RangeError,
    concurrence_pure,
    f_q,
    gw_tangle,
    gw_tsallis,
    tsallis_entanglement_pure,
    tsallis_entropy,
)
from gwepi.roof import Ensemble, RoofOptions, RoofResult, ensemble_from_isometry, roof_extremize
from gwepi.states import (
    DensityMatrix,
    GWState,
    SparseState,
    StateError,
    build_gw_state,
    eigenvalues,
    lambda_weights,
    read_gw_state,
    reduced_density,
)

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "DensityMatrix",
    "Ensemble",
    "GWState",
    "InequalityReport",
    "MeasureSpec",
    "Partition",
    "RangeError",
    "RoofOptions",
    "RoofResult",
    "SparseState",
    "StateError",
    "SweepConfig",
    "WeightedTerm",
    "build_gw_state",
    "check_bipartite_sum",
    "check_epi_partition",
    "check_epi_triple",
    "check_monogamy_identity",
    "check_triangle",
    "check_weighted_epi",
    "concurrence_pure",
    "dyadic_power_bound",
    "eigenvalues",
    "ensemble_from_isometry",
    "enumerate_partitions",
    "f_q",
    "gw_tangle",
    "gw_tsallis",
    "hamming_weight",
    "lambda_weights",
    "random_gw",
    "read_gw_state",
    "reduced_density",
    "roof_extremize",
    "run_oracle_certification",
    "run_sweep",
    "tsallis_entanglement_pure",
    "tsallis_entropy",
]
