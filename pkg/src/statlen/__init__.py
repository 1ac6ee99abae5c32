"""statlen: statistical lengths, fidelities, and minimal-dissipation transport.

A small numpy library for computing classical and quantum fidelities,
the local Fisher and Bures metric elements, geodesic lengths, the
entropy production of sequential equilibration transport (with its
l^2/(2N) minimum), and exact finite-size simulations of the
swap-and-twirl reservoir protocol, plus a numerical geodesic search.
"""

__version__ = "0.1.0"

from .exceptions import (
    BadRank,
    DimensionCapExceeded,
    DimensionMismatch,
    InfiniteYield,
    NegativeWeight,
    NotCommuting,
    NotHermitian,
    NotNormalized,
    NotPositive,
    NotUnitTrace,
    RankCollapse,
    RankDeficient,
    StatlenError,
    SupportViolation,
    ValidationError,
)
from .states import (
    DensityMatrix,
    ProbabilityDistribution,
    SpectralDecomposition,
    TangentPerturbation,
    add_ridge,
    dimension_cap,
    mat_log_on_support,
    mat_sqrt,
    random_distribution,
    random_state,
    shannon_entropy,
    spectral,
    tangent_classical,
    tangent_quantum,
    tensor_product,
    validate_density,
    validate_distribution,
    von_neumann_entropy,
)
from .geometry import (
    PathLengthReport,
    StatePath,
    TransportSchedule,
    bures_element,
    classical_geodesic_path,
    commuting_quantum_geodesic,
    default_step_rule,
    discrete_path_length,
    even_schedule,
    fidelity_classical,
    fidelity_quantum,
    fisher_element,
    geodesic_length_bures,
    geodesic_length_fisher,
    hellinger_element,
    kubo_mori_element,
    linear_mixture_path,
    state_fidelity,
)
from .transport import (
    ExpansionProbe,
    TransportReport,
    entropy_per_unit_length,
    expansion_probe,
    geodesic_bound,
    min_entropy_production,
    relative_entropy,
    run_transport,
    single_step_yield,
)
from .reservoir import (
    ReservoirScanResult,
    classical_step_entropy_production,
    convergence_scan,
    step_entropy_production,
    swap_state,
    twirl_state,
)
from .pathopt import PathOptimizationResult, minimize_path

__all__ = [name for name in dir() if not name.startswith("_")]
