"""Error exponents of regular LDPC codes on the binary erasure channel.

The analytic side computes density-evolution fixed points, the biased
(large-deviation) cavity potential psi(x, y), entropic rate curves, the
average and typical ML error exponents, and the ensemble thresholds
p_d, p_c, p_1rsb; closed forms for the random-linear-code limit are
included.  The empirical side samples regular codes, runs the peeling
decoder, counts solutions exactly over GF(2), and aggregates
reproducible Monte-Carlo reports.

Heavy kernels run on a compiled backend when available; set
BECEXP_FORCE_PURE=1 to insist on the pure-python twin.  The active
choice is exposed as ``backend_name``.
"""

from ._backend import COMPILED, NAME as backend_name
from .density_evolution import (
    CavityState,
    CoreDensities,
    core_densities,
    de_fixed_point,
    find_p_c,
    find_p_d,
    typical_entropy,
    zeta_from_eta,
)
from .errors import (
    BecexpError,
    DivisibilityError,
    DomainError,
    ExtrapolationUnstable,
    GraphConstructionError,
    InsufficientSamples,
    NonConvergence,
    NoZeroEntropySolution,
)
from .gf2 import (
    EnsembleParams,
    ErasurePattern,
    ParityCheckMatrix,
    gf2_rank,
    kernel_dimension,
    sample_regular_matrix,
)
from .large_deviation import (
    BiasParams,
    PotentialValue,
    RateCurve,
    RateSample,
    average_exponent,
    find_p_1rsb,
    ld_fixed_point,
    phi,
    potential,
    rate_curve,
    tempered_exponent,
    typical_exponent,
)
from .reference import REFERENCE_THRESHOLDS
from .rlc import (
    RlcParams,
    binary_entropy,
    gilbert_varshamov_delta,
    kl_divergence,
    rlc_average_exponent,
    rlc_p_e,
    rlc_p_y,
    rlc_potential,
    rlc_typical_exponent,
)
from .rng import Stream
from .simulate import (
    PeelingResult,
    SimulationReport,
    empirical_potential,
    peel,
    run_monte_carlo,
    sample_erasure,
    solution_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "BecexpError",
    "BiasParams",
    "CavityState",
    "COMPILED",
    "CoreDensities",
    "DivisibilityError",
    "DomainError",
    "EnsembleParams",
    "ErasurePattern",
    "ExtrapolationUnstable",
    "GraphConstructionError",
    "InsufficientSamples",
    "NonConvergence",
    "NoZeroEntropySolution",
    "ParityCheckMatrix",
    "PeelingResult",
    "PotentialValue",
    "RateCurve",
    "RateSample",
    "REFERENCE_THRESHOLDS",
    "RlcParams",
    "SimulationReport",
    "Stream",
    "average_exponent",
    "backend_name",
    "binary_entropy",
    "core_densities",
    "de_fixed_point",
    "empirical_potential",
    "find_p_1rsb",
    "find_p_c",
    "find_p_d",
    "gf2_rank",
    "gilbert_varshamov_delta",
    "kernel_dimension",
    "kl_divergence",
    "ld_fixed_point",
    "peel",
    "phi",
    "potential",
    "rate_curve",
    "rlc_average_exponent",
    "rlc_p_e",
    "rlc_p_y",
    "rlc_potential",
    "rlc_typical_exponent",
    "run_monte_carlo",
    "sample_erasure",
    "sample_regular_matrix",
    "solution_entropy",
    "tempered_exponent",
    "typical_entropy",
    "typical_exponent",
    "zeta_from_eta",
]
