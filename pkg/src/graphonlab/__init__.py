"""graphonlab: graphon-based inhomogeneous random graphs at desk scale.

Samplers, analytic functionals of graphons and kernels, graph statistics,
the sprout calculus, Poisson-point-process oracles, and a seeded Monte
Carlo campaign runner.  Hot loops run in a compiled extension when it is
available; a bit-identical pure-Python fallback is selected at import
otherwise (see graphonlab._backend).
"""

from ._backend import backend_name
from .analysis import (
    GraphStats,
    components,
    degree_stats,
    micro_macro_disconnected,
    stats_json,
    vertex_connectivity,
    vertex_connectivity_at_least,
)
from .experiments import ConfigError, ExperimentConfig, ExperimentResult, run, write_outputs
from .graphons import (
    Constant,
    ConstantKernel,
    CornerRamp,
    DiagonalBand,
    DomainError,
    Graphon,
    Grid,
    GridKernel,
    Kernel,
    PowerProduct,
    StepFunction,
    StepFunctionKernel,
    UnsupportedVariantError,
    low_degree_closure,
    model_from_json,
    model_to_json,
)
from .incremental import IncrementalTrace, incremental_process
from .oracles import (
    EmpiricalDistribution,
    binomial_cdf_exact,
    binomial_tail_bound,
    geometric_pmf,
    mindeg_oracle_corner_ramp,
    mindeg_oracle_diagonal_band,
    ppp_sample,
    tv_distance,
)
from .sampling import (
    LatentSample,
    SampledGraph,
    degrees_rg,
    degrees_rk,
    load_model,
    sample_latents,
    sample_rg,
    sample_rk,
)
from .sprouts import (
    CoverReport,
    FlowReductionViolation,
    Sprout,
    SproutStats,
    cover_decompose,
    random_sprout,
    sprout_from_json,
    sprout_stats,
    sprout_to_json,
    validate_sprout,
    verify_cover,
)

__version__ = "0.1.0"
