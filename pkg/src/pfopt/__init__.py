"""Projection-free nonsmooth convex optimization via linear minimization
oracles, with projected-subgradient baselines and a benchmark harness."""

from .algorithms import (
    GradientStep,
    IterateLog,
    RunTrace,
    pfw_run,
    pfw_run_stochastic,
    pgd_run,
    sgd_run,
)
from .core import (
    DimensionError,
    FeasibleSet,
    NumericError,
    Objective,
    PfwParams,
    Point,
    SolverError,
    StochasticOracle,
    UnsupportedSetError,
    inner,
    matrix,
    params_deterministic,
    params_stochastic,
    vector,
)
from .linalg import FullSvd, SvdTriplet, full_svd, nuclear_norm, top_singular_triplet
from .objectives import (
    GaussianNoiseSpec,
    PenaltySpec,
    gaussian_oracle,
    hypercube_l1_optimum,
    l1_distance,
    l1_value_subgrad,
    lipschitz_extend,
    penalized_objective,
    penalized_value_subgrad,
)
from .sets import Hypercube, NuclearBall, VertexPolytope

__all__ = [
    "DimensionError",
    "FeasibleSet",
    "FullSvd",
    "GaussianNoiseSpec",
    "GradientStep",
    "Hypercube",
    "IterateLog",
    "NuclearBall",
    "NumericError",
    "Objective",
    "PenaltySpec",
    "PfwParams",
    "Point",
    "RunTrace",
    "SolverError",
    "StochasticOracle",
    "SvdTriplet",
    "UnsupportedSetError",
    "VertexPolytope",
    "full_svd",
    "gaussian_oracle",
    "hypercube_l1_optimum",
    "inner",
    "l1_distance",
    "l1_value_subgrad",
    "lipschitz_extend",
    "matrix",
    "nuclear_norm",
    "params_deterministic",
    "params_stochastic",
    "penalized_objective",
    "penalized_value_subgrad",
    "pfw_run",
    "pfw_run_stochastic",
    "pgd_run",
    "sgd_run",
    "top_singular_triplet",
    "vector",
]
