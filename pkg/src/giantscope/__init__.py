"""Connected components of the sparse random graph G(n, c/n) through its
exploration process: simulation, exact small-n laws, rate functions, optimal
trajectories and Gaussian / critical-window limits."""

from .exact import CapacityError, ExactDistribution, enumerate_exact, tv_distance
from .exploration import (
    ComponentSpectrum,
    ExplorationTrace,
    GraphParams,
    components,
    explore,
    sample_direct,
    skorohod,
)
from .limits import clt_params, mc_harness, simulate_critical_limit
from .rates import (
    PhasePoints,
    RateParams,
    SolverDisagreement,
    SpectrumQuery,
    i_alpha,
    i_beta,
    k_star,
    phase_points,
    stepanov_S,
)
from .reporting import VERSION as __version__
from .seeding import RngSeed, mix64
from .trajectory import Trajectory

__all__ = [
    "CapacityError",
    "ComponentSpectrum",
    "ExactDistribution",
    "ExplorationTrace",
    "GraphParams",
    "PhasePoints",
    "RateParams",
    "RngSeed",
    "SolverDisagreement",
    "SpectrumQuery",
    "Trajectory",
    "clt_params",
    "components",
    "enumerate_exact",
    "explore",
    "i_alpha",
    "i_beta",
    "k_star",
    "mc_harness",
    "mix64",
    "phase_points",
    "sample_direct",
    "simulate_critical_limit",
    "skorohod",
    "stepanov_S",
    "tv_distance",
]
