"""Bayesian bi-clustering of time-varying relational count data.

Three models over a (time, object, object) count tensor: a static
Poisson block model fitted per time step (PIRM), its dynamic extension
with sticky HDP-HMM cluster dynamics (dPIRM), and a zero-inflated
variant for sparse tensors (dZIPIRM).  Inference is beam-sampled MCMC.
"""

from .densities import (
    joint_log_likelihood,
    normalized_log_likelihood,
    poisson_log_pmf,
    zip_log_pmf,
)
from .rng import RngHandle
from .samplers import SweepConfig, pirm_fit, run_chain
from .synthgen import SuiteConfig, SynthConfig, generate_dataset, generate_suite
from .types import (
    ClusterState,
    CountTensor,
    DynamicsState,
    EmissionState,
    Hyperparams,
    McmcTrace,
    StateError,
)

__all__ = [
    "ClusterState",
    "CountTensor",
    "DynamicsState",
    "EmissionState",
    "Hyperparams",
    "McmcTrace",
    "RngHandle",
    "StateError",
    "SuiteConfig",
    "SweepConfig",
    "SynthConfig",
    "generate_dataset",
    "generate_suite",
    "joint_log_likelihood",
    "normalized_log_likelihood",
    "pirm_fit",
    "poisson_log_pmf",
    "run_chain",
    "zip_log_pmf",
]

__version__ = "0.1.0"
