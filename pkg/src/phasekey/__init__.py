"""Mutual information of phase-keyed coherent-state channels under phase diffusion."""

__version__ = "0.1.0"

from .errors import DomainError, NumericalError
from .fock import SeedState, TruncationPolicy, choose_truncation, coherent_element, log_gamma_half
from .infotheory import (
    CapacityParams,
    MutualInformationResult,
    Ratios,
    ThresholdResult,
    asymptotic_mi,
    beta_threshold,
    capacity_coherent,
    capacity_photon_number,
    channel_mi,
    mutual_information,
    mutual_information_general,
    ratios,
)
from .noise import (
    OUNoise,
    StaticNoise,
    sigma_limit_correlated,
    sigma_limit_markovian,
    sigma_ou,
    sigma_ou_quadrature,
    sigma_static,
)
from .receiver import (
    CENTERED,
    HALF_BIN,
    BinConvention,
    OutcomeDistribution,
    PhaseAlphabet,
    ReceiverKernel,
    ReceiverKind,
    conditional_matrix,
    outcome_distribution,
    q_canonical,
    q_husimi,
    resolution_function,
)

__all__ = [
    "__version__",
    "CapacityParams",
    "MutualInformationResult",
    "Ratios",
    "ThresholdResult",
    "asymptotic_mi",
    "beta_threshold",
    "capacity_coherent",
    "capacity_photon_number",
    "channel_mi",
    "mutual_information",
    "mutual_information_general",
    "ratios",
    "OUNoise",
    "StaticNoise",
    "sigma_limit_correlated",
    "sigma_limit_markovian",
    "sigma_ou",
    "sigma_ou_quadrature",
    "sigma_static",
    "CENTERED",
    "HALF_BIN",
    "BinConvention",
    "OutcomeDistribution",
    "PhaseAlphabet",
    "ReceiverKernel",
    "ReceiverKind",
    "conditional_matrix",
    "outcome_distribution",
    "q_canonical",
    "q_husimi",
    "resolution_function",
    "DomainError",
    "NumericalError",
    "SeedState",
    "TruncationPolicy",
    "choose_truncation",
    "coherent_element",
    "log_gamma_half",
]
