"""Mutual information of phase-keyed channels and reference capacities.

Everything is in bits. For a uniform prior and a covariant receiver the
channel matrix is circulant and the mutual information collapses to
``log2 N + sum_s q(s) log2 q(s)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .errors import DomainError
from .fock import TruncationPolicy, choose_truncation
from .receiver import (
    CENTERED,
    NORMALIZATION_TOLERANCE,
    BinConvention,
    OutcomeDistribution,
    ReceiverKind,
    outcome_distribution,
)

ZERO_PROBABILITY = 1e-15


@dataclass(frozen=True)
class MutualInformationResult:
    bits: float
    N: int
    nbar: float
    receiver: ReceiverKind
    sigma: float

    def __float__(self):
        return self.bits


@dataclass(frozen=True)
class CapacityParams:
    eta: float = 1.0
    nbar: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.eta <= 1.0):
            raise DomainError(f"eta must lie in [0, 1], got {self.eta!r}")
        if not (self.nbar >= 0.0):
            raise DomainError(f"nbar must be >= 0, got {self.nbar!r}")


class Ratios(NamedTuple):
    gamma_c: float
    gamma_q: float
    beta_c: float
    beta_q: float


def mutual_information(q: OutcomeDistribution) -> MutualInformationResult:
    values = q.q
    if abs(values.sum() - 1.0) > NORMALIZATION_TOLERANCE or values.min() < 0.0:
        raise DomainError("q must be a normalized probability vector")
    N = values.shape[0]
    # relative entropy to the uniform law; avoids cancelling against log2 N
    pos = values[values > ZERO_PROBABILITY]
    bits = float(np.sum(pos * np.log2(N * pos)))
    bits = min(max(bits, 0.0), math.log2(N))
    return MutualInformationResult(bits, N, q.nbar, q.receiver, q.sigma)


def mutual_information_general(p_jk, prior=None) -> float:
    """Mutual information of a discrete memoryless channel.

    ``p_jk[k, j]`` is the probability of output ``j`` given input ``k``;
    ``prior`` defaults to uniform.
    """
    P = np.asarray(p_jk, dtype=np.float64)
    if P.ndim != 2:
        raise DomainError("channel matrix must be two-dimensional")
    K = P.shape[0]
    prior = np.full(K, 1.0 / K) if prior is None else np.asarray(prior, dtype=np.float64)
    if prior.shape != (K,):
        raise DomainError(f"prior has shape {prior.shape}, expected ({K},)")
    if np.abs(P.sum(axis=1) - 1.0).max() > NORMALIZATION_TOLERANCE:
        raise DomainError("rows of the channel matrix must sum to one")
    if abs(prior.sum() - 1.0) > NORMALIZATION_TOLERANCE:
        raise DomainError("prior must sum to one")

    output = prior @ P
    joint = prior[:, None] * P
    mask = joint > 0.0
    ratio = np.ones_like(P)
    ratio[mask] = P[mask] / output[np.nonzero(mask)[1]]
    return float(np.sum(joint[mask] * np.log2(ratio[mask])))


def capacity_coherent(params: CapacityParams) -> float:
    """Heterodyne coherent-channel capacity ``log2(1 + eta nbar)``."""
    return math.log2(1.0 + params.eta * params.nbar)


def capacity_photon_number(nbar: float) -> float:
    """Single-mode capacity ``(nbar + 1) log2(nbar + 1) - nbar log2 nbar``."""
    if not (nbar >= 0.0):
        raise DomainError(f"nbar must be >= 0, got {nbar!r}")
    if nbar == 0.0:
        return 0.0
    return (nbar + 1.0) * math.log2(nbar + 1.0) - nbar * math.log2(nbar)


def ratios(I_c: float, I_q: float, params: CapacityParams) -> Ratios:
    c_phn = capacity_photon_number(params.nbar)
    c_coh = capacity_coherent(params)
    if c_phn <= 0.0 or c_coh <= 0.0:
        raise DomainError("reference capacities vanish; ratios are undefined")
    return Ratios(I_c / c_phn, I_q / c_phn, I_c / c_coh, I_q / c_coh)


def asymptotic_mi(nbar: float, N: int, tau: float, kind) -> float:
    """First-order small-``nbar`` mutual information."""
    kind = ReceiverKind.parse(kind)
    if not (nbar >= 0.0):
        raise DomainError(f"nbar must be >= 0, got {nbar!r}")
    value = nbar * np.sinc(1.0 / N) ** 2 * math.exp(-tau) / math.log(2.0)
    if kind is ReceiverKind.HUSIMI_Q:
        value *= math.pi / 4.0
    return float(value)


def channel_mi(
    kind,
    nbar: float,
    N: int,
    sigma: float,
    trunc: TruncationPolicy | None = None,
    convention: BinConvention = CENTERED,
) -> float:
    """Shortcut: mutual information in bits for one parameter point."""
    return mutual_information(outcome_distribution(kind, nbar, N, sigma, trunc, convention)).bits


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of the ``beta = 1`` search; ``tau_star`` is None without a crossing."""

    tau_star: float | None
    tau_max: float
    beta_at_zero: float

    @property
    def found(self) -> bool:
        return self.tau_star is not None


def beta_threshold(
    kind,
    nbar: float,
    N: int,
    eta: float,
    tau_max: float = 10.0,
    tau_limit: float = 80.0,
    xtol: float = 1e-6,
    convention: BinConvention = CENTERED,
    epsilon: float | None = None,
) -> ThresholdResult:
    """Static-noise time at which the phase channel stops beating the coherent one.

    Looks for the root of ``I(tau) / C_COH(eta) = 1`` on ``[0, tau_max]``,
    doubling ``tau_max`` up to ``tau_limit`` until the sign changes.
    """
    kind = ReceiverKind.parse(kind)
    params = CapacityParams(eta, nbar)
    trunc = choose_truncation(nbar) if epsilon is None else choose_truncation(nbar, epsilon)
    c_coh = capacity_coherent(params)

    def excess(tau):
        return channel_mi(kind, nbar, N, tau, trunc, convention) - c_coh

    i0 = channel_mi(kind, nbar, N, 0.0, trunc, convention)
    beta0 = math.inf if c_coh == 0.0 else i0 / c_coh
    if c_coh == 0.0 or beta0 <= 1.0:
        return ThresholdResult(None, tau_max, beta0)

    hi = tau_max
    while excess(hi) > 0.0:
        if hi >= tau_limit:
            return ThresholdResult(None, hi, beta0)
        hi = min(2.0 * hi, tau_limit)
    tau_star = optimize.bisect(excess, 0.0, hi, xtol=xtol)
    return ThresholdResult(float(tau_star), hi, beta0)
