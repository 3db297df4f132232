"""Brute-force reference calculations for the outcome distribution.

Nothing here touches the series kernels. ``q_by_integration`` builds the
dephased density matrix explicitly and integrates the phase density
``p(theta) = Tr[rho pi(theta)]`` over each bin with adaptive quadrature.
``q_by_monte_carlo`` samples measurement outcomes (rejection sampling for
the canonical receiver, simulated heterodyne for the Q receiver), adds
Gaussian phase kicks and bins them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial
from scipy import integrate, special, stats

from .errors import DomainError, NumericalError
from .noise import accumulated_variance
from .receiver import CENTERED, BinConvention, OutcomeDistribution, PhaseAlphabet, ReceiverKind

log = logging.getLogger(__name__)

MIN_SAMPLES = 10_000


def _oracle_cutoff(nbar):
    # deliberately generous and unrelated to fock.choose_truncation
    if nbar == 0.0:
        return 4
    k = int(math.ceil(nbar))
    while stats.poisson.logpmf(k, nbar) > math.log(1e-22):
        k += 1
    return k + 10


def _receiver_matrix(kind, n_max):
    n = np.arange(n_max + 1, dtype=np.float64)
    if kind is ReceiverKind.CANONICAL:
        return np.ones((n_max + 1, n_max + 1))
    s = n[:, None] + n[None, :]
    return np.exp(special.gammaln(1.0 + 0.5 * s) - 0.5 * (special.gammaln(n[:, None] + 1.0) + special.gammaln(n[None, :] + 1.0)))


@dataclass(frozen=True)
class PhaseDensity:
    """``p(theta) = (1/2 pi) sum_{n,m} A_{n,m} rho_{n,m} exp(-i (n - m) theta)``.

    Sign chosen so that ``U(phi) rho U(phi)^dagger`` yields ``p(theta - phi)``:
    a state encoded at phase ``phi`` is read out around ``phi``.
    """

    weights: np.ndarray  # A * rho, complex

    @classmethod
    def coherent(cls, nbar: float, kind, sigma: float = 0.0, shift: float = 0.0) -> "PhaseDensity":
        kind = ReceiverKind.parse(kind)
        if not (nbar >= 0.0) or not (sigma >= 0.0):
            raise DomainError("nbar and sigma must be >= 0")
        n_max = _oracle_cutoff(nbar)
        n = np.arange(n_max + 1)
        amplitude = np.sqrt(stats.poisson.pmf(n, nbar)) if nbar > 0 else (n == 0).astype(float)
        diff = n[:, None] - n[None, :]
        rho = np.outer(amplitude, amplitude) * np.exp(-0.5 * sigma * diff**2) * np.exp(1j * shift * diff)
        return cls(_receiver_matrix(kind, n_max) * rho)

    def __call__(self, theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
        n = np.arange(self.weights.shape[0])
        v = np.exp(1j * np.outer(theta, n))
        # v^* W v with W[n, m] multiplying exp(-i n theta) exp(+i m theta)
        values = np.einsum("tn,nm,tm->t", v.conj(), self.weights, v).real / (2.0 * np.pi)
        return values

    def integrate(self, lower: float, upper: float, epsabs: float = 1e-11) -> float:
        value, err = integrate.quad(lambda t: self(t)[0], lower, upper, epsabs=epsabs, epsrel=0.0, limit=200)
        if err > 1e-8:
            raise NumericalError("bin integral above error budget", {"lower": lower, "upper": upper, "err": err})
        return value


def integrate_bins(density: PhaseDensity, N: int, convention: BinConvention = CENTERED) -> np.ndarray:
    return np.array([density.integrate(lo, hi) for lo, hi in PhaseAlphabet(N).bins(convention)])


def q_by_integration(nbar, N, sigma, kind, convention: BinConvention = CENTERED) -> OutcomeDistribution:
    kind = ReceiverKind.parse(kind)
    q = integrate_bins(PhaseDensity.coherent(nbar, kind, sigma), N, convention)
    return OutcomeDistribution(q, kind, float(nbar), float(sigma), convention, source="integration")


def husimi_phase_marginal(nbar: float, theta):
    """Closed-form phase marginal of the Q function of a real coherent state."""
    theta = np.asarray(theta, dtype=np.float64)
    x = math.sqrt(nbar) * np.cos(theta)
    return (
        math.exp(-nbar)
        + math.sqrt(math.pi) * x * np.exp(-nbar * np.sin(theta) ** 2) * (1.0 + special.erf(x))
    ) / (2.0 * np.pi)


# --- Monte Carlo ---------------------------------------------------------------

@dataclass(frozen=True)
class MonteCarloRun:
    seed: int
    samples: int
    estimate: np.ndarray
    stderr: np.ndarray
    sigma: float
    receiver: ReceiverKind
    convention: BinConvention = CENTERED


def _sample_canonical(rng, nbar, size, chunk=1 << 20):
    n_max = _oracle_cutoff(nbar)
    n = np.arange(n_max + 1)
    amplitude = np.sqrt(stats.poisson.pmf(n, nbar)) if nbar > 0 else (n == 0).astype(float)
    # density (1/2pi)|sum_n c_n e^{i n theta}|^2 peaks at theta = 0 for c_n >= 0
    peak = amplitude.sum() ** 2
    out = np.empty(size)
    filled = 0
    while filled < size:
        theta = rng.uniform(-np.pi, np.pi, chunk)
        dens = np.abs(polynomial.polyval(np.exp(1j * theta), amplitude)) ** 2
        keep = theta[rng.uniform(0.0, peak, chunk) < dens]
        take = min(keep.size, size - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out


def _sample_heterodyne(rng, nbar, size):
    # Q function of |alpha>: complex Gaussian around alpha with variance 1/2 per quadrature
    noise = rng.normal(0.0, math.sqrt(0.5), (2, size))
    return np.arctan2(noise[1], math.sqrt(nbar) + noise[0])


def q_by_monte_carlo(
    nbar: float,
    N: int,
    noise,
    tau: float,
    kind,
    samples: int = 1_000_000,
    seed: int = 0,
    convention: BinConvention = CENTERED,
) -> MonteCarloRun:
    kind = ReceiverKind.parse(kind)
    if samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if not (nbar >= 0.0):
        raise DomainError(f"nbar must be >= 0, got {nbar!r}")
    alphabet = PhaseAlphabet(N)
    sigma = accumulated_variance(noise, tau)
    rng = np.random.Generator(np.random.PCG64(seed))
    log.debug("monte carlo: seed=%d samples=%d receiver=%s sigma=%g", seed, samples, kind.value, sigma)

    if kind is ReceiverKind.CANONICAL:
        theta = _sample_canonical(rng, nbar, samples)
    else:
        theta = _sample_heterodyne(rng, nbar, samples)
    if sigma > 0.0:
        theta = theta + rng.normal(0.0, math.sqrt(sigma), samples)

    width = 2.0 * np.pi / N
    shifted = np.mod(theta - convention.offset(alphabet.N) + 0.5 * width, 2.0 * np.pi)
    bins = np.minimum((shifted // width).astype(np.int64), N - 1)
    estimate = np.bincount(bins, minlength=N) / samples
    stderr = np.sqrt(estimate * (1.0 - estimate) / samples)
    return MonteCarloRun(seed, samples, estimate, stderr, float(sigma), kind, convention)
