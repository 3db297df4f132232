"""Coherent-state matrix elements in the Fock basis and series truncation.

Factorials go through ``lgamma`` or Stirling-series corrections so that
indices far beyond 170 (where ``n!`` overflows a double) stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DomainError

DEFAULT_EPSILON = 1e-12


@dataclass(frozen=True)
class SeedState:
    """Coherent state |alpha> with real amplitude, ``nbar = alpha**2``."""

    nbar: float

    def __post_init__(self):
        if not (self.nbar >= 0.0) or not math.isfinite(self.nbar):
            raise DomainError(f"nbar must be finite and >= 0, got {self.nbar!r}")

    @property
    def alpha(self) -> float:
        return math.sqrt(self.nbar)

    def element(self, n: int, m: int) -> float:
        return coherent_element(self.nbar, n, m)

    def populations(self, n_max: int) -> np.ndarray:
        """Photon-number distribution ``rho_{n,n}`` for ``n = 0..n_max``."""
        n = np.arange(n_max + 1)
        return stats.poisson.pmf(n, self.nbar) if self.nbar > 0 else (n == 0).astype(float)


@dataclass(frozen=True)
class TruncationPolicy:
    """Finite cutoffs standing in for the infinite Fock-space sums.

    ``n_max`` bounds the Fock index, ``d_max`` the coherence distance
    ``|n - m|``. Every retained element has ``n, m <= n_max`` so
    ``d_max == n_max``; :meth:`distance_cutoff` tightens ``d_max`` further
    once the dephasing factor is known.
    """

    epsilon: float
    n_max: int
    d_max: int

    @property
    def term_budget(self) -> float:
        return self.epsilon / (self.n_max * self.d_max)

    def distance_cutoff(self, sigma: float) -> int:
        """Largest coherence distance whose damping ``exp(-d^2 sigma/2)`` exceeds the term budget."""
        threshold = -2.0 * math.log(self.term_budget)
        if sigma * self.d_max**2 <= threshold:
            return self.d_max
        return max(1, int(math.ceil(math.sqrt(threshold / sigma))))


def _check_index(name, k):
    if int(k) != k or k < 0:
        raise DomainError(f"{name} must be a nonnegative integer, got {k!r}")


_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_error(n: float) -> float:
    """``log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)]``."""
    if n <= 15.0:
        return math.lgamma(n + 1.0) - (n + 0.5) * math.log(n) + n - _HALF_LOG_2PI
    nn = n * n
    return (1.0 / 12 - (1.0 / 360 - (1.0 / 1260 - (1.0 / 1680 - 1.0 / (1188 * nn)) / nn) / nn) / nn) / n


def _deviance(x: float, mean: float) -> float:
    """``x log(x / mean) + mean - x`` without cancellation near ``x == mean``."""
    if abs(x - mean) < 0.1 * (x + mean):
        v = (x - mean) / (x + mean)
        total = (x - mean) * v
        ej = 2.0 * x * v
        vv = v * v
        j = 1
        while True:
            ej *= vv
            term = ej / (2 * j + 1)
            if total + term == total:
                return total
            total += term
            j += 1
    return x * math.log(x / mean) + mean - x


def log_poisson(n: int, nbar: float) -> float:
    """``log(exp(-nbar) nbar**n / n!)`` with Loader's saddle-point split."""
    if n == 0:
        return -nbar
    if nbar == 0.0:
        return -math.inf
    return -_stirling_error(float(n)) - _deviance(float(n), nbar) - _HALF_LOG_2PI - 0.5 * math.log(n)


def coherent_element(nbar: float, n: int, m: int) -> float:
    """``<n|alpha><alpha|m> = exp(-nbar) nbar**((n+m)/2) / sqrt(n! m!)`` for real alpha.

    Evaluated as ``sqrt(p_n p_m)`` from accurate Poisson log-probabilities,
    so it neither overflows nor loses digits for indices in the hundreds.
    """
    if not (nbar >= 0.0):
        raise DomainError(f"nbar must be >= 0, got {nbar!r}")
    _check_index("n", n)
    _check_index("m", m)
    if nbar == 0.0:
        return 1.0 if n == 0 and m == 0 else 0.0
    return math.exp(0.5 * (log_poisson(n, nbar) + log_poisson(m, nbar)))


def log_gamma_half(x: float) -> float:
    """``log Gamma(x)`` for ``x = 1 + (n+m)/2``, i.e. a positive integer or half-integer.

    Integers use ``log((k-1)!)`` and half-integers the duplication identity
    ``Gamma(k + 1/2) = (2k)! sqrt(pi) / (4**k k!)``, both via ``lgamma`` of
    integers, which is exact to a few ulp.
    """
    twice = 2.0 * x
    if not (x > 0.0) or twice != round(twice):
        raise DomainError(f"log_gamma_half needs a positive (half-)integer, got {x!r}")
    if x == int(x):
        return math.lgamma(x)
    k = int(x - 0.5)
    return (
        math.lgamma(2.0 * k + 1.0)
        + 0.5 * math.log(math.pi)
        - k * math.log(4.0)
        - math.lgamma(k + 1.0)
    )


def _sqrt_tail(nbar: float, start: int) -> float:
    # sum_{m >= start} sqrt(Poisson(nbar, m)); terms decay faster than geometric past the mode
    total = 0.0
    m = start
    while True:
        term = math.sqrt(coherent_element(nbar, m, m))
        total += term
        if m > nbar and term < 1e-18 * max(total, 1e-300):
            return total
        m += 1


def choose_truncation(nbar: float, epsilon: float = DEFAULT_EPSILON) -> TruncationPolicy:
    """Pick Fock cutoffs so every discarded contribution stays below ``epsilon``.

    The coherences satisfy ``|A_{n,m} rho_{n,m}| <= sqrt(p_n p_m)`` for both
    receivers (``A_{n,m} <= 1`` by log-convexity of Gamma), so the total
    weight of dropped elements is bounded by
    ``sum_n sqrt(p_n) * sum_{m > n_max} sqrt(p_m)``. ``n_max`` is the first
    index where that bound and the plain Poisson tail both fall below
    ``epsilon``, and never less than ``max(10, nbar + 10 sqrt(nbar + 1))``.
    """
    if not (nbar >= 0.0) or not math.isfinite(nbar):
        raise DomainError(f"nbar must be finite and >= 0, got {nbar!r}")
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")

    n_max = max(10, int(math.ceil(nbar + 10.0 * math.sqrt(nbar + 1.0))))
    if nbar == 0.0:
        return TruncationPolicy(epsilon, n_max, n_max)

    total_sqrt = _sqrt_tail(nbar, 0)
    while True:
        tail_mass = stats.poisson.sf(n_max, nbar)
        if tail_mass < epsilon and total_sqrt * _sqrt_tail(nbar, n_max + 1) < epsilon:
            return TruncationPolicy(epsilon, n_max, n_max)
        n_max += 1
