"""Covariant phase receivers and the outcome distribution q(s).

For a phase-keyed alphabet of ``N`` letters and a covariant POVM, the
conditional probabilities only depend on the bin distance ``s = (j - k) mod N``.
With real coherent amplitude and dephasing strength ``sigma``::

    q(s) = (1/N) {1 + 2 sum_{d>=1} sinc(pi d / N) exp(-d^2 sigma / 2) c_d cos(d theta_s)}

where ``c_d = sum_n A_{n,n+d} rho_{n,n+d}`` and ``theta_s`` is the center of
bin ``s`` (``2 pi s / N`` plus the convention offset).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError, NumericalError
from .fock import TruncationPolicy, choose_truncation, log_gamma_half

NEGATIVE_TOLERANCE = 1e-9
NORMALIZATION_TOLERANCE = 1e-9


class ReceiverKind(str, enum.Enum):
    CANONICAL = "canonical"
    HUSIMI_Q = "husimi-q"

    @classmethod
    def parse(cls, value) -> "ReceiverKind":
        if isinstance(value, cls):
            return value
        aliases = {"c": cls.CANONICAL, "ideal": cls.CANONICAL, "q": cls.HUSIMI_Q, "husimi": cls.HUSIMI_Q}
        key = str(value).strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown receiver {value!r}; expected 'canonical' or 'husimi-q'") from None


@dataclass(frozen=True)
class BinConvention:
    """Placement of the decision bins relative to the encoded phases.

    ``fraction`` is the shift of every bin center in units of the bin width
    ``2 pi / N``. ``0`` centers bin ``j`` on ``phi_j``; ``0.5`` puts ``phi_j``
    on the lower bin edge and turns ``cos(d theta_s)`` into
    ``cos[pi d (2s + 1)/N]``.
    """

    fraction: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.fraction < 1.0):
            raise DomainError(f"bin offset fraction must lie in [0, 1), got {self.fraction!r}")

    def offset(self, N: int) -> float:
        """Offset of the bin centers in radians, in ``[0, 2 pi / N)``."""
        return 2.0 * math.pi * self.fraction / N

    @property
    def name(self) -> str:
        if self.fraction == 0.0:
            return "centered"
        if self.fraction == 0.5:
            return "half-bin"
        return f"offset={self.fraction:g}"


CENTERED = BinConvention(0.0)
HALF_BIN = BinConvention(0.5)


@dataclass(frozen=True)
class PhaseAlphabet:
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError(f"alphabet size must be an integer >= 2, got {self.N!r}")

    @property
    def phases(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.N) / self.N

    @property
    def half_width(self) -> float:
        return math.pi / self.N

    def bins(self, convention: BinConvention = CENTERED) -> np.ndarray:
        """``(N, 2)`` array of ``[lower, upper)`` bin edges."""
        centers = self.phases + convention.offset(self.N)
        return np.stack([centers - self.half_width, centers + self.half_width], axis=1)


@dataclass(frozen=True)
class ReceiverKernel:
    """Matrix ``A_{n,m}`` of the covariant POVM ``pi(theta)``."""

    kind: ReceiverKind

    def element(self, n: int, m: int) -> float:
        if n < 0 or m < 0:
            raise DomainError("Fock indices must be nonnegative")
        if self.kind is ReceiverKind.CANONICAL:
            return 1.0
        log_a = log_gamma_half(1.0 + 0.5 * (n + m)) - 0.5 * (math.lgamma(n + 1.0) + math.lgamma(m + 1.0))
        return math.exp(log_a)

    def matrix(self, n_max: int) -> np.ndarray:
        idx = range(n_max + 1)
        return np.array([[self.element(n, m) for m in idx] for n in idx])


@dataclass(frozen=True)
class OutcomeDistribution:
    q: np.ndarray
    receiver: ReceiverKind
    nbar: float
    sigma: float
    convention: BinConvention = CENTERED
    source: str = "series"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        q = np.array(self.q, dtype=np.float64)
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def N(self) -> int:
        return self.q.shape[0]

    def __len__(self):
        return self.N

    def __getitem__(self, s):
        return self.q[s]


def resolution_function(d: int, s: int, alphabet: PhaseAlphabet, convention: BinConvention = CENTERED) -> complex:
    """``(1/2 pi) int_{bin s} exp(-i d theta) d theta``."""
    N = alphabet.N
    if not 0 <= s < N:
        raise DomainError(f"bin index must lie in [0, {N}), got {s}")
    if d == 0:
        return complex(1.0 / N)
    center = alphabet.phases[s] + convention.offset(N)
    amplitude = math.sin(d * alphabet.half_width) / (math.pi * d)
    return amplitude * complex(math.cos(d * center), -math.sin(d * center))


@lru_cache(maxsize=256)
def _cached_coherence_sums(nbar, n_max, d_max, husimi):
    c = _kernels.coherence_sums(float(nbar), int(n_max), int(d_max), bool(husimi))
    c.setflags(write=False)
    return c


def coherence_sums(nbar: float, kind: ReceiverKind, trunc: TruncationPolicy) -> np.ndarray:
    """``c_d = sum_n A_{n,n+d} rho_{n,n+d}`` for ``d = 0..trunc.d_max``."""
    return _cached_coherence_sums(nbar, trunc.n_max, trunc.d_max, kind is ReceiverKind.HUSIMI_Q)


def finalize_probabilities(q: np.ndarray) -> np.ndarray:
    """Clamp round-off negatives and renormalize, refusing anything larger."""
    lowest = q.min()
    if lowest < -NEGATIVE_TOLERANCE:
        raise NumericalError("negative outcome probability beyond round-off", {"min_q": float(lowest)})
    q = np.clip(q, 0.0, None)
    total = q.sum()
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise NumericalError("outcome probabilities do not sum to one", {"sum_q": float(total)})
    return q / total


def outcome_distribution(
    kind,
    nbar: float,
    N: int,
    sigma: float,
    trunc: TruncationPolicy | None = None,
    convention: BinConvention = CENTERED,
) -> OutcomeDistribution:
    kind = ReceiverKind.parse(kind)
    alphabet = PhaseAlphabet(N)
    if not (sigma >= 0.0):
        raise DomainError(f"sigma must be >= 0, got {sigma!r}")
    if not (nbar >= 0.0):
        raise DomainError(f"nbar must be >= 0, got {nbar!r}")
    if trunc is None:
        trunc = choose_truncation(nbar)

    c = coherence_sums(nbar, kind, trunc)
    d_cut = trunc.distance_cutoff(sigma) if math.isfinite(sigma) else 0
    d = np.arange(d_cut + 1, dtype=np.float64)
    weights = np.sinc(d / alphabet.N) * np.exp(-0.5 * d * d * sigma) * c[: d_cut + 1]
    q = _kernels.bin_probabilities(weights, alphabet.N, convention.offset(alphabet.N))
    return OutcomeDistribution(
        finalize_probabilities(q),
        kind,
        float(nbar),
        float(sigma),
        convention,
        meta={"n_max": trunc.n_max, "d_cut": d_cut, "epsilon": trunc.epsilon, "backend": _kernels.BACKEND},
    )


def q_canonical(nbar, N, sigma, trunc=None, convention=CENTERED) -> OutcomeDistribution:
    return outcome_distribution(ReceiverKind.CANONICAL, nbar, N, sigma, trunc, convention)


def q_husimi(nbar, N, sigma, trunc=None, convention=CENTERED) -> OutcomeDistribution:
    return outcome_distribution(ReceiverKind.HUSIMI_Q, nbar, N, sigma, trunc, convention)


def conditional_matrix(q) -> np.ndarray:
    """Channel matrix ``P[k, j] = p(j|k) = q((j - k) mod N)``."""
    values = np.asarray(q.q if isinstance(q, OutcomeDistribution) else q, dtype=np.float64)
    N = values.shape[0]
    k = np.arange(N)
    P = values[(k[None, :] - k[:, None]) % N]
    for axis in (0, 1):
        err = np.abs(P.sum(axis=axis) - 1.0).max()
        if err > NORMALIZATION_TOLERANCE:
            raise DomainError(f"channel matrix margins deviate from 1 by {err:.3g}")
    return P
