"""Inner loops of the outcome-probability series.

Each kernel exists twice: a numba ``@njit`` version and a vectorised numpy
version. ``PHASEKEY_DISABLE_NUMBA=1`` (or a missing numba) selects numpy.
Both must agree to round-off; ``benchmarks/bench_kernels.py`` times them.
"""

import math
import os

import numpy as np
from scipy.special import gammaln

_DISABLED = os.environ.get("PHASEKEY_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


def _log_factorials(n_max):
    out = np.empty(n_max + 1)
    for k in range(n_max + 1):
        out[k] = math.lgamma(k + 1.0)
    return out


# --- coherence sums: c_d = sum_n A_{n,n+d} rho_{n,n+d} -----------------------

def coherence_sums_numpy(nbar, n_max, d_max, husimi):
    c = np.zeros(d_max + 1)
    if nbar == 0.0:
        c[0] = 1.0
        return c
    log_nbar = math.log(nbar)
    lf = _log_factorials(n_max)
    for d in range(d_max + 1):
        n = np.arange(n_max - d + 1, dtype=np.float64)
        lf_n = lf[: n_max - d + 1]
        lf_m = lf[d:]
        if husimi:
            log_terms = (
                -nbar
                + gammaln(1.0 + n + 0.5 * d)
                + (n + 0.5 * d) * log_nbar
                - (lf_n + lf_m)
            )
        else:
            log_terms = -nbar + (n + 0.5 * d) * log_nbar - 0.5 * (lf_n + lf_m)
        c[d] = np.exp(log_terms).sum()
    return c


def _coherence_sums_py(nbar, n_max, d_max, husimi):
    c = np.zeros(d_max + 1)
    if nbar == 0.0:
        c[0] = 1.0
        return c
    log_nbar = math.log(nbar)
    lf = np.empty(n_max + 1)
    for k in range(n_max + 1):
        lf[k] = math.lgamma(k + 1.0)
    for d in range(d_max + 1):
        acc = 0.0
        for n in range(n_max - d + 1):
            m = n + d
            if husimi:
                lt = -nbar + math.lgamma(1.0 + n + 0.5 * d) + (n + 0.5 * d) * log_nbar - (lf[n] + lf[m])
            else:
                lt = -nbar + (n + 0.5 * d) * log_nbar - 0.5 * (lf[n] + lf[m])
            acc += math.exp(lt)
        c[d] = acc
    return c


# --- bin probabilities: q(s) = (1 + 2 sum_d w_d cos(d theta_s)) / N ------------

def bin_probabilities_numpy(weights, N, offset):
    d = np.arange(1, weights.shape[0], dtype=np.float64)
    centers = 2.0 * np.pi * np.arange(N) / N + offset
    phases = np.cos(np.outer(centers, d))
    return (1.0 + 2.0 * phases @ weights[1:]) / N


def _bin_probabilities_py(weights, N, offset):
    q = np.empty(N)
    for s in range(N):
        center = 2.0 * math.pi * s / N + offset
        acc = 0.0
        for d in range(1, weights.shape[0]):
            acc += weights[d] * math.cos(d * center)
        q[s] = (1.0 + 2.0 * acc) / N
    return q


if HAS_NUMBA:
    coherence_sums_numba = njit(cache=True)(_coherence_sums_py)
    bin_probabilities_numba = njit(cache=True)(_bin_probabilities_py)
    coherence_sums = coherence_sums_numba
    bin_probabilities = bin_probabilities_numba
else:
    coherence_sums_numba = None
    bin_probabilities_numba = None
    coherence_sums = coherence_sums_numpy
    bin_probabilities = bin_probabilities_numpy
