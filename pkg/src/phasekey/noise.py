"""Accumulated phase variance sigma(tau) for static and Ornstein-Uhlenbeck dephasing.

Times are rescaled by the static noise rate, ``tau = Gamma t``. A Gaussian
phase-kick channel with variance ``sigma`` damps ``rho_{n,m}`` by
``exp(-sigma (n - m)^2 / 2)``; static dephasing is ``sigma = tau``.

The OU environment has kernel ``K(s1, s2) = (lam / 2 tau_E) exp(-|s1 - s2| / tau_E)``
and, with detuning ``delta``, gives

    sigma(tau) = int_0^tau int_0^tau cos[delta (s1 - s2)] K(s1, s2) ds1 ds2
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .errors import DomainError, NumericalError


def _check_tau(tau):
    if not (tau >= 0.0) or not math.isfinite(tau):
        raise DomainError(f"tau must be finite and >= 0, got {tau!r}")


@dataclass(frozen=True)
class StaticNoise:
    """Markovian phase diffusion; ``sigma(tau) = tau``."""

    kind = "static"

    def sigma(self, tau: float) -> float:
        return sigma_static(tau)


@dataclass(frozen=True)
class OUNoise:
    """Classical Ornstein-Uhlenbeck phase noise with Lorentzian spectrum.

    ``lam`` is the noise strength in units of Gamma, ``tau_e`` the
    environment correlation time and ``delta`` the carrier-environment
    detuning, both rescaled by Gamma.
    """

    lam: float = 1.0
    tau_e: float = 1.0
    delta: float = 0.0

    kind = "ou"

    def __post_init__(self):
        if not (self.lam > 0.0) or not math.isfinite(self.lam):
            raise DomainError(f"lambda must be finite and > 0, got {self.lam!r}")
        if not (self.tau_e > 0.0) or not math.isfinite(self.tau_e):
            raise DomainError(f"tau_E must be finite and > 0, got {self.tau_e!r}")
        if not math.isfinite(self.delta):
            raise DomainError(f"delta must be finite, got {self.delta!r}")

    def kernel(self, s1: float, s2: float) -> float:
        return 0.5 * self.lam / self.tau_e * math.exp(-abs(s1 - s2) / self.tau_e)

    def sigma(self, tau: float) -> float:
        return sigma_ou(self, tau)


def sigma_static(tau: float) -> float:
    _check_tau(tau)
    return float(tau)


def sigma_ou(noise: OUNoise, tau: float) -> float:
    """Closed-form sigma(tau) for the (detuned) OU environment.

    Grouped so the O(1) terms cancel through ``expm1``; the result keeps
    relative accuracy down to ``tau / tau_E ~ 1e-6``.
    """
    if not isinstance(noise, OUNoise):
        raise DomainError("sigma_ou needs an OUNoise")
    _check_tau(tau)
    if tau == 0.0:
        return 0.0
    a = noise.tau_e
    x = noise.delta * a
    r = tau / a
    wt = noise.delta * tau
    cos_wt, sin_wt = math.cos(wt), math.sin(wt)
    # exp(-r) cos(wt) - 1, without cancellation
    damped_cos_m1 = math.expm1(-r) * cos_wt - 2.0 * math.sin(0.5 * wt) ** 2
    bracket = (
        (r + damped_cos_m1)
        + x * x * (r + 1.0 - math.exp(-r) * cos_wt)
        - 2.0 * x * math.exp(-r) * sin_wt
    )
    value = noise.lam * a * bracket / (1.0 + x * x) ** 2
    return max(value, 0.0)


def sigma_ou_quadrature(noise: OUNoise, tau: float, epsrel: float = 1e-12) -> float:
    """sigma(tau) by direct numerical integration of the kernel.

    Substituting ``u = s1 - s2`` reduces the square to
    ``(lam / tau_E) int_0^tau (tau - u) cos(delta u) exp(-u / tau_E) du``,
    integrated with QUADPACK's oscillatory rule.
    """
    if not isinstance(noise, OUNoise):
        raise DomainError("sigma_ou_quadrature needs an OUNoise")
    _check_tau(tau)
    if tau == 0.0:
        return 0.0
    a = noise.tau_e

    def envelope(u):
        return (tau - u) * math.exp(-u / a)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if noise.delta == 0.0:
                value, abserr = integrate.quad(envelope, 0.0, tau, epsabs=0.0, epsrel=epsrel, limit=200)
            else:
                value, abserr = integrate.quad(
                    envelope, 0.0, tau, weight="cos", wvar=noise.delta,
                    epsabs=0.0, epsrel=epsrel, limit=200,
                )
        except integrate.IntegrationWarning as exc:
            raise NumericalError(
                "sigma quadrature did not converge",
                {"noise": noise, "tau": tau, "epsrel": epsrel, "quadpack": str(exc)},
            ) from exc
    return max(noise.lam / a * value, 0.0)


def sigma_limit_correlated(noise: OUNoise, tau: float) -> float:
    """Leading behaviour for ``tau << tau_E``: ``lam tau^2 / (2 tau_E)``."""
    _check_tau(tau)
    return 0.5 * noise.lam * tau * tau / noise.tau_e


def sigma_limit_markovian(noise: OUNoise, tau: float) -> float:
    """Leading behaviour for ``tau >> tau_E`` at resonance: ``lam tau``."""
    _check_tau(tau)
    return noise.lam * tau


def accumulated_variance(noise, tau: float) -> float:
    """sigma(tau) for any noise model (``None`` means noiseless)."""
    if noise is None:
        _check_tau(tau)
        return 0.0
    return noise.sigma(tau)
