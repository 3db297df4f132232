import math

import numpy as np
import pytest

from phasekey import DomainError
from phasekey.noise import (
    OUNoise,
    StaticNoise,
    accumulated_variance,
    sigma_limit_correlated,
    sigma_limit_markovian,
    sigma_ou,
    sigma_ou_quadrature,
    sigma_static,
)

GRID = [
    (lam, tau_e, delta, tau)
    for lam in (0.5, 1.0, 2.0)
    for tau_e in (0.1, 1.0, 10.0)
    for delta in (0.0, 1.0, 5.5, 10.0)
    for tau in (0.1, 1.0, 5.0)
]


def test_static():
    assert sigma_static(0.0) == 0.0
    assert sigma_static(1.5) == 1.5
    assert StaticNoise().sigma(2.0) == 2.0
    with pytest.raises(DomainError):
        sigma_static(-1.0)


def test_static_is_markovian_limit():
    assert sigma_ou(OUNoise(1.0, 1e-6, 0.0), 1.0) == pytest.approx(sigma_static(1.0), abs=1e-3)


def test_ou_zero_time():
    for lam, tau_e, delta, _ in GRID:
        noise = OUNoise(lam, tau_e, delta)
        assert sigma_ou(noise, 0.0) == 0.0
        assert sigma_ou_quadrature(noise, 0.0) == 0.0


def test_resonant_closed_form():
    for tau_e in (0.1, 1.0, 10.0):
        for tau in (0.01, 0.3, 4.0):
            want = 1.3 * (tau - tau_e * (1 - math.exp(-tau / tau_e)))
            assert sigma_ou(OUNoise(1.3, tau_e, 0.0), tau) == pytest.approx(want, rel=1e-10)


def test_resonant_quadrature_value():
    assert sigma_ou_quadrature(OUNoise(1.0, 1.0, 0.0), 1.0) == pytest.approx(math.exp(-1), rel=1e-12)


def test_detuned_against_double_integral(reference):
    for row in reference["sigma_ou"]:
        noise = OUNoise(row["lam"], row["tau_e"], row["delta"])
        assert sigma_ou(noise, row["tau"]) == pytest.approx(row["value"], rel=1e-8)
        assert sigma_ou_quadrature(noise, row["tau"]) == pytest.approx(row["value"], rel=1e-8)


@pytest.mark.parametrize("lam,tau_e,delta,tau", GRID)
def test_closed_form_vs_quadrature(lam, tau_e, delta, tau):
    noise = OUNoise(lam, tau_e, delta)
    assert sigma_ou(noise, tau) == pytest.approx(sigma_ou_quadrature(noise, tau), rel=1e-8)


def test_small_time_accuracy():
    noise = OUNoise(1.0, 10.0, 3.0)
    for tau in (1e-6, 1e-4, 1e-2):
        assert sigma_ou(noise, tau) == pytest.approx(sigma_ou_quadrature(noise, tau), rel=1e-6)


def test_nonnegative_and_resonant_monotone():
    taus = np.linspace(0, 8, 401)
    for lam, tau_e, delta, _ in GRID:
        values = np.array([sigma_ou(OUNoise(lam, tau_e, delta), t) for t in taus])
        assert values.min() >= 0.0
        if delta == 0.0:
            assert np.all(np.diff(values) >= 0.0)


def test_detuned_dips():
    taus = np.linspace(0, 5, 501)
    values = np.array([sigma_ou(OUNoise(1.0, 1.0, 10.0), t) for t in taus])
    assert np.any(np.diff(values) < 0.0)


def test_markovian_limit():
    noise = OUNoise(1.0, 1e-4, 0.0)
    for tau in np.linspace(0, 5, 51):
        assert abs(sigma_ou(noise, tau) - tau) < 1e-3
    assert sigma_limit_markovian(OUNoise(2.0, 0.1), 3.0) == 6.0


def test_correlated_limit():
    assert sigma_limit_correlated(OUNoise(1.0, 1.0), 0.0) == 0.0
    assert sigma_limit_correlated(OUNoise(3.0, 1e3), 1.0) == pytest.approx(1.5e-3, rel=1e-15)
    noise = OUNoise(1.0, 100.0, 0.0)
    exact = sigma_ou(noise, 0.5)
    assert abs(exact - sigma_limit_correlated(noise, 0.5)) / exact < 0.01


@pytest.mark.parametrize("bad", [dict(lam=0.0), dict(tau_e=-1.0), dict(delta=float("nan"))])
def test_invalid_noise(bad):
    with pytest.raises(DomainError):
        OUNoise(**bad)


def test_accumulated_variance():
    assert accumulated_variance(None, 3.0) == 0.0
    assert accumulated_variance(StaticNoise(), 3.0) == 3.0
    noise = OUNoise(1.0, 2.0, 0.5)
    assert accumulated_variance(noise, 3.0) == sigma_ou(noise, 3.0)
