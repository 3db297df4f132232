import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from phasekey import DomainError, NumericalError
from phasekey.oracle import q_by_integration
from phasekey.receiver import (
    CENTERED,
    HALF_BIN,
    BinConvention,
    PhaseAlphabet,
    ReceiverKernel,
    ReceiverKind,
    conditional_matrix,
    finalize_probabilities,
    outcome_distribution,
    q_canonical,
    q_husimi,
    resolution_function,
)

KINDS = [ReceiverKind.CANONICAL, ReceiverKind.HUSIMI_Q]


def test_alphabet():
    a = PhaseAlphabet(8)
    assert a.phases[0] == 0.0
    np.testing.assert_allclose(np.diff(a.phases), 2 * np.pi / 8)
    for conv in (CENTERED, HALF_BIN, BinConvention(0.3)):
        edges = a.bins(conv)
        np.testing.assert_allclose(edges[1:, 0], edges[:-1, 1])
        assert edges[-1, 1] - edges[0, 0] == pytest.approx(2 * np.pi)
    with pytest.raises(DomainError):
        PhaseAlphabet(1)
    with pytest.raises(DomainError):
        BinConvention(1.0)


def test_receiver_kernel():
    c = ReceiverKernel(ReceiverKind.CANONICAL)
    q = ReceiverKernel(ReceiverKind.HUSIMI_Q)
    assert c.element(3, 9) == 1.0
    for n in range(60):
        assert q.element(n, n) == pytest.approx(1.0, rel=1e-13)
    A = q.matrix(30)
    np.testing.assert_array_equal(A, A.T)
    assert np.all(A <= 1.0 + 1e-13)
    assert q.element(0, 1) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)


def test_resolution_function(reference):
    a = PhaseAlphabet(20)
    for s in range(20):
        assert resolution_function(0, s, a) == pytest.approx(1 / 20)
    f = resolution_function(1, 0, a)
    assert f.real == pytest.approx(np.sinc(1 / 20) / 20, rel=1e-14)
    assert f.imag == 0.0
    (re,) = reference["resolution_function_re"]
    (im,) = reference["resolution_function_im"]
    assert f.real == pytest.approx(re["value"], rel=1e-12)
    assert f.imag == pytest.approx(im["value"], abs=1e-15)


@pytest.mark.parametrize("conv", [CENTERED, HALF_BIN, BinConvention(0.37)])
def test_resolution_function_quadrature(conv):
    a = PhaseAlphabet(7)
    for d in (-3, 1, 2, 5):
        for s, (lo, hi) in enumerate(a.bins(conv)):
            re = integrate.quad(lambda t: math.cos(d * t), lo, hi)[0] / (2 * math.pi)
            im = integrate.quad(lambda t: -math.sin(d * t), lo, hi)[0] / (2 * math.pi)
            assert resolution_function(d, s, a, conv) == pytest.approx(complex(re, im), abs=1e-14)


@pytest.mark.parametrize("d", range(0, 8))
def test_resolution_function_sums_to_delta(d):
    a = PhaseAlphabet(20)
    total = sum(resolution_function(d, s, a) for s in range(20))
    assert abs(total - (1.0 if d == 0 else 0.0)) < 1e-14


@pytest.mark.parametrize("kind", KINDS)
def test_vacuum_is_uniform(kind):
    for sigma in (0.0, 0.7):
        np.testing.assert_allclose(outcome_distribution(kind, 0.0, 13, sigma).q, 1 / 13, rtol=1e-15)


@pytest.mark.parametrize("kind", KINDS)
def test_fully_dephased_is_uniform(kind):
    np.testing.assert_allclose(outcome_distribution(kind, 3.0, 20, 1e4).q, 1 / 20, atol=1e-12)


def test_noiseless_peak_matches_oracle(reference):
    rows = {(r["name"], r["s"]): r["value"] for k in ("q_canonical", "q_husimi-q") for r in reference[k]}
    qc, qq = q_canonical(3.0, 20, 0.0).q, q_husimi(3.0, 20, 0.0).q
    for s in range(20):
        assert qc[s] == pytest.approx(rows[("q_canonical", s)], abs=1e-10)
        assert qq[s] == pytest.approx(rows[("q_husimi-q", s)], abs=1e-10)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("conv", [CENTERED, HALF_BIN])
def test_series_matches_integration_offgrid(kind, conv):
    for nbar, N, sigma in [(0.4, 5, 0.3), (7.0, 9, 0.02), (2.0, 33, 0.0)]:
        series = outcome_distribution(kind, nbar, N, sigma, convention=conv).q
        oracle = q_by_integration(nbar, N, sigma, kind, conv).q
        np.testing.assert_allclose(series, oracle, atol=1e-9)


def test_half_bin_matches_odd_harmonic_series():
    # (1/N){1 + 2 e^{-nbar} sum_n sum_d sinc(pi d/N) e^{-d^2 tau/2} cos[pi d (2s+1)/N] nbar^{n+d/2}/sqrt(n!(n+d)!)}
    nbar, N, tau = 2.0, 10, 0.2
    q = np.zeros(N)
    for s in range(N):
        acc = 0.0
        for n in range(60):
            for d in range(1, 60):
                acc += (
                    np.sinc(d / N) * math.exp(-0.5 * d * d * tau) * math.cos(math.pi * d * (2 * s + 1) / N)
                    * math.exp((n + d / 2) * math.log(nbar) - 0.5 * (math.lgamma(n + 1) + math.lgamma(n + d + 1)))
                )
        q[s] = (1 + 2 * math.exp(-nbar) * acc) / N
    np.testing.assert_allclose(q_canonical(nbar, N, tau, convention=HALF_BIN).q, q, atol=1e-13)


@given(
    st.sampled_from(KINDS),
    st.floats(0.0, 30.0),
    st.integers(2, 64),
    st.floats(0.0, 5.0),
)
@settings(max_examples=80, deadline=None)
def test_normalization_and_symmetry(kind, nbar, N, sigma):
    q = outcome_distribution(kind, nbar, N, sigma).q
    assert abs(q.sum() - 1.0) < 1e-9
    assert q.min() >= 0.0
    np.testing.assert_allclose(q[1:], q[1:][::-1], atol=1e-12)


@pytest.mark.parametrize("kind", KINDS)
def test_peak_non_increasing_in_sigma(kind):
    peaks = [outcome_distribution(kind, 3.0, 20, s).q[0] for s in np.linspace(0, 4, 41)]
    assert np.all(np.diff(peaks) <= 1e-15)


@pytest.mark.parametrize("nbar", [0.5, 1.0, 3.0, 8.0])
@pytest.mark.parametrize("sigma", [0.0, 0.3, 1.0])
def test_husimi_peak_below_canonical(nbar, sigma):
    assert q_husimi(nbar, 20, sigma).q[0] <= q_canonical(nbar, 20, sigma).q[0]


def test_negative_sigma_rejected():
    with pytest.raises(DomainError):
        q_canonical(1.0, 4, -0.1)


def test_finalize_probabilities():
    q = finalize_probabilities(np.array([0.5, 0.5 + 1e-12, -1e-12]))
    assert q.min() == 0.0 and q.sum() == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(NumericalError):
        finalize_probabilities(np.array([0.6, 0.5, -0.1]))
    with pytest.raises(NumericalError):
        finalize_probabilities(np.array([0.6, 0.5]))


def test_conditional_matrix(reference):
    P = conditional_matrix(np.full(5, 0.2))
    np.testing.assert_allclose(P, 0.2)
    np.testing.assert_array_equal(conditional_matrix(np.eye(6)[0]), np.eye(6))

    q = q_canonical(1.0, 4, 0.5)
    P = conditional_matrix(q)
    for row in reference["channel_matrix"]:
        assert P[row["k"], row["j"]] == pytest.approx(row["value"], abs=1e-6)
    for k in range(4):
        for j in range(4):
            assert P[k, j] == q.q[(j - k) % 4]
    np.testing.assert_allclose(P.sum(axis=0), 1.0, atol=1e-9)
    np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-9)


def test_distribution_is_immutable():
    q = q_canonical(1.0, 4, 0.0)
    with pytest.raises(ValueError):
        q.q[0] = 1.0
    assert q.N == 4 and len(q) == 4
