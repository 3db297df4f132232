import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phasekey import DomainError
from phasekey.infotheory import (
    CapacityParams,
    asymptotic_mi,
    beta_threshold,
    capacity_coherent,
    capacity_photon_number,
    channel_mi,
    mutual_information,
    mutual_information_general,
    ratios,
)
from phasekey.receiver import (
    OutcomeDistribution,
    ReceiverKind,
    conditional_matrix,
    outcome_distribution,
    q_canonical,
)

C, Q = ReceiverKind.CANONICAL, ReceiverKind.HUSIMI_Q


def dist(values):
    return OutcomeDistribution(np.asarray(values, dtype=float), C, 0.0, 0.0)


def test_mi_extremes():
    assert mutual_information(dist(np.full(7, 1 / 7))).bits == pytest.approx(0.0, abs=1e-15)
    assert mutual_information(dist(np.eye(16)[0])).bits == 4.0


def test_mi_rejects_unnormalized():
    with pytest.raises(DomainError):
        mutual_information(dist([0.5, 0.4]))


def test_mi_against_general_double_sum(reference):
    (row,) = reference["mutual_information"]
    got = mutual_information(q_canonical(3.0, 20, 0.25)).bits
    assert got == pytest.approx(row["value"], abs=1e-9)


def test_general_mi_simple_channels():
    assert mutual_information_general(np.eye(8)) == pytest.approx(3.0, abs=1e-15)
    assert mutual_information_general(np.full((5, 5), 0.2)) == pytest.approx(0.0, abs=1e-15)
    # binary symmetric channel, flip 0.1
    bsc = np.array([[0.9, 0.1], [0.1, 0.9]])
    h = -(0.9 * math.log2(0.9) + 0.1 * math.log2(0.1))
    assert mutual_information_general(bsc, [0.5, 0.5]) == pytest.approx(1 - h, rel=1e-14)


def test_general_mi_dimension_checks():
    with pytest.raises(DomainError):
        mutual_information_general(np.eye(3), [0.5, 0.5])
    with pytest.raises(DomainError):
        mutual_information_general(np.ones(3) / 3)
    with pytest.raises(DomainError):
        mutual_information_general(np.full((2, 2), 0.3))


@given(st.sampled_from([C, Q]), st.floats(0.0, 10.0), st.integers(2, 40), st.floats(0.0, 3.0))
@settings(max_examples=60, deadline=None)
def test_circulant_reduction(kind, nbar, N, sigma):
    q = outcome_distribution(kind, nbar, N, sigma)
    bits = mutual_information(q).bits
    assert bits == pytest.approx(mutual_information_general(conditional_matrix(q)), abs=1e-12)
    assert 0.0 <= bits <= math.log2(N)


def test_circulant_reduction_example():
    q = q_canonical(1.0, 4, 0.1)
    assert mutual_information(q).bits == pytest.approx(mutual_information_general(conditional_matrix(q)), abs=1e-12)


def test_capacities():
    assert capacity_coherent(CapacityParams(1.0, 1.0)) == 1.0
    assert capacity_coherent(CapacityParams(1.0, 0.0)) == 0.0
    assert capacity_coherent(CapacityParams(0.5, 3.0)) == pytest.approx(math.log2(2.5), rel=1e-15)
    assert capacity_photon_number(1.0) == 2.0
    assert capacity_photon_number(0.0) == 0.0
    assert capacity_photon_number(3.0) == pytest.approx(8 - 3 * math.log2(3), rel=1e-14)
    assert capacity_photon_number(1e-300) == pytest.approx(0.0, abs=1e-290)
    with pytest.raises(DomainError):
        CapacityParams(1.5, 1.0)
    with pytest.raises(DomainError):
        capacity_photon_number(-1.0)


def test_ratios():
    params = CapacityParams(1.0, 1.0)
    r = ratios(2.0, 1.0, params)
    assert r.gamma_c == 1.0 and r.beta_c == 2.0
    assert r.gamma_q == 0.5 and r.beta_q == 1.0
    with pytest.raises(DomainError):
        ratios(1.0, 1.0, CapacityParams(0.0, 1.0))


def test_noiseless_ordering_against_coherent():
    i_c, i_q = channel_mi(C, 3.0, 50, 0.0), channel_mi(Q, 3.0, 50, 0.0)
    r = ratios(i_c, i_q, CapacityParams(1.0, 3.0))
    coh = capacity_coherent(CapacityParams(1.0, 3.0)) / capacity_photon_number(3.0)
    assert r.gamma_c > coh > r.gamma_q


def test_asymptotic():
    assert asymptotic_mi(0.0, 20, 0.0, C) == 0.0
    for N, tau in [(3, 0.0), (20, 1.0), (200, 2.5)]:
        ratio = asymptotic_mi(0.2, N, tau, Q) / asymptotic_mi(0.2, N, tau, C)
        assert ratio == pytest.approx(math.pi / 4, rel=1e-15)
    exact = channel_mi(C, 1e-3, 200, 0.0)
    assert exact == pytest.approx(asymptotic_mi(1e-3, 200, 0.0, C), rel=0.02)


def test_mi_decreases_with_static_noise():
    for kind in (C, Q):
        values = [channel_mi(kind, 2.0, 20, tau) for tau in np.linspace(0, 4, 81)]
        assert np.all(np.diff(values) <= 1e-14)


def test_beta_threshold_brackets_root():
    res = beta_threshold(C, 3.0, 20, 1.0)
    assert res.found
    c_coh = capacity_coherent(CapacityParams(1.0, 3.0))
    assert channel_mi(C, 3.0, 20, res.tau_star - 1e-3) / c_coh >= 1.0
    assert channel_mi(C, 3.0, 20, res.tau_star + 1e-3) / c_coh < 1.0


def test_beta_threshold_no_crossing():
    res = beta_threshold(C, 3.0, 20, 0.0)
    assert not res.found and res.beta_at_zero == math.inf
    # Q receiver at N=4 never beats the lossless coherent channel
    res = beta_threshold(Q, 1.0, 4, 1.0)
    assert not res.found and res.beta_at_zero <= 1.0


def test_beta_threshold_monotone_in_eta():
    taus = [beta_threshold(C, 2.0, 20, eta).tau_star for eta in (0.2, 0.4, 0.6, 0.8, 1.0)]
    assert all(t is not None for t in taus)
    assert np.all(np.diff(taus) < 0)


def test_beta_threshold_extends_interval():
    # tiny eta pushes the crossing far out in tau
    res = beta_threshold(C, 1.0, 20, 0.01, tau_max=1.0)
    assert res.found and res.tau_star > 1.0 and res.tau_max > 1.0
