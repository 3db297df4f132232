"""Data tables for the standard performance plots.

Every generator returns a list of flat rows; the ``panel`` column tells the
sub-plots apart. Bins default to the half-bin offset.
"""

from __future__ import annotations

import numpy as np

from .fock import choose_truncation
from .infotheory import (
    CapacityParams,
    beta_threshold,
    capacity_coherent,
    capacity_photon_number,
    channel_mi,
)
from .noise import OUNoise
from .receiver import HALF_BIN, BinConvention, ReceiverKind

C, Q = ReceiverKind.CANONICAL, ReceiverKind.HUSIMI_Q
NBARS = (1.0, 2.0, 3.0)

FIG2_TAUS = np.linspace(0.0, 3.0, 50)
FIG3_ALPHABETS = tuple(range(2, 101))
FIG3_NBARS = np.linspace(0.05, 5.0, 100)
FIG3_ETAS = np.linspace(0.05, 1.0, 20)
FIG4_DETUNINGS = (3.5, 4.5, 6.0, 10.0)
FIG4_TAUS = np.linspace(0.0, 5.0, 200)
FIG4_CONTOUR_TAUS = np.linspace(0.0, 5.0, 51)
FIG4_CONTOUR_DETUNINGS = np.linspace(0.0, 12.0, 49)
FIG4_CONTOUR_TAU_ES = np.logspace(-1.0, 1.0, 41)


def fig2(convention: BinConvention = HALF_BIN, N: int = 20):
    rows = []
    for nbar in NBARS:
        trunc = choose_truncation(nbar)
        for tau in FIG2_TAUS:
            i_c = channel_mi(C, nbar, N, tau, trunc, convention)
            i_q = channel_mi(Q, nbar, N, tau, trunc, convention)
            for panel, value in (("I_C", i_c), ("I_Q", i_q), ("ratio", i_q / i_c)):
                rows.append({"panel": panel, "n": N, "nbar": nbar, "tau": float(tau), "value": value})
    return rows


def _gamma_row(panel, N, nbar, convention, trunc=None):
    trunc = trunc or choose_truncation(nbar)
    c_phn = capacity_photon_number(nbar)
    c_coh = capacity_coherent(CapacityParams(1.0, nbar))
    return {
        "panel": panel,
        "n": N,
        "nbar": float(nbar),
        "gamma_c": channel_mi(C, nbar, N, 0.0, trunc, convention) / c_phn,
        "gamma_q": channel_mi(Q, nbar, N, 0.0, trunc, convention) / c_phn,
        "coh_over_phn": c_coh / c_phn,
    }


def fig3_upper(convention: BinConvention = HALF_BIN):
    rows = []
    for nbar in NBARS:
        trunc = choose_truncation(nbar)
        rows.extend(_gamma_row("gamma_vs_n", N, nbar, convention, trunc) for N in FIG3_ALPHABETS)
    rows.extend(_gamma_row("gamma_vs_nbar", 50, nbar, convention) for nbar in FIG3_NBARS)
    return rows


def fig3_lower(convention: BinConvention = HALF_BIN, N: int = 20):
    """Boundary ``tau*(eta)`` of the region where the phase channel beats the coherent one."""
    rows = []
    for kind, panel in ((C, "beta_C"), (Q, "beta_Q")):
        for nbar in NBARS:
            for eta in FIG3_ETAS:
                res = beta_threshold(kind, nbar, N, float(eta), convention=convention)
                rows.append({
                    "panel": panel, "n": N, "nbar": nbar, "eta": float(eta),
                    "tau_star": res.tau_star, "beta_at_zero": res.beta_at_zero,
                })
    return rows


def fig4(convention: BinConvention = HALF_BIN, N: int = 20, nbar: float = 3.0, lam: float = 1.0):
    trunc = choose_truncation(nbar)
    rows = []

    def point(panel, tau_e, delta, tau, kinds):
        sigma = OUNoise(lam, tau_e, delta).sigma(float(tau))
        row = {"panel": panel, "n": N, "nbar": nbar, "lambda": lam, "tau-e": float(tau_e),
               "delta": float(delta), "tau": float(tau), "sigma": sigma}
        for kind in kinds:
            row["I_C" if kind is C else "I_Q"] = channel_mi(kind, nbar, N, sigma, trunc, convention)
        rows.append(row)

    for delta in FIG4_DETUNINGS:
        for tau in FIG4_TAUS:
            point("detuning_sweep", 1.0, delta, tau, (C, Q))
    for delta in FIG4_CONTOUR_DETUNINGS:
        for tau in FIG4_CONTOUR_TAUS:
            point("contour_tau_delta", 1.0, delta, tau, (C,))
    for tau_e in FIG4_CONTOUR_TAU_ES:
        for tau in FIG4_CONTOUR_TAUS:
            point("contour_tau_tau_e", tau_e, 5.5, tau, (Q,))
    return rows


FIGURES = {
    "fig2": fig2,
    "fig3-upper": fig3_upper,
    "fig3-lower": fig3_lower,
    "fig4": fig4,
}
