"""Closed-form damped-oscillator reference dynamics and the conventional
entropy production.

In the weak-coupling Markovian regime the system coefficient obeys

    c_1(t) = coth(hw1/2kT_A0) e^{-2 Gamma t} + coth(hw1/2kT_B0) (1 - e^{-2 Gamma t}),

the analytic solution used here directly (the generator itself is never
integrated numerically; the system stays diagonal in its own Hamiltonian so
the commutator term drops).  The conventional rate built on the fixed
initial bath temperature is non-negative for all t; its gap to the total
thermodynamic rate is carried by the bath-temperature drifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constants import HBAR
from .model import thermal_coefficient
from .thermo import ThermoRecord, inverse_temperature

__all__ = [
    "GkslParams",
    "gksl_sigma11",
    "gksl_system_temperature",
    "von_neumann_epr",
    "von_neumann_epr_from_fluxes",
    "von_neumann_ep",
    "epr_difference",
    "ep_difference",
]


@dataclass(frozen=True)
class GkslParams:
    """Parameters of the damped-oscillator closed form."""

    omega1: float
    Gamma: float
    T_A0: float
    T_B0: float

    def __post_init__(self) -> None:
        if self.omega1 <= 0:
            raise ValueError("omega1 must be positive")
        if self.Gamma < 0:
            raise ValueError("Gamma must be non-negative")
        if self.T_A0 <= 0 or self.T_B0 <= 0:
            raise ValueError("temperatures must be positive")

    @property
    def coth_a(self) -> float:
        return thermal_coefficient(self.omega1, self.T_A0)

    @property
    def coth_b(self) -> float:
        return thermal_coefficient(self.omega1, self.T_B0)


def gksl_sigma11(p: GkslParams, t) -> float | np.ndarray:
    """System coefficient c_1(t) under the closed-form solution."""
    t = np.asarray(t, dtype=float)
    value = p.coth_b + (p.coth_a - p.coth_b) * np.exp(-2.0 * p.Gamma * t)
    return float(value) if value.ndim == 0 else value


def gksl_system_temperature(p: GkslParams, t) -> float | np.ndarray:
    """System temperature T_A(t) predicted by the closed form."""
    return inverse_temperature(gksl_sigma11(p, t), p.omega1)[1]


def von_neumann_epr(
    p: GkslParams,
    t,
    mode: str = "gksl",
    exact_sigma11=None,
) -> float | np.ndarray:
    """Conventional entropy production rate (J/K/s),

        Pi_vN = hbar*w1*Gamma (1/T_B0 - 1/T_A(t)) [c_1(t) - coth(hw1/2kT_B0)],

    a product of two same-sign factors, hence >= 0 for all t.  ``mode``
    chooses where c_1(t) comes from: the closed form ("gksl", default) or a
    caller-supplied exact series ("exact", via ``exact_sigma11``).
    """
    t = np.asarray(t, dtype=float)
    if mode == "gksl":
        c1 = np.asarray(gksl_sigma11(p, t))
    elif mode == "exact":
        if exact_sigma11 is None:
            raise ValueError("mode='exact' needs the exact sigma11 series")
        c1 = np.asarray(exact_sigma11, dtype=float)
        if c1.shape != t.shape:
            raise ValueError("exact sigma11 series must align with the time grid")
    else:
        raise ValueError(f"unknown Pi_vN mode {mode!r}")
    _, T_A = inverse_temperature(c1, p.omega1)
    with np.errstate(divide="ignore"):
        value = HBAR * p.omega1 * p.Gamma * (1.0 / p.T_B0 - 1.0 / np.asarray(T_A)) * (c1 - p.coth_b)
    return float(value) if value.ndim == 0 else value


def von_neumann_epr_from_fluxes(T_A, dEA_dt, dEB_dt, T_B0: float) -> float | np.ndarray:
    """Conventional rate in its defining flux form,
    (1/T_A) dE_A/dt + (1/T_B0) dE_B/dt, before any weak-coupling reduction.

    With exact fluxes this satisfies the identity
    Pi_vN - Pi_tot = sum_j (1/T_B0 - 1/T_j) dE_j/dt to machine precision.
    """
    T_A = np.asarray(T_A, dtype=float)
    value = np.asarray(dEA_dt) / T_A + np.asarray(dEB_dt) / T_B0
    return float(value) if value.ndim == 0 else value


def von_neumann_ep(p: GkslParams, entropy_A, energy_A) -> np.ndarray:
    """Conventional entropy production

        dS_vN(t) = S_A(t) - S_A(0) - (E_A(t) - E_A(0)) / T_B0

    from a system series whose first entry is t = 0."""
    S_A = np.asarray(entropy_A, dtype=float)
    E_A = np.asarray(energy_A, dtype=float)
    if S_A.shape != E_A.shape:
        raise ValueError("entropy and energy series must align")
    return (S_A - S_A[0]) - (E_A - E_A[0]) / p.T_B0


def epr_difference(record: ThermoRecord, p: GkslParams) -> float:
    """Exact gap Pi_vN - Pi_tot = sum_j (1/T_B0 - 1/T_j(t)) dE_j/dt over the
    bath modes (J/K/s)."""
    T_j = record.temperatures[1:]
    return float(np.sum((1.0 / p.T_B0 - 1.0 / T_j) * record.mode_fluxes))


def ep_difference(records: Sequence[ThermoRecord], p: GkslParams) -> np.ndarray:
    """Exact gap dS_vN - dS_tot for each record,

        (E_A(0) - E_A(t)) / T_B0 + sum_j [S_j(0) - S_j(t)],

    with records[0] the t = 0 baseline."""
    if len(records) == 0:
        raise ValueError("need at least the baseline record")
    base = records[0]
    if base.time != 0.0:
        raise ValueError("records[0] must be the t = 0 baseline")
    out = np.empty(len(records))
    for i, rec in enumerate(records):
        out[i] = (base.energies[0] - rec.energies[0]) / p.T_B0 + float(
            np.sum(base.entropies[1:] - rec.entropies[1:])
        )
    return out
