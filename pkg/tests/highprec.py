#!/usr/bin/env python3
"""Independent high-precision reference values.

Recomputes every regression constant with 50-digit mpmath arithmetic,
straight from the defining formulas and the production parameters, with no
imports from the package under test.  Run directly to print the table:

    python3 tests/highprec.py
"""

from __future__ import annotations

from mpmath import coth, exp, expm1, log, mp, mpf, pi, sqrt

mp.dps = 50

HBAR = mpf("1.054571817e-34")
KB = mpf("1.380649e-23")

OMEGA1 = mpf("4e6")
OMEGA_C = mpf("3e6")
OMEGA_MIN = mpf("0.026e6")
OMEGA_MAX = mpf("20e6")
ETA = mpf("1e-3")
T_A0 = mpf("10e-6")
T_B0 = mpf("50e-6")
N = 4000


def _entropy_kb(c):
    return (c + 1) / 2 * log((c + 1) / 2) - (c - 1) / 2 * log((c - 1) / 2)


def compute() -> dict[str, float]:
    delta_omega = (OMEGA_MAX - OMEGA_MIN) / (N - 1)
    gamma = pi * ETA * OMEGA1 * exp(-OMEGA1 / OMEGA_C)
    t1 = 2 * pi / delta_omega
    nbar = 1 / expm1(HBAR * OMEGA1 / (KB * T_B0))
    c1_initial = coth(HBAR * OMEGA1 / (2 * KB * T_A0))
    c1_equilibrium = coth(HBAR * OMEGA1 / (2 * KB * T_B0))
    # one relaxation time, c1 = c_inf + (c_0 - c_inf)/e
    c1_relax = c1_equilibrium + (c1_initial - c1_equilibrium) / exp(1)
    # coupling of the bath mode sitting exactly at 4 MHz
    g_resonant = sqrt(ETA * delta_omega * OMEGA1 * exp(-OMEGA1 / OMEGA_C))
    energy_equilibrium = HBAR * OMEGA1 * c1_equilibrium / 2
    partition_equilibrium = sqrt(c1_equilibrium**2 - 1) / 2
    entropy_equilibrium = _entropy_kb(c1_equilibrium)
    pivn_zero = (
        HBAR
        * OMEGA1
        * gamma
        * (1 / T_B0 - 1 / T_A0)
        * (c1_initial - c1_equilibrium)
        / KB
    )
    return {
        "delta_omega_rad_per_s": float(delta_omega),
        "Gamma_per_s": float(gamma),
        "relaxation_time_us": float(1 / (2 * gamma) * mpf("1e6")),
        "recurrence_time_us": float(t1 * mpf("1e6")),
        "nbar": float(nbar),
        "sigma11_initial": float(c1_initial),
        "sigma11_equilibrium": float(c1_equilibrium),
        "sigma11_one_relaxation_time": float(c1_relax),
        "coupling_at_resonance_rad_per_s": float(g_resonant),
        "energy_equilibrium_J": float(energy_equilibrium),
        "partition_function_equilibrium": float(partition_equilibrium),
        "entropy_equilibrium_kb": float(entropy_equilibrium),
        "pivn_initial_kb_per_s": float(pivn_zero),
    }


REFERENCE = compute()


def main() -> None:
    for name, value in REFERENCE.items():
        print(f"{name:36s} {value:.10g}")


if __name__ == "__main__":
    main()
