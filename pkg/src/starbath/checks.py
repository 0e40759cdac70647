"""Invariant checks shared by the validate job and the test suite.

Each check computes a residual and compares it against the tolerance the
corresponding invariant carries; ``default_suite`` runs them all on small
models with a seeded generator and reports machine-readable results.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.integrate import quad

from . import kernels
from .constants import HBAR, KB
from .evolve import (
    CovarianceSnapshot,
    InitialTemperatures,
    ModeBasis,
    mode_basis,
    snapshot_at,
)
from .gksl import GkslParams, epr_difference, von_neumann_epr, von_neumann_epr_from_fluxes
from .model import (
    OhmicBathSpec,
    StarModel,
    build_reduced,
    discretize_ohmic_bath,
    ohmic_spectral_density,
    recurrence_time,
)
from .oracle import dense_oracle_at, full_hamiltonian
from .thermo import (
    energy_fluxes,
    entropy_kb,
    free_energy,
    inverse_temperature,
    mean_energy,
    partition_function,
    total_epr,
    totals,
)

__all__ = ["CheckResult", "default_suite", "random_star_model"]


@dataclass
class CheckResult:
    module: str
    name: str
    residual: float
    tolerance: float
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        d = asdict(self)
        d["residual"] = float(d["residual"])
        d["tolerance"] = float(d["tolerance"])
        d["passed"] = bool(d["passed"])
        return d


def _result(module: str, name: str, residual: float, tolerance: float, note: str = "") -> CheckResult:
    return CheckResult(
        module=module,
        name=name,
        residual=float(residual),
        tolerance=float(tolerance),
        passed=bool(residual <= tolerance),
        note=note,
    )


def random_star_model(rng: np.random.Generator, n_modes: int) -> tuple[StarModel, OhmicBathSpec]:
    """Random Ohmic discretization used by the oracle-comparison checks."""
    spec = OhmicBathSpec(
        eta=10.0 ** rng.uniform(-4, -2),
        omega_c=rng.uniform(1.0, 5.0) * 1e6,
        omega_min=rng.uniform(0.01, 0.2) * 1e6,
        omega_max=rng.uniform(8.0, 25.0) * 1e6,
        n_modes=n_modes,
    )
    omega1 = rng.uniform(0.5, 8.0) * 1e6
    return discretize_ohmic_bath(spec, omega1), spec


def random_temperatures(rng: np.random.Generator) -> InitialTemperatures:
    return InitialTemperatures(
        T_A0=rng.uniform(5.0, 40.0) * 1e-6, T_B0=rng.uniform(5.0, 80.0) * 1e-6
    )


# --- model ----------------------------------------------------------------


def coupling_sum_rule_residual(model: StarModel, spec: OhmicBathSpec) -> float:
    """Sum of g_j^2 against the midpoint-rule sum it is built from."""
    lhs = float(np.sum(model.bath_couplings**2))
    rhs = float(
        np.sum(spec.eta * spec.delta_omega * model.bath_omegas * np.exp(-model.bath_omegas / spec.omega_c))
    )
    return abs(lhs - rhs) / abs(rhs)


def coupling_integral_error(spec: OhmicBathSpec, omega1: float) -> float:
    """Relative error of sum g_j^2 against the continuum integral of J over
    the half-cell-extended window [w_min - dw/2, w_max + dw/2].

    The coupling sum is exactly the midpoint rule on that window, hence
    O(N^-2); against the bare [w_min, w_max] window the uncovered boundary
    half-cells would degrade the rate to O(N^-1)."""
    model = discretize_ohmic_bath(spec, omega1)
    half = 0.5 * spec.delta_omega
    integral, _ = quad(
        lambda w: ohmic_spectral_density(w, spec.eta, spec.omega_c),
        spec.omega_min - half,
        spec.omega_max + half,
        limit=200,
    )
    return abs(float(np.sum(model.bath_couplings**2)) - integral) / integral


def tensor_expansion_residual(model: StarModel) -> float:
    """Reduced arrowhead matrix expanded into 2x2 identity blocks against the
    full quadrature matrix, exact element-by-element."""
    h = build_reduced(model).as_matrix()
    expanded = np.kron(h, np.eye(2))
    return float(np.max(np.abs(expanded - full_hamiltonian(model))))


# --- evolve / oracle ------------------------------------------------------


def orthonormality_residual(basis: ModeBasis) -> float:
    n = basis.dimension
    return float(np.max(np.abs(basis.vectors_t @ basis.vectors - np.eye(n))))


def reconstruction_residual(basis: ModeBasis, model: StarModel) -> float:
    h = build_reduced(model).as_matrix()
    rebuilt = (basis.vectors * basis.eigenvalues) @ basis.vectors_t
    return float(np.linalg.norm(rebuilt - h) / np.linalg.norm(h))


def unitarity_residual(basis: ModeBasis, t: float) -> float:
    """The row sums sum_m (C_jm^2 + S_jm^2) must all equal 1."""
    phi = basis.eigenvalues * t
    ones = np.ones(basis.dimension)
    row_sums = kernels.covariance_rows(
        basis.vectors, basis.vectors_t, np.cos(phi), np.sin(phi), ones
    )
    return float(np.max(np.abs(row_sums - 1.0)))


def oracle_equivalence_residual(
    model: StarModel, init: InitialTemperatures, times, oracle_cap: int = 64
) -> float:
    """Max abs difference of reduced-path c_j, x_j against the dense oracle."""
    basis = mode_basis(model)
    worst = 0.0
    for t in np.atleast_1d(times):
        snap = snapshot_at(basis, init, float(t))
        dense = dense_oracle_at(model, init, float(t), oracle_cap=oracle_cap)
        worst = max(
            worst,
            float(np.max(np.abs(snap.c - dense.diagonal_coefficients()))),
            float(np.max(np.abs(snap.x - dense.cross_terms()))),
        )
    return worst


def gibbs_block_residual(dense) -> float:
    """Each 2x2 block must be a scalar multiple of the identity, with the
    mirrored cross term sigma_{2,2j-1} = -sigma_{1,2j}."""
    sigma = dense.sigma
    diag = np.diag(sigma)
    off = sigma[0::2, 1::2].diagonal()  # sigma_{2j-1,2j}
    r1 = float(np.max(np.abs(off)))
    r2 = float(np.max(np.abs(diag[0::2] - diag[1::2])))
    r3 = float(np.max(np.abs(sigma[1, 2::2] + sigma[0, 3::2])))
    return max(r1, r2, r3)


def positivity_floor(dense) -> float:
    """Most negative eigenvalue of sigma + i*Omega (>= 0 for physical states)."""
    herm = dense.sigma + 1j * dense.Omega
    return float(np.min(np.linalg.eigvalsh(herm)))


def energy_conservation_residual(model: StarModel, init: InitialTemperatures, times) -> float:
    e0 = dense_oracle_at(model, init, 0.0).total_energy()
    worst = 0.0
    for t in np.atleast_1d(times):
        et = dense_oracle_at(model, init, float(t)).total_energy()
        worst = max(worst, abs(et - e0) / abs(e0))
    return worst


# --- thermo ---------------------------------------------------------------


def flux_sum_residual(snapshot: CovarianceSnapshot, model: StarModel) -> float:
    """|dE_A + dE_B + dE_I| relative to the largest flux magnitude."""
    fx = energy_fluxes(snapshot, model)
    scale = max(abs(fx.dEA_dt), abs(fx.dEB_dt), abs(fx.dEI_dt), 1e-300)
    return abs(fx.dEA_dt + fx.dEB_dt + fx.dEI_dt) / scale


def flux_finite_difference_residual(
    basis: ModeBasis,
    init: InitialTemperatures,
    t: float,
    dt: float = 1.0e-9,
    x_override: np.ndarray | None = None,
) -> float:
    """Per-mode fluxes dE_j/dt against a central finite difference of E_j(t),
    normalized by the largest analytic flux magnitude.  ``x_override`` lets
    the validate suite demonstrate that corrupted cross terms are caught."""
    model = basis.model
    snap = snapshot_at(basis, init, t)
    if x_override is not None:
        snap = CovarianceSnapshot(time=snap.time, c=snap.c, x=x_override, model=model)
    analytic = energy_fluxes(snap, model).mode_fluxes
    before = snapshot_at(basis, init, t - dt)
    after = snapshot_at(basis, init, t + dt)
    freqs = model.bath_omegas
    fd = 0.5 * HBAR * freqs * (after.c[1:] - before.c[1:]) / (2.0 * dt)
    scale = float(np.max(np.abs(analytic)))
    return float(np.max(np.abs(fd - analytic))) / scale


def epr_rearrangement_residual(snapshot: CovarianceSnapshot, model: StarModel) -> float:
    """Pi_tot against sum_j (1/T_j) dE_j/dt assembled from the other ops."""
    pi = total_epr(snapshot, model)
    fx = energy_fluxes(snapshot, model)
    _, T = inverse_temperature(snapshot.c, model.frequencies)
    assembled = fx.dEA_dt / T[0] + float(np.sum(fx.mode_fluxes / T[1:]))
    return abs(pi - assembled) / max(abs(pi), 1e-300)


def epr_finite_difference_residual(
    basis: ModeBasis, init: InitialTemperatures, t: float, dt: float = 1.0e-9
) -> float:
    """Pi_tot against the central finite difference of S_tot(t)."""
    model = basis.model
    pi = total_epr(snapshot_at(basis, init, t), model)
    s_before = KB * float(np.sum(entropy_kb(snapshot_at(basis, init, t - dt).c)))
    s_after = KB * float(np.sum(entropy_kb(snapshot_at(basis, init, t + dt).c)))
    fd = (s_after - s_before) / (2.0 * dt)
    return abs(fd - pi) / abs(pi)


def thermo_consistency_residual(c: np.ndarray, omega: float = 4.0e6) -> float:
    """S from the closed form against (E - F)/T composed from the other three
    operations, relative to S."""
    c = np.asarray(c, dtype=float)
    s = entropy_kb(c)
    _, T = inverse_temperature(c, omega)
    Z = partition_function(c)
    composed = (mean_energy(c, omega) - free_energy(Z, T)) / T / KB
    return float(np.max(np.abs(composed - s) / s))


def entropy_energy_slope_residual(c: float, omega: float = 4.0e6, rel_step: float = 1e-6) -> float:
    """dS/dE against 1/T by central finite differences in c."""
    dc = c * rel_step
    s_plus = entropy_kb(c + dc) * KB
    s_minus = entropy_kb(c - dc) * KB
    de = mean_energy(c + dc, omega) - mean_energy(c - dc, omega)
    slope = (s_plus - s_minus) / de
    _, T = inverse_temperature(c, omega)
    return abs(slope - 1.0 / T) * T


# --- gksl -----------------------------------------------------------------


def pivn_nonnegativity_floor(p: GkslParams, times) -> float:
    """Most negative Pi_vN over the grid, in kB/s (>= -1e-15 expected)."""
    return float(np.min(np.asarray(von_neumann_epr(p, times)) / KB))


def epr_identity_residual(record, p: GkslParams) -> float:
    """Flux-form Pi_vN minus Pi_tot against the closed difference formula."""
    lhs = von_neumann_epr_from_fluxes(
        record.temperatures[0], record.dEA_dt, record.dEB_dt, p.T_B0
    ) - record.Pi_tot
    rhs = epr_difference(record, p)
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


# --- suite ----------------------------------------------------------------


def default_suite(seed: int = 0, oracle_cap: int = 64) -> list[CheckResult]:
    """Run every invariant on seeded small models; used by the validate job."""
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []

    spec = OhmicBathSpec(eta=1e-3, omega_c=3e6, omega_min=0.026e6, omega_max=20e6, n_modes=128)
    model = discretize_ohmic_bath(spec, 4e6)
    init = InitialTemperatures(T_A0=10e-6, T_B0=50e-6)

    results.append(
        _result("model", "coupling_sum_rule", coupling_sum_rule_residual(model, spec), 1e-13)
    )
    err_n = coupling_integral_error(spec, 4e6)
    spec2 = OhmicBathSpec(
        eta=spec.eta,
        omega_c=spec.omega_c,
        omega_min=spec.omega_min,
        omega_max=spec.omega_max,
        n_modes=2 * spec.n_modes,
    )
    err_2n = coupling_integral_error(spec2, 4e6)
    ratio = err_n / err_2n
    results.append(
        CheckResult(
            module="model",
            name="coupling_integral_convergence",
            residual=ratio,
            tolerance=5.0,
            passed=bool(3.0 < ratio < 5.0),
            note="error(N)/error(2N), expected near 4 for O(N^-2)",
        )
    )
    t1 = recurrence_time(model)
    results.append(
        _result(
            "model",
            "recurrence_spacing_identity",
            abs(t1 * model.delta_omega - 2.0 * np.pi) / (2.0 * np.pi),
            1e-12,
        )
    )
    small, _ = random_star_model(rng, 5)
    results.append(_result("model", "tensor_expansion", tensor_expansion_residual(small), 0.0))

    basis = mode_basis(model)
    results.append(_result("evolve", "orthonormality", orthonormality_residual(basis), 1e-10))
    results.append(
        _result("evolve", "reconstruction", reconstruction_residual(basis, model), 1e-9)
    )
    results.append(
        _result("evolve", "unitarity_sum_rule", unitarity_residual(basis, 137e-6), 1e-9)
    )

    oracle_model, _ = random_star_model(rng, 16)
    oracle_init = random_temperatures(rng)
    times = rng.uniform(0.0, 50e-6, size=20)
    results.append(
        _result(
            "evolve",
            "oracle_equivalence",
            oracle_equivalence_residual(oracle_model, oracle_init, times, oracle_cap),
            1e-9,
            note="N=16 random model, 20 random times",
        )
    )
    dense = dense_oracle_at(oracle_model, oracle_init, 17e-6, oracle_cap=oracle_cap)
    results.append(_result("evolve", "symplecticity", dense.symplectic_defect(), 1e-9))
    results.append(_result("evolve", "gibbs_blocks", gibbs_block_residual(dense), 1e-10))
    floor = positivity_floor(dense)
    results.append(
        CheckResult(
            module="evolve",
            name="uncertainty_positivity",
            residual=floor,
            tolerance=-1e-9,
            passed=bool(floor >= -1e-9),
            note="min eigenvalue of sigma + i*Omega",
        )
    )
    cons_model, _ = random_star_model(rng, 32)
    results.append(
        _result(
            "evolve",
            "energy_conservation",
            energy_conservation_residual(cons_model, oracle_init, rng.uniform(0, 50e-6, 5)),
            1e-9,
        )
    )

    mid_spec = OhmicBathSpec(
        eta=spec.eta,
        omega_c=spec.omega_c,
        omega_min=spec.omega_min,
        omega_max=spec.omega_max,
        n_modes=512,
    )
    mid_basis = mode_basis(discretize_ohmic_bath(mid_spec, 4e6))
    snap = snapshot_at(mid_basis, init, 100e-6)
    results.append(
        _result("thermo", "flux_sum_rule", flux_sum_residual(snap, mid_basis.model), 1e-12)
    )
    results.append(
        _result(
            "thermo",
            "flux_finite_difference",
            flux_finite_difference_residual(mid_basis, init, 100e-6),
            1e-6,
            note="N=512, t=100us, dt=1ns, scaled by max |dE_j/dt|",
        )
    )
    results.append(
        _result(
            "thermo",
            "epr_rearrangement",
            epr_rearrangement_residual(snap, mid_basis.model),
            1e-12,
        )
    )
    results.append(
        _result(
            "thermo",
            "epr_finite_difference",
            epr_finite_difference_residual(mid_basis, init, 100e-6),
            1e-4,
            note="N=512, smooth region",
        )
    )
    ladder = 1.0 + np.logspace(-10, 0, 41)
    entropies = entropy_kb(ladder)
    monotone = bool(np.all(np.diff(entropies) > 0)) and entropies[0] < 1e-8
    results.append(
        CheckResult(
            module="thermo",
            name="third_law_ladder",
            residual=float(entropies[0]),
            tolerance=1e-8,
            passed=monotone,
            note="entropy decreasing to 0 as c -> 1+",
        )
    )
    results.append(
        _result(
            "thermo",
            "consistency_square",
            thermo_consistency_residual(1.0 + np.logspace(-5, 2, 29)),
            1e-10,
        )
    )
    results.append(
        _result("thermo", "entropy_energy_slope", entropy_energy_slope_residual(2.7), 1e-6)
    )

    p = GkslParams(omega1=4e6, Gamma=np.pi * 1e-3 * 4e6 * np.exp(-4.0 / 3.0), T_A0=10e-6, T_B0=50e-6)
    floor = pivn_nonnegativity_floor(p, np.linspace(0, 1200e-6, 241))
    results.append(
        CheckResult(
            module="gksl",
            name="pivn_nonnegative",
            residual=floor,
            tolerance=-1e-15,
            passed=bool(floor >= -1e-15),
            note="min Pi_vN over grid in kB/s",
        )
    )
    baseline = snapshot_at(mid_basis, init, 0.0)
    record = totals(snap, baseline)
    results.append(
        _result("gksl", "epr_difference_identity", epr_identity_residual(record, p), 1e-10)
    )
    return results
