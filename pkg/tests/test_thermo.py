import math

import numpy as np
import pytest

import starbath as sb
from starbath import HBAR, KB
from starbath.checks import (
    entropy_energy_slope_residual,
    epr_rearrangement_residual,
    flux_finite_difference_residual,
    flux_sum_residual,
    random_star_model,
    random_temperatures,
    thermo_consistency_residual,
)
from starbath.evolve import CovarianceSnapshot
from starbath.thermo import (
    BOUNDARY_EPS,
    entropy,
    entropy_kb,
    free_energy,
    inverse_temperature,
    log_coth_ratio,
    mean_energy,
    oscillator_thermo,
    partition_function,
    total_epr,
    totals,
)

from highprec import REFERENCE

C_EQ = REFERENCE["sigma11_equilibrium"]  # coth at 4 MHz, 50 uK


class TestMeanEnergy:
    def test_vacuum(self):
        assert mean_energy(1.0, 4e6) == pytest.approx(HBAR * 4e6 / 2, rel=1e-15)

    def test_equilibrium_value(self):
        assert mean_energy(C_EQ, 4e6) == pytest.approx(REFERENCE["energy_equilibrium_J"], rel=1e-12)

    def test_linear_in_c(self):
        e1, e2 = mean_energy(2.0, 4e6), mean_energy(4.0, 4e6)
        assert (e2 - e1) / 2.0 == pytest.approx(HBAR * 4e6 / 2, rel=1e-14)

    def test_rejects_unphysical(self):
        with pytest.raises(ValueError):
            mean_energy(0.999, 4e6)


class TestInverseTemperature:
    @pytest.mark.parametrize("temp", [10e-6, 50e-6, 1e-3])
    def test_round_trip(self, temp):
        c = sb.thermal_coefficient(4e6, temp)
        beta, T = inverse_temperature(c, 4e6)
        assert T == pytest.approx(temp, rel=1e-12)
        assert beta == pytest.approx(1.0 / (KB * temp), rel=1e-12)

    def test_spec_values(self):
        _, t_hot = inverse_temperature(3.3742, 4e6)
        _, t_cold = inverse_temperature(1.0989, 4e6)
        assert t_hot == pytest.approx(50e-6, rel=1e-4)
        assert t_cold == pytest.approx(10e-6, rel=1e-4)

    def test_boundary_is_flagged_zero(self):
        beta, T = inverse_temperature(1.0 + 1e-13, 4e6)
        assert T == 0.0 and math.isinf(beta)
        beta, T = inverse_temperature(1.0, 4e6)
        assert T == 0.0 and math.isinf(beta)

    def test_rejects_below_one(self):
        with pytest.raises(ValueError):
            inverse_temperature(0.5, 4e6)


class TestPartitionAndFreeEnergy:
    def test_sqrt5(self):
        assert partition_function(math.sqrt(5.0)) == pytest.approx(1.0, rel=1e-14)

    def test_boundary(self):
        assert partition_function(1.0) == 0.0
        assert partition_function(1.0 + 1e-14) < 1e-6

    def test_equilibrium_value(self):
        assert partition_function(C_EQ) == pytest.approx(
            REFERENCE["partition_function_equilibrium"], rel=1e-12
        )

    @pytest.mark.parametrize("temp", [10e-6, 50e-6, 200e-6])
    def test_cross_check_with_trace_formula(self, temp):
        # Z from the coefficient against the geometric series form
        c = sb.thermal_coefficient(4e6, temp)
        beta_h_omega = HBAR * 4e6 / (KB * temp)
        series = math.exp(-beta_h_omega / 2) / (1.0 - math.exp(-beta_h_omega))
        assert partition_function(c) == pytest.approx(series, rel=1e-12)

    def test_free_energy_rejects_zero_Z(self):
        with pytest.raises(ValueError):
            free_energy(0.0, 1e-5)


class TestEntropy:
    def test_third_law_boundary(self):
        assert entropy_kb(1.0) == 0.0

    def test_equilibrium_value(self):
        assert entropy_kb(C_EQ) == pytest.approx(REFERENCE["entropy_equilibrium_kb"], rel=1e-12)

    @pytest.mark.parametrize("c", [1.01, 2.0, 5.0, 50.0])
    def test_strictly_increasing(self, c):
        assert entropy_kb(c + 1e-6) > entropy_kb(c)

    def test_matches_occupation_form(self):
        # (nbar+1) ln(nbar+1) - nbar ln(nbar) with nbar = (c-1)/2
        for c in (1.001, 1.5, 3.3742, 40.0):
            nbar = (c - 1.0) / 2.0
            expected = (nbar + 1) * math.log(nbar + 1) - nbar * math.log(nbar)
            assert entropy_kb(c) == pytest.approx(expected, rel=1e-12)

    def test_third_law_ladder_monotone(self):
        ladder = 1.0 + np.logspace(-10, 0, 51)
        values = entropy_kb(ladder)
        assert np.all(np.diff(values) > 0)
        assert values[0] < 2e-9

    def test_rejects_unphysical(self):
        with pytest.raises(ValueError):
            entropy_kb(0.99)


class TestConsistency:
    def test_consistency_square(self):
        # S from the x ln x form against (E - F)/T over the physical range
        ladder = 1.0 + np.logspace(-5, 2, 36)
        assert thermo_consistency_residual(ladder) <= 1e-10

    def test_entropy_energy_slope(self):
        for c in (1.2, 2.7, 10.0):
            assert entropy_energy_slope_residual(c) <= 1e-6

    def test_oscillator_thermo_bundles_consistently(self):
        ot = oscillator_thermo(2.5, 4e6)
        assert ot.S == pytest.approx((ot.E - ot.F) / ot.T, rel=1e-12)
        assert entropy(2.5) == pytest.approx(ot.S, rel=1e-14)


def evolved_record(n=48, t=20e-6, seed=5):
    rng = np.random.default_rng(seed)
    model, _ = random_star_model(rng, n)
    init = random_temperatures(rng)
    basis = sb.mode_basis(model)
    baseline = sb.snapshot_at(basis, init, 0.0)
    snap = sb.snapshot_at(basis, init, t)
    return model, basis, init, baseline, snap


class TestFluxesAndTotals:
    def test_fluxes_vanish_initially(self):
        model, _, init, baseline, _ = evolved_record()
        fx = sb.energy_fluxes(baseline, model)
        assert fx.dEA_dt == 0.0 and fx.dEB_dt == 0.0 and fx.dEI_dt == 0.0
        assert total_epr(baseline, model) == 0.0

    def test_flux_sum_rule(self):
        model, _, init, _, snap = evolved_record()
        assert flux_sum_residual(snap, model) <= 1e-12

    def test_flux_matches_finite_difference(self):
        cfg = sb.ExperimentConfig(n_modes=128)
        model = sb.discretize_ohmic_bath(cfg.bath_spec(), cfg.omega1)
        basis = sb.mode_basis(model)
        assert flux_finite_difference_residual(basis, cfg.initial_temperatures(), 20e-6) <= 1e-6

    def test_epr_rearrangement(self):
        model, _, init, _, snap = evolved_record()
        assert epr_rearrangement_residual(snap, model) <= 1e-12

    def test_interaction_flux_negligible(self):
        # weak coupling: the interaction flux stays a few percent of the
        # system flux once the transient has passed
        cfg = sb.ExperimentConfig(n_modes=512)
        model = sb.discretize_ohmic_bath(cfg.bath_spec(), cfg.omega1)
        basis = sb.mode_basis(model)
        xs = sb.cross_term_series(basis, cfg.initial_temperatures(), np.linspace(5e-6, 150e-6, 16))
        for x in xs:
            fx = sb.fluxes_from_cross_terms(x, model)
            assert abs(fx.dEI_dt) <= 0.1 * abs(fx.dEA_dt)

    def test_epr_rejects_boundary(self):
        model, _, init, _, snap = evolved_record()
        frozen = np.array(snap.c)
        frozen[3] = 1.0 + BOUNDARY_EPS / 2
        bad = CovarianceSnapshot(time=snap.time, c=frozen, x=snap.x, model=model)
        with pytest.raises(ValueError, match="boundary"):
            total_epr(bad, model)

    def test_totals_relative_to_self_is_zero(self):
        model, _, init, baseline, _ = evolved_record()
        rec = totals(baseline, baseline)
        assert rec.dS_tot == 0.0
        assert rec.Pi_tot == 0.0
        assert rec.S_tot == pytest.approx(float(np.sum(entropy(baseline.c))), rel=1e-14)

    def test_totals_additivity(self):
        model, _, init, baseline, snap = evolved_record()
        rec = totals(snap, baseline)
        assert rec.S_tot == pytest.approx(float(np.sum(rec.entropies)), rel=1e-14)
        assert len(rec.per_oscillator) == model.n_modes + 1
        assert rec.per_oscillator[0].S == pytest.approx(rec.entropies[0], rel=1e-14)

    def test_totals_model_mismatch(self):
        model, basis, init, baseline, snap = evolved_record()
        other_model, _ = random_star_model(np.random.default_rng(99), 48)
        other = CovarianceSnapshot(time=0.0, c=baseline.c, x=baseline.x, model=other_model)
        with pytest.raises(ValueError, match="different model"):
            totals(snap, other)

    def test_totals_requires_t0_baseline(self):
        model, basis, init, baseline, snap = evolved_record()
        with pytest.raises(ValueError, match="t = 0"):
            totals(baseline, snap)

    def test_log_coth_ratio_boundary(self):
        assert math.isinf(log_coth_ratio(1.0))
        assert log_coth_ratio(3.0) == pytest.approx(math.log(2.0), rel=1e-14)
