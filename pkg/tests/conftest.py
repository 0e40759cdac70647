"""Shared fixtures.

The production-parameter eigenbases and thermodynamic record series are
expensive at N = 4000, so a session-scoped cache hands them to every test
that needs them (most acceptance criteria share the same grids).
"""

from __future__ import annotations

import numpy as np
import pytest

import starbath as sb
from starbath.thermo import totals


class ProductionContext:
    """Lazy per-N caches of the production-parameter pipeline."""

    def __init__(self) -> None:
        self.init = sb.InitialTemperatures(T_A0=10e-6, T_B0=50e-6)
        self._models: dict[int, sb.StarModel] = {}
        self._bases: dict[int, sb.ModeBasis] = {}
        self._records: dict[tuple, list] = {}
        self._c1: dict[tuple, np.ndarray] = {}

    def config(self, n: int) -> sb.ExperimentConfig:
        return sb.ExperimentConfig(n_modes=n)

    def spec(self, n: int) -> sb.OhmicBathSpec:
        return self.config(n).bath_spec()

    def model(self, n: int) -> sb.StarModel:
        if n not in self._models:
            self._models[n] = sb.discretize_ohmic_bath(self.spec(n), self.config(n).omega1)
        return self._models[n]

    def params(self, n: int) -> sb.GkslParams:
        model = self.model(n)
        return sb.GkslParams(
            omega1=model.omega1,
            Gamma=sb.relaxation_rate(model, self.spec(n)),
            T_A0=self.init.T_A0,
            T_B0=self.init.T_B0,
        )

    def basis(self, n: int) -> sb.ModeBasis:
        if n not in self._bases:
            self._bases[n] = sb.mode_basis(self.model(n))
        return self._bases[n]

    def records(self, n: int, times_us: tuple[float, ...]) -> list:
        """Thermo records on the grid (baseline at t = 0 prepended)."""
        key = (n, times_us)
        if key not in self._records:
            basis = self.basis(n)
            baseline = sb.snapshot_at(basis, self.init, 0.0)
            records = [totals(baseline, baseline)]
            for t_us in times_us:
                snap = sb.snapshot_at(basis, self.init, t_us * 1e-6)
                records.append(totals(snap, baseline))
            self._records[key] = records
        return self._records[key]

    def c1_series(self, n: int, times_us: tuple[float, ...]) -> np.ndarray:
        key = (n, times_us)
        if key not in self._c1:
            self._c1[key] = sb.system_coefficient_series(
                self.basis(n), self.init, np.asarray(times_us) * 1e-6
            )
        return self._c1[key]


@pytest.fixture(scope="session")
def production() -> ProductionContext:
    return ProductionContext()


@pytest.fixture(scope="session")
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
