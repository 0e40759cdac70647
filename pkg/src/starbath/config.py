"""Experiment configuration.

The CLI boundary speaks MHz / us / uK; everything downstream is SI.  Config
files are flat JSON with exactly the field names below; unknown keys are
rejected with a diagnostic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .constants import MHZ, UK, US
from .evolve import InitialTemperatures
from .model import OhmicBathSpec

__all__ = ["JOBS", "ConfigError", "ExperimentConfig", "load_config", "parse_grid"]

JOBS = ("simulate", "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "sweep-n", "validate")
PIVN_MODES = ("gksl", "exact")


class ConfigError(ValueError):
    """Invalid configuration; maps to CLI exit code 2."""


@dataclass
class ExperimentConfig:
    job: str = "simulate"
    omega1_mhz: float = 4.0
    omega_c_mhz: float = 3.0
    omega_min_mhz: float = 0.026
    omega_max_mhz: float = 20.0
    eta: float = 1.0e-3
    n_modes: int = 4000
    n_list: list[int] | None = None
    T_A0_uk: float = 10.0
    T_B0_uk: float = 50.0
    grid_start_us: float = 0.0
    grid_end_us: float = 1200.0
    grid_points: int = 121
    times_us: list[float] | None = None
    sweep_times_us: list[float] = field(default_factory=lambda: [100.0, 200.0, 300.0, 400.0])
    out_dir: str = "out"
    oracle_cap: int = 64
    pivn_mode: str = "gksl"
    mode_window_mhz: float = 0.4
    emit_modes: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.job not in JOBS:
            raise ConfigError(f"unknown job {self.job!r}; expected one of {JOBS}")
        if self.pivn_mode not in PIVN_MODES:
            raise ConfigError(f"pivn_mode must be one of {PIVN_MODES}")
        if self.n_modes < 2:
            raise ConfigError("n_modes must be at least 2")
        if self.n_list is not None:
            if len(self.n_list) == 0:
                raise ConfigError("n_list must not be empty")
            if any(n < 2 for n in self.n_list):
                raise ConfigError("every entry of n_list must be at least 2")
            if list(self.n_list) != sorted(self.n_list):
                raise ConfigError("n_list must be sorted ascending")
        if self.times_us is None:
            if self.grid_points < 1:
                raise ConfigError("grid_points must be at least 1")
            if self.grid_end_us < self.grid_start_us or self.grid_start_us < 0:
                raise ConfigError("grid must satisfy 0 <= start <= end")
        else:
            t = list(self.times_us)
            if len(t) == 0 or t != sorted(t) or t[0] < 0:
                raise ConfigError("times_us must be non-empty, sorted and non-negative")
        if self.oracle_cap < 2:
            raise ConfigError("oracle_cap must be at least 2")
        if not 0 < self.omega_min_mhz < self.omega_max_mhz:
            raise ConfigError("require 0 < omega_min < omega_max")
        if self.omega1_mhz <= 0 or self.omega_c_mhz <= 0:
            raise ConfigError("omega1 and omega_c must be positive")
        if self.eta < 0:
            raise ConfigError("eta must be non-negative")
        if self.T_A0_uk <= 0 or self.T_B0_uk <= 0:
            raise ConfigError("temperatures must be positive")
        if self.mode_window_mhz <= 0:
            raise ConfigError("mode_window_mhz must be positive")

    # --- SI accessors -----------------------------------------------------

    def bath_spec(self, n_modes: int | None = None) -> OhmicBathSpec:
        return OhmicBathSpec(
            eta=self.eta,
            omega_c=self.omega_c_mhz * MHZ,
            omega_min=self.omega_min_mhz * MHZ,
            omega_max=self.omega_max_mhz * MHZ,
            n_modes=self.n_modes if n_modes is None else n_modes,
        )

    @property
    def omega1(self) -> float:
        return self.omega1_mhz * MHZ

    def initial_temperatures(self) -> InitialTemperatures:
        return InitialTemperatures(T_A0=self.T_A0_uk * UK, T_B0=self.T_B0_uk * UK)

    def times(self) -> np.ndarray:
        """Output time grid in seconds."""
        if self.times_us is not None:
            return np.asarray(self.times_us, dtype=float) * US
        return np.linspace(self.grid_start_us, self.grid_end_us, self.grid_points) * US

    def sweep_times(self) -> np.ndarray:
        return np.asarray(self.sweep_times_us, dtype=float) * US

    def with_overrides(self, **kwargs) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse a JSON config file, rejecting unknown keys."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must contain a JSON object")
    unknown = sorted(set(raw) - _FIELD_NAMES)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    try:
        return ExperimentConfig(**raw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def parse_grid(text: str) -> tuple[float, float, int]:
    """Parse a ``start:end:points`` grid spec in microseconds."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must look like start:end:points, got {text!r}")
    try:
        start, end, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}: {exc}") from exc
    return start, end, points
