"""starbath: exact Gaussian dynamics and thermodynamics of one harmonic
oscillator coupled to a finite star-configured bath.

The covariance matrix of the whole star is evolved exactly through the
eigendecomposition of the reduced arrowhead matrix; every oscillator stays
in a Gibbs state with a time-dependent temperature, which makes per-mode
thermodynamic entropies, energy fluxes, and the total entropy production
rate well defined at all times.
"""

from .constants import HBAR, KB
from .model import (
    OhmicBathSpec,
    ReducedHamiltonian,
    StarModel,
    build_reduced,
    discretize_ohmic_bath,
    mean_occupation,
    ohmic_spectral_density,
    recurrence_time,
    relaxation_rate,
    thermal_coefficient,
)
from .evolve import (
    CovarianceSnapshot,
    InitialTemperatures,
    ModeBasis,
    coefficient_rows_series,
    cross_term_series,
    diagonalize,
    initial_coefficients,
    mode_basis,
    snapshot_at,
    snapshot_series,
    system_coefficient_series,
)
from .oracle import DenseSymplectic, dense_oracle_at, full_hamiltonian, symplectic_form
from .thermo import (
    EnergyFluxes,
    OscillatorThermo,
    ThermoRecord,
    energy_fluxes,
    entropy,
    entropy_kb,
    fluxes_from_cross_terms,
    free_energy,
    inverse_temperature,
    mean_energy,
    oscillator_thermo,
    partition_function,
    total_epr,
    totals,
)
from .gksl import (
    GkslParams,
    ep_difference,
    epr_difference,
    gksl_sigma11,
    gksl_system_temperature,
    von_neumann_ep,
    von_neumann_epr,
    von_neumann_epr_from_fluxes,
)
from .config import ExperimentConfig, ConfigError, load_config

__version__ = "0.1.0"
